// Copyright 2026 The SSH-Passkeys Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "sshpk/bytes.hpp"

namespace sshpk {

class Base64UrlError : public std::runtime_error {
 public:
  enum class Kind { kInvalidCharacter, kInvalidLength };

  Base64UrlError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// URL-safe alphabet, never padded.
std::string encode_base64url(ByteView data);

// Rejects '=' padding, the standard '+' and '/' characters, and any length
// congruent to 1 mod 4. Non-canonical trailing bits are rejected as well, so
// encode(decode(s)) == s for every accepted s.
Bytes decode_base64url(std::string_view text);

}  // namespace sshpk
