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

#include "sshpk/session_id.hpp"

#include <algorithm>

#include "sshpk/base64url.hpp"
#include "sshpk/crypto.hpp"

namespace sshpk {

SessionId SessionId::random() {
  SessionId id;
  secure_random_fill(id.bytes);
  return id;
}

std::optional<SessionId> SessionId::from_token(std::string_view token) {
  Bytes raw;
  try {
    raw = decode_base64url(token);
  } catch (const Base64UrlError&) {
    return std::nullopt;
  }
  if (raw.size() != kSize) return std::nullopt;
  SessionId id;
  std::copy(raw.begin(), raw.end(), id.bytes.begin());
  return id;
}

std::string SessionId::token() const { return encode_base64url(bytes); }

}  // namespace sshpk
