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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sshpk/bytes.hpp"
#include "sshpk/cose_key.hpp"

namespace sshpk {

// One registered passkey bound to a local account.
struct CredentialRecord {
  Bytes credential_id;
  std::string user;
  CoseKey public_key;
  std::uint32_t sign_count = 0;
  std::string rp_id;
  std::int64_t created_at = 0;  // UTC seconds
  std::optional<std::string> label;
  bool revoked = false;
  // Serialized JSON object holding fields this version does not understand;
  // written back verbatim on rewrite.
  std::string unknown_fields;
};

// Portable account name: non-empty, no path separators, no whitespace or
// control characters.
bool is_valid_account_name(std::string_view user);

}  // namespace sshpk
