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
#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sshpk/atomic_file.hpp"
#include "sshpk/bytes.hpp"
#include "sshpk/credential_record.hpp"

namespace sshpk {

class StoreError : public std::runtime_error {
 public:
  enum class Kind {
    kDuplicateCredentialId,
    kPersistenceFailure,
    kUnknownCredential,
    kCountRegression,
    kInvalidRecord,
  };

  StoreError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(StoreError::Kind kind);

inline constexpr const char* kDefaultStorePath = "/var/lib/ssh-passkeys/credentials.json";

// Per-host JSON credential file:
//
//   {"version": 1, "records": [{"credential_id": "<b64url>", "user": "alice",
//     "public_key": "<b64url COSE_Key>", "sign_count": 0, "rp_id": "...",
//     "created_at": 1700000000, "label": null, "revoked": false}, ...]}
//
// Every mutation takes the sidecar lock, re-reads the file, applies the
// change to the parsed document (so unknown fields survive), and replaces the
// file atomically. Reads parse the last renamed snapshot without locking.
class CredentialStore {
 public:
  explicit CredentialStore(std::filesystem::path path, WriteProgressHook write_hook = {});

  const std::filesystem::path& path() const { return path_; }

  void add(const CredentialRecord& record);
  std::vector<CredentialRecord> lookup_by_user(std::string_view user) const;
  std::optional<CredentialRecord> lookup_by_credential_id(ByteView credential_id) const;
  void update_sign_count(ByteView credential_id, std::uint32_t new_count);
  // Idempotent; the record is kept with revoked=true.
  void revoke(ByteView credential_id);
  std::vector<CredentialRecord> list_all() const;

 private:
  std::filesystem::path lock_path() const;

  std::filesystem::path path_;
  WriteProgressHook write_hook_;
  std::mutex write_mutex_;
};

}  // namespace sshpk
