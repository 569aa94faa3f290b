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

#include "sshpk/credential_store.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <memory>
#include <set>

#include "sshpk/base64url.hpp"

namespace sshpk {
namespace {

using json = nlohmann::json;
using Kind = StoreError::Kind;

constexpr int kStoreVersion = 1;

const std::set<std::string, std::less<>> kKnownRecordFields = {
    "credential_id", "user", "public_key", "sign_count", "rp_id", "created_at", "label", "revoked"};

json record_to_json(const CredentialRecord& r) {
  json j = json::object();
  if (!r.unknown_fields.empty()) {
    json extra = json::parse(r.unknown_fields, nullptr, false);
    if (extra.is_object()) j = std::move(extra);
  }
  j["credential_id"] = encode_base64url(r.credential_id);
  j["user"] = r.user;
  j["public_key"] = encode_base64url(encode_cose_key(r.public_key));
  j["sign_count"] = r.sign_count;
  j["rp_id"] = r.rp_id;
  j["created_at"] = r.created_at;
  j["label"] = r.label ? json(*r.label) : json(nullptr);
  j["revoked"] = r.revoked;
  return j;
}

CredentialRecord record_from_json(const json& j) {
  try {
    if (!j.is_object()) throw StoreError(Kind::kInvalidRecord, "record is not an object");
    CredentialRecord r;
    r.credential_id = decode_base64url(j.at("credential_id").get<std::string>());
    r.user = j.at("user").get<std::string>();
    r.public_key = parse_cose_key(decode_base64url(j.at("public_key").get<std::string>()));
    const auto count = j.at("sign_count").get<std::int64_t>();
    if (count < 0 || count > std::numeric_limits<std::uint32_t>::max()) {
      throw StoreError(Kind::kInvalidRecord, "sign_count out of range");
    }
    r.sign_count = static_cast<std::uint32_t>(count);
    r.rp_id = j.at("rp_id").get<std::string>();
    r.created_at = j.at("created_at").get<std::int64_t>();
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) r.label = it->get<std::string>();
    r.revoked = j.at("revoked").get<bool>();

    json extra = json::object();
    for (const auto& [key, value] : j.items()) {
      if (!kKnownRecordFields.contains(key)) extra[key] = value;
    }
    if (!extra.empty()) r.unknown_fields = extra.dump();

    if (r.credential_id.empty()) throw StoreError(Kind::kInvalidRecord, "empty credential_id");
    if (!is_valid_account_name(r.user)) throw StoreError(Kind::kInvalidRecord, "invalid user " + r.user);
    return r;
  } catch (const StoreError&) {
    throw;
  } catch (const std::exception& e) {
    throw StoreError(Kind::kInvalidRecord, std::string("malformed credential record: ") + e.what());
  }
}

// Parsed store document plus decoded records, index-aligned.
struct Snapshot {
  json doc;
  std::vector<CredentialRecord> records;

  std::optional<std::size_t> index_of(ByteView id) const {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (std::equal(records[i].credential_id.begin(), records[i].credential_id.end(), id.begin(),
                     id.end())) {
        return i;
      }
    }
    return std::nullopt;
  }
};

Snapshot load(const std::filesystem::path& path) {
  std::optional<std::string> text;
  try {
    text = read_file(path);
  } catch (const PersistenceError& e) {
    throw StoreError(Kind::kPersistenceFailure, e.what());
  }
  Snapshot snap;
  if (!text) {
    snap.doc = json{{"version", kStoreVersion}, {"records", json::array()}};
    return snap;
  }
  try {
    snap.doc = json::parse(*text);
    if (!snap.doc.is_object()) throw StoreError(Kind::kPersistenceFailure, "store is not an object");
    if (snap.doc.at("version").get<int>() != kStoreVersion) {
      throw StoreError(Kind::kPersistenceFailure, "unrecognized store version");
    }
    const json& records = snap.doc.at("records");
    if (!records.is_array()) throw StoreError(Kind::kPersistenceFailure, "records is not an array");
    std::set<Bytes> seen;
    for (const auto& r : records) {
      snap.records.push_back(record_from_json(r));
      if (!seen.insert(snap.records.back().credential_id).second) {
        throw StoreError(Kind::kPersistenceFailure, "duplicate credential_id in store file");
      }
    }
  } catch (const StoreError& e) {
    if (e.kind() == Kind::kInvalidRecord) throw StoreError(Kind::kPersistenceFailure, e.what());
    throw;
  } catch (const std::exception& e) {
    throw StoreError(Kind::kPersistenceFailure, std::string("store file unreadable: ") + e.what());
  }
  return snap;
}

void save(const std::filesystem::path& path, const json& doc, const WriteProgressHook& hook) {
  try {
    write_file_atomic(path, doc.dump(2) + "\n", 0600, hook);
  } catch (const PersistenceError& e) {
    throw StoreError(Kind::kPersistenceFailure, e.what());
  }
}

std::unique_ptr<FileLock> lock_file(const std::filesystem::path& path) {
  try {
    return std::make_unique<FileLock>(path);
  } catch (const PersistenceError& e) {
    throw StoreError(Kind::kPersistenceFailure, e.what());
  }
}

}  // namespace

bool is_valid_account_name(std::string_view user) {
  if (user.empty() || user.size() > 256) return false;
  return std::none_of(user.begin(), user.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return c == '/' || c == '\\' || u <= 0x20 || u == 0x7f;
  });
}

std::string_view to_string(StoreError::Kind kind) {
  switch (kind) {
    case Kind::kDuplicateCredentialId: return "duplicate-credential-id";
    case Kind::kPersistenceFailure: return "persistence-failure";
    case Kind::kUnknownCredential: return "unknown-credential";
    case Kind::kCountRegression: return "count-regression";
    case Kind::kInvalidRecord: return "invalid-record";
  }
  return "unknown";
}

CredentialStore::CredentialStore(std::filesystem::path path, WriteProgressHook write_hook)
    : path_(std::move(path)), write_hook_(std::move(write_hook)) {}

std::filesystem::path CredentialStore::lock_path() const {
  return path_.parent_path() / (path_.filename().string() + ".lock");
}

void CredentialStore::add(const CredentialRecord& record) {
  if (record.credential_id.empty()) throw StoreError(Kind::kInvalidRecord, "empty credential_id");
  if (!is_valid_account_name(record.user)) {
    throw StoreError(Kind::kInvalidRecord, "invalid account name '" + record.user + "'");
  }

  std::lock_guard guard(write_mutex_);
  try {
    if (!path_.parent_path().empty()) std::filesystem::create_directories(path_.parent_path());
  } catch (const std::filesystem::filesystem_error& e) {
    throw StoreError(Kind::kPersistenceFailure, e.what());
  }
  const auto lock = lock_file(lock_path());

  Snapshot snap = load(path_);
  if (snap.index_of(record.credential_id)) {
    throw StoreError(Kind::kDuplicateCredentialId, "credential id already registered");
  }
  snap.doc["records"].push_back(record_to_json(record));
  save(path_, snap.doc, write_hook_);
}

std::vector<CredentialRecord> CredentialStore::lookup_by_user(std::string_view user) const {
  std::vector<CredentialRecord> out;
  Snapshot snap = load(path_);
  for (auto& r : snap.records) {
    if (r.user == user && !r.revoked) out.push_back(std::move(r));
  }
  return out;
}

std::optional<CredentialRecord> CredentialStore::lookup_by_credential_id(ByteView credential_id) const {
  Snapshot snap = load(path_);
  if (auto i = snap.index_of(credential_id)) return std::move(snap.records[*i]);
  return std::nullopt;
}

void CredentialStore::update_sign_count(ByteView credential_id, std::uint32_t new_count) {
  std::lock_guard guard(write_mutex_);
  const auto lock = lock_file(lock_path());
  Snapshot snap = load(path_);
  const auto i = snap.index_of(credential_id);
  if (!i) throw StoreError(Kind::kUnknownCredential, "unknown credential id");
  if (new_count < snap.records[*i].sign_count) {
    throw StoreError(Kind::kCountRegression, "sign count would decrease from " +
                                                 std::to_string(snap.records[*i].sign_count));
  }
  snap.doc["records"][*i]["sign_count"] = new_count;
  save(path_, snap.doc, write_hook_);
}

void CredentialStore::revoke(ByteView credential_id) {
  std::lock_guard guard(write_mutex_);
  const auto lock = lock_file(lock_path());
  Snapshot snap = load(path_);
  const auto i = snap.index_of(credential_id);
  if (!i) throw StoreError(Kind::kUnknownCredential, "unknown credential id");
  if (snap.records[*i].revoked) return;
  snap.doc["records"][*i]["revoked"] = true;
  save(path_, snap.doc, write_hook_);
}

std::vector<CredentialRecord> CredentialStore::list_all() const { return load(path_).records; }

}  // namespace sshpk
