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

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sshpk/bytes.hpp"
#include "sshpk/cose_key.hpp"
#include "sshpk/webauthn.hpp"

// JSON ceremony documents exchanged over the challenge-server endpoints.
// Field names follow the browser's PublicKeyCredential JSON serialization;
// every binary field is base64url without padding.
namespace sshpk::ceremony {

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RegistrationOptions {
  Bytes challenge;
  std::string rp_id;
  std::string rp_name;
  Bytes user_handle;
  std::string user_name;
  std::vector<CoseAlgorithm> algorithms;
  std::vector<Bytes> exclude_credentials;
  bool user_verification_required = true;
  std::uint64_t timeout_ms = 120000;
};

struct AuthenticationOptions {
  Bytes challenge;
  std::string rp_id;
  std::vector<Bytes> allow_credentials;
  bool user_verification_required = true;
  std::uint64_t timeout_ms = 120000;
};

nlohmann::json to_json(const RegistrationOptions& options);
nlohmann::json to_json(const AuthenticationOptions& options);
nlohmann::json to_json(const RegistrationResponse& response);
nlohmann::json to_json(const AssertionResponse& response);

// All parsers throw DocumentError on missing fields, wrong types or bad
// base64url.
RegistrationOptions registration_options_from_json(const nlohmann::json& doc);
AuthenticationOptions authentication_options_from_json(const nlohmann::json& doc);
RegistrationResponse registration_response_from_json(const nlohmann::json& doc);
AssertionResponse assertion_response_from_json(const nlohmann::json& doc);

// Stable opaque WebAuthn user handle for an account on one relying party.
Bytes user_handle_for(std::string_view rp_id, std::string_view user);

}  // namespace sshpk::ceremony
