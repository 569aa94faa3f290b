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

#include "sshpk/ceremony_json.hpp"

#include "sshpk/base64url.hpp"
#include "sshpk/crypto.hpp"

namespace sshpk::ceremony {
namespace {

using json = nlohmann::json;

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw DocumentError(std::string("missing field '") + name + "'");
  }
  return doc[name];
}

std::string text_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_string()) throw DocumentError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

Bytes b64_field(const json& doc, const char* name) {
  try {
    return decode_base64url(text_field(doc, name));
  } catch (const Base64UrlError&) {
    throw DocumentError(std::string("field '") + name + "' is not base64url");
  }
}

json descriptor_list(const std::vector<Bytes>& ids) {
  json list = json::array();
  for (const auto& id : ids) list.push_back({{"type", "public-key"}, {"id", encode_base64url(id)}});
  return list;
}

std::vector<Bytes> descriptor_ids(const json& doc, const char* name) {
  std::vector<Bytes> ids;
  if (!doc.contains(name)) return ids;
  const json& list = doc[name];
  if (!list.is_array()) throw DocumentError(std::string("field '") + name + "' must be an array");
  for (const auto& d : list) ids.push_back(b64_field(d, "id"));
  return ids;
}

std::uint64_t timeout_field(const json& doc) {
  if (!doc.contains("timeout")) return 0;
  if (!doc["timeout"].is_number_unsigned()) throw DocumentError("field 'timeout' must be unsigned");
  return doc["timeout"].get<std::uint64_t>();
}

bool uv_required(const json& selection) {
  if (!selection.is_object() || !selection.contains("userVerification")) return false;
  return selection["userVerification"] == "required";
}

const json& credential_response(const json& doc) {
  if (text_field(doc, "type") != "public-key") throw DocumentError("credential type must be public-key");
  const json& response = field(doc, "response");
  if (!response.is_object()) throw DocumentError("field 'response' must be an object");
  return response;
}

Bytes credential_id(const json& doc) {
  Bytes id = b64_field(doc, "id");
  if (doc.contains("rawId") && b64_field(doc, "rawId") != id) {
    throw DocumentError("id and rawId differ");
  }
  return id;
}

}  // namespace

json to_json(const RegistrationOptions& o) {
  json params = json::array();
  for (auto alg : o.algorithms) {
    params.push_back({{"type", "public-key"}, {"alg", static_cast<std::int64_t>(alg)}});
  }
  return {
      {"challenge", encode_base64url(o.challenge)},
      {"rp", {{"id", o.rp_id}, {"name", o.rp_name}}},
      {"user",
       {{"id", encode_base64url(o.user_handle)}, {"name", o.user_name}, {"displayName", o.user_name}}},
      {"pubKeyCredParams", params},
      {"timeout", o.timeout_ms},
      {"excludeCredentials", descriptor_list(o.exclude_credentials)},
      {"authenticatorSelection",
       {{"residentKey", "required"},
        {"requireResidentKey", true},
        {"userVerification", o.user_verification_required ? "required" : "preferred"}}},
      {"attestation", "none"},
  };
}

json to_json(const AuthenticationOptions& o) {
  return {
      {"challenge", encode_base64url(o.challenge)},
      {"rpId", o.rp_id},
      {"allowCredentials", descriptor_list(o.allow_credentials)},
      {"userVerification", o.user_verification_required ? "required" : "preferred"},
      {"timeout", o.timeout_ms},
  };
}

json to_json(const RegistrationResponse& r) {
  const std::string id = encode_base64url(r.credential_id);
  return {
      {"id", id},
      {"rawId", id},
      {"type", "public-key"},
      {"response",
       {{"clientDataJSON", encode_base64url(r.client_data)},
        {"attestationObject", encode_base64url(r.attestation_object)}}},
  };
}

json to_json(const AssertionResponse& r) {
  const std::string id = encode_base64url(r.credential_id);
  json response = {
      {"clientDataJSON", encode_base64url(r.client_data)},
      {"authenticatorData", encode_base64url(r.authenticator_data)},
      {"signature", encode_base64url(r.signature)},
  };
  if (!r.user_handle.empty()) response["userHandle"] = encode_base64url(r.user_handle);
  return {{"id", id}, {"rawId", id}, {"type", "public-key"}, {"response", response}};
}

RegistrationOptions registration_options_from_json(const json& doc) {
  RegistrationOptions o;
  o.challenge = b64_field(doc, "challenge");
  const json& rp = field(doc, "rp");
  o.rp_id = rp.contains("id") ? text_field(rp, "id") : std::string{};
  o.rp_name = rp.contains("name") ? text_field(rp, "name") : std::string{};
  const json& user = field(doc, "user");
  o.user_handle = b64_field(user, "id");
  o.user_name = text_field(user, "name");
  const json& params = field(doc, "pubKeyCredParams");
  if (!params.is_array()) throw DocumentError("field 'pubKeyCredParams' must be an array");
  for (const auto& p : params) {
    const json& alg = field(p, "alg");
    if (!alg.is_number_integer()) throw DocumentError("alg must be an integer");
    // Unknown identifiers are skipped, as a browser would.
    if (auto known = algorithm_from_int(alg.get<std::int64_t>())) o.algorithms.push_back(*known);
  }
  o.exclude_credentials = descriptor_ids(doc, "excludeCredentials");
  o.user_verification_required =
      doc.contains("authenticatorSelection") && uv_required(doc["authenticatorSelection"]);
  o.timeout_ms = timeout_field(doc);
  return o;
}

AuthenticationOptions authentication_options_from_json(const json& doc) {
  AuthenticationOptions o;
  o.challenge = b64_field(doc, "challenge");
  o.rp_id = text_field(doc, "rpId");
  o.allow_credentials = descriptor_ids(doc, "allowCredentials");
  o.user_verification_required = uv_required(doc);
  o.timeout_ms = timeout_field(doc);
  return o;
}

RegistrationResponse registration_response_from_json(const json& doc) {
  RegistrationResponse r;
  r.credential_id = credential_id(doc);
  const json& response = credential_response(doc);
  r.client_data = b64_field(response, "clientDataJSON");
  r.attestation_object = b64_field(response, "attestationObject");
  return r;
}

AssertionResponse assertion_response_from_json(const json& doc) {
  AssertionResponse r;
  r.credential_id = credential_id(doc);
  const json& response = credential_response(doc);
  r.client_data = b64_field(response, "clientDataJSON");
  r.authenticator_data = b64_field(response, "authenticatorData");
  r.signature = b64_field(response, "signature");
  if (response.contains("userHandle") && !response["userHandle"].is_null()) {
    r.user_handle = b64_field(response, "userHandle");
  }
  return r;
}

Bytes user_handle_for(std::string_view rp_id, std::string_view user) {
  Bytes input = to_bytes(rp_id);
  input.push_back(0);
  input.insert(input.end(), user.begin(), user.end());
  const Digest d = sha256(input);
  return Bytes(d.begin(), d.begin() + 16);
}

}  // namespace sshpk::ceremony
