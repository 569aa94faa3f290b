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

#include "sshpk/webauthn.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>

#include "sshpk/authenticator_data.hpp"
#include "sshpk/base64url.hpp"
#include "sshpk/cbor.hpp"
#include "sshpk/crypto.hpp"

namespace sshpk {
namespace {

using Kind = WebAuthnError::Kind;

constexpr std::string_view kTypeCreate = "webauthn.create";
constexpr std::string_view kTypeGet = "webauthn.get";

std::int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

AuthenticatorData parse_auth_data_or_throw(ByteView raw) {
  try {
    return parse_authenticator_data(raw);
  } catch (const CoseKeyError& e) {
    throw WebAuthnError(Kind::kAlgorithmRejected, std::string("credential key rejected: ") + e.what());
  } catch (const AuthenticatorDataError& e) {
    throw WebAuthnError(Kind::kMalformedAuthenticatorData, e.what());
  }
}

void check_auth_data_common(const AuthenticatorData& auth_data, const RelyingPartyConfig& config) {
  const Digest expected = sha256(to_bytes(config.rp_id));
  if (!constant_time_equal(auth_data.rp_id_hash, expected)) {
    throw WebAuthnError(Kind::kRpIdHashMismatch, "rpIdHash does not match " + config.rp_id);
  }
  if (!auth_data.flags.user_present) {
    throw WebAuthnError(Kind::kUserNotPresent, "user presence flag not set");
  }
  if (config.require_user_verification && !auth_data.flags.user_verified) {
    throw WebAuthnError(Kind::kUserNotVerified, "user verification flag not set");
  }
}

Bytes signed_payload(ByteView auth_data, ByteView client_data) {
  const Digest client_hash = sha256(client_data);
  return concat(auth_data, client_hash);
}

}  // namespace

std::string origin_host(std::string_view origin) {
  const auto scheme_end = origin.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return {};
  std::string_view rest = origin.substr(scheme_end + 3);
  if (rest.empty() || rest.find_first_of("/?#@") != std::string_view::npos) return {};
  if (const auto colon = rest.rfind(':'); colon != std::string_view::npos) {
    const auto port = rest.substr(colon + 1);
    if (port.empty() || !std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return {};
    }
    rest = rest.substr(0, colon);
  }
  return std::string(rest);
}

void RelyingPartyConfig::validate() const {
  if (rp_id.empty()) throw ConfigError("rp_id must not be empty");
  for (char c : rp_id) {
    if (c >= 'A' && c <= 'Z') throw ConfigError("rp_id must be lowercase");
    if (c == ':' || c == '/' || c == '?' || c == '#' || c == ' ') {
      throw ConfigError("rp_id must not contain a scheme, port or path");
    }
  }
  for (const auto& origin : expected_origins) {
    const std::string host = origin_host(origin);
    if (host.empty()) throw ConfigError("malformed origin: " + origin);
    const bool subdomain = host.size() > rp_id.size() &&
                           host.compare(host.size() - rp_id.size(), rp_id.size(), rp_id) == 0 &&
                           host[host.size() - rp_id.size() - 1] == '.';
    if (host != rp_id && !subdomain) {
      throw ConfigError("origin " + origin + " is not within rp_id " + rp_id);
    }
  }
  if (allowed_algorithms.empty()) throw ConfigError("allowed_algorithms must not be empty");
  if (challenge_ttl.count() <= 0) throw ConfigError("challenge_ttl must be positive");
}

bool RelyingPartyConfig::origin_allowed(std::string_view origin) const {
  return std::find(expected_origins.begin(), expected_origins.end(), origin) != expected_origins.end();
}

bool RelyingPartyConfig::algorithm_allowed(CoseAlgorithm alg) const {
  return std::find(allowed_algorithms.begin(), allowed_algorithms.end(), alg) !=
         allowed_algorithms.end();
}

std::string_view to_string(Ceremony c) {
  return c == Ceremony::kRegistration ? "registration" : "authentication";
}

std::string_view to_string(WebAuthnError::Kind kind) {
  switch (kind) {
    case Kind::kSessionUnknown: return "session-unknown";
    case Kind::kSessionAlreadyHasPendingChallenge: return "session-already-has-pending-challenge";
    case Kind::kInvalidResponse: return "invalid-response";
    case Kind::kMalformedClientData: return "malformed-client-data";
    case Kind::kCeremonyMismatch: return "ceremony-mismatch";
    case Kind::kChallengeMismatch: return "challenge-mismatch";
    case Kind::kOriginMismatch: return "origin-mismatch";
    case Kind::kMalformedAttestation: return "malformed-attestation";
    case Kind::kMalformedAuthenticatorData: return "malformed-authenticator-data";
    case Kind::kRpIdHashMismatch: return "rp-id-hash-mismatch";
    case Kind::kUserNotPresent: return "user-not-present";
    case Kind::kUserNotVerified: return "user-not-verified";
    case Kind::kAlgorithmRejected: return "algorithm-rejected";
    case Kind::kAttestationFormatUnsupported: return "attestation-format-unsupported";
    case Kind::kAttestationSignatureInvalid: return "attestation-signature-invalid";
    case Kind::kChallengeExpired: return "challenge-expired";
    case Kind::kChallengeReused: return "challenge-reused";
    case Kind::kSignatureInvalid: return "signature-invalid";
    case Kind::kSignCountRegression: return "sign-count-regression";
    case Kind::kCredentialIdMismatch: return "credential-id-mismatch";
  }
  return "unknown";
}

bool sign_count_acceptable(std::uint32_t stored, std::uint32_t asserted) {
  if (stored == 0 && asserted == 0) return true;
  return asserted > stored;
}

// ---------------------------------------------------------------------------

ChallengeRegistry::ChallengeRegistry(SessionValidator validator, const Clock& clock)
    : validator_(std::move(validator)), clock_(clock) {}

std::shared_ptr<Challenge> ChallengeRegistry::issue(Ceremony ceremony, const SessionId& session,
                                                    const RelyingPartyConfig& config) {
  std::lock_guard lock(mutex_);
  if (!validator_ || !validator_(session)) {
    throw WebAuthnError(Kind::kSessionUnknown, "session is unknown or no longer live");
  }
  const auto now = clock_.now();
  if (auto it = pending_.find(session); it != pending_.end()) {
    if (!it->second->consumed() && !it->second->expired(now)) {
      throw WebAuthnError(Kind::kSessionAlreadyHasPendingChallenge,
                          "session already has a pending challenge");
    }
  }
  Challenge::Value value{};
  secure_random_fill(value);
  auto challenge = std::make_shared<Challenge>(value, now, config.challenge_ttl, ceremony, session);
  pending_[session] = challenge;
  return challenge;
}

std::shared_ptr<Challenge> ChallengeRegistry::find(const SessionId& session) const {
  std::lock_guard lock(mutex_);
  auto it = pending_.find(session);
  return it == pending_.end() ? nullptr : it->second;
}

void ChallengeRegistry::drop(const SessionId& session) {
  std::lock_guard lock(mutex_);
  pending_.erase(session);
}

void ChallengeRegistry::clear() {
  std::lock_guard lock(mutex_);
  pending_.clear();
}

std::size_t ChallengeRegistry::size() const {
  std::lock_guard lock(mutex_);
  return pending_.size();
}

// ---------------------------------------------------------------------------

RelyingParty::RelyingParty(RelyingPartyConfig config, const Clock& clock)
    : config_(std::move(config)), clock_(clock) {
  config_.validate();
}

void RelyingParty::check_challenge_usable(const Challenge& pending, Ceremony expected) const {
  if (pending.consumed()) throw WebAuthnError(Kind::kChallengeReused, "challenge already used");
  if (pending.expired(clock_.now())) throw WebAuthnError(Kind::kChallengeExpired, "challenge expired");
  if (pending.ceremony() != expected) {
    throw WebAuthnError(Kind::kCeremonyMismatch, "challenge was issued for another ceremony");
  }
}

void RelyingParty::check_client_data(ByteView client_data, const Challenge& pending) const {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(client_data.begin(), client_data.end());
  } catch (const nlohmann::json::exception& e) {
    throw WebAuthnError(Kind::kMalformedClientData, e.what());
  }
  if (!doc.is_object()) throw WebAuthnError(Kind::kMalformedClientData, "client data is not an object");
  for (const char* field : {"type", "challenge", "origin"}) {
    if (!doc.contains(field) || !doc[field].is_string()) {
      throw WebAuthnError(Kind::kMalformedClientData, std::string("client data lacks ") + field);
    }
  }

  const auto& type = doc["type"].get_ref<const std::string&>();
  const std::string_view expected_type =
      pending.ceremony() == Ceremony::kRegistration ? kTypeCreate : kTypeGet;
  if (type != expected_type) {
    throw WebAuthnError(Kind::kCeremonyMismatch, "client data type " + type);
  }

  Bytes challenge;
  try {
    challenge = decode_base64url(doc["challenge"].get_ref<const std::string&>());
  } catch (const Base64UrlError&) {
    throw WebAuthnError(Kind::kChallengeMismatch, "client data challenge is not base64url");
  }
  if (!constant_time_equal(challenge, pending.value())) {
    throw WebAuthnError(Kind::kChallengeMismatch, "client data challenge does not match");
  }

  const auto& origin = doc["origin"].get_ref<const std::string&>();
  if (!config_.origin_allowed(origin)) {
    throw WebAuthnError(Kind::kOriginMismatch, "unexpected origin " + origin);
  }
  if (auto it = doc.find("crossOrigin"); it != doc.end() && !(it->is_boolean() && !it->get<bool>())) {
    throw WebAuthnError(Kind::kOriginMismatch, "cross-origin ceremony rejected");
  }
  if (doc.contains("topOrigin")) {
    throw WebAuthnError(Kind::kOriginMismatch, "cross-origin ceremony rejected");
  }
}

CredentialRecord RelyingParty::verify_registration(const RegistrationResponse& response,
                                                   Challenge& pending, std::string_view user) const {
  check_challenge_usable(pending, Ceremony::kRegistration);
  if (response.credential_id.empty() || response.client_data.empty() ||
      response.attestation_object.empty()) {
    throw WebAuthnError(Kind::kInvalidResponse, "registration response has empty fields");
  }
  check_client_data(response.client_data, pending);

  cbor::Value attestation;
  try {
    attestation = cbor::decode(response.attestation_object);
  } catch (const cbor::DecodeError& e) {
    throw WebAuthnError(Kind::kMalformedAttestation, e.what());
  }
  const cbor::Value* fmt = attestation.find("fmt");
  const cbor::Value* att_stmt = attestation.find("attStmt");
  const cbor::Value* auth_data_raw = attestation.find("authData");
  if (fmt == nullptr || !fmt->is_text() || att_stmt == nullptr || !att_stmt->is_map() ||
      auth_data_raw == nullptr || !auth_data_raw->is_bytes()) {
    throw WebAuthnError(Kind::kMalformedAttestation, "attestation object lacks fmt/attStmt/authData");
  }

  const AuthenticatorData auth_data = parse_auth_data_or_throw(auth_data_raw->as_bytes());
  check_auth_data_common(auth_data, config_);
  if (!auth_data.attested_credential) {
    throw WebAuthnError(Kind::kMalformedAuthenticatorData, "no attested credential in registration");
  }
  const AttestedCredential& cred = *auth_data.attested_credential;
  if (!config_.algorithm_allowed(cred.public_key.algorithm)) {
    throw WebAuthnError(Kind::kAlgorithmRejected,
                        std::string("algorithm ") + std::string(to_string(cred.public_key.algorithm)) +
                            " not allowed");
  }
  if (cred.credential_id != response.credential_id) {
    throw WebAuthnError(Kind::kCredentialIdMismatch, "attested credential id differs from response id");
  }

  const std::string& format = fmt->as_text();
  if (format == "none") {
    if (!att_stmt->as_map().empty()) {
      throw WebAuthnError(Kind::kMalformedAttestation, "none attestation must have empty attStmt");
    }
  } else if (format == "packed") {
    if (att_stmt->find("x5c") != nullptr || att_stmt->find("ecdaaKeyId") != nullptr) {
      throw WebAuthnError(Kind::kAttestationFormatUnsupported, "only packed self-attestation is accepted");
    }
    const cbor::Value* alg = att_stmt->find("alg");
    const cbor::Value* sig = att_stmt->find("sig");
    if (alg == nullptr || !alg->is_int() || sig == nullptr || !sig->is_bytes()) {
      throw WebAuthnError(Kind::kMalformedAttestation, "packed attStmt lacks alg/sig");
    }
    if (alg->as_int() != static_cast<std::int64_t>(cred.public_key.algorithm)) {
      throw WebAuthnError(Kind::kAttestationSignatureInvalid, "packed alg differs from credential key");
    }
    const Bytes payload = signed_payload(auth_data_raw->as_bytes(), response.client_data);
    if (!verify_signature(cred.public_key, payload, sig->as_bytes())) {
      throw WebAuthnError(Kind::kAttestationSignatureInvalid, "packed self-attestation signature invalid");
    }
  } else {
    throw WebAuthnError(Kind::kAttestationFormatUnsupported, "attestation format " + format);
  }

  if (!pending.try_consume()) throw WebAuthnError(Kind::kChallengeReused, "challenge already used");

  CredentialRecord record;
  record.credential_id = cred.credential_id;
  record.user = std::string(user);
  record.public_key = cred.public_key;
  record.sign_count = auth_data.sign_count;
  record.rp_id = config_.rp_id;
  record.created_at = unix_now();
  return record;
}

std::uint32_t RelyingParty::verify_assertion(const AssertionResponse& response, Challenge& pending,
                                             const CredentialRecord& stored) const {
  check_challenge_usable(pending, Ceremony::kAuthentication);
  if (response.credential_id.empty() || response.client_data.empty() ||
      response.authenticator_data.empty() || response.signature.empty()) {
    throw WebAuthnError(Kind::kInvalidResponse, "assertion response has empty fields");
  }
  if (stored.credential_id != response.credential_id) {
    throw WebAuthnError(Kind::kCredentialIdMismatch, "assertion names a different credential");
  }
  check_client_data(response.client_data, pending);

  const AuthenticatorData auth_data = parse_auth_data_or_throw(response.authenticator_data);
  check_auth_data_common(auth_data, config_);

  const Bytes payload = signed_payload(response.authenticator_data, response.client_data);
  if (!verify_signature(stored.public_key, payload, response.signature)) {
    throw WebAuthnError(Kind::kSignatureInvalid, "assertion signature invalid");
  }
  if (!sign_count_acceptable(stored.sign_count, auth_data.sign_count)) {
    throw WebAuthnError(Kind::kSignCountRegression,
                        "sign count " + std::to_string(auth_data.sign_count) + " does not exceed " +
                            std::to_string(stored.sign_count));
  }

  if (!pending.try_consume()) throw WebAuthnError(Kind::kChallengeReused, "challenge already used");
  return auth_data.sign_count;
}

}  // namespace sshpk
