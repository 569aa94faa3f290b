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

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sshpk/bytes.hpp"
#include "sshpk/clock.hpp"
#include "sshpk/cose_key.hpp"
#include "sshpk/credential_record.hpp"
#include "sshpk/session_id.hpp"

namespace sshpk {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RelyingPartyConfig {
  std::string rp_id;
  std::string rp_name;
  std::vector<std::string> expected_origins;
  bool require_user_verification = true;
  std::vector<CoseAlgorithm> allowed_algorithms = {CoseAlgorithm::kES256, CoseAlgorithm::kEdDSA,
                                                   CoseAlgorithm::kRS256};
  std::chrono::seconds challenge_ttl{120};

  // Throws ConfigError when an invariant does not hold.
  void validate() const;
  bool origin_allowed(std::string_view origin) const;
  bool algorithm_allowed(CoseAlgorithm alg) const;
};

// Extracts the host of "scheme://host[:port]"; empty if malformed.
std::string origin_host(std::string_view origin);

enum class Ceremony { kRegistration, kAuthentication };

std::string_view to_string(Ceremony c);

class Challenge {
 public:
  static constexpr std::size_t kSize = 32;
  using Value = std::array<std::uint8_t, kSize>;

  Challenge(Value value, Clock::time_point issued_at, std::chrono::seconds ttl, Ceremony ceremony,
            SessionId bound_session)
      : value_(value), issued_at_(issued_at), ttl_(ttl), ceremony_(ceremony),
        bound_session_(bound_session) {}

  Challenge(const Challenge&) = delete;
  Challenge& operator=(const Challenge&) = delete;

  const Value& value() const { return value_; }
  Clock::time_point issued_at() const { return issued_at_; }
  std::chrono::seconds ttl() const { return ttl_; }
  Ceremony ceremony() const { return ceremony_; }
  const SessionId& bound_session() const { return bound_session_; }

  bool consumed() const { return consumed_.load(); }
  bool expired(Clock::time_point now) const { return now >= issued_at_ + ttl_; }

  // Flips consumed false->true; returns false if another caller got there first.
  bool try_consume() {
    bool expected = false;
    return consumed_.compare_exchange_strong(expected, true);
  }

 private:
  Value value_;
  Clock::time_point issued_at_;
  std::chrono::seconds ttl_;
  Ceremony ceremony_;
  SessionId bound_session_;
  std::atomic<bool> consumed_{false};
};

struct RegistrationResponse {
  Bytes credential_id;
  Bytes client_data;
  Bytes attestation_object;
};

struct AssertionResponse {
  Bytes credential_id;
  Bytes client_data;
  Bytes authenticator_data;
  Bytes signature;
  Bytes user_handle;  // optional, empty when absent
};

class WebAuthnError : public std::runtime_error {
 public:
  enum class Kind {
    kSessionUnknown,
    kSessionAlreadyHasPendingChallenge,
    kInvalidResponse,
    kMalformedClientData,
    kCeremonyMismatch,
    kChallengeMismatch,
    kOriginMismatch,
    kMalformedAttestation,
    kMalformedAuthenticatorData,
    kRpIdHashMismatch,
    kUserNotPresent,
    kUserNotVerified,
    kAlgorithmRejected,
    kAttestationFormatUnsupported,
    kAttestationSignatureInvalid,
    kChallengeExpired,
    kChallengeReused,
    kSignatureInvalid,
    kSignCountRegression,
    kCredentialIdMismatch,
  };

  WebAuthnError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Machine-readable kebab-case name, e.g. "origin-mismatch".
std::string_view to_string(WebAuthnError::Kind kind);

// Pending challenges, at most one per session. All operations are serialized.
class ChallengeRegistry {
 public:
  // Answers whether a session id names a live, unconsumed ticket.
  using SessionValidator = std::function<bool(const SessionId&)>;

  explicit ChallengeRegistry(SessionValidator validator,
                             const Clock& clock = SteadyClock::instance());

  // Throws kSessionUnknown or kSessionAlreadyHasPendingChallenge. A consumed
  // or expired challenge does not block a new one.
  std::shared_ptr<Challenge> issue(Ceremony ceremony, const SessionId& session,
                                   const RelyingPartyConfig& config);

  // The session's most recent challenge, consumed or not; nullptr if none.
  std::shared_ptr<Challenge> find(const SessionId& session) const;

  void drop(const SessionId& session);
  void clear();
  std::size_t size() const;

 private:
  SessionValidator validator_;
  const Clock& clock_;
  mutable std::mutex mutex_;
  std::map<SessionId, std::shared_ptr<Challenge>> pending_;
};

// Verifies ceremony responses against one relying-party configuration.
// Verification is stateless apart from consuming the supplied challenge, so
// one instance may be shared across request threads.
class RelyingParty {
 public:
  explicit RelyingParty(RelyingPartyConfig config, const Clock& clock = SteadyClock::instance());

  const RelyingPartyConfig& config() const { return config_; }

  // On success the challenge is consumed and the returned record carries
  // `user`, the attested key, and the authenticator's sign count.
  CredentialRecord verify_registration(const RegistrationResponse& response, Challenge& pending,
                                       std::string_view user) const;

  // On success the challenge is consumed; returns the asserted sign count.
  std::uint32_t verify_assertion(const AssertionResponse& response, Challenge& pending,
                                 const CredentialRecord& stored) const;

 private:
  void check_challenge_usable(const Challenge& pending, Ceremony expected) const;
  void check_client_data(ByteView client_data, const Challenge& pending) const;

  RelyingPartyConfig config_;
  const Clock& clock_;
};

// Sign-count rule: when either counter is nonzero the asserted count must be
// strictly greater than the stored one.
bool sign_count_acceptable(std::uint32_t stored, std::uint32_t asserted);

}  // namespace sshpk
