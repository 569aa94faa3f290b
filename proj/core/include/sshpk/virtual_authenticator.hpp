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
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "sshpk/bytes.hpp"
#include "sshpk/ceremony_json.hpp"
#include "sshpk/webauthn.hpp"

namespace sshpk {

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

class SystemRandomSource final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Reproducible stream for golden tests. Not suitable for production keys.
class SeededRandomSource final : public RandomSource {
 public:
  explicit SeededRandomSource(std::uint64_t seed) : engine_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 engine_;
};

class AuthenticatorError : public std::runtime_error {
 public:
  enum class Kind {
    kUnsupportedAlgorithmList,
    kRpMissing,
    kNoMatchingCredential,
    kFieldUnknown,
    kPositionOutOfRange,
  };

  AuthenticatorError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(AuthenticatorError::Kind kind);

// Software FIDO2 authenticator producing ES256 credentials. Private keys are
// held internally and cannot be exported. Not thread-safe; use one instance
// per scenario.
class VirtualAuthenticator {
 public:
  enum class UvBehavior { kAlwaysVerify, kNeverVerify };
  enum class CounterMode { kIncrement, kZero };
  enum class AttestationFormat { kNone, kPacked };

  struct Options {
    UvBehavior uv_behavior = UvBehavior::kAlwaysVerify;
    CounterMode counter_mode = CounterMode::kIncrement;
    std::array<std::uint8_t, 16> aaguid = {'s', 's', 'h', 'p', 'k', '-', 'v', 'i',
                                           'r', 't', 'u', 'a', 'l', '-', 'v', '1'};
    // Set for reproducible byte streams; unset draws from the system CSPRNG.
    std::optional<std::uint64_t> seed;
  };

  VirtualAuthenticator();
  explicit VirtualAuthenticator(Options options);
  ~VirtualAuthenticator();
  VirtualAuthenticator(VirtualAuthenticator&&) noexcept;
  VirtualAuthenticator& operator=(VirtualAuthenticator&&) noexcept;

  // Client data records `origin`, as a browser would for the page it runs on.
  RegistrationResponse make_credential(const ceremony::RegistrationOptions& options,
                                       std::string_view origin,
                                       AttestationFormat format = AttestationFormat::kNone);
  AssertionResponse get_assertion(const ceremony::AuthenticationOptions& options,
                                  std::string_view origin);

  std::size_t credential_count() const;
  std::optional<std::uint32_t> sign_count(std::string_view rp_id, ByteView credential_id) const;

 private:
  struct Credential;

  Options options_;
  std::unique_ptr<RandomSource> random_;
  std::map<std::pair<std::string, Bytes>, std::unique_ptr<Credential>> credentials_;
};

// Deterministic corruption of a response for adversarial tests. Fields:
// "signature", "authenticator_data", "client_data", "credential_id",
// "attestation_object". Exactly one of the three actions is used.
struct Mutation {
  std::string field;
  std::optional<std::size_t> flip_bit;        // bit index within the field
  std::optional<std::string> replace_origin;  // client_data only
  std::optional<std::string> replace_challenge;
};

AssertionResponse tamper(const AssertionResponse& response, const Mutation& mutation);
RegistrationResponse tamper(const RegistrationResponse& response, const Mutation& mutation);

}  // namespace sshpk
