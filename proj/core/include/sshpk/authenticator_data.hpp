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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sshpk/bytes.hpp"
#include "sshpk/cose_key.hpp"

namespace sshpk {

struct AuthenticatorFlags {
  bool user_present = false;
  bool user_verified = false;
  bool attested_credential_included = false;
  bool extensions_included = false;
  // Bits 1, 3, 4 and 5 (RFU, backup eligibility/state) are carried through
  // untouched so re-encoding is lossless.
  std::uint8_t other_bits = 0;

  static AuthenticatorFlags from_byte(std::uint8_t b);
  std::uint8_t to_byte() const;

  friend bool operator==(const AuthenticatorFlags&, const AuthenticatorFlags&) = default;
};

struct AttestedCredential {
  std::array<std::uint8_t, 16> aaguid{};
  Bytes credential_id;
  CoseKey public_key;
  // Exact bytes of the COSE key as it appeared on the wire.
  Bytes public_key_cbor;
};

struct AuthenticatorData {
  std::array<std::uint8_t, 32> rp_id_hash{};
  AuthenticatorFlags flags;
  std::uint32_t sign_count = 0;
  std::optional<AttestedCredential> attested_credential;
  // Extension map bytes; validated as CBOR, otherwise opaque.
  std::optional<Bytes> extensions_cbor;
};

class AuthenticatorDataError : public std::runtime_error {
 public:
  enum class Kind {
    kTruncatedInput,
    kAtFlagSetButNoCredential,
    kTrailingGarbage,
    kMalformedCredential,
    kMalformedExtensions,
  };

  AuthenticatorDataError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(AuthenticatorDataError::Kind kind);

inline constexpr std::size_t kAuthenticatorDataMinSize = 37;
inline constexpr std::size_t kMinCredentialIdSize = 16;
inline constexpr std::size_t kMaxCredentialIdSize = 1023;

// Layout: rpIdHash(32) | flags(1) | signCount(4, big-endian) |
// [aaguid(16) | credIdLen(2) | credId | COSE key] | [extensions map].
// A malformed embedded COSE key surfaces as CoseKeyError.
AuthenticatorData parse_authenticator_data(ByteView raw);

Bytes encode_authenticator_data(const AuthenticatorData& data);

}  // namespace sshpk
