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

#include <gtest/gtest.h>

#include "sshpk/authenticator_data.hpp"
#include "sshpk/cbor.hpp"
#include "sshpk/crypto.hpp"
#include "test_support.hpp"
#include "vectors/python_vectors.inc"

namespace sshpk {
namespace {

using sshpk::testing::from_hex;
using Kind = AuthenticatorDataError::Kind;

Kind parse_error(const Bytes& raw) {
  try {
    parse_authenticator_data(raw);
  } catch (const AuthenticatorDataError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed";
  return Kind::kTruncatedInput;
}

Bytes attested_authenticator_data() {
  const cbor::Value att = cbor::decode(from_hex(kRegEdAttestation));
  return att.find("authData")->as_bytes();
}

TEST(AuthenticatorData, ParsesExternalAttestedData) {
  const auto data = parse_authenticator_data(attested_authenticator_data());
  const auto expected_hash = sha256(to_bytes(kVectorRpId));
  EXPECT_TRUE(std::equal(data.rp_id_hash.begin(), data.rp_id_hash.end(), expected_hash.begin()));
  EXPECT_TRUE(data.flags.user_present);
  EXPECT_TRUE(data.flags.user_verified);
  EXPECT_TRUE(data.flags.attested_credential_included);
  EXPECT_FALSE(data.flags.extensions_included);
  EXPECT_EQ(data.sign_count, 7u);
  ASSERT_TRUE(data.attested_credential);
  EXPECT_EQ(data.attested_credential->credential_id, from_hex(kRegEdCredId));
  EXPECT_EQ(data.attested_credential->public_key_cbor, from_hex(kEd25519Cose));
  EXPECT_EQ(data.attested_credential->public_key.algorithm, CoseAlgorithm::kEdDSA);
  EXPECT_EQ(encode_authenticator_data(data), attested_authenticator_data());
}

TEST(AuthenticatorData, ParsesAssertionData) {
  const auto data = parse_authenticator_data(from_hex(kAssertEdAuthData));
  EXPECT_EQ(data.sign_count, 8u);
  EXPECT_EQ(data.flags.to_byte(), 0x05);
  EXPECT_FALSE(data.attested_credential);
}

TEST(AuthenticatorData, SignCountIsBigEndian) {
  Bytes raw(37, 0);
  raw[32] = 0x01;
  raw[33] = 0x01;
  raw[34] = 0x02;
  raw[35] = 0x03;
  raw[36] = 0x04;
  EXPECT_EQ(parse_authenticator_data(raw).sign_count, 0x01020304u);
}

TEST(AuthenticatorData, FlagsRoundTripAllBytes) {
  for (int b = 0; b < 256; ++b) {
    EXPECT_EQ(AuthenticatorFlags::from_byte(static_cast<std::uint8_t>(b)).to_byte(), b);
  }
  const auto f = AuthenticatorFlags::from_byte(0xc5);
  EXPECT_TRUE(f.user_present && f.user_verified && f.attested_credential_included && f.extensions_included);
}

TEST(AuthenticatorData, RejectsShortInput) {
  for (std::size_t n : {0u, 1u, 32u, 36u}) EXPECT_EQ(parse_error(Bytes(n, 0)), Kind::kTruncatedInput) << n;
}

TEST(AuthenticatorData, RejectsAtFlagWithoutCredential) {
  Bytes raw(37, 0);
  raw[32] = 0x41;
  EXPECT_EQ(parse_error(raw), Kind::kAtFlagSetButNoCredential);
}

TEST(AuthenticatorData, RejectsTrailingBytes) {
  Bytes raw = from_hex(kAssertEdAuthData);
  raw.push_back(0);
  EXPECT_EQ(parse_error(raw), Kind::kTrailingGarbage);
  Bytes attested = attested_authenticator_data();
  attested.push_back(0xa0);
  EXPECT_EQ(parse_error(attested), Kind::kTrailingGarbage);
}

TEST(AuthenticatorData, RejectsTruncatedCredential) {
  const Bytes full = attested_authenticator_data();
  for (std::size_t n = 38; n < full.size(); n += 5) {
    const Bytes cut(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
    const Kind k = parse_error(cut);
    EXPECT_TRUE(k == Kind::kTruncatedInput || k == Kind::kMalformedCredential) << n;
  }
}

TEST(AuthenticatorData, RejectsShortCredentialId) {
  Bytes raw(37, 0);
  raw[32] = 0x41;
  raw.insert(raw.end(), 16, 0);  // aaguid
  raw.push_back(0);
  raw.push_back(4);  // L = 4
  raw.insert(raw.end(), 4, 0xaa);
  const auto key = from_hex(kEd25519Cose);
  raw.insert(raw.end(), key.begin(), key.end());
  EXPECT_EQ(parse_error(raw), Kind::kMalformedCredential);
}

TEST(AuthenticatorData, ParsesExtensions) {
  Bytes raw = from_hex(kAssertEdAuthData);
  raw[32] |= 0x80;
  const Bytes ext_map = from_hex("a1616101");
  raw.insert(raw.end(), ext_map.begin(), ext_map.end());
  const auto data = parse_authenticator_data(raw);
  ASSERT_TRUE(data.extensions_cbor);
  EXPECT_EQ(*data.extensions_cbor, ext_map);
  EXPECT_EQ(encode_authenticator_data(data), raw);

  Bytes missing = from_hex(kAssertEdAuthData);
  missing[32] |= 0x80;
  EXPECT_EQ(parse_error(missing), Kind::kMalformedExtensions);
}

}  // namespace
}  // namespace sshpk
