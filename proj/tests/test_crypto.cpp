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

#include "sshpk/cose_key.hpp"
#include "sshpk/crypto.hpp"
#include "test_support.hpp"
#include "vectors/python_vectors.inc"

namespace sshpk {
namespace {

using sshpk::testing::from_hex;
using sshpk::testing::to_hex;

// FIPS 180-2 examples.
TEST(Sha256, MatchesFipsVectors) {
  EXPECT_EQ(to_hex(sha256(to_bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(sha256(Bytes{})),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(to_hex(sha256(to_bytes("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

struct Case {
  const char* name;
  const char* cose;
  const char* msg;
  const char* sig;
};

const Case kCases[] = {
    {"ES256", kEs256Cose, kEs256Msg, kEs256Sig},
    {"EdDSA", kEd25519Cose, kEd25519Msg, kEd25519Sig},
    {"RS256", kRs256Cose, kRs256Msg, kRs256Sig},
};

TEST(VerifySignature, AcceptsExternalSignatures) {
  for (const auto& c : kCases) {
    const CoseKey key = parse_cose_key(from_hex(c.cose));
    EXPECT_TRUE(verify_signature(key, from_hex(c.msg), from_hex(c.sig))) << c.name;
  }
}

TEST(VerifySignature, RejectsEverySingleBitFlipOfSignature) {
  for (const auto& c : kCases) {
    const CoseKey key = parse_cose_key(from_hex(c.cose));
    const Bytes msg = from_hex(c.msg);
    const Bytes sig = from_hex(c.sig);
    for (std::size_t bit = 0; bit < sig.size() * 8; bit += 7) {
      Bytes bad = sig;
      bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      EXPECT_FALSE(verify_signature(key, msg, bad)) << c.name << " bit " << bit;
    }
  }
}

TEST(VerifySignature, RejectsOtherMessage) {
  for (const auto& c : kCases) {
    const CoseKey key = parse_cose_key(from_hex(c.cose));
    Bytes msg = from_hex(c.msg);
    msg.back() ^= 1;
    EXPECT_FALSE(verify_signature(key, msg, from_hex(c.sig))) << c.name;
  }
}

TEST(VerifySignature, RejectsMalformedSignatures) {
  for (const auto& c : kCases) {
    const CoseKey key = parse_cose_key(from_hex(c.cose));
    EXPECT_FALSE(verify_signature(key, from_hex(c.msg), Bytes{})) << c.name;
    EXPECT_FALSE(verify_signature(key, from_hex(c.msg), Bytes(3, 0x30))) << c.name;
  }
}

TEST(VerifySignature, RejectsPointOffCurve) {
  CoseKey key = parse_cose_key(from_hex(kEs256Cose));
  key.y->back() ^= 1;
  EXPECT_FALSE(verify_signature(key, from_hex(kEs256Msg), from_hex(kEs256Sig)));
}

TEST(ConstantTimeEqual, ComparesContentAndLength) {
  EXPECT_TRUE(constant_time_equal(Bytes{1, 2, 3}, Bytes{1, 2, 3}));
  EXPECT_FALSE(constant_time_equal(Bytes{1, 2, 3}, Bytes{1, 2, 4}));
  EXPECT_FALSE(constant_time_equal(Bytes{1, 2, 3}, Bytes{1, 2}));
  EXPECT_TRUE(constant_time_equal(Bytes{}, Bytes{}));
}

TEST(SecureRandom, FillsBuffers) {
  Bytes a(32), b(32);
  secure_random_fill(a);
  secure_random_fill(b);
  EXPECT_NE(a, b);
}

}  // namespace
}  // namespace sshpk
