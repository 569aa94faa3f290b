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
#include <stdexcept>

#include "sshpk/bytes.hpp"

namespace sshpk {

struct CoseKey;

class CryptoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);

// Fills `out` from the operating system CSPRNG; throws CryptoError on failure.
void secure_random_fill(std::span<std::uint8_t> out);

// Verifies `signature` over `message` with the COSE-described public key.
// ES256 expects an ASN.1 DER signature, EdDSA a raw 64-byte one, RS256 a
// PKCS#1 v1.5 block. Returns false on any mismatch, including malformed
// signatures.
bool verify_signature(const CoseKey& key, ByteView message, ByteView signature);

// Constant-time equality for secrets of equal public length.
bool constant_time_equal(ByteView a, ByteView b);

}  // namespace sshpk
