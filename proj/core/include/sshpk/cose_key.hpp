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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sshpk/bytes.hpp"

namespace sshpk {

// IANA COSE algorithm identifiers.
enum class CoseAlgorithm : std::int64_t {
  kES256 = -7,
  kEdDSA = -8,
  kRS256 = -257,
};

enum class CoseKeyType : std::int64_t { kOKP = 1, kEC2 = 2, kRSA = 3 };

enum class CoseCurve : std::int64_t { kP256 = 1, kEd25519 = 6 };

std::string_view to_string(CoseAlgorithm alg);
std::optional<CoseAlgorithm> algorithm_from_int(std::int64_t value);
std::optional<CoseAlgorithm> algorithm_from_name(std::string_view name);

// Smallest RSA modulus accepted: 2048 bits.
inline constexpr std::size_t kMinRsaModulusBytes = 256;

struct CoseKey {
  CoseKeyType key_type;
  CoseAlgorithm algorithm;
  std::optional<CoseCurve> curve;
  Bytes x;
  std::optional<Bytes> y;
  std::optional<Bytes> n;
  std::optional<Bytes> e;

  friend bool operator==(const CoseKey&, const CoseKey&) = default;
};

class CoseKeyError : public std::runtime_error {
 public:
  enum class Kind {
    kNotAMap,
    kMissingRequiredLabel,
    kAlgorithmNotAllowed,
    kMalformedCoordinateLength,
  };

  CoseKeyError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(CoseKeyError::Kind kind);

// Parses a COSE_Key map. Unknown labels are ignored. Invalid CBOR is reported
// as kNotAMap.
CoseKey parse_cose_key(ByteView raw);

// Canonical encoding with labels in ascending-magnitude order (1, 3, -1, ...).
Bytes encode_cose_key(const CoseKey& key);

}  // namespace sshpk
