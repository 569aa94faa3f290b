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

#include "sshpk/cose_key.hpp"

#include "sshpk/cbor.hpp"

namespace sshpk {
namespace {

constexpr std::int64_t kLabelKty = 1;
constexpr std::int64_t kLabelAlg = 3;
constexpr std::int64_t kLabelCrvOrN = -1;
constexpr std::int64_t kLabelXOrE = -2;
constexpr std::int64_t kLabelY = -3;

using Kind = CoseKeyError::Kind;

const cbor::Value& require(const cbor::Value& map, std::int64_t label) {
  const cbor::Value* v = map.find(cbor::Value(label));
  if (v == nullptr) {
    throw CoseKeyError(Kind::kMissingRequiredLabel,
                       "cose key missing label " + std::to_string(label));
  }
  return *v;
}

std::int64_t require_int(const cbor::Value& map, std::int64_t label) {
  const auto& v = require(map, label);
  if (!v.is_int()) {
    throw CoseKeyError(Kind::kMissingRequiredLabel,
                       "cose key label " + std::to_string(label) + " is not an integer");
  }
  return v.as_int();
}

const Bytes& require_bytes(const cbor::Value& map, std::int64_t label) {
  const auto& v = require(map, label);
  if (!v.is_bytes()) {
    throw CoseKeyError(Kind::kMissingRequiredLabel,
                       "cose key label " + std::to_string(label) + " is not a byte string");
  }
  return v.as_bytes();
}

void expect_length(const Bytes& b, std::size_t n, const char* what) {
  if (b.size() != n) {
    throw CoseKeyError(Kind::kMalformedCoordinateLength,
                       std::string(what) + " has length " + std::to_string(b.size()));
  }
}

}  // namespace

std::string_view to_string(CoseAlgorithm alg) {
  switch (alg) {
    case CoseAlgorithm::kES256: return "ES256";
    case CoseAlgorithm::kEdDSA: return "EdDSA";
    case CoseAlgorithm::kRS256: return "RS256";
  }
  return "unknown";
}

std::optional<CoseAlgorithm> algorithm_from_int(std::int64_t value) {
  switch (value) {
    case -7: return CoseAlgorithm::kES256;
    case -8: return CoseAlgorithm::kEdDSA;
    case -257: return CoseAlgorithm::kRS256;
    default: return std::nullopt;
  }
}

std::optional<CoseAlgorithm> algorithm_from_name(std::string_view name) {
  if (name == "ES256") return CoseAlgorithm::kES256;
  if (name == "EdDSA") return CoseAlgorithm::kEdDSA;
  if (name == "RS256") return CoseAlgorithm::kRS256;
  return std::nullopt;
}

std::string_view to_string(CoseKeyError::Kind kind) {
  switch (kind) {
    case Kind::kNotAMap: return "not-a-map";
    case Kind::kMissingRequiredLabel: return "missing-required-label";
    case Kind::kAlgorithmNotAllowed: return "algorithm-not-allowed";
    case Kind::kMalformedCoordinateLength: return "malformed-coordinate-length";
  }
  return "unknown";
}

CoseKey parse_cose_key(ByteView raw) {
  cbor::Value map;
  try {
    map = cbor::decode(raw);
  } catch (const cbor::DecodeError& e) {
    throw CoseKeyError(Kind::kNotAMap, std::string("cose key is not valid cbor: ") + e.what());
  }
  if (!map.is_map()) throw CoseKeyError(Kind::kNotAMap, "cose key is not a map");

  const std::int64_t kty = require_int(map, kLabelKty);
  const std::int64_t alg_value = require_int(map, kLabelAlg);
  const auto alg = algorithm_from_int(alg_value);
  if (!alg) {
    throw CoseKeyError(Kind::kAlgorithmNotAllowed,
                       "cose algorithm " + std::to_string(alg_value) + " not allowed");
  }

  CoseKey key{};
  key.algorithm = *alg;
  switch (kty) {
    case static_cast<std::int64_t>(CoseKeyType::kEC2): {
      if (*alg != CoseAlgorithm::kES256) {
        throw CoseKeyError(Kind::kAlgorithmNotAllowed, "EC2 key requires ES256");
      }
      if (require_int(map, kLabelCrvOrN) != static_cast<std::int64_t>(CoseCurve::kP256)) {
        throw CoseKeyError(Kind::kAlgorithmNotAllowed, "EC2 key requires curve P-256");
      }
      key.key_type = CoseKeyType::kEC2;
      key.curve = CoseCurve::kP256;
      key.x = require_bytes(map, kLabelXOrE);
      key.y = require_bytes(map, kLabelY);
      expect_length(key.x, 32, "EC2 x");
      expect_length(*key.y, 32, "EC2 y");
      break;
    }
    case static_cast<std::int64_t>(CoseKeyType::kOKP): {
      if (*alg != CoseAlgorithm::kEdDSA) {
        throw CoseKeyError(Kind::kAlgorithmNotAllowed, "OKP key requires EdDSA");
      }
      if (require_int(map, kLabelCrvOrN) != static_cast<std::int64_t>(CoseCurve::kEd25519)) {
        throw CoseKeyError(Kind::kAlgorithmNotAllowed, "OKP key requires curve Ed25519");
      }
      key.key_type = CoseKeyType::kOKP;
      key.curve = CoseCurve::kEd25519;
      key.x = require_bytes(map, kLabelXOrE);
      expect_length(key.x, 32, "OKP x");
      break;
    }
    case static_cast<std::int64_t>(CoseKeyType::kRSA): {
      if (*alg != CoseAlgorithm::kRS256) {
        throw CoseKeyError(Kind::kAlgorithmNotAllowed, "RSA key requires RS256");
      }
      key.key_type = CoseKeyType::kRSA;
      key.n = require_bytes(map, kLabelCrvOrN);
      key.e = require_bytes(map, kLabelXOrE);
      // Leading zero octets do not count toward modulus strength.
      std::size_t lead = 0;
      while (lead < key.n->size() && (*key.n)[lead] == 0) ++lead;
      if (key.n->size() - lead < kMinRsaModulusBytes) {
        throw CoseKeyError(Kind::kMalformedCoordinateLength,
                           "RSA modulus shorter than 2048 bits");
      }
      if (key.e->empty() || key.e->size() > 8) {
        throw CoseKeyError(Kind::kMalformedCoordinateLength, "RSA exponent length invalid");
      }
      break;
    }
    default:
      throw CoseKeyError(Kind::kAlgorithmNotAllowed,
                         "cose key type " + std::to_string(kty) + " not allowed");
  }
  return key;
}

Bytes encode_cose_key(const CoseKey& key) {
  cbor::Map m;
  m.emplace_back(kLabelKty, static_cast<std::int64_t>(key.key_type));
  m.emplace_back(kLabelAlg, static_cast<std::int64_t>(key.algorithm));
  if (key.key_type == CoseKeyType::kRSA) {
    m.emplace_back(kLabelCrvOrN, key.n.value_or(Bytes{}));
    m.emplace_back(kLabelXOrE, key.e.value_or(Bytes{}));
  } else {
    m.emplace_back(kLabelCrvOrN, static_cast<std::int64_t>(key.curve.value_or(CoseCurve::kP256)));
    m.emplace_back(kLabelXOrE, key.x);
    if (key.y) m.emplace_back(kLabelY, *key.y);
  }
  return cbor::encode(cbor::Value(std::move(m)));
}

}  // namespace sshpk
