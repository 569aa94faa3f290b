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

#include "sshpk/virtual_authenticator.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/ecdsa.h>
#include <openssl/obj_mac.h>

#include <algorithm>
#include <nlohmann/json.hpp>

#include "sshpk/authenticator_data.hpp"
#include "sshpk/base64url.hpp"
#include "sshpk/cbor.hpp"
#include "sshpk/crypto.hpp"

namespace sshpk {
namespace {

using Kind = AuthenticatorError::Kind;

struct BnFree {
  void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct BnCtxFree {
  void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointFree {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct GroupFree {
  void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};
struct SigFree {
  void operator()(ECDSA_SIG* p) const { ECDSA_SIG_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnFree>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxFree>;
using PointPtr = std::unique_ptr<EC_POINT, PointFree>;

void check(int rc, const char* what) {
  if (rc != 1) throw CryptoError(std::string("P-256 arithmetic failed: ") + what);
}

// P-256 arithmetic over OpenSSL's EC_POINT/BIGNUM primitives. Signing draws
// its nonce from the injected RandomSource so seeded runs are reproducible.
class P256 {
 public:
  P256() : group_(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1)), ctx_(BN_CTX_new()) {
    if (!group_ || !ctx_) throw CryptoError("P-256 group unavailable");
  }

  static const P256& instance() {
    thread_local const P256 curve;
    return curve;
  }

  // Uniform scalar in [1, n-1] by rejection sampling.
  BnPtr random_scalar(RandomSource& random) const {
    std::array<std::uint8_t, 32> buf{};
    for (;;) {
      random.fill(buf);
      BnPtr k(BN_bin2bn(buf.data(), static_cast<int>(buf.size()), nullptr));
      if (!k) throw CryptoError("BN_bin2bn failed");
      if (!BN_is_zero(k.get()) && BN_cmp(k.get(), order()) < 0) return k;
    }
  }

  std::pair<Bytes, Bytes> public_point(const BIGNUM* d) const {
    PointPtr p(EC_POINT_new(group_.get()));
    BnPtr x(BN_new()), y(BN_new());
    if (!p || !x || !y) throw CryptoError("allocation failed");
    check(EC_POINT_mul(group_.get(), p.get(), d, nullptr, nullptr, ctx_.get()), "scalar mult");
    check(EC_POINT_get_affine_coordinates(group_.get(), p.get(), x.get(), y.get(), ctx_.get()),
          "affine coordinates");
    Bytes xb(32), yb(32);
    check(BN_bn2binpad(x.get(), xb.data(), 32) == 32 ? 1 : 0, "x encoding");
    check(BN_bn2binpad(y.get(), yb.data(), 32) == 32 ? 1 : 0, "y encoding");
    return {xb, yb};
  }

  // r = (kG).x mod n, s = k^-1 (z + r d) mod n, DER-encoded.
  Bytes sign(const BIGNUM* d, ByteView message, RandomSource& random) const {
    const Digest digest = sha256(message);
    BnPtr z(BN_bin2bn(digest.data(), static_cast<int>(digest.size()), nullptr));
    for (;;) {
      BnPtr k = random_scalar(random);
      PointPtr point(EC_POINT_new(group_.get()));
      BnPtr rx(BN_new()), r(BN_new()), s(BN_new()), kinv(BN_new()), tmp(BN_new());
      if (!point || !rx || !r || !s || !kinv || !tmp || !z) throw CryptoError("allocation failed");
      check(EC_POINT_mul(group_.get(), point.get(), k.get(), nullptr, nullptr, ctx_.get()), "kG");
      check(EC_POINT_get_affine_coordinates(group_.get(), point.get(), rx.get(), nullptr, ctx_.get()),
            "kG.x");
      check(BN_nnmod(r.get(), rx.get(), order(), ctx_.get()), "r");
      if (BN_is_zero(r.get())) continue;
      check(BN_mod_mul(tmp.get(), r.get(), d, order(), ctx_.get()), "r*d");
      check(BN_mod_add(tmp.get(), tmp.get(), z.get(), order(), ctx_.get()), "z+r*d");
      if (BN_mod_inverse(kinv.get(), k.get(), order(), ctx_.get()) == nullptr) {
        throw CryptoError("nonce inversion failed");
      }
      check(BN_mod_mul(s.get(), kinv.get(), tmp.get(), order(), ctx_.get()), "s");
      if (BN_is_zero(s.get())) continue;

      std::unique_ptr<ECDSA_SIG, SigFree> sig(ECDSA_SIG_new());
      if (!sig) throw CryptoError("allocation failed");
      check(ECDSA_SIG_set0(sig.get(), r.release(), s.release()), "sig assembly");
      const int len = i2d_ECDSA_SIG(sig.get(), nullptr);
      if (len <= 0) throw CryptoError("DER length failed");
      Bytes der(static_cast<std::size_t>(len));
      unsigned char* out = der.data();
      if (i2d_ECDSA_SIG(sig.get(), &out) != len) throw CryptoError("DER encoding failed");
      return der;
    }
  }

 private:
  const BIGNUM* order() const { return EC_GROUP_get0_order(group_.get()); }

  std::unique_ptr<EC_GROUP, GroupFree> group_;
  BnCtxPtr ctx_;
};

std::string client_data_json(std::string_view type, ByteView challenge, std::string_view origin) {
  using json = nlohmann::json;
  return std::string(R"({"type":)") + json(type).dump() + R"(,"challenge":)" +
         json(encode_base64url(challenge)).dump() + R"(,"origin":)" + json(origin).dump() +
         R"(,"crossOrigin":false})";
}

void flip(Bytes& field, std::size_t bit) {
  if (bit / 8 >= field.size()) {
    throw AuthenticatorError(Kind::kPositionOutOfRange,
                             "bit " + std::to_string(bit) + " outside field of " +
                                 std::to_string(field.size()) + " bytes");
  }
  field[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
}

Bytes rewrite_client_data(const Bytes& client_data, const Mutation& m) {
  auto doc = nlohmann::ordered_json::parse(client_data.begin(), client_data.end());
  if (m.replace_origin) doc["origin"] = *m.replace_origin;
  if (m.replace_challenge) doc["challenge"] = *m.replace_challenge;
  return to_bytes(doc.dump());
}

Bytes& select_field(AssertionResponse& r, const std::string& field) {
  if (field == "signature") return r.signature;
  if (field == "authenticator_data") return r.authenticator_data;
  if (field == "client_data") return r.client_data;
  if (field == "credential_id") return r.credential_id;
  throw AuthenticatorError(Kind::kFieldUnknown, "unknown assertion field " + field);
}

Bytes& select_field(RegistrationResponse& r, const std::string& field) {
  if (field == "attestation_object") return r.attestation_object;
  if (field == "client_data") return r.client_data;
  if (field == "credential_id") return r.credential_id;
  throw AuthenticatorError(Kind::kFieldUnknown, "unknown registration field " + field);
}

template <typename Response>
Response apply_mutation(const Response& response, const Mutation& m) {
  Response out = response;
  Bytes& target = select_field(out, m.field);
  if (m.replace_origin || m.replace_challenge) {
    if (m.field != "client_data") {
      throw AuthenticatorError(Kind::kFieldUnknown, "origin/challenge replacement needs client_data");
    }
    target = rewrite_client_data(target, m);
  }
  if (m.flip_bit) flip(target, *m.flip_bit);
  return out;
}

}  // namespace

struct VirtualAuthenticator::Credential {
  BnPtr private_key;
  Bytes user_handle;
  std::uint32_t sign_count = 0;
};

void SystemRandomSource::fill(std::span<std::uint8_t> out) { secure_random_fill(out); }

void SeededRandomSource::fill(std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < out.size(); i += 8) {
    std::uint64_t v = engine_();
    for (std::size_t j = 0; j < 8 && i + j < out.size(); ++j) {
      out[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
    }
  }
}

std::string_view to_string(AuthenticatorError::Kind kind) {
  switch (kind) {
    case Kind::kUnsupportedAlgorithmList: return "unsupported-algorithm-list";
    case Kind::kRpMissing: return "rp-missing";
    case Kind::kNoMatchingCredential: return "no-matching-credential";
    case Kind::kFieldUnknown: return "field-unknown";
    case Kind::kPositionOutOfRange: return "position-out-of-range";
  }
  return "unknown";
}

VirtualAuthenticator::VirtualAuthenticator() : VirtualAuthenticator(Options{}) {}

VirtualAuthenticator::VirtualAuthenticator(Options options) : options_(options) {
  if (options_.seed) {
    random_ = std::make_unique<SeededRandomSource>(*options_.seed);
  } else {
    random_ = std::make_unique<SystemRandomSource>();
  }
}

VirtualAuthenticator::~VirtualAuthenticator() = default;
VirtualAuthenticator::VirtualAuthenticator(VirtualAuthenticator&&) noexcept = default;
VirtualAuthenticator& VirtualAuthenticator::operator=(VirtualAuthenticator&&) noexcept = default;

RegistrationResponse VirtualAuthenticator::make_credential(const ceremony::RegistrationOptions& options,
                                                           std::string_view origin,
                                                           AttestationFormat format) {
  if (options.rp_id.empty()) throw AuthenticatorError(Kind::kRpMissing, "options carry no rp id");
  if (std::find(options.algorithms.begin(), options.algorithms.end(), CoseAlgorithm::kES256) ==
      options.algorithms.end()) {
    throw AuthenticatorError(Kind::kUnsupportedAlgorithmList, "ES256 not offered");
  }

  const P256& curve = P256::instance();
  auto cred = std::make_unique<Credential>();
  cred->private_key = curve.random_scalar(*random_);
  cred->user_handle = options.user_handle;
  if (options_.counter_mode == CounterMode::kIncrement) cred->sign_count = 1;

  Bytes credential_id(16);
  random_->fill(credential_id);

  const auto [x, y] = curve.public_point(cred->private_key.get());
  CoseKey key{};
  key.key_type = CoseKeyType::kEC2;
  key.algorithm = CoseAlgorithm::kES256;
  key.curve = CoseCurve::kP256;
  key.x = x;
  key.y = y;

  AuthenticatorData auth_data;
  const Digest rp_hash = sha256(to_bytes(options.rp_id));
  std::copy(rp_hash.begin(), rp_hash.end(), auth_data.rp_id_hash.begin());
  auth_data.flags.user_present = true;
  auth_data.flags.user_verified = options_.uv_behavior == UvBehavior::kAlwaysVerify;
  auth_data.flags.attested_credential_included = true;
  auth_data.sign_count = cred->sign_count;
  auth_data.attested_credential = AttestedCredential{options_.aaguid, credential_id, key,
                                                     encode_cose_key(key)};
  const Bytes auth_data_raw = encode_authenticator_data(auth_data);

  RegistrationResponse response;
  response.credential_id = credential_id;
  response.client_data = to_bytes(client_data_json("webauthn.create", options.challenge, origin));

  cbor::Map att_stmt;
  std::string fmt = "none";
  if (format == AttestationFormat::kPacked) {
    fmt = "packed";
    const Digest client_hash = sha256(response.client_data);
    const Bytes sig = curve.sign(cred->private_key.get(), concat(auth_data_raw, client_hash), *random_);
    att_stmt.emplace_back("alg", static_cast<std::int64_t>(CoseAlgorithm::kES256));
    att_stmt.emplace_back("sig", sig);
  }
  cbor::Map attestation;
  attestation.emplace_back("fmt", fmt);
  attestation.emplace_back("attStmt", std::move(att_stmt));
  attestation.emplace_back("authData", auth_data_raw);
  response.attestation_object = cbor::encode(cbor::Value(std::move(attestation)));

  credentials_[{options.rp_id, credential_id}] = std::move(cred);
  return response;
}

AssertionResponse VirtualAuthenticator::get_assertion(const ceremony::AuthenticationOptions& options,
                                                      std::string_view origin) {
  Credential* cred = nullptr;
  Bytes credential_id;
  for (const auto& id : options.allow_credentials) {
    auto it = credentials_.find({options.rp_id, id});
    if (it != credentials_.end()) {
      cred = it->second.get();
      credential_id = id;
      break;
    }
  }
  if (cred == nullptr) {
    throw AuthenticatorError(Kind::kNoMatchingCredential, "no credential for " + options.rp_id);
  }
  if (options_.counter_mode == CounterMode::kIncrement) ++cred->sign_count;

  AuthenticatorData auth_data;
  const Digest rp_hash = sha256(to_bytes(options.rp_id));
  std::copy(rp_hash.begin(), rp_hash.end(), auth_data.rp_id_hash.begin());
  auth_data.flags.user_present = true;
  auth_data.flags.user_verified = options_.uv_behavior == UvBehavior::kAlwaysVerify;
  auth_data.sign_count = options_.counter_mode == CounterMode::kIncrement ? cred->sign_count : 0;

  AssertionResponse response;
  response.credential_id = credential_id;
  response.client_data = to_bytes(client_data_json("webauthn.get", options.challenge, origin));
  response.authenticator_data = encode_authenticator_data(auth_data);
  const Digest client_hash = sha256(response.client_data);
  response.signature = P256::instance().sign(
      cred->private_key.get(), concat(response.authenticator_data, client_hash), *random_);
  response.user_handle = cred->user_handle;
  return response;
}

std::size_t VirtualAuthenticator::credential_count() const { return credentials_.size(); }

std::optional<std::uint32_t> VirtualAuthenticator::sign_count(std::string_view rp_id,
                                                              ByteView credential_id) const {
  auto it = credentials_.find({std::string(rp_id), Bytes(credential_id.begin(), credential_id.end())});
  if (it == credentials_.end()) return std::nullopt;
  return it->second->sign_count;
}

AssertionResponse tamper(const AssertionResponse& response, const Mutation& mutation) {
  return apply_mutation(response, mutation);
}

RegistrationResponse tamper(const RegistrationResponse& response, const Mutation& mutation) {
  return apply_mutation(response, mutation);
}

}  // namespace sshpk
