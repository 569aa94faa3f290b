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

#include "sshpk/authenticator_data.hpp"

#include <algorithm>

#include "sshpk/cbor.hpp"

namespace sshpk {
namespace {

constexpr std::uint8_t kFlagUp = 0x01;
constexpr std::uint8_t kFlagUv = 0x04;
constexpr std::uint8_t kFlagAt = 0x40;
constexpr std::uint8_t kFlagEd = 0x80;
constexpr std::uint8_t kKnownFlags = kFlagUp | kFlagUv | kFlagAt | kFlagEd;

using Kind = AuthenticatorDataError::Kind;

}  // namespace

AuthenticatorFlags AuthenticatorFlags::from_byte(std::uint8_t b) {
  AuthenticatorFlags f;
  f.user_present = (b & kFlagUp) != 0;
  f.user_verified = (b & kFlagUv) != 0;
  f.attested_credential_included = (b & kFlagAt) != 0;
  f.extensions_included = (b & kFlagEd) != 0;
  f.other_bits = static_cast<std::uint8_t>(b & ~kKnownFlags);
  return f;
}

std::uint8_t AuthenticatorFlags::to_byte() const {
  std::uint8_t b = other_bits & static_cast<std::uint8_t>(~kKnownFlags);
  if (user_present) b |= kFlagUp;
  if (user_verified) b |= kFlagUv;
  if (attested_credential_included) b |= kFlagAt;
  if (extensions_included) b |= kFlagEd;
  return b;
}

std::string_view to_string(AuthenticatorDataError::Kind kind) {
  switch (kind) {
    case Kind::kTruncatedInput: return "truncated-input";
    case Kind::kAtFlagSetButNoCredential: return "at-flag-set-but-no-credential";
    case Kind::kTrailingGarbage: return "trailing-garbage";
    case Kind::kMalformedCredential: return "malformed-credential";
    case Kind::kMalformedExtensions: return "malformed-extensions";
  }
  return "unknown";
}

AuthenticatorData parse_authenticator_data(ByteView raw) {
  if (raw.size() < kAuthenticatorDataMinSize) {
    throw AuthenticatorDataError(Kind::kTruncatedInput, "authenticator data shorter than 37 bytes");
  }
  AuthenticatorData out;
  std::copy_n(raw.begin(), 32, out.rp_id_hash.begin());
  out.flags = AuthenticatorFlags::from_byte(raw[32]);
  out.sign_count = (std::uint32_t{raw[33]} << 24) | (std::uint32_t{raw[34]} << 16) |
                   (std::uint32_t{raw[35]} << 8) | std::uint32_t{raw[36]};

  std::size_t pos = kAuthenticatorDataMinSize;
  if (out.flags.attested_credential_included) {
    if (raw.size() == pos) {
      throw AuthenticatorDataError(Kind::kAtFlagSetButNoCredential,
                                   "AT flag set but no attested credential follows");
    }
    if (raw.size() - pos < 18) {
      throw AuthenticatorDataError(Kind::kTruncatedInput, "attested credential header truncated");
    }
    AttestedCredential cred;
    std::copy_n(raw.begin() + static_cast<std::ptrdiff_t>(pos), 16, cred.aaguid.begin());
    pos += 16;
    const std::size_t id_len = (std::size_t{raw[pos]} << 8) | raw[pos + 1];
    pos += 2;
    if (id_len < kMinCredentialIdSize || id_len > kMaxCredentialIdSize) {
      throw AuthenticatorDataError(Kind::kMalformedCredential,
                                   "credential id length " + std::to_string(id_len) + " out of range");
    }
    if (raw.size() - pos < id_len) {
      throw AuthenticatorDataError(Kind::kTruncatedInput, "credential id truncated");
    }
    cred.credential_id.assign(raw.begin() + static_cast<std::ptrdiff_t>(pos),
                              raw.begin() + static_cast<std::ptrdiff_t>(pos + id_len));
    pos += id_len;

    std::size_t key_len = 0;
    try {
      key_len = cbor::decode_prefix(raw.subspan(pos)).consumed;
    } catch (const cbor::DecodeError& e) {
      throw AuthenticatorDataError(Kind::kMalformedCredential,
                                   std::string("credential public key: ") + e.what());
    }
    const auto key_bytes = raw.subspan(pos, key_len);
    cred.public_key = parse_cose_key(key_bytes);
    cred.public_key_cbor.assign(key_bytes.begin(), key_bytes.end());
    pos += key_len;
    out.attested_credential = std::move(cred);
  }

  if (out.flags.extensions_included) {
    if (raw.size() == pos) {
      throw AuthenticatorDataError(Kind::kMalformedExtensions, "ED flag set but no extensions follow");
    }
    std::size_t ext_len = 0;
    try {
      const auto decoded = cbor::decode_prefix(raw.subspan(pos));
      if (!decoded.value.is_map()) {
        throw AuthenticatorDataError(Kind::kMalformedExtensions, "extensions are not a map");
      }
      ext_len = decoded.consumed;
    } catch (const cbor::DecodeError& e) {
      throw AuthenticatorDataError(Kind::kMalformedExtensions, std::string("extensions: ") + e.what());
    }
    out.extensions_cbor = Bytes(raw.begin() + static_cast<std::ptrdiff_t>(pos),
                                raw.begin() + static_cast<std::ptrdiff_t>(pos + ext_len));
    pos += ext_len;
  }

  if (pos != raw.size()) {
    throw AuthenticatorDataError(Kind::kTrailingGarbage,
                                 std::to_string(raw.size() - pos) + " unexpected trailing bytes");
  }
  return out;
}

Bytes encode_authenticator_data(const AuthenticatorData& data) {
  Bytes out(data.rp_id_hash.begin(), data.rp_id_hash.end());
  out.push_back(data.flags.to_byte());
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(data.sign_count >> s));
  if (data.attested_credential) {
    const auto& cred = *data.attested_credential;
    out.insert(out.end(), cred.aaguid.begin(), cred.aaguid.end());
    out.push_back(static_cast<std::uint8_t>(cred.credential_id.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(cred.credential_id.size()));
    out.insert(out.end(), cred.credential_id.begin(), cred.credential_id.end());
    const Bytes key = cred.public_key_cbor.empty() ? encode_cose_key(cred.public_key)
                                                   : cred.public_key_cbor;
    out.insert(out.end(), key.begin(), key.end());
  }
  if (data.extensions_cbor) {
    out.insert(out.end(), data.extensions_cbor->begin(), data.extensions_cbor->end());
  }
  return out;
}

}  // namespace sshpk
