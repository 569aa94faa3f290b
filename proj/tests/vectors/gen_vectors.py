#!/usr/bin/env python3
# Copyright 2026 The SSH-Passkeys Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Freezes externally produced WebAuthn vectors into python_vectors.inc.

Everything here is built with the `cryptography` package and a minimal CBOR
encoder, independently of the C++ code under test. ECDSA and RSA-key
generation are randomized, so re-running rewrites the vectors.
"""
import base64
import hashlib
import json
import os
import struct

from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec, ed25519, padding, rsa
from cryptography.hazmat.primitives.asymmetric.utils import decode_dss_signature

with open(__file__) as _self:
    LICENSE_HEADER = [l.rstrip("\n") for l in _self.readlines()[1:14]]


def cbor_head(major, n):
    if n < 24:
        return bytes([major << 5 | n])
    for info, fmt in ((24, ">B"), (25, ">H"), (26, ">I"), (27, ">Q")):
        if n < 1 << (8 * struct.calcsize(fmt)):
            return bytes([major << 5 | info]) + struct.pack(fmt, n)
    raise ValueError(n)


def cbor(v):
    if isinstance(v, bool):
        return b"\xf5" if v else b"\xf4"
    if isinstance(v, int):
        return cbor_head(0, v) if v >= 0 else cbor_head(1, -1 - v)
    if isinstance(v, bytes):
        return cbor_head(2, len(v)) + v
    if isinstance(v, str):
        b = v.encode()
        return cbor_head(3, len(b)) + b
    if isinstance(v, list):
        return cbor_head(4, len(v)) + b"".join(cbor(x) for x in v)
    if isinstance(v, dict):
        return cbor_head(5, len(v)) + b"".join(cbor(k) + cbor(x) for k, x in v.items())
    raise TypeError(v)


def b64u(b):
    return base64.urlsafe_b64encode(b).rstrip(b"=").decode()


def int_bytes(i, n=None):
    n = n or (i.bit_length() + 7) // 8
    return i.to_bytes(n, "big")


RP_ID = "login.example.org"
ORIGIN = "https://login.example.org"
CHALLENGE = bytes(range(1, 33))
AAGUID = bytes(16)


def client_data(kind):
    return json.dumps({"type": kind, "challenge": b64u(CHALLENGE), "origin": ORIGIN,
                       "crossOrigin": False}, separators=(",", ":")).encode()


def auth_data(flags, count, cred_id=None, cose=None):
    out = hashlib.sha256(RP_ID.encode()).digest() + bytes([flags]) + struct.pack(">I", count)
    if cred_id is not None:
        out += AAGUID + struct.pack(">H", len(cred_id)) + cred_id + cose
    return out


vectors = {}

# Ed25519: deterministic signatures from a fixed seed.
ed_priv = ed25519.Ed25519PrivateKey.from_private_bytes(hashlib.sha256(b"sshpk-ed25519").digest())
ed_pub = ed_priv.public_key().public_bytes(serialization.Encoding.Raw, serialization.PublicFormat.Raw)
ed_cose = cbor({1: 1, 3: -8, -1: 6, -2: ed_pub})
vectors["ED25519_COSE"] = ed_cose
vectors["ED25519_X"] = ed_pub
vectors["ED25519_MSG"] = b"sshpk ed25519 vector"
vectors["ED25519_SIG"] = ed_priv.sign(vectors["ED25519_MSG"])

# RS256 with a 2048-bit modulus.
rsa_priv = rsa.generate_private_key(public_exponent=65537, key_size=2048)
rsa_nums = rsa_priv.public_key().public_numbers()
rsa_cose = cbor({1: 3, 3: -257, -1: int_bytes(rsa_nums.n, 256), -2: int_bytes(rsa_nums.e)})
vectors["RS256_COSE"] = rsa_cose
vectors["RS256_N"] = int_bytes(rsa_nums.n, 256)
vectors["RS256_MSG"] = b"sshpk rs256 vector"
vectors["RS256_SIG"] = rsa_priv.sign(vectors["RS256_MSG"], padding.PKCS1v15(), hashes.SHA256())

# RSA-1024: below the algorithm floor.
weak = rsa.generate_private_key(public_exponent=65537, key_size=1024).public_key().public_numbers()
vectors["RSA1024_COSE"] = cbor({1: 3, 3: -257, -1: int_bytes(weak.n, 128), -2: int_bytes(weak.e)})

# ES256 with an externally produced DER signature.
ec_priv = ec.derive_private_key(int.from_bytes(hashlib.sha256(b"sshpk-p256").digest(), "big")
                                % (2**256 - 2**224 + 2**192 + 2**96 - 1), ec.SECP256R1())
ec_nums = ec_priv.public_key().public_numbers()
ec_x, ec_y = int_bytes(ec_nums.x, 32), int_bytes(ec_nums.y, 32)
ec_cose = cbor({1: 2, 3: -7, -1: 1, -2: ec_x, -3: ec_y})
vectors["ES256_COSE"] = ec_cose
vectors["ES256_X"] = ec_x
vectors["ES256_Y"] = ec_y
vectors["ES256_MSG"] = b"sshpk es256 vector"
vectors["ES256_SIG"] = ec_priv.sign(vectors["ES256_MSG"], ec.ECDSA(hashes.SHA256()))
r, s = decode_dss_signature(vectors["ES256_SIG"])
assert r > 0 and s > 0

# Packed self-attested EdDSA registration followed by an ES256-free assertion
# with the same key.
ed_cred = hashlib.sha256(b"sshpk-cred-ed").digest()[:16]
cd_create = client_data("webauthn.create")
reg_ad = auth_data(0x45, 7, ed_cred, ed_cose)  # UP | UV | AT
reg_sig = ed_priv.sign(reg_ad + hashlib.sha256(cd_create).digest())
vectors["REG_ED_CRED_ID"] = ed_cred
vectors["REG_ED_CLIENT_DATA"] = cd_create
vectors["REG_ED_ATTESTATION"] = cbor({"fmt": "packed", "attStmt": {"alg": -8, "sig": reg_sig},
                                      "authData": reg_ad})
cd_get = client_data("webauthn.get")
asrt_ad = auth_data(0x05, 8)
vectors["ASSERT_ED_CLIENT_DATA"] = cd_get
vectors["ASSERT_ED_AUTH_DATA"] = asrt_ad
vectors["ASSERT_ED_SIG"] = ed_priv.sign(asrt_ad + hashlib.sha256(cd_get).digest())

# "none" attestation with an RS256 credential plus an assertion.
rs_cred = hashlib.sha256(b"sshpk-cred-rs").digest()[:20]
vectors["REG_RS_CRED_ID"] = rs_cred
vectors["REG_RS_ATTESTATION"] = cbor({"fmt": "none", "attStmt": {},
                                      "authData": auth_data(0x45, 0, rs_cred, rsa_cose)})
rs_ad = auth_data(0x05, 1)
vectors["ASSERT_RS_AUTH_DATA"] = rs_ad
vectors["ASSERT_RS_SIG"] = rsa_priv.sign(rs_ad + hashlib.sha256(cd_get).digest(), padding.PKCS1v15(),
                                         hashes.SHA256())

# Registration whose only credential is RSA-1024.
weak_cred = hashlib.sha256(b"sshpk-cred-weak").digest()[:16]
vectors["REG_WEAK_CRED_ID"] = weak_cred
vectors["REG_WEAK_ATTESTATION"] = cbor({"fmt": "none", "attStmt": {},
                                        "authData": auth_data(0x45, 0, weak_cred,
                                                              vectors["RSA1024_COSE"])})

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "python_vectors.inc"), "w") as f:
    f.write("".join("//" + line[1:] + "\n" for line in LICENSE_HEADER) + "\n")
    f.write("// Generated by gen_vectors.py. Do not edit.\n")
    f.write(f'inline constexpr const char* kVectorRpId = "{RP_ID}";\n')
    f.write(f'inline constexpr const char* kVectorOrigin = "{ORIGIN}";\n')
    f.write(f'inline constexpr const char* kVectorChallenge = "{CHALLENGE.hex()}";\n')
    for name, value in vectors.items():
        f.write(f'inline constexpr const char* k{"".join(p.title() for p in name.split("_"))} =\n'
                f'    "{value.hex()}";\n')
