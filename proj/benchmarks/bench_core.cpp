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

#include <benchmark/benchmark.h>

#include <memory>

#include "sshpk/authenticator_data.hpp"
#include "sshpk/cbor.hpp"
#include "sshpk/ceremony_json.hpp"
#include "sshpk/cose_key.hpp"
#include "sshpk/credential_store.hpp"
#include "sshpk/crypto.hpp"
#include "sshpk/virtual_authenticator.hpp"
#include "sshpk/webauthn.hpp"
#include "test_support.hpp"
#include "vectors/python_vectors.inc"

namespace sshpk {
namespace {

using sshpk::testing::from_hex;

void BM_CborDecodeAttestationObject(benchmark::State& state) {
  const Bytes object = from_hex(kRegEdAttestation);
  for (auto _ : state) benchmark::DoNotOptimize(cbor::decode(object));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * object.size()));
}
BENCHMARK(BM_CborDecodeAttestationObject);

void BM_ParseAuthenticatorData(benchmark::State& state) {
  const Bytes raw = from_hex(kAssertEdAuthData);
  for (auto _ : state) benchmark::DoNotOptimize(parse_authenticator_data(raw));
}
BENCHMARK(BM_ParseAuthenticatorData);

void BM_VerifySignature(benchmark::State& state, const char* cose, const char* msg, const char* sig) {
  const CoseKey key = parse_cose_key(from_hex(cose));
  const Bytes message = from_hex(msg);
  const Bytes signature = from_hex(sig);
  for (auto _ : state) benchmark::DoNotOptimize(verify_signature(key, message, signature));
}
BENCHMARK_CAPTURE(BM_VerifySignature, ES256, kEs256Cose, kEs256Msg, kEs256Sig);
BENCHMARK_CAPTURE(BM_VerifySignature, EdDSA, kEd25519Cose, kEd25519Msg, kEd25519Sig);
BENCHMARK_CAPTURE(BM_VerifySignature, RS256, kRs256Cose, kRs256Msg, kRs256Sig);

// Challenge issue + authenticator assertion + relying-party verification.
void BM_AssertionRoundTrip(benchmark::State& state) {
  RelyingPartyConfig config;
  config.rp_id = "example.org";
  config.rp_name = "Bench";
  config.expected_origins = {"https://example.org"};
  RelyingParty rp(config);
  ChallengeRegistry registry([](const SessionId&) { return true; });
  VirtualAuthenticator authenticator;
  const SessionId session = SessionId::random();

  auto rc = registry.issue(Ceremony::kRegistration, session, config);
  ceremony::RegistrationOptions reg;
  reg.challenge.assign(rc->value().begin(), rc->value().end());
  reg.rp_id = config.rp_id;
  reg.rp_name = config.rp_name;
  reg.user_handle = ceremony::user_handle_for(config.rp_id, "alice");
  reg.user_name = "alice";
  reg.algorithms = config.allowed_algorithms;
  auto record = rp.verify_registration(authenticator.make_credential(reg, "https://example.org"), *rc, "alice");

  for (auto _ : state) {
    auto ac = registry.issue(Ceremony::kAuthentication, session, config);
    ceremony::AuthenticationOptions options;
    options.challenge.assign(ac->value().begin(), ac->value().end());
    options.rp_id = config.rp_id;
    options.allow_credentials = {record.credential_id};
    record.sign_count = rp.verify_assertion(authenticator.get_assertion(options, "https://example.org"), *ac, record);
  }
}
BENCHMARK(BM_AssertionRoundTrip);

CredentialRecord bench_record(std::int64_t n) {
  CredentialRecord r;
  r.credential_id = Bytes(16, 0);
  for (int i = 0; i < 8; ++i) r.credential_id[i] = static_cast<std::uint8_t>(n >> (8 * i));
  r.user = "user" + std::to_string(n % 50);
  r.public_key = parse_cose_key(from_hex(kEs256Cose));
  r.rp_id = "example.org";
  r.created_at = 1700000000;
  return r;
}

// Locked read-modify-write with fsync, against a store of range(0) records.
void BM_StoreAdd(benchmark::State& state) {
  sshpk::testing::TempDir dir;
  CredentialStore store(dir / "credentials.json");
  std::int64_t n = 0;
  for (; n < state.range(0); ++n) store.add(bench_record(n));
  for (auto _ : state) store.add(bench_record(n++));
}
BENCHMARK(BM_StoreAdd)->Arg(0)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_StoreLookupByUser(benchmark::State& state) {
  sshpk::testing::TempDir dir;
  CredentialStore store(dir / "credentials.json");
  for (std::int64_t n = 0; n < state.range(0); ++n) store.add(bench_record(n));
  for (auto _ : state) benchmark::DoNotOptimize(store.lookup_by_user("user7"));
}
BENCHMARK(BM_StoreLookupByUser)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace sshpk

BENCHMARK_MAIN();
