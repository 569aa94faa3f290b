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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sshpk/ceremony_client.hpp"
#include "sshpk/ceremony_json.hpp"
#include "sshpk/challenge_server.hpp"
#include "sshpk/cose_key.hpp"
#include "sshpk/crypto.hpp"
#include "sshpk/credential_store.hpp"
#include "sshpk/pam_bridge.hpp"
#include "sshpk/token_manager.hpp"
#include "sshpk/virtual_authenticator.hpp"
#include "sshpk/webauthn.hpp"
#include "test_support.hpp"
#include "vectors/python_vectors.inc"

namespace sshpk::acceptance {
namespace {

using namespace std::chrono_literals;
using std::chrono::duration_cast;
using std::chrono::milliseconds;
using sshpk::testing::from_hex;
using sshpk::testing::TempDir;
using WKind = WebAuthnError::Kind;

// Pinned tolerances.
constexpr int kLoopRuns = 100;
constexpr auto kLoopBudget = 2000ms;
constexpr int kReplayTrials = 100;
constexpr int kWrongOrigins = 1000;
constexpr int kRpIds = 10;
constexpr int kRegistrationsPerRp = 10;
constexpr int kMutationsPerField = 400;  // 3 fields -> 1200 >= 1000
constexpr int kSignCountOps = 1000;
constexpr int kCrashTrials = 200;
constexpr auto kAuthTimeout = 1000ms;
constexpr auto kTimeoutLow = 1000ms;
constexpr auto kTimeoutHigh = 1500ms;
constexpr int kTimeoutRuns = 3;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string ratio(int n, int d) { return std::to_string(n) + "/" + std::to_string(d); }

RelyingPartyConfig rp_config(const std::string& rp_id) {
  RelyingPartyConfig c;
  c.rp_id = rp_id;
  c.rp_name = "Acceptance";
  c.expected_origins = {"https://" + rp_id};
  return c;
}

RelyingPartyConfig vector_config() {
  RelyingPartyConfig c;
  c.rp_id = kVectorRpId;
  c.rp_name = "Example";
  c.expected_origins = {kVectorOrigin};
  return c;
}

std::unique_ptr<Challenge> vector_challenge(Ceremony ceremony) {
  Challenge::Value v{};
  const Bytes raw = from_hex(kVectorChallenge);
  std::copy(raw.begin(), raw.end(), v.begin());
  return std::make_unique<Challenge>(v, SteadyClock::instance().now(), std::chrono::seconds(120),
                                     ceremony, SessionId::random());
}

ceremony::RegistrationOptions registration_options(const RelyingPartyConfig& c, const Challenge& ch,
                                                   const std::string& user) {
  ceremony::RegistrationOptions o;
  o.challenge.assign(ch.value().begin(), ch.value().end());
  o.rp_id = c.rp_id;
  o.rp_name = c.rp_name;
  o.user_handle = ceremony::user_handle_for(c.rp_id, user);
  o.user_name = user;
  o.algorithms = c.allowed_algorithms;
  return o;
}

ceremony::AuthenticationOptions authentication_options(const std::string& rp_id, const Challenge& ch,
                                                       const Bytes& credential_id) {
  ceremony::AuthenticationOptions o;
  o.challenge.assign(ch.value().begin(), ch.value().end());
  o.rp_id = rp_id;
  o.allow_credentials = {credential_id};
  return o;
}

// Kind of the WebAuthnError thrown by `f`, or nullopt when it is accepted.
std::optional<WKind> rejection(const std::function<void()>& f) {
  try {
    f();
  } catch (const WebAuthnError& e) {
    return e.kind();
  }
  return std::nullopt;
}

ChallengeRegistry open_registry() {
  return ChallengeRegistry([](const SessionId&) { return true; });
}

Outcome end_to_end_loop() {
  int passed = 0;
  milliseconds slowest{0};
  std::string first_failure;
  for (int run = 0; run < kLoopRuns; ++run) {
    TempDir dir;
    CredentialStore store(dir / "credentials.json");
    VirtualAuthenticator authenticator;
    BridgeConfig config;
    config.relying_party.rp_id = "localhost";
    config.relying_party.rp_name = "Acceptance";
    config.auth_timeout = 5s;

    const auto start = std::chrono::steady_clock::now();
    int registration_status = 0;
    {
      TokenManager tokens;
      auto server = ChallengeServer::start({}, {config.relying_party, &tokens, &store});
      const auto ticket = tokens.issue(TicketPurpose::kRegistration, "alice", 60s);
      registration_status = CeremonyClient(ticket_url(server->base_url(), ticket)).run(authenticator).status;
    }
    const auto transcript = simulate_conversation(
        "alice",
        [&](std::string_view message) {
          const auto url = url_from_message(message);
          if (!url) throw ScriptAbort("no url in message");
          CeremonyClient(*url).run(authenticator);
        },
        config, store);
    const auto elapsed = duration_cast<milliseconds>(std::chrono::steady_clock::now() - start);
    slowest = std::max(slowest, elapsed);

    const bool ok = registration_status == 201 &&
                    transcript.verdict.kind == PamVerdict::Kind::kSuccess && elapsed < kLoopBudget;
    if (ok) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = "; run " + std::to_string(run) + ": registration " +
                      std::to_string(registration_status) + ", verdict " +
                      std::string(to_string(transcript.verdict.kind)) + ", " +
                      std::to_string(elapsed.count()) + " ms";
    }
  }
  return {passed == kLoopRuns, ratio(passed, kLoopRuns) + " register+login loops succeeded, slowest " +
                                   std::to_string(slowest.count()) + " ms (budget < " +
                                   std::to_string(kLoopBudget.count()) + " ms)" + first_failure};
}

Outcome single_use() {
  const auto config = rp_config("example.org");
  const std::string origin = config.expected_origins.front();
  RelyingParty rp(config);
  auto registry = open_registry();
  VirtualAuthenticator authenticator;
  int registration_replays = 0;
  int assertion_replays = 0;
  for (int trial = 0; trial < kReplayTrials; ++trial) {
    const SessionId session = SessionId::random();
    auto rc = registry.issue(Ceremony::kRegistration, session, config);
    const auto reg = authenticator.make_credential(registration_options(config, *rc, "alice"), origin);
    auto record = rp.verify_registration(reg, *rc, "alice");
    if (rejection([&] { rp.verify_registration(reg, *rc, "alice"); }) == WKind::kChallengeReused) {
      ++registration_replays;
    }

    auto ac = registry.issue(Ceremony::kAuthentication, session, config);
    const auto asrt =
        authenticator.get_assertion(authentication_options(config.rp_id, *ac, record.credential_id), origin);
    record.sign_count = rp.verify_assertion(asrt, *ac, record);
    if (rejection([&] { rp.verify_assertion(asrt, *ac, record); }) == WKind::kChallengeReused) {
      ++assertion_replays;
    }
  }
  return {registration_replays == kReplayTrials && assertion_replays == kReplayTrials,
          "challenge-reused on replay: registration " + ratio(registration_replays, kReplayTrials) +
              ", assertion " + ratio(assertion_replays, kReplayTrials)};
}

std::string random_label(std::mt19937_64& rng) {
  static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string out(1 + rng() % 12, 'a');
  for (auto& c : out) c = kAlphabet[rng() % (sizeof(kAlphabet) - 1)];
  return out;
}

std::string wrong_origin(std::mt19937_64& rng, const std::string& rp_id) {
  switch (rng() % 9) {
    case 0: return "http://" + rp_id;
    case 1: {
      auto port = 1 + rng() % 65535;
      if (port == 443) port = 8443;
      return "https://" + rp_id + ":" + std::to_string(port);
    }
    case 2: return "https://" + random_label(rng) + "." + rp_id;
    case 3: return "https://" + rp_id + "." + random_label(rng);
    case 4: {
      std::string host = rp_id;
      const std::size_t i = rng() % host.size();
      host[i] = host[i] == 'x' ? 'y' : 'x';
      return "https://" + host;
    }
    case 5: return "https://" + random_label(rng) + ".test";
    case 6: return "https://" + rp_id + "/";
    case 7: return "null";
    default: return "android:apk-key-hash:" + random_label(rng);
  }
}

Outcome origin_binding() {
  const auto config = rp_config("example.org");
  const std::string origin = config.expected_origins.front();
  RelyingParty rp(config);
  auto registry = open_registry();
  VirtualAuthenticator authenticator;
  std::mt19937_64 rng(20240601);

  auto enroll = registry.issue(Ceremony::kRegistration, SessionId::random(), config);
  const auto record = rp.verify_registration(
      authenticator.make_credential(registration_options(config, *enroll, "alice"), origin), *enroll, "alice");

  int rejected = 0;
  int other_kind = 0;
  std::set<std::string> distinct;
  for (int trial = 0; trial < kWrongOrigins; ++trial) {
    std::string bad;
    do {
      bad = wrong_origin(rng, config.rp_id);
    } while (bad == origin);
    distinct.insert(bad);
    std::optional<WKind> kind;
    if (trial % 2 == 0) {
      auto ch = registry.issue(Ceremony::kRegistration, SessionId::random(), config);
      const auto reg = authenticator.make_credential(registration_options(config, *ch, "alice"), bad);
      kind = rejection([&] { rp.verify_registration(reg, *ch, "alice"); });
    } else {
      auto ch = registry.issue(Ceremony::kAuthentication, SessionId::random(), config);
      const auto asrt =
          authenticator.get_assertion(authentication_options(config.rp_id, *ch, record.credential_id), bad);
      kind = rejection([&] { rp.verify_assertion(asrt, *ch, record); });
    }
    if (kind) ++rejected;
    if (kind && *kind != WKind::kOriginMismatch) ++other_kind;
  }
  return {rejected == kWrongOrigins && other_kind == 0,
          ratio(rejected, kWrongOrigins) + " wrong-origin responses rejected (" +
              std::to_string(distinct.size()) + " distinct origins, " + std::to_string(other_kind) +
              " with a kind other than origin-mismatch)"};
}

Outcome unlinkability() {
  std::vector<RelyingPartyConfig> configs;
  for (int i = 0; i < kRpIds; ++i) configs.push_back(rp_config("site" + std::to_string(i) + ".example"));
  auto registry = open_registry();
  VirtualAuthenticator authenticator;  // one device, one account name everywhere

  std::vector<std::pair<int, CredentialRecord>> records;
  std::set<Bytes> ids;
  std::set<Bytes> keys;
  for (int r = 0; r < kRpIds; ++r) {
    RelyingParty rp(configs[r]);
    for (int n = 0; n < kRegistrationsPerRp; ++n) {
      auto ch = registry.issue(Ceremony::kRegistration, SessionId::random(), configs[r]);
      auto record = rp.verify_registration(
          authenticator.make_credential(registration_options(configs[r], *ch, "alice"),
                                        configs[r].expected_origins.front()),
          *ch, "alice");
      ids.insert(record.credential_id);
      keys.insert(encode_cose_key(record.public_key));
      records.emplace_back(r, std::move(record));
    }
  }

  // Each credential's assertion, relayed to a different relying party.
  int cross_rejected = 0;
  for (std::size_t j = 0; j < records.size(); ++j) {
    const int home = records[j].first;
    const CredentialRecord& record = records[j].second;
    const int other = static_cast<int>((home + 1 + j % (kRpIds - 1)) % kRpIds);
    auto ch = registry.issue(Ceremony::kAuthentication, SessionId::random(), configs[other]);
    const auto asrt = authenticator.get_assertion(
        authentication_options(configs[home].rp_id, *ch, record.credential_id),
        configs[other].expected_origins.front());
    RelyingParty rp(configs[other]);
    if (rejection([&] { rp.verify_assertion(asrt, *ch, record); }) == WKind::kRpIdHashMismatch) {
      ++cross_rejected;
    }
  }
  const int total = kRpIds * kRegistrationsPerRp;
  return {static_cast<int>(ids.size()) == total && static_cast<int>(keys.size()) == total &&
              cross_rejected == total,
          std::to_string(total) + " registrations over " + std::to_string(kRpIds) + " rp_ids: " +
              std::to_string(ids.size()) + " distinct credential ids, " + std::to_string(keys.size()) +
              " distinct public keys; cross-rp rp-id-hash-mismatch " + ratio(cross_rejected, total)};
}

// A valid assertion plus what is needed to verify it again.
struct AssertionSource {
  std::string name;
  RelyingPartyConfig config;
  CredentialRecord record;
  std::function<std::pair<AssertionResponse, std::unique_ptr<Challenge>>()> next;
};

Outcome mutation_suite() {
  std::vector<AssertionSource> sources;

  {
    const auto config = vector_config();
    RelyingParty rp(config);
    auto ed_c = vector_challenge(Ceremony::kRegistration);
    auto ed = rp.verify_registration(
        {from_hex(kRegEdCredId), from_hex(kRegEdClientData), from_hex(kRegEdAttestation)}, *ed_c, "alice");
    sources.push_back({"EdDSA", config, ed, [] {
                         AssertionResponse a{from_hex(kRegEdCredId), from_hex(kAssertEdClientData),
                                             from_hex(kAssertEdAuthData), from_hex(kAssertEdSig), {}};
                         return std::make_pair(a, vector_challenge(Ceremony::kAuthentication));
                       }});
    auto rs_c = vector_challenge(Ceremony::kRegistration);
    auto rs = rp.verify_registration(
        {from_hex(kRegRsCredId), from_hex(kRegEdClientData), from_hex(kRegRsAttestation)}, *rs_c, "alice");
    sources.push_back({"RS256", config, rs, [] {
                         AssertionResponse a{from_hex(kRegRsCredId), from_hex(kAssertEdClientData),
                                             from_hex(kAssertRsAuthData), from_hex(kAssertRsSig), {}};
                         return std::make_pair(a, vector_challenge(Ceremony::kAuthentication));
                       }});
  }
  {
    const auto config = rp_config("example.org");
    auto authenticator = std::make_shared<VirtualAuthenticator>();
    auto ch = open_registry().issue(Ceremony::kRegistration, SessionId::random(), config);
    auto record = RelyingParty(config).verify_registration(
        authenticator->make_credential(registration_options(config, *ch, "alice"), config.expected_origins.front()),
        *ch, "alice");
    sources.push_back({"ES256", config, record, [config, authenticator, id = record.credential_id] {
                         Challenge::Value v{};
                         secure_random_fill(v);
                         auto c = std::make_unique<Challenge>(v, SteadyClock::instance().now(),
                                                              config.challenge_ttl, Ceremony::kAuthentication,
                                                              SessionId::random());
                         auto a = authenticator->get_assertion(authentication_options(config.rp_id, *c, id),
                                                               config.expected_origins.front());
                         return std::make_pair(std::move(a), std::move(c));
                       }});
  }

  // Every unmutated source must verify, or the suite proves nothing.
  int baselines = 0;
  for (auto& s : sources) {
    auto sample = s.next();
    if (!rejection([&] { RelyingParty(s.config).verify_assertion(sample.first, *sample.second, s.record); })) {
      ++baselines;
    }
  }

  std::mt19937_64 rng(77);
  const std::vector<std::string> fields = {"signature", "authenticator_data", "client_data"};
  int total = 0;
  int accepted = 0;
  for (const auto& field : fields) {
    for (int i = 0; i < kMutationsPerField; ++i) {
      auto& source = sources[static_cast<std::size_t>(total) % sources.size()];
      auto sample = source.next();
      const AssertionResponse& asrt = sample.first;
      Challenge& ch = *sample.second;
      Mutation m;
      m.field = field;
      const Bytes& target = field == "signature"            ? asrt.signature
                            : field == "authenticator_data" ? asrt.authenticator_data
                                                            : asrt.client_data;
      m.flip_bit = rng() % (target.size() * 8);
      const auto mutated = tamper(asrt, m);
      if (!rejection([&] { RelyingParty(source.config).verify_assertion(mutated, ch, source.record); })) {
        ++accepted;
      }
      ++total;
    }
  }
  return {accepted == 0 && baselines == static_cast<int>(sources.size()) && total >= 1000,
          std::to_string(accepted) + "/" + std::to_string(total) +
              " single-bit mutations accepted (signature, authenticator_data, client_data x " +
              std::to_string(kMutationsPerField) + "; ES256/EdDSA/RS256); unmutated baselines verified " +
              ratio(baselines, static_cast<int>(sources.size()))};
}

Outcome sign_count_policy() {
  struct Row {
    std::uint32_t stored;
    std::uint32_t asserted;
    bool accept;
  };
  const Row table[] = {{0, 0, true},   {0, 1, true},   {1, 2, true},  {5, 4, false},
                       {5, 5, false},  {5, 0, false},  {7, 7, false}, {0xfffffffe, 0xffffffff, true},
                       {0xffffffff, 0, false}};
  int table_ok = 0;
  for (const auto& row : table) table_ok += sign_count_acceptable(row.stored, row.asserted) == row.accept;

  TempDir dir;
  CredentialStore store(dir / "credentials.json");
  const CoseKey key = parse_cose_key(from_hex(kEs256Cose));
  constexpr int kCredentials = 4;
  std::vector<Bytes> ids;
  std::vector<std::uint32_t> model(kCredentials, 0);
  for (int i = 0; i < kCredentials; ++i) {
    CredentialRecord r;
    r.credential_id = Bytes(16, static_cast<std::uint8_t>(i + 1));
    r.user = "user" + std::to_string(i);
    r.public_key = key;
    r.rp_id = "example.org";
    r.created_at = 1700000000;
    store.add(r);
    ids.push_back(r.credential_id);
  }

  std::mt19937_64 rng(4242);
  int violations = 0;
  int accepted = 0;
  int refused = 0;
  for (int op = 0; op < kSignCountOps; ++op) {
    const std::size_t i = rng() % kCredentials;
    const std::uint32_t current = model[i];
    std::uint32_t asserted = 0;
    switch (rng() % 4) {
      case 0: asserted = current == 0 ? 0 : static_cast<std::uint32_t>(rng() % current); break;
      case 1: asserted = current; break;
      case 2: asserted = current + 1 + static_cast<std::uint32_t>(rng() % 1000); break;
      default: asserted = 0; break;
    }
    if (sign_count_acceptable(current, asserted)) {
      store.update_sign_count(ids[i], asserted);
      model[i] = asserted;
      ++accepted;
    } else {
      ++refused;
      if (asserted < current) {
        // The store refuses a regression on its own as well.
        try {
          store.update_sign_count(ids[i], asserted);
          ++violations;
        } catch (const StoreError& e) {
          if (e.kind() != StoreError::Kind::kCountRegression) ++violations;
        }
      }
    }
    const auto stored = store.lookup_by_credential_id(ids[i]);
    if (!stored || stored->sign_count != model[i] || stored->sign_count < current) ++violations;
  }
  const int rows = static_cast<int>(std::size(table));
  return {table_ok == rows && violations == 0,
          "policy table " + ratio(table_ok, rows) + "; " + std::to_string(kSignCountOps) + "-op log: " +
              std::to_string(accepted) + " accepted, " + std::to_string(refused) + " refused, " +
              std::to_string(violations) + " monotonicity violations"};
}

CredentialRecord crash_record(int n) {
  CredentialRecord r;
  r.credential_id = Bytes(16, 0);
  r.credential_id[0] = static_cast<std::uint8_t>(n);
  r.credential_id[1] = static_cast<std::uint8_t>(n >> 8);
  r.credential_id[15] = 0xc5;
  r.user = "user" + std::to_string(n % 7);
  r.public_key = parse_cose_key(from_hex(kEs256Cose));
  r.rp_id = "example.org";
  r.created_at = 1700000000 + n;
  return r;
}

Outcome crash_safety() {
  TempDir dir;
  const auto path = dir / "credentials.json";
  int next = 0;
  {
    CredentialStore seed(path);
    for (; next < 20; ++next) seed.add(crash_record(next));
  }
  std::mt19937_64 rng(9001);
  int parseable = 0;
  int aborted = 0;
  int consistent = 0;
  for (int trial = 0; trial < kCrashTrials; ++trial) {
    const std::size_t before = CredentialStore(path).list_all().size();
    const auto size = std::filesystem::file_size(path);
    // Mostly die mid-write; occasionally survive to the rename.
    const std::size_t die_after = rng() % (size + size / 5 + 1);
    const int id = next++;
    std::fflush(nullptr);
    const pid_t pid = ::fork();
    if (pid == 0) {
      CredentialStore store(path, [&](std::size_t written, std::size_t) {
        if (written >= die_after) ::_exit(42);
      });
      try {
        store.add(crash_record(id));
      } catch (...) {
        ::_exit(2);
      }
      ::_exit(0);
    }
    int status = 0;
    if (pid < 0 || ::waitpid(pid, &status, 0) != pid || !WIFEXITED(status)) continue;
    const int code = WEXITSTATUS(status);
    if (code == 42) ++aborted;
    try {
      const auto after = CredentialStore(path).list_all().size();
      ++parseable;
      if ((code == 42 && after == before) || (code == 0 && after == before + 1)) ++consistent;
    } catch (const StoreError&) {
    }
  }
  return {parseable == kCrashTrials && consistent == kCrashTrials && aborted > 0,
          ratio(parseable, kCrashTrials) + " stores parseable after injected write-aborts (" +
              std::to_string(aborted) + " aborted mid-write, " + ratio(consistent, kCrashTrials) +
              " with the expected record count)"};
}

class SilentConversation final : public Conversation {
 public:
  void info(std::string_view) override {}
};

Outcome timeout_path() {
  TempDir dir;
  CredentialStore store(dir / "credentials.json");
  BridgeConfig config;
  config.relying_party.rp_id = "localhost";
  config.relying_party.rp_name = "Acceptance";
  config.auth_timeout = kAuthTimeout;
  int in_window = 0;
  int never_success = 0;
  milliseconds low{milliseconds::max()};
  milliseconds high{0};
  for (int run = 0; run < kTimeoutRuns; ++run) {
    SilentConversation conversation;
    const auto start = std::chrono::steady_clock::now();
    const PamVerdict verdict = authenticate("alice", conversation, config, store);
    const auto elapsed = duration_cast<milliseconds>(std::chrono::steady_clock::now() - start);
    low = std::min(low, elapsed);
    high = std::max(high, elapsed);
    if (elapsed >= kTimeoutLow && elapsed <= kTimeoutHigh) ++in_window;
    if (verdict.kind != PamVerdict::Kind::kSuccess && module_result(verdict) != ModuleResult::kSuccess) {
      ++never_success;
    }
  }
  return {in_window == kTimeoutRuns && never_success == kTimeoutRuns,
          "auth_timeout=" + std::to_string(kAuthTimeout.count()) + " ms: returned in " +
              std::to_string(low.count()) + "-" + std::to_string(high.count()) + " ms (window " +
              std::to_string(kTimeoutLow.count()) + "-" + std::to_string(kTimeoutHigh.count()) +
              " ms) " + ratio(in_window, kTimeoutRuns) + "; failure verdict " +
              ratio(never_success, kTimeoutRuns)};
}

Outcome algorithm_floor() {
  int rejected = 0;
  int cases = 0;

  // External RSA-1024 registration.
  {
    ++cases;
    auto ch = vector_challenge(Ceremony::kRegistration);
    const RegistrationResponse reg{from_hex(kRegWeakCredId), from_hex(kRegEdClientData),
                                   from_hex(kRegWeakAttestation)};
    const auto kind = rejection([&] { RelyingParty(vector_config()).verify_registration(reg, *ch, "alice"); });
    if (kind == WKind::kAlgorithmRejected && !ch->consumed()) ++rejected;
  }
  // External Ed25519 registration against an ES256-only relying party.
  {
    ++cases;
    auto config = vector_config();
    config.allowed_algorithms = {CoseAlgorithm::kES256};
    auto ch = vector_challenge(Ceremony::kRegistration);
    const RegistrationResponse reg{from_hex(kRegEdCredId), from_hex(kRegEdClientData),
                                   from_hex(kRegEdAttestation)};
    if (rejection([&] { RelyingParty(config).verify_registration(reg, *ch, "alice"); }) ==
        WKind::kAlgorithmRejected) {
      ++rejected;
    }
  }
  // ES256 credential against an EdDSA-only relying party.
  {
    ++cases;
    auto config = rp_config("example.org");
    config.allowed_algorithms = {CoseAlgorithm::kEdDSA};
    auto ch = open_registry().issue(Ceremony::kRegistration, SessionId::random(), config);
    auto options = registration_options(config, *ch, "alice");
    options.algorithms = {CoseAlgorithm::kES256};
    VirtualAuthenticator authenticator;
    const auto reg = authenticator.make_credential(options, config.expected_origins.front());
    if (rejection([&] { RelyingParty(config).verify_registration(reg, *ch, "alice"); }) ==
        WKind::kAlgorithmRejected) {
      ++rejected;
    }
  }
  return {rejected == cases, ratio(rejected, cases) +
                                 " disallowed-algorithm registrations rejected with algorithm-rejected "
                                 "(RSA-1024, EdDSA vs ES256-only, ES256 vs EdDSA-only)"};
}

}  // namespace
}  // namespace sshpk::acceptance

int main() {
  using namespace sshpk::acceptance;
  sshpk::testing::QuietLogs quiet;
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"end-to-end-loop", end_to_end_loop},     {"single-use", single_use},
      {"origin-binding", origin_binding},       {"unlinkability", unlinkability},
      {"mutation-suite", mutation_suite},       {"sign-count-policy", sign_count_policy},
      {"crash-safety", crash_safety},           {"timeout-path", timeout_path},
      {"algorithm-floor", algorithm_floor},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.passed) ++failures;
    std::printf("%s %s: %s\n", outcome.passed ? "PASS" : "FAIL", name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
