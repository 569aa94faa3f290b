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

#include <mutex>
#include <regex>
#include <thread>

#include "sshpk/base64url.hpp"
#include "sshpk/ceremony_client.hpp"
#include "sshpk/ceremony_json.hpp"
#include "sshpk/challenge_server.hpp"
#include "sshpk/pam_bridge.hpp"
#include "sshpk/virtual_authenticator.hpp"
#include "test_support.hpp"

namespace sshpk {
namespace {

using namespace std::chrono_literals;
using sshpk::testing::TempDir;

class BridgeTest : public ::testing::Test {
 protected:
  BridgeTest() : store_(dir_ / "credentials.json") {
    config_.relying_party.rp_id = "localhost";
    config_.relying_party.rp_name = "Test";
    config_.auth_timeout = 5s;
  }

  void enroll(const std::string& user) {
    TokenManager tokens;
    auto server = ChallengeServer::start({}, {config_.relying_party, &tokens, &store_});
    const auto ticket = tokens.issue(TicketPurpose::kRegistration, user, 60s);
    ASSERT_EQ(CeremonyClient(ticket_url(server->base_url(), ticket)).run(auth_).status, 201);
  }

  ConversationScript login_script(CeremonyClient::Options options = {}) {
    return [this, options](std::string_view message) {
      const auto url = url_from_message(message);
      if (!url) throw ScriptAbort("no url");
      CeremonyClient(*url, options).run(auth_);
    };
  }

  testing::QuietLogs quiet_;
  TempDir dir_;
  CredentialStore store_;
  VirtualAuthenticator auth_;
  BridgeConfig config_;
};

TEST(InfoMessage, ExactFormat) {
  EXPECT_EQ(info_message("https://h:1/a/abc"), "Authenticate at: https://h:1/a/abc\n");
  EXPECT_EQ(url_from_message("Authenticate at: https://h:1/a/abc\n"), "https://h:1/a/abc");
  EXPECT_FALSE(url_from_message("Authenticate at: https://h:1/a/abc"));
  EXPECT_FALSE(url_from_message("Login: x\n"));
  EXPECT_FALSE(url_from_message("Authenticate at: \n"));
}

TEST_F(BridgeTest, ScriptedLoginSucceeds) {
  enroll("alice");
  const auto t = simulate_conversation("alice", login_script(), config_, store_);
  EXPECT_EQ(t.verdict.kind, PamVerdict::Kind::kSuccess);
  ASSERT_EQ(t.messages.size(), 1u);
  EXPECT_TRUE(std::regex_match(t.messages[0], std::regex("Authenticate at: http://localhost:[0-9]+/a/[A-Za-z0-9_-]{22}\n")));
  EXPECT_LT(t.elapsed, 2s);
  EXPECT_EQ(module_result(t.verdict), ModuleResult::kSuccess);
}

TEST_F(BridgeTest, ServerIsClosedAfterReturn) {
  enroll("alice");
  const auto t = simulate_conversation("alice", login_script(), config_, store_);
  CeremonyClient::Options quick;
  quick.timeout_ms = 500;
  EXPECT_THROW(CeremonyClient(*url_from_message(t.messages[0]), quick).fetch_page(), ClientError);
}

TEST_F(BridgeTest, IgnoredMessageTimesOut) {
  config_.auth_timeout = 1s;
  const auto t = simulate_conversation("alice", [](std::string_view) {}, config_, store_);
  EXPECT_EQ(t.verdict.kind, PamVerdict::Kind::kTimeout);
  EXPECT_GE(t.elapsed, 1000ms);
  EXPECT_LE(t.elapsed, 1200ms);
  EXPECT_EQ(module_result(t.verdict), ModuleResult::kAuthError);
}

TEST_F(BridgeTest, ScriptAbortIsAuthError) {
  const auto t = simulate_conversation(
      "alice",
      [](std::string_view message) {
        CeremonyClient(*url_from_message(message)).fetch_page();
        throw ScriptAbort("user closed the terminal");
      },
      config_, store_);
  EXPECT_TRUE(t.aborted);
  EXPECT_EQ(t.verdict.kind, PamVerdict::Kind::kAuthError);
  EXPECT_EQ(t.verdict.detail, "conversation-unavailable");
  EXPECT_LT(t.elapsed, 1s);
}

TEST_F(BridgeTest, UnknownUserGetsEmptyAllowListAndFails) {
  enroll("alice");
  const auto t = simulate_conversation(
      "nobody",
      [this](std::string_view message) {
        const CeremonyClient client(*url_from_message(message));
        const auto options = client.request_options();
        ASSERT_EQ(options.status, 200);
        EXPECT_TRUE(options.body["allowCredentials"].empty());
        // Try alice's credential anyway, until the budget is exhausted.
        auto parsed = ceremony::authentication_options_from_json(options.body);
        parsed.allow_credentials = {store_.lookup_by_user("alice")[0].credential_id};
        const auto origin = client.origin();
        for (int i = 0; i < 3; ++i) client.submit(ceremony::to_json(auth_.get_assertion(parsed, origin)));
      },
      config_, store_);
  EXPECT_EQ(t.verdict.kind, PamVerdict::Kind::kAuthError);
  EXPECT_LT(t.elapsed, 2s);
}

TEST_F(BridgeTest, PhishedOriginNeverSucceeds) {
  enroll("alice");
  CeremonyClient::Options phish;
  phish.origin = "https://localhost.attacker.example";
  config_.auth_timeout = 1s;
  const auto t = simulate_conversation("alice", login_script(phish), config_, store_);
  EXPECT_NE(t.verdict.kind, PamVerdict::Kind::kSuccess);
}

TEST_F(BridgeTest, TranscriptCarriesOnlyTheUrl) {
  enroll("alice");
  std::string challenge;
  const auto t = simulate_conversation(
      "alice",
      [&](std::string_view message) {
        const CeremonyClient client(*url_from_message(message));
        const auto options = client.request_options();
        challenge = options.body["challenge"].get<std::string>();
        const auto asrt = auth_.get_assertion(ceremony::authentication_options_from_json(options.body), client.origin());
        client.submit(ceremony::to_json(asrt));
      },
      config_, store_);
  ASSERT_EQ(t.verdict.kind, PamVerdict::Kind::kSuccess);
  const auto record = store_.lookup_by_user("alice")[0];
  for (const auto& m : t.messages) {
    EXPECT_EQ(m.find(challenge), std::string::npos);
    EXPECT_EQ(m.find(encode_base64url(record.credential_id)), std::string::npos);
    EXPECT_EQ(m.find(encode_base64url(record.public_key.x)), std::string::npos);
  }
}

TEST_F(BridgeTest, ServerStartFailureHonoursFallbackFlag) {
  config_.server.tls_certificate = dir_ / "missing.crt";
  config_.server.tls_private_key = dir_ / "missing.key";
  auto t = simulate_conversation("alice", login_script(), config_, store_);
  EXPECT_EQ(t.verdict.kind, PamVerdict::Kind::kAuthError);
  EXPECT_EQ(t.verdict.detail, "server-start-failure");
  EXPECT_TRUE(t.messages.empty());
  EXPECT_EQ(module_result(t.verdict), ModuleResult::kAuthError);

  config_.fallback_allowed = true;
  t = simulate_conversation("alice", login_script(), config_, store_);
  EXPECT_EQ(t.verdict.detail, kFallbackDetail);
  EXPECT_EQ(module_result(t.verdict), ModuleResult::kIgnore);
}

TEST_F(BridgeTest, RejectsMalformedUserAndConfig) {
  EXPECT_EQ(simulate_conversation("../etc", login_script(), config_, store_).verdict.detail, "invalid-user");
  config_.auth_timeout = 0ms;
  EXPECT_EQ(simulate_conversation("alice", login_script(), config_, store_).verdict.kind,
            PamVerdict::Kind::kAuthError);
}

TEST_F(BridgeTest, ConcurrentLoginsAreIndependent) {
  for (const char* user : {"u0", "u1", "u2", "u3"}) enroll(user);
  std::vector<PamVerdict> verdicts(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] {
      verdicts[i] = simulate_conversation("u" + std::to_string(i), [&](std::string_view message) {
        // One shared authenticator instance is not thread-safe; serialize it.
        static std::mutex m;
        std::lock_guard lock(m);
        CeremonyClient(*url_from_message(message)).run(auth_);
      }, config_, store_).verdict;
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& v : verdicts) EXPECT_EQ(v.kind, PamVerdict::Kind::kSuccess) << v.detail;
}

TEST(ModuleResult, Names) {
  EXPECT_EQ(to_string(ModuleResult::kSuccess), "success");
  EXPECT_EQ(to_string(PamVerdict::Kind::kTimeout), "timeout");
  EXPECT_EQ(module_result(PamVerdict::timeout()), ModuleResult::kAuthError);
}

TEST(VerdictChannel, FirstOfferWins) {
  VerdictChannel channel;
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] { channel.offer(i % 2 ? PamVerdict::success() : PamVerdict::timeout()); });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(channel.offers_accepted(), 1);
  EXPECT_TRUE(channel.wait_until(std::chrono::steady_clock::now()));
}

}  // namespace
}  // namespace sshpk
