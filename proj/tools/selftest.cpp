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

#include "selftest.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <ostream>

#include "sshpk/ceremony_client.hpp"
#include "sshpk/challenge_server.hpp"
#include "sshpk/credential_store.hpp"
#include "sshpk/pam_bridge.hpp"
#include "sshpk/token_manager.hpp"
#include "sshpk/virtual_authenticator.hpp"

namespace sshpk::cli {
namespace {

namespace fs = std::filesystem;
using Ms = std::chrono::milliseconds;

constexpr const char* kUser = "selftest";
constexpr const char* kForeignOrigin = "https://phish.invalid";

class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "sshpk-selftest-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("cannot create temp dir");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

SelftestStep timed(std::string name, const std::function<std::string()>& body) {
  SelftestStep step;
  step.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    step.detail = body();
    step.passed = true;
  } catch (const std::exception& e) {
    step.detail = e.what();
  }
  step.elapsed = std::chrono::duration_cast<Ms>(std::chrono::steady_clock::now() - start);
  return step;
}

}  // namespace

bool SelftestReport::passed() const {
  return !steps.empty() &&
         std::all_of(steps.begin(), steps.end(), [](const SelftestStep& s) { return s.passed; });
}

SelftestReport run_selftest(const SelftestOptions& options, std::ostream& out) {
  SelftestReport report;
  const auto start = std::chrono::steady_clock::now();
  {
    TempDir dir;
    CredentialStore store(dir.path() / "credentials.json");
    VirtualAuthenticator authenticator;
    RelyingPartyConfig rp;
    rp.rp_id = "localhost";
    rp.rp_name = "ssh-passkeys selftest";

    CeremonyClient::Options client_options;
    if (options.inject_origin_mismatch) client_options.origin = kForeignOrigin;

    report.steps.push_back(timed("registration", [&] {
      TokenManager tokens;
      auto server = ChallengeServer::start({}, {rp, &tokens, &store});
      const auto ticket = tokens.issue(TicketPurpose::kRegistration, kUser, std::chrono::seconds(60));
      const auto reply = CeremonyClient(ticket_url(server->base_url(), ticket), client_options).run(authenticator);
      if (reply.status != 201) {
        throw std::runtime_error("server answered " + std::to_string(reply.status) + " " + reply.error_kind());
      }
      return std::string("credential stored");
    }));

    if (report.steps.back().passed) {
      report.steps.push_back(timed("authentication", [&] {
        BridgeConfig bridge;
        bridge.relying_party = rp;
        bridge.auth_timeout = options.auth_timeout;
        std::string failure;
        const auto transcript = simulate_conversation(
            kUser,
            [&](std::string_view message) {
              const auto url = url_from_message(message);
              if (!url) throw ScriptAbort("message carries no URL");
              const auto reply = CeremonyClient(*url, client_options).run(authenticator);
              if (reply.status != 200) failure = reply.error_kind();
            },
            bridge, store);
        if (!transcript.verdict.ok()) {
          throw std::runtime_error(std::string(to_string(transcript.verdict.kind)) + " " +
                                   transcript.verdict.detail + (failure.empty() ? "" : " (" + failure + ")"));
        }
        return std::string("verdict success");
      }));
    }
  }
  report.elapsed = std::chrono::duration_cast<Ms>(std::chrono::steady_clock::now() - start);

  for (const auto& step : report.steps) {
    out << (step.passed ? "ok    " : "FAIL  ") << step.name << " (" << step.elapsed.count() << " ms): "
        << step.detail << '\n';
  }
  out << "selftest " << (report.passed() ? "passed" : "failed") << " in " << report.elapsed.count()
      << " ms\n";
  return report;
}

}  // namespace sshpk::cli
