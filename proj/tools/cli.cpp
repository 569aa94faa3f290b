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

#include "cli.hpp"

#include <signal.h>

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "selftest.hpp"
#include "sshpk/base64url.hpp"
#include "sshpk/challenge_server.hpp"
#include "sshpk/config.hpp"
#include "sshpk/credential_store.hpp"
#include "sshpk/log.hpp"
#include "sshpk/token_manager.hpp"

namespace sshpk::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> store_path;
};

// Operational failure: reported on stderr, exit 1.
class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Config load(const GlobalFlags& flags) {
  const char* env = std::getenv(kConfigEnvVar);
  const bool explicit_path = flags.config_path || (env != nullptr && *env != '\0');
  const fs::path path =
      resolve_config_path(flags.config_path ? std::optional<fs::path>(*flags.config_path) : std::nullopt);

  Config config;
  std::error_code ec;
  if (!explicit_path && !fs::exists(path, ec)) {
    // No deployment config yet: local defaults good enough for a trial run.
    config.relying_party.rp_id = "localhost";
    config.relying_party.rp_name = "ssh-passkeys";
    config.relying_party.expected_origins = {config.registration_base_url()};
  } else {
    try {
      config = load_config(path);
    } catch (const ConfigError& e) {
      throw Failure(e.what());
    }
  }
  if (flags.store_path) config.store_path = *flags.store_path;
  return config;
}

std::string format_time(std::int64_t unix_seconds) {
  const std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

int cmd_register_link(const GlobalFlags& flags, const std::string& user, std::int64_t ttl,
                      std::ostream& out) {
  if (!is_valid_account_name(user)) throw CLI::ValidationError("user", "not a valid account name");
  if (ttl <= 0) throw CLI::ValidationError("--ttl", "must be positive");
  const Config config = load(flags);
  try {
    CredentialStore(config.store_path).list_all();  // the store must be readable
    TokenManager tokens(config.ticket_file());
    const auto ticket = tokens.issue(TicketPurpose::kRegistration, user, std::chrono::seconds(ttl));
    out << ticket_url(config.registration_base_url(), ticket) << '\n';
  } catch (const StoreError& e) {
    throw Failure(e.what());
  } catch (const TicketError& e) {
    throw Failure(e.what());
  }
  return kExitOk;
}

int cmd_list(const GlobalFlags& flags, const std::optional<std::string>& user, std::ostream& out) {
  const Config config = load(flags);
  std::vector<CredentialRecord> records;
  try {
    records = CredentialStore(config.store_path).list_all();
  } catch (const StoreError& e) {
    throw Failure(e.what());
  }
  out << std::left << std::setw(24) << "CREDENTIAL_ID" << std::setw(16) << "USER" << std::setw(24)
      << "RP_ID" << std::setw(11) << "SIGN_COUNT" << std::setw(22) << "CREATED"
      << "STATUS" << '\n';
  for (const auto& r : records) {
    if (user && r.user != *user) continue;
    out << std::left << std::setw(24) << encode_base64url(r.credential_id) << std::setw(16) << r.user
        << std::setw(24) << r.rp_id << std::setw(11) << r.sign_count << std::setw(22)
        << format_time(r.created_at) << (r.revoked ? "revoked" : "active") << '\n';
  }
  return kExitOk;
}

int cmd_revoke(const GlobalFlags& flags, const std::string& credential_id, std::ostream& out) {
  Bytes id;
  try {
    id = decode_base64url(credential_id);
  } catch (const Base64UrlError&) {
    throw CLI::ValidationError("credential_id", "not base64url");
  }
  const Config config = load(flags);
  try {
    CredentialStore(config.store_path).revoke(id);
  } catch (const StoreError& e) {
    if (e.kind() == StoreError::Kind::kUnknownCredential) throw Failure("unknown credential " + credential_id);
    throw Failure(e.what());
  }
  out << "revoked " << credential_id << '\n';
  return kExitOk;
}

int cmd_serve(const GlobalFlags& flags, std::optional<double> duration, std::ostream& out) {
  const Config config = load(flags);
  try {
    fs::create_directories(config.state_dir);
  } catch (const fs::filesystem_error& e) {
    throw Failure(e.what());
  }
  TokenManager tokens(config.ticket_file());
  CredentialStore store(config.store_path);

  // Block the stop signals before the listener thread exists so only
  // sigtimedwait below sees them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &stop, &previous);

  std::unique_ptr<ChallengeServer> server;
  try {
    ServerSettings settings = config.registration_server();
    if (settings.base_url.empty()) settings.base_url = config.registration_base_url();
    server = ChallengeServer::start(settings, {config.relying_party, &tokens, &store});
  } catch (const std::exception& e) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    throw Failure(e.what());
  }
  out << "serving registrations at " << server->base_url() << std::endl;

  const auto deadline = duration ? std::optional(std::chrono::steady_clock::now() +
                                                 std::chrono::duration<double>(*duration))
                                 : std::nullopt;
  for (;;) {
    timespec slice{0, 200'000'000};
    if (sigtimedwait(&stop, nullptr, &slice) > 0) break;
    if (deadline && std::chrono::steady_clock::now() >= *deadline) break;
  }
  server->shutdown();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  out << "stopped" << std::endl;
  return kExitOk;
}

int cmd_selftest(bool inject_origin_mismatch, std::ostream& out) {
  SelftestOptions options;
  options.inject_origin_mismatch = inject_origin_mismatch;
  return run_selftest(options, out).passed() ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Passkey authentication for SSH logins", "ssh-passkeys"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path,
                 std::string("Config file (default: $") + kConfigEnvVar + " or " + kDefaultConfigPath + ")");
  app.add_option("--store", flags.store_path, "Credential store path, overrides the config");

  std::string user;
  std::int64_t ttl = std::chrono::duration_cast<std::chrono::seconds>(kRegistrationTicketTtl).count();
  auto* register_link = app.add_subcommand("register-link", "Print a one-time registration URL");
  register_link->add_option("user,--user", user, "Account to enroll")->required();
  register_link->add_option("--ttl", ttl, "Link lifetime in seconds")->capture_default_str();

  std::optional<std::string> list_user;
  auto* list = app.add_subcommand("list", "List registered credentials");
  list->add_option("--user", list_user, "Only this account");

  std::string credential_id;
  auto* revoke = app.add_subcommand("revoke", "Revoke a credential");
  revoke->add_option("credential_id", credential_id, "Credential id as shown by list")->required();

  std::optional<double> duration;
  auto* serve = app.add_subcommand("serve", "Run the registration server until SIGINT/SIGTERM");
  serve->add_option("--for", duration, "Stop after this many seconds")->check(CLI::PositiveNumber);

  bool inject = false;
  auto* selftest = app.add_subcommand("selftest", "Register and authenticate against a scratch store");
  selftest->add_flag("--inject-origin-mismatch", inject, "Sign client data for a foreign origin");

  std::vector<const char*> argv{"ssh-passkeys"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*register_link) return cmd_register_link(flags, user, ttl, out);
    if (*list) return cmd_list(flags, list_user, out);
    if (*revoke) return cmd_revoke(flags, credential_id, out);
    if (*serve) return cmd_serve(flags, duration, out);
    if (*selftest) return cmd_selftest(inject, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sshpk::cli
