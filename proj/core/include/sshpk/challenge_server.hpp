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

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>

#include "sshpk/clock.hpp"
#include "sshpk/credential_store.hpp"
#include "sshpk/token_manager.hpp"
#include "sshpk/verdict.hpp"
#include "sshpk/webauthn.hpp"

namespace httplib {
class Server;
}

namespace sshpk {

struct ServerSettings {
  std::string bind_host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 binds an ephemeral port
  // Host used in generated URLs; defaults to the relying-party id.
  std::string public_host;
  // Full external origin (e.g. behind a reverse proxy). Overrides
  // scheme/public_host/port when set.
  std::string base_url;
  std::optional<std::filesystem::path> tls_certificate;
  std::optional<std::filesystem::path> tls_private_key;
  int retry_budget = 3;
};

class ServerError : public std::runtime_error {
 public:
  enum class Kind { kBindFailure, kTlsMaterialInvalid, kOriginNotExpected };

  ServerError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(ServerError::Kind kind);

struct HttpResult {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Ephemeral ceremony webserver.
//
//   GET  /r/<token>, /a/<token>        ceremony page
//   GET  /<asset>                      embedded frontend files
//   POST /api/reg/options, /api/reg/verify,
//        /api/auth/options, /api/auth/verify
//
// POST bodies are JSON objects carrying "token" (and "credential" for
// verify). Failures answer {"error": "<kind>", "message": "..."}.
//
// An instance started with a bound ticket serves exactly that ticket and
// reports the authentication outcome through `outcome`. An unbound instance
// serves registration tickets from the shared TokenManager.
class ChallengeServer {
 public:
  struct Context {
    RelyingPartyConfig relying_party;
    TokenManager* tokens = nullptr;
    CredentialStore* store = nullptr;
    const Clock* clock = &SteadyClock::instance();
  };

  static std::unique_ptr<ChallengeServer> start(const ServerSettings& settings, Context context,
                                                std::optional<SessionTicket> bound_ticket = {},
                                                std::shared_ptr<VerdictChannel> outcome = {});

  ~ChallengeServer();
  ChallengeServer(const ChallengeServer&) = delete;
  ChallengeServer& operator=(const ChallengeServer&) = delete;

  const std::string& base_url() const { return base_url_; }
  std::uint16_t port() const { return port_; }
  const RelyingPartyConfig& relying_party() const { return relying_party_.config(); }

  // Closes the socket, drops pending challenges and, for an authentication
  // instance without a verdict yet, delivers Timeout. Idempotent.
  void shutdown();

  HttpResult handle_page(std::string_view token, Ceremony ceremony);
  HttpResult handle_options_request(std::string_view token, Ceremony ceremony);
  HttpResult handle_verify_request(std::string_view token, Ceremony ceremony,
                                   const nlohmann::json& body);
  static HttpResult serve_static(std::string_view path);

 private:
  ChallengeServer(const ServerSettings& settings, Context context,
                  std::optional<SessionTicket> bound_ticket, std::shared_ptr<VerdictChannel> outcome,
                  std::unique_ptr<httplib::Server> http, std::uint16_t port, std::string base_url);

  void install_routes();
  // Resolves a token to a usable ticket or fills `error`.
  std::optional<SessionTicket> resolve(std::string_view token, Ceremony ceremony,
                                       HttpResult& error) const;
  HttpResult record_failure(const SessionTicket& ticket, std::string_view kind,
                            const std::string& message);
  HttpResult verify_registration(const SessionTicket& ticket, const nlohmann::json& credential);
  HttpResult verify_assertion(const SessionTicket& ticket, const nlohmann::json& credential);

  ServerSettings settings_;
  Context context_;
  RelyingParty relying_party_;
  ChallengeRegistry challenges_;
  std::optional<SessionTicket> bound_ticket_;
  std::shared_ptr<VerdictChannel> outcome_;

  std::unique_ptr<httplib::Server> http_;
  std::thread listener_;
  std::string base_url_;
  std::uint16_t port_ = 0;

  std::mutex ceremony_mutex_;  // serializes options/verify handling
  std::map<SessionId, int> failures_;
  std::once_flag shutdown_once_;
};

}  // namespace sshpk
