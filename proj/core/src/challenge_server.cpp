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

#include "sshpk/challenge_server.hpp"

#include <httplib.h>

#include <algorithm>

#include "sshpk/assets.hpp"
#include "sshpk/base64url.hpp"
#include "sshpk/ceremony_json.hpp"
#include "sshpk/log.hpp"

namespace sshpk {
namespace {

using json = nlohmann::json;

constexpr const char* kJson = "application/json";

HttpResult error_result(int status, std::string_view kind, const std::string& message) {
  return {status, kJson, json{{"error", kind}, {"message", message}}.dump()};
}

HttpResult json_result(int status, const json& body) { return {status, kJson, body.dump()}; }

TicketPurpose purpose_for(Ceremony c) {
  return c == Ceremony::kRegistration ? TicketPurpose::kRegistration : TicketPurpose::kAuthentication;
}

std::unique_ptr<httplib::Server> make_http_server(const ServerSettings& settings) {
  if (settings.tls_certificate.has_value() != settings.tls_private_key.has_value()) {
    throw ServerError(ServerError::Kind::kTlsMaterialInvalid,
                      "TLS needs both a certificate chain and a private key");
  }
  if (!settings.tls_certificate) return std::make_unique<httplib::Server>();

  for (const auto& p : {*settings.tls_certificate, *settings.tls_private_key}) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec)) {
      throw ServerError(ServerError::Kind::kTlsMaterialInvalid, "cannot read TLS file " + p.string());
    }
  }
  auto server = std::make_unique<httplib::SSLServer>(settings.tls_certificate->c_str(),
                                                     settings.tls_private_key->c_str());
  if (!server->is_valid()) {
    throw ServerError(ServerError::Kind::kTlsMaterialInvalid,
                      "certificate or private key rejected by the TLS library");
  }
  return server;
}

}  // namespace

std::string_view to_string(ServerError::Kind kind) {
  switch (kind) {
    case ServerError::Kind::kBindFailure: return "bind-failure";
    case ServerError::Kind::kTlsMaterialInvalid: return "tls-material-invalid";
    case ServerError::Kind::kOriginNotExpected: return "origin-not-expected";
  }
  return "unknown";
}

std::unique_ptr<ChallengeServer> ChallengeServer::start(const ServerSettings& settings, Context context,
                                                        std::optional<SessionTicket> bound_ticket,
                                                        std::shared_ptr<VerdictChannel> outcome) {
  if (context.tokens == nullptr || context.store == nullptr || context.clock == nullptr) {
    throw std::invalid_argument("challenge server needs tokens, store and clock");
  }
  auto http = make_http_server(settings);
  // One request per connection keeps shutdown prompt: no worker lingers on an
  // idle keep-alive socket.
  http->set_keep_alive_max_count(1);
  // No SO_REUSEPORT: a second instance must not share a live port.
  http->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  http->set_read_timeout(5, 0);
  http->set_write_timeout(5, 0);

  int port = 0;
  if (settings.port == 0) {
    port = http->bind_to_any_port(settings.bind_host);
  } else {
    port = http->bind_to_port(settings.bind_host, settings.port) ? settings.port : -1;
  }
  if (port <= 0) {
    throw ServerError(ServerError::Kind::kBindFailure,
                      "cannot bind " + settings.bind_host + ":" + std::to_string(settings.port));
  }

  std::string base_url = settings.base_url;
  if (base_url.empty()) {
    const std::string host =
        settings.public_host.empty() ? context.relying_party.rp_id : settings.public_host;
    base_url = std::string(settings.tls_certificate ? "https" : "http") + "://" + host + ":" +
               std::to_string(port);
  }
  while (!base_url.empty() && base_url.back() == '/') base_url.pop_back();

  if (!context.relying_party.origin_allowed(base_url)) {
    if (settings.port == 0 && settings.base_url.empty()) {
      // An ephemeral port cannot be listed ahead of time; the bound origin
      // becomes an expected origin of this instance only.
      context.relying_party.expected_origins.push_back(base_url);
    } else {
      throw ServerError(ServerError::Kind::kOriginNotExpected,
                        base_url + " is not an expected origin");
    }
  }
  context.relying_party.validate();

  auto instance = std::unique_ptr<ChallengeServer>(
      new ChallengeServer(settings, std::move(context), std::move(bound_ticket), std::move(outcome),
                          std::move(http), static_cast<std::uint16_t>(port), base_url));
  instance->install_routes();
  instance->listener_ = std::thread([server = instance->http_.get()] { server->listen_after_bind(); });
  // stop() is a no-op until the accept loop runs; never hand out an
  // instance that could miss its shutdown.
  instance->http_->wait_until_ready();
  log(LogLevel::kDebug, "challenge server listening at " + instance->base_url_);
  return instance;
}

ChallengeServer::ChallengeServer(const ServerSettings& settings, Context context,
                                 std::optional<SessionTicket> bound_ticket,
                                 std::shared_ptr<VerdictChannel> outcome,
                                 std::unique_ptr<httplib::Server> http, std::uint16_t port,
                                 std::string base_url)
    : settings_(settings),
      context_(std::move(context)),
      relying_party_(context_.relying_party, *context_.clock),
      challenges_([tokens = context_.tokens](const SessionId& id) { return tokens->is_live(id); },
                  *context_.clock),
      bound_ticket_(std::move(bound_ticket)),
      outcome_(std::move(outcome)),
      http_(std::move(http)),
      base_url_(std::move(base_url)),
      port_(port) {}

ChallengeServer::~ChallengeServer() { shutdown(); }

void ChallengeServer::shutdown() {
  std::call_once(shutdown_once_, [this] {
    http_->stop();
    if (listener_.joinable()) listener_.join();
    challenges_.clear();
    if (outcome_ && bound_ticket_ && outcome_->offer(PamVerdict::timeout("server-shutdown"))) {
      log(LogLevel::kInfo, "authentication for " + bound_ticket_->user + " ended without a verdict");
    }
  });
}

void ChallengeServer::install_routes() {
  auto send = [](httplib::Response& res, const HttpResult& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
    res.set_header("Cache-Control", "no-store");
  };

  http_->Get(R"(/([ra])/([A-Za-z0-9_-]*))", [this, send](const httplib::Request& req, httplib::Response& res) {
    const Ceremony c = req.matches[1] == "r" ? Ceremony::kRegistration : Ceremony::kAuthentication;
    send(res, handle_page(req.matches[2].str(), c));
  });

  auto post = [this, send](Ceremony c, bool verify) {
    return [this, send, c, verify](const httplib::Request& req, httplib::Response& res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("token") || !body["token"].is_string()) {
        send(res, error_result(400, "malformed-document", "body must be a JSON object with a token"));
        return;
      }
      const std::string token = body["token"].get<std::string>();
      send(res, verify ? handle_verify_request(token, c, body) : handle_options_request(token, c));
    };
  };
  http_->Post("/api/reg/options", post(Ceremony::kRegistration, false));
  http_->Post("/api/reg/verify", post(Ceremony::kRegistration, true));
  http_->Post("/api/auth/options", post(Ceremony::kAuthentication, false));
  http_->Post("/api/auth/verify", post(Ceremony::kAuthentication, true));

  // Everything else is looked up in the asset manifest.
  http_->Get(R"(/.*)", [send](const httplib::Request& req, httplib::Response& res) {
    send(res, serve_static(req.path));
  });
}

HttpResult ChallengeServer::serve_static(std::string_view path) {
  const auto asset = find_asset(path);
  if (!asset) return error_result(404, "not-found", "no such asset");
  return {200, std::string(asset->content_type),
          std::string(asset->bytes.begin(), asset->bytes.end())};
}

std::optional<SessionTicket> ChallengeServer::resolve(std::string_view token, Ceremony ceremony,
                                                      HttpResult& error) const {
  const auto id = SessionId::from_token(token);
  const bool bound_mismatch = bound_ticket_ && (!id || *id != bound_ticket_->id);
  // Authentication attempts are only ever served by their own instance.
  const bool unbound_auth = !bound_ticket_ && ceremony == Ceremony::kAuthentication;
  if (!id || bound_mismatch || unbound_auth) {
    error = error_result(404, "unknown-ticket", "unknown ticket");
    return std::nullopt;
  }
  try {
    return context_.tokens->check(*id, purpose_for(ceremony));
  } catch (const TicketError& e) {
    switch (e.kind()) {
      case TicketError::Kind::kExpired:
      case TicketError::Kind::kAlreadyRedeemed:
        error = error_result(410, to_string(e.kind()), e.what());
        break;
      case TicketError::Kind::kPersistenceFailure:
        error = error_result(500, to_string(e.kind()), e.what());
        break;
      default:
        error = error_result(404, "unknown-ticket", e.what());
    }
    return std::nullopt;
  }
}

HttpResult ChallengeServer::handle_page(std::string_view token, Ceremony ceremony) {
  HttpResult error;
  if (!resolve(token, ceremony, error)) return error;
  return serve_static("/ceremony.html");
}

HttpResult ChallengeServer::handle_options_request(std::string_view token, Ceremony ceremony) {
  std::lock_guard lock(ceremony_mutex_);
  HttpResult error;
  const auto ticket = resolve(token, ceremony, error);
  if (!ticket) return error;

  const RelyingPartyConfig& rp = relying_party_.config();
  std::shared_ptr<Challenge> challenge;
  try {
    challenge = challenges_.issue(ceremony, ticket->id, rp);
  } catch (const WebAuthnError& e) {
    if (e.kind() == WebAuthnError::Kind::kSessionAlreadyHasPendingChallenge) {
      return error_result(409, to_string(e.kind()), e.what());
    }
    return error_result(410, to_string(e.kind()), e.what());
  }

  std::vector<Bytes> known;
  try {
    for (const auto& r : context_.store->lookup_by_user(ticket->user)) {
      if (r.rp_id == rp.rp_id) known.push_back(r.credential_id);
    }
  } catch (const StoreError& e) {
    challenges_.drop(ticket->id);
    log(LogLevel::kError, std::string("credential store unavailable: ") + e.what());
    return error_result(500, to_string(e.kind()), "credential store unavailable");
  }

  const auto timeout_ms = static_cast<std::uint64_t>(rp.challenge_ttl.count()) * 1000;
  const Bytes value(challenge->value().begin(), challenge->value().end());
  if (ceremony == Ceremony::kRegistration) {
    ceremony::RegistrationOptions options;
    options.challenge = value;
    options.rp_id = rp.rp_id;
    options.rp_name = rp.rp_name;
    options.user_handle = ceremony::user_handle_for(rp.rp_id, ticket->user);
    options.user_name = ticket->user;
    options.algorithms = rp.allowed_algorithms;
    options.exclude_credentials = std::move(known);
    options.user_verification_required = rp.require_user_verification;
    options.timeout_ms = timeout_ms;
    return json_result(200, ceremony::to_json(options));
  }
  ceremony::AuthenticationOptions options;
  options.challenge = value;
  options.rp_id = rp.rp_id;
  options.allow_credentials = std::move(known);
  options.user_verification_required = rp.require_user_verification;
  options.timeout_ms = timeout_ms;
  return json_result(200, ceremony::to_json(options));
}

HttpResult ChallengeServer::handle_verify_request(std::string_view token, Ceremony ceremony,
                                                  const json& body) {
  std::lock_guard lock(ceremony_mutex_);
  HttpResult error;
  const auto ticket = resolve(token, ceremony, error);
  if (!ticket) return error;
  if (!body.is_object() || !body.contains("credential") || !body["credential"].is_object()) {
    return error_result(400, "malformed-document", "missing credential object");
  }
  return ceremony == Ceremony::kRegistration ? verify_registration(*ticket, body["credential"])
                                             : verify_assertion(*ticket, body["credential"]);
}

HttpResult ChallengeServer::record_failure(const SessionTicket& ticket, std::string_view kind,
                                           const std::string& message) {
  const int failures = ++failures_[ticket.id];
  log(LogLevel::kInfo, "ceremony for " + ticket.user + " failed (" + std::string(kind) + "), attempt " +
                           std::to_string(failures) + "/" + std::to_string(settings_.retry_budget));
  if (failures >= settings_.retry_budget) {
    context_.tokens->invalidate(ticket.id);
    challenges_.drop(ticket.id);
    if (outcome_ && ticket.purpose == TicketPurpose::kAuthentication) {
      outcome_->offer(PamVerdict::auth_error("retry-budget-exhausted: " + std::string(kind)));
    }
  }
  return error_result(403, kind, message);
}

HttpResult ChallengeServer::verify_registration(const SessionTicket& ticket, const json& credential) {
  RegistrationResponse response;
  try {
    response = ceremony::registration_response_from_json(credential);
  } catch (const ceremony::DocumentError& e) {
    return error_result(400, "malformed-document", e.what());
  }
  const auto pending = challenges_.find(ticket.id);
  if (!pending) return error_result(409, "no-pending-challenge", "request options first");

  CredentialRecord record;
  try {
    record = relying_party_.verify_registration(response, *pending, ticket.user);
  } catch (const WebAuthnError& e) {
    return record_failure(ticket, to_string(e.kind()), e.what());
  }
  try {
    context_.store->add(record);
  } catch (const StoreError& e) {
    if (e.kind() == StoreError::Kind::kDuplicateCredentialId) {
      return record_failure(ticket, to_string(e.kind()), e.what());
    }
    log(LogLevel::kError, std::string("cannot persist credential: ") + e.what());
    return error_result(500, to_string(e.kind()), "credential store unavailable");
  }
  try {
    context_.tokens->redeem(ticket.id, TicketPurpose::kRegistration);
  } catch (const TicketError& e) {
    log(LogLevel::kWarning, std::string("registration ticket redeem failed after success: ") + e.what());
  }
  log(LogLevel::kInfo, "registered passkey for " + ticket.user);
  return json_result(201, {{"status", "registered"}, {"credentialId", encode_base64url(record.credential_id)}});
}

HttpResult ChallengeServer::verify_assertion(const SessionTicket& ticket, const json& credential) {
  AssertionResponse response;
  try {
    response = ceremony::assertion_response_from_json(credential);
  } catch (const ceremony::DocumentError& e) {
    return error_result(400, "malformed-document", e.what());
  }
  const auto pending = challenges_.find(ticket.id);
  if (!pending) return error_result(409, "no-pending-challenge", "request options first");

  std::optional<CredentialRecord> stored;
  try {
    stored = context_.store->lookup_by_credential_id(response.credential_id);
  } catch (const StoreError& e) {
    log(LogLevel::kError, std::string("credential store unavailable: ") + e.what());
    return error_result(500, to_string(e.kind()), "credential store unavailable");
  }
  // The ticket's user owns the ceremony; another user's credential is unknown here.
  if (!stored || stored->revoked || stored->user != ticket.user ||
      stored->rp_id != relying_party_.config().rp_id) {
    return record_failure(ticket, "credential-unknown", "credential is not registered for this user");
  }

  std::uint32_t count = 0;
  try {
    count = relying_party_.verify_assertion(response, *pending, *stored);
  } catch (const WebAuthnError& e) {
    return record_failure(ticket, to_string(e.kind()), e.what());
  }
  try {
    context_.store->update_sign_count(stored->credential_id, count);
  } catch (const StoreError& e) {
    if (e.kind() == StoreError::Kind::kCountRegression) {
      return record_failure(ticket, "sign-count-regression", e.what());
    }
    log(LogLevel::kError, std::string("cannot update sign count: ") + e.what());
    return error_result(500, to_string(e.kind()), "credential store unavailable");
  }
  try {
    context_.tokens->redeem(ticket.id, TicketPurpose::kAuthentication);
  } catch (const TicketError& e) {
    return error_result(410, to_string(e.kind()), e.what());
  }
  if (outcome_ && !outcome_->offer(PamVerdict::success(ticket.user))) {
    log(LogLevel::kWarning, "verdict already delivered; success for " + ticket.user + " ignored");
  }
  return json_result(200, {{"status", "ok"}});
}

}  // namespace sshpk
