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

#include "sshpk/ceremony_client.hpp"

#include <httplib.h>

#include "sshpk/ceremony_json.hpp"

namespace sshpk {
namespace {

using json = nlohmann::json;

httplib::Client make_client(const std::string& origin, const CeremonyClient::Options& options) {
  httplib::Client client(origin);
  client.set_keep_alive(false);
  const auto sec = options.timeout_ms / 1000;
  const auto usec = (options.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  if (options.insecure_tls) client.enable_server_certificate_verification(false);
  return client;
}

ClientReply to_reply(const httplib::Result& result, std::string_view what) {
  if (!result) {
    throw ClientError(std::string(what) + ": " + httplib::to_string(result.error()));
  }
  ClientReply reply;
  reply.status = result->status;
  reply.body = json::parse(result->body, nullptr, false);
  if (reply.body.is_discarded()) reply.body = result->body;
  return reply;
}

}  // namespace

std::string ClientReply::error_kind() const {
  if (body.is_object() && body.contains("error") && body["error"].is_string()) {
    return body["error"].get<std::string>();
  }
  return {};
}

CeremonyClient::CeremonyClient(std::string_view ticket_url) : CeremonyClient(ticket_url, Options{}) {}

CeremonyClient::CeremonyClient(std::string_view ticket_url, Options options)
    : options_(std::move(options)) {
  const auto scheme_end = ticket_url.find("://");
  if (scheme_end == std::string_view::npos) throw ClientError("ticket URL has no scheme");
  const auto path_start = ticket_url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) throw ClientError("ticket URL has no path");
  origin_ = std::string(ticket_url.substr(0, path_start));

  const std::string_view path = ticket_url.substr(path_start);
  if (path.size() < 4 || path[2] != '/' || (path[1] != 'r' && path[1] != 'a')) {
    throw ClientError("ticket URL path must be /r/<token> or /a/<token>");
  }
  ceremony_ = path[1] == 'r' ? Ceremony::kRegistration : Ceremony::kAuthentication;
  token_ = std::string(path.substr(3));
}

ClientReply CeremonyClient::fetch_page() const {
  auto client = make_client(origin_, options_);
  const std::string path = std::string(ceremony_ == Ceremony::kRegistration ? "/r/" : "/a/") + token_;
  auto result = client.Get(path);
  if (!result) throw ClientError("page: " + httplib::to_string(result.error()));
  ClientReply reply;
  reply.status = result->status;
  reply.body = result->body;
  return reply;
}

ClientReply CeremonyClient::post(const std::string& path, const json& body) const {
  auto client = make_client(origin_, options_);
  return to_reply(client.Post(path, body.dump(), "application/json"), path);
}

ClientReply CeremonyClient::request_options() const {
  const char* path = ceremony_ == Ceremony::kRegistration ? "/api/reg/options" : "/api/auth/options";
  return post(path, {{"token", token_}});
}

ClientReply CeremonyClient::submit(const json& credential) const {
  const char* path = ceremony_ == Ceremony::kRegistration ? "/api/reg/verify" : "/api/auth/verify";
  return post(path, {{"token", token_}, {"credential", credential}});
}

ClientReply CeremonyClient::run(VirtualAuthenticator& authenticator) const {
  const ClientReply page = fetch_page();
  if (page.status / 100 != 2) return page;
  const ClientReply options = request_options();
  if (options.status / 100 != 2) return options;

  const std::string origin = options_.origin.value_or(origin_);
  json credential;
  try {
    if (ceremony_ == Ceremony::kRegistration) {
      auto response = authenticator.make_credential(
          ceremony::registration_options_from_json(options.body), origin, options_.attestation);
      if (options_.mutation) response = tamper(response, *options_.mutation);
      credential = ceremony::to_json(response);
    } else {
      auto response =
          authenticator.get_assertion(ceremony::authentication_options_from_json(options.body), origin);
      if (options_.mutation) response = tamper(response, *options_.mutation);
      credential = ceremony::to_json(response);
    }
  } catch (const ceremony::DocumentError& e) {
    throw ClientError(std::string("server sent unusable options: ") + e.what());
  }
  return submit(credential);
}

}  // namespace sshpk
