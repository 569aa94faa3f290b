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

#include "sshpk/config.hpp"

#include <cstdlib>
#include <set>

#include "sshpk/atomic_file.hpp"

namespace sshpk {
namespace {

using json = nlohmann::json;

template <typename T>
T get(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::chrono::seconds get_seconds(const json& doc, const char* key, std::chrono::seconds fallback) {
  const auto value = get<std::int64_t>(doc, key, fallback.count());
  if (value <= 0) throw ConfigError(std::string("config key '") + key + "' must be positive");
  return std::chrono::seconds(value);
}

std::uint16_t get_port(const json& doc, const char* key, std::uint16_t fallback) {
  const auto value = get<std::int64_t>(doc, key, fallback);
  if (value < 0 || value > 65535) throw ConfigError(std::string("config key '") + key + "' is not a port");
  return static_cast<std::uint16_t>(value);
}

std::optional<std::filesystem::path> get_optional_path(const json& doc, const char* key) {
  const auto value = get<std::string>(doc, key, "");
  if (value.empty()) return std::nullopt;
  return std::filesystem::path(value);
}

}  // namespace

ServerSettings Config::registration_server() const {
  ServerSettings settings = server;
  settings.port = registration_port;
  return settings;
}

std::string Config::registration_base_url() const {
  std::string url = server.base_url;
  if (url.empty()) {
    const std::string host = server.public_host.empty() ? relying_party.rp_id : server.public_host;
    url = std::string(server.tls_certificate ? "https" : "http") + "://" + host + ":" +
          std::to_string(registration_port);
  }
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

void Config::validate() const {
  RelyingPartyConfig rp = relying_party;
  // Authentication servers on ephemeral ports add their own origin at start.
  if (rp.expected_origins.empty()) rp.expected_origins.push_back(registration_base_url());
  rp.validate();
  if (auth_timeout.count() <= 0) throw ConfigError("auth_timeout must be positive");
  if (server.retry_budget <= 0) throw ConfigError("retry_budget must be positive");
  if (registration_port == 0) throw ConfigError("registration_port must be fixed");
  if (server.tls_certificate.has_value() != server.tls_private_key.has_value()) {
    throw ConfigError("tls_cert and tls_key must be set together");
  }
}

Config parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "rp_id", "rp_name", "origins", "require_user_verification", "algorithms", "challenge_ttl",
      "store_path", "state_dir", "bind_host", "port", "registration_port", "public_host",
      "base_url", "tls_cert", "tls_key", "auth_timeout", "fallback_allowed", "retry_budget"};
  for (const auto& [key, _] : doc.items()) {
    if (!kKnown.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  Config config;
  auto& rp = config.relying_party;
  rp.rp_id = get<std::string>(doc, "rp_id", "");
  if (rp.rp_id.empty()) throw ConfigError("config key 'rp_id' is required");
  rp.rp_name = get<std::string>(doc, "rp_name", rp.rp_id);
  rp.expected_origins = get<std::vector<std::string>>(doc, "origins", {});
  rp.require_user_verification = get<bool>(doc, "require_user_verification", true);
  rp.challenge_ttl = get_seconds(doc, "challenge_ttl", rp.challenge_ttl);
  if (doc.contains("algorithms")) {
    rp.allowed_algorithms.clear();
    for (const auto& name : get<std::vector<std::string>>(doc, "algorithms", {})) {
      const auto alg = algorithm_from_name(name);
      if (!alg) throw ConfigError("unknown algorithm '" + name + "'");
      rp.allowed_algorithms.push_back(*alg);
    }
  }

  config.store_path = get<std::string>(doc, "store_path", config.store_path.string());
  config.state_dir = get<std::string>(doc, "state_dir", config.state_dir.string());
  config.server.bind_host = get<std::string>(doc, "bind_host", config.server.bind_host);
  config.server.port = get_port(doc, "port", 0);
  config.registration_port = get_port(doc, "registration_port", config.registration_port);
  config.server.public_host = get<std::string>(doc, "public_host", "");
  config.server.base_url = get<std::string>(doc, "base_url", "");
  config.server.tls_certificate = get_optional_path(doc, "tls_cert");
  config.server.tls_private_key = get_optional_path(doc, "tls_key");
  config.server.retry_budget = get<int>(doc, "retry_budget", config.server.retry_budget);
  config.auth_timeout = get_seconds(doc, "auth_timeout", config.auth_timeout);
  config.fallback_allowed = get<bool>(doc, "fallback_allowed", false);

  if (rp.expected_origins.empty()) rp.expected_origins.push_back(config.registration_base_url());
  config.validate();
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::optional<std::string> text;
  try {
    text = read_file(path);
  } catch (const PersistenceError& e) {
    throw ConfigError("cannot read config " + path.string() + ": " + e.what());
  }
  if (!text) throw ConfigError("config file " + path.string() + " does not exist");
  const json doc = json::parse(*text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config " + path.string() + " is not valid JSON");
  return parse_config(doc);
}

std::filesystem::path resolve_config_path(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return *explicit_path;
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') return env;
  return kDefaultConfigPath;
}

}  // namespace sshpk
