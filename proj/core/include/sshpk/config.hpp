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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sshpk/challenge_server.hpp"
#include "sshpk/credential_store.hpp"
#include "sshpk/webauthn.hpp"

namespace sshpk {

inline constexpr const char* kDefaultConfigPath = "/etc/ssh-passkeys/config.json";
inline constexpr const char* kDefaultStateDir = "/run/ssh-passkeys";
inline constexpr const char* kConfigEnvVar = "SSH_PASSKEYS_CONFIG";

// Deployment configuration shared by the authentication module and the CLI.
//
//   {
//     "rp_id": "login.example.org",         required
//     "rp_name": "Example SSH",
//     "origins": ["https://login.example.org:8443"],
//     "require_user_verification": true,
//     "algorithms": ["ES256", "EdDSA", "RS256"],
//     "challenge_ttl": 120,                 seconds
//     "store_path": "/var/lib/ssh-passkeys/credentials.json",
//     "state_dir": "/run/ssh-passkeys",
//     "bind_host": "127.0.0.1",
//     "port": 0,                            authentication servers; 0 = ephemeral
//     "registration_port": 8080,            `ssh-passkeys serve`
//     "public_host": "",                    host in generated URLs (default rp_id)
//     "base_url": "",                       registration origin override
//     "tls_cert": "", "tls_key": "",
//     "auth_timeout": 90,                   seconds
//     "fallback_allowed": false,
//     "retry_budget": 3
//   }
//
// Unknown keys are rejected so that typos do not silently fall back to
// defaults.
struct Config {
  RelyingPartyConfig relying_party;
  std::filesystem::path store_path = kDefaultStorePath;
  std::filesystem::path state_dir = kDefaultStateDir;
  ServerSettings server;
  std::uint16_t registration_port = 8080;
  std::chrono::seconds auth_timeout{90};
  bool fallback_allowed = false;

  // Ticket table shared between the CLI and the registration server.
  std::filesystem::path ticket_file() const { return state_dir / "tickets.json"; }

  // Settings for the long-running registration server.
  ServerSettings registration_server() const;

  // Origin that registration links point at.
  std::string registration_base_url() const;

  // Throws ConfigError when an invariant does not hold.
  void validate() const;
};

Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);

// Explicit path, else $SSH_PASSKEYS_CONFIG, else the default path.
std::filesystem::path resolve_config_path(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace sshpk
