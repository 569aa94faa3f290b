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

#include <chrono>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sshpk/challenge_server.hpp"
#include "sshpk/clock.hpp"
#include "sshpk/config.hpp"
#include "sshpk/credential_store.hpp"
#include "sshpk/verdict.hpp"
#include "sshpk/webauthn.hpp"

namespace sshpk {

// Message sink towards the SSH client. The host-module shim adapts this to
// the daemon's conversation function.
class Conversation {
 public:
  virtual ~Conversation() = default;
  // Delivers an informational message. Throws ConversationError when the
  // peer cannot be reached.
  virtual void info(std::string_view text) = 0;
};

class ConversationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BridgeConfig {
  RelyingPartyConfig relying_party;
  ServerSettings server;
  std::chrono::milliseconds auth_timeout{std::chrono::seconds(90)};
  bool fallback_allowed = false;

  static BridgeConfig from(const Config& config);
  void validate() const;
};

// Verdict detail carried when the server cannot start and fallback to the
// next authentication method is allowed.
inline constexpr std::string_view kFallbackDetail = "fallback";

// Exactly the text pushed to the client.
std::string info_message(std::string_view url);

// Extracts the URL from an info_message() text.
std::optional<std::string> url_from_message(std::string_view message);

// Runs one authentication attempt: issues a ticket, starts a bound challenge
// server, sends the URL, and blocks until a verdict or auth_timeout. The
// server is shut down before returning.
PamVerdict authenticate(std::string_view user, Conversation& conversation, const BridgeConfig& config,
                        CredentialStore& store, const Clock& clock = SteadyClock::instance());

// Host-module return classes. Timeout and AuthError are both failures.
enum class ModuleResult { kSuccess, kAuthError, kIgnore };

ModuleResult module_result(const PamVerdict& verdict);
std::string_view to_string(ModuleResult result);

// Conversation test double. The script is called for every informational
// message; it may drive a ceremony before returning, or throw ScriptAbort
// to make the conversation unavailable.
class ScriptAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConversationScript = std::function<void(std::string_view message)>;

struct Transcript {
  std::vector<std::string> messages;
  bool aborted = false;
  PamVerdict verdict;
  std::chrono::milliseconds elapsed{0};
};

Transcript simulate_conversation(std::string_view user, const ConversationScript& script,
                                 const BridgeConfig& config, CredentialStore& store,
                                 const Clock& clock = SteadyClock::instance());

}  // namespace sshpk
