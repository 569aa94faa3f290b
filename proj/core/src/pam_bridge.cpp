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

#include "sshpk/pam_bridge.hpp"

#include <memory>

#include "sshpk/log.hpp"
#include "sshpk/token_manager.hpp"

namespace sshpk {
namespace {

constexpr std::string_view kMessagePrefix = "Authenticate at: ";

std::chrono::seconds ticket_ttl(std::chrono::milliseconds timeout) {
  // Round up so the ticket never dies before the wait does.
  return std::chrono::ceil<std::chrono::seconds>(timeout);
}

class ScriptedConversation final : public Conversation {
 public:
  ScriptedConversation(const ConversationScript& script, Transcript& transcript)
      : script_(script), transcript_(transcript) {}

  void info(std::string_view text) override {
    transcript_.messages.emplace_back(text);
    if (!script_) return;
    try {
      script_(text);
    } catch (const ScriptAbort& e) {
      transcript_.aborted = true;
      throw ConversationError(std::string("script aborted: ") + e.what());
    }
  }

 private:
  const ConversationScript& script_;
  Transcript& transcript_;
};

}  // namespace

std::string_view to_string(PamVerdict::Kind kind) {
  switch (kind) {
    case PamVerdict::Kind::kSuccess: return "success";
    case PamVerdict::Kind::kAuthError: return "auth-error";
    case PamVerdict::Kind::kTimeout: return "timeout";
  }
  return "unknown";
}

BridgeConfig BridgeConfig::from(const Config& config) {
  BridgeConfig bridge;
  bridge.relying_party = config.relying_party;
  bridge.server = config.server;
  bridge.auth_timeout = config.auth_timeout;
  bridge.fallback_allowed = config.fallback_allowed;
  return bridge;
}

void BridgeConfig::validate() const {
  if (auth_timeout.count() <= 0) throw ConfigError("auth_timeout must be positive");
  if (server.retry_budget <= 0) throw ConfigError("retry_budget must be positive");
}

std::string info_message(std::string_view url) {
  return std::string(kMessagePrefix) + std::string(url) + "\n";
}

std::optional<std::string> url_from_message(std::string_view message) {
  if (!message.starts_with(kMessagePrefix) || !message.ends_with('\n')) return std::nullopt;
  message.remove_prefix(kMessagePrefix.size());
  message.remove_suffix(1);
  if (message.empty()) return std::nullopt;
  return std::string(message);
}

PamVerdict authenticate(std::string_view user, Conversation& conversation, const BridgeConfig& config,
                        CredentialStore& store, const Clock& clock) {
  const auto deadline = std::chrono::steady_clock::now() + config.auth_timeout;
  const std::string who(user);
  if (!is_valid_account_name(user)) {
    log(LogLevel::kWarning, "rejecting authentication for malformed account name");
    return PamVerdict::auth_error("invalid-user");
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    log(LogLevel::kError, std::string("bridge misconfigured: ") + e.what());
    return PamVerdict::auth_error("config-invalid");
  }

  // Each attempt owns its tickets and challenges; nothing is shared between
  // concurrent logins.
  TokenManager tokens(clock);
  const SessionTicket ticket = tokens.issue(TicketPurpose::kAuthentication, user, ticket_ttl(config.auth_timeout));
  auto outcome = std::make_shared<VerdictChannel>();

  std::unique_ptr<ChallengeServer> server;
  try {
    ChallengeServer::Context context{config.relying_party, &tokens, &store, &clock};
    server = ChallengeServer::start(config.server, std::move(context), ticket, outcome);
  } catch (const std::exception& e) {
    log(LogLevel::kError, std::string("challenge server failed to start: ") + e.what());
    if (config.fallback_allowed) return PamVerdict::auth_error(std::string(kFallbackDetail));
    return PamVerdict::auth_error("server-start-failure");
  }

  try {
    conversation.info(info_message(ticket_url(server->base_url(), ticket)));
  } catch (const std::exception& e) {
    log(LogLevel::kWarning, "conversation unavailable for " + who + ": " + e.what());
    outcome->offer(PamVerdict::auth_error("conversation-unavailable"));
  }

  outcome->wait_until(deadline);
  server->shutdown();  // delivers Timeout if nothing else arrived
  PamVerdict verdict = outcome->peek().value_or(PamVerdict::timeout());

  switch (verdict.kind) {
    case PamVerdict::Kind::kSuccess:
      log(LogLevel::kInfo, "passkey authentication succeeded for " + who);
      break;
    case PamVerdict::Kind::kTimeout:
      log(LogLevel::kInfo, "passkey authentication timed out for " + who);
      break;
    case PamVerdict::Kind::kAuthError:
      log(LogLevel::kInfo, "passkey authentication failed for " + who + ": " + verdict.detail);
      break;
  }
  return verdict;
}

ModuleResult module_result(const PamVerdict& verdict) {
  if (verdict.kind == PamVerdict::Kind::kSuccess) return ModuleResult::kSuccess;
  if (verdict.kind == PamVerdict::Kind::kAuthError && verdict.detail == kFallbackDetail) {
    return ModuleResult::kIgnore;
  }
  return ModuleResult::kAuthError;
}

std::string_view to_string(ModuleResult result) {
  switch (result) {
    case ModuleResult::kSuccess: return "success";
    case ModuleResult::kAuthError: return "auth-error";
    case ModuleResult::kIgnore: return "ignore";
  }
  return "unknown";
}

Transcript simulate_conversation(std::string_view user, const ConversationScript& script,
                                 const BridgeConfig& config, CredentialStore& store, const Clock& clock) {
  Transcript transcript;
  ScriptedConversation conversation(script, transcript);
  const auto started = std::chrono::steady_clock::now();
  transcript.verdict = authenticate(user, conversation, config, store, clock);
  transcript.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  return transcript;
}

}  // namespace sshpk
