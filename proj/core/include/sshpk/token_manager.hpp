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
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sshpk/clock.hpp"
#include "sshpk/session_id.hpp"

namespace sshpk {

enum class TicketPurpose { kRegistration, kAuthentication };

std::string_view to_string(TicketPurpose purpose);

inline constexpr std::chrono::seconds kRegistrationTicketTtl{600};
inline constexpr std::chrono::seconds kAuthenticationTicketTtl{120};

struct SessionTicket {
  SessionId id;
  TicketPurpose purpose = TicketPurpose::kAuthentication;
  std::string user;
  Clock::time_point issued_at;
  std::chrono::seconds ttl{0};
  bool redeemed = false;

  Clock::time_point expires_at() const { return issued_at + ttl; }
};

class TicketError : public std::runtime_error {
 public:
  enum class Kind { kUnknownTicket, kExpired, kAlreadyRedeemed, kPurposeMismatch, kPersistenceFailure };

  TicketError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(TicketError::Kind kind);

// "<base>/r/<token>" for registration, "<base>/a/<token>" for authentication.
std::string ticket_url(std::string_view base_url, const SessionTicket& ticket);

// One-time ticket table. Purely in memory by default; given a state file, the
// table is shared between processes (the admin CLI issues registration links
// that a separately running server redeems). Expiry follows the injected
// clock for in-memory tables and wall-clock time for file-backed ones.
class TokenManager {
 public:
  explicit TokenManager(const Clock& clock = SteadyClock::instance());
  explicit TokenManager(std::filesystem::path state_file);

  SessionTicket issue(TicketPurpose purpose, std::string_view user, std::chrono::seconds ttl);

  // Atomically marks the ticket redeemed. At most one caller ever succeeds.
  SessionTicket redeem(const SessionId& id, TicketPurpose expected_purpose);

  // Same checks as redeem() without consuming the ticket.
  SessionTicket check(const SessionId& id, TicketPurpose expected_purpose) const;

  // True while the ticket exists, is unexpired and unredeemed.
  bool is_live(const SessionId& id) const;

  // Marks a ticket unusable without it counting as a successful redemption.
  void invalidate(const SessionId& id);

 private:
  using Table = std::map<SessionId, SessionTicket>;

  SessionTicket check_in(const Table& table, const SessionId& id, TicketPurpose expected_purpose) const;
  Table load_state() const;
  void save_state(const Table& table) const;

  const Clock& clock_;
  std::optional<std::filesystem::path> state_file_;
  mutable std::mutex mutex_;
  Table tickets_;
};

}  // namespace sshpk
