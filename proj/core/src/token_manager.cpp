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

#include "sshpk/token_manager.hpp"

#include <nlohmann/json.hpp>

#include <memory>

#include "sshpk/atomic_file.hpp"

namespace sshpk {
namespace {

using json = nlohmann::json;
using Kind = TicketError::Kind;

std::int64_t to_unix(Clock::time_point steady) {
  const auto offset = steady - std::chrono::steady_clock::now();
  const auto wall = std::chrono::system_clock::now() +
                    std::chrono::duration_cast<std::chrono::system_clock::duration>(offset);
  return std::chrono::duration_cast<std::chrono::seconds>(wall.time_since_epoch()).count();
}

Clock::time_point from_unix(std::int64_t unix_seconds) {
  const auto wall = std::chrono::system_clock::time_point(std::chrono::seconds(unix_seconds));
  const auto offset = wall - std::chrono::system_clock::now();
  return std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(offset);
}

std::unique_ptr<FileLock> lock_state(const std::filesystem::path& state_file) {
  try {
    return std::make_unique<FileLock>(state_file.parent_path() /
                                      (state_file.filename().string() + ".lock"));
  } catch (const PersistenceError& e) {
    throw TicketError(Kind::kPersistenceFailure, e.what());
  }
}

}  // namespace

std::string_view to_string(TicketPurpose purpose) {
  return purpose == TicketPurpose::kRegistration ? "registration" : "authentication";
}

std::string_view to_string(TicketError::Kind kind) {
  switch (kind) {
    case Kind::kUnknownTicket: return "unknown-ticket";
    case Kind::kExpired: return "expired";
    case Kind::kAlreadyRedeemed: return "already-redeemed";
    case Kind::kPurposeMismatch: return "purpose-mismatch";
    case Kind::kPersistenceFailure: return "persistence-failure";
  }
  return "unknown";
}

std::string ticket_url(std::string_view base_url, const SessionTicket& ticket) {
  std::string url(base_url);
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += ticket.purpose == TicketPurpose::kRegistration ? "/r/" : "/a/";
  url += ticket.id.token();
  return url;
}

TokenManager::TokenManager(const Clock& clock) : clock_(clock) {}

TokenManager::TokenManager(std::filesystem::path state_file)
    : clock_(SteadyClock::instance()), state_file_(std::move(state_file)) {}

TokenManager::Table TokenManager::load_state() const {
  Table table;
  std::optional<std::string> text;
  try {
    text = read_file(*state_file_);
  } catch (const PersistenceError& e) {
    throw TicketError(Kind::kPersistenceFailure, e.what());
  }
  if (!text) return table;
  try {
    const json doc = json::parse(*text);
    for (const auto& t : doc.at("tickets")) {
      const auto id = SessionId::from_token(t.at("id").get<std::string>());
      if (!id) continue;
      SessionTicket ticket;
      ticket.id = *id;
      ticket.purpose = t.at("purpose").get<std::string>() == "registration"
                           ? TicketPurpose::kRegistration
                           : TicketPurpose::kAuthentication;
      ticket.user = t.at("user").get<std::string>();
      ticket.issued_at = from_unix(t.at("issued_at").get<std::int64_t>());
      ticket.ttl = std::chrono::seconds(t.at("ttl").get<std::int64_t>());
      ticket.redeemed = t.at("redeemed").get<bool>();
      table.emplace(ticket.id, std::move(ticket));
    }
  } catch (const json::exception& e) {
    throw TicketError(Kind::kPersistenceFailure, std::string("ticket file unreadable: ") + e.what());
  }
  return table;
}

void TokenManager::save_state(const Table& table) const {
  json tickets = json::array();
  const auto now = clock_.now();
  for (const auto& [id, t] : table) {
    if (t.expires_at() <= now) continue;  // expired tickets are dropped on rewrite
    tickets.push_back({{"id", id.token()},
                       {"purpose", std::string(to_string(t.purpose))},
                       {"user", t.user},
                       {"issued_at", to_unix(t.issued_at)},
                       {"ttl", t.ttl.count()},
                       {"redeemed", t.redeemed}});
  }
  try {
    write_file_atomic(*state_file_, json{{"version", 1}, {"tickets", tickets}}.dump(2) + "\n", 0600);
  } catch (const PersistenceError& e) {
    throw TicketError(Kind::kPersistenceFailure, e.what());
  }
}

SessionTicket TokenManager::issue(TicketPurpose purpose, std::string_view user,
                                  std::chrono::seconds ttl) {
  if (user.empty()) throw std::invalid_argument("ticket user must not be empty");
  SessionTicket ticket;
  ticket.purpose = purpose;
  ticket.user = std::string(user);
  ticket.issued_at = clock_.now();
  ticket.ttl = ttl;

  std::lock_guard guard(mutex_);
  if (state_file_) {
    try {
      if (!state_file_->parent_path().empty()) {
        std::filesystem::create_directories(state_file_->parent_path());
      }
    } catch (const std::filesystem::filesystem_error& e) {
      throw TicketError(Kind::kPersistenceFailure, e.what());
    }
    const auto lock = lock_state(*state_file_);
    Table table = load_state();
    do {
      ticket.id = SessionId::random();
    } while (table.contains(ticket.id));
    table.emplace(ticket.id, ticket);
    save_state(table);
    return ticket;
  }
  do {
    ticket.id = SessionId::random();
  } while (tickets_.contains(ticket.id));
  tickets_.emplace(ticket.id, ticket);
  return ticket;
}

SessionTicket TokenManager::check_in(const Table& table, const SessionId& id,
                                     TicketPurpose expected_purpose) const {
  const auto it = table.find(id);
  if (it == table.end()) throw TicketError(Kind::kUnknownTicket, "unknown ticket");
  const SessionTicket& t = it->second;
  if (t.purpose != expected_purpose) {
    throw TicketError(Kind::kPurposeMismatch, "ticket was issued for " + std::string(to_string(t.purpose)));
  }
  if (t.redeemed) throw TicketError(Kind::kAlreadyRedeemed, "ticket already redeemed");
  if (clock_.now() >= t.expires_at()) throw TicketError(Kind::kExpired, "ticket expired");
  return t;
}

SessionTicket TokenManager::redeem(const SessionId& id, TicketPurpose expected_purpose) {
  std::lock_guard guard(mutex_);
  if (state_file_) {
    const auto lock = lock_state(*state_file_);
    Table table = load_state();
    SessionTicket t = check_in(table, id, expected_purpose);
    table[id].redeemed = true;
    save_state(table);
    t.redeemed = true;
    return t;
  }
  SessionTicket t = check_in(tickets_, id, expected_purpose);
  tickets_[id].redeemed = true;
  t.redeemed = true;
  return t;
}

SessionTicket TokenManager::check(const SessionId& id, TicketPurpose expected_purpose) const {
  std::lock_guard guard(mutex_);
  if (state_file_) return check_in(load_state(), id, expected_purpose);
  return check_in(tickets_, id, expected_purpose);
}

bool TokenManager::is_live(const SessionId& id) const {
  std::lock_guard guard(mutex_);
  const Table& table = state_file_ ? load_state() : tickets_;
  const auto it = table.find(id);
  return it != table.end() && !it->second.redeemed && clock_.now() < it->second.expires_at();
}

void TokenManager::invalidate(const SessionId& id) {
  std::lock_guard guard(mutex_);
  if (state_file_) {
    const auto lock = lock_state(*state_file_);
    Table table = load_state();
    if (auto it = table.find(id); it != table.end()) {
      it->second.redeemed = true;
      save_state(table);
    }
    return;
  }
  if (auto it = tickets_.find(id); it != tickets_.end()) it->second.redeemed = true;
}

}  // namespace sshpk
