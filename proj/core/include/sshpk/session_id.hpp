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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sshpk {

// Opaque 128-bit identifier of a one-time session ticket. Its base64url form
// (22 characters) is the token carried in ceremony URLs.
struct SessionId {
  static constexpr std::size_t kSize = 16;

  std::array<std::uint8_t, kSize> bytes{};

  static SessionId random();
  static std::optional<SessionId> from_token(std::string_view token);
  std::string token() const;

  friend auto operator<=>(const SessionId&, const SessionId&) = default;
};

}  // namespace sshpk
