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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sshpk/virtual_authenticator.hpp"
#include "sshpk/webauthn.hpp"

namespace sshpk {

class ClientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One HTTP exchange as seen by the client.
struct ClientReply {
  int status = 0;
  nlohmann::json body;

  // The server's error kind, empty on success.
  std::string error_kind() const;
};

// Drives a ceremony against a challenge server the way the browser page
// does, with the virtual authenticator standing in for the platform.
class CeremonyClient {
 public:
  struct Options {
    // Origin written into client data; defaults to the URL's origin.
    std::optional<std::string> origin;
    std::optional<Mutation> mutation;
    VirtualAuthenticator::AttestationFormat attestation =
        VirtualAuthenticator::AttestationFormat::kNone;
    // Accept any server certificate (self-signed test material).
    bool insecure_tls = false;
    int timeout_ms = 5000;
  };

  // `ticket_url` is a link produced by ticket_url(): <origin>/r/<token> or
  // <origin>/a/<token>.
  explicit CeremonyClient(std::string_view ticket_url);
  CeremonyClient(std::string_view ticket_url, Options options);

  Ceremony ceremony() const { return ceremony_; }
  const std::string& origin() const { return origin_; }
  const std::string& token() const { return token_; }

  ClientReply fetch_page() const;
  ClientReply request_options() const;
  ClientReply submit(const nlohmann::json& credential) const;

  // page -> options -> authenticator -> verify. Stops at the first non-2xx
  // reply and returns it.
  ClientReply run(VirtualAuthenticator& authenticator) const;

 private:
  ClientReply post(const std::string& path, const nlohmann::json& body) const;

  Options options_;
  Ceremony ceremony_ = Ceremony::kRegistration;
  std::string origin_;
  std::string token_;
};

}  // namespace sshpk
