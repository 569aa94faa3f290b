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

// Adapter between the PAM module ABI and sshpk::authenticate. No policy
// lives here.
//
//   auth  required  pam_sshpk.so  [config=/etc/ssh-passkeys/config.json]

#include <security/pam_appl.h>
#include <security/pam_modules.h>

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>

#include "sshpk/config.hpp"
#include "sshpk/credential_store.hpp"
#include "sshpk/log.hpp"
#include "sshpk/pam_bridge.hpp"

namespace {

class PamConversation final : public sshpk::Conversation {
 public:
  explicit PamConversation(pam_handle_t* handle) : handle_(handle) {}

  void info(std::string_view text) override {
    const pam_conv* conv = nullptr;
    if (pam_get_item(handle_, PAM_CONV, reinterpret_cast<const void**>(&conv)) != PAM_SUCCESS ||
        conv == nullptr || conv->conv == nullptr) {
      throw sshpk::ConversationError("no conversation function");
    }
    const std::string message(text);
    pam_message msg{PAM_TEXT_INFO, message.c_str()};
    const pam_message* msgs[] = {&msg};
    pam_response* reply = nullptr;
    const int rc = conv->conv(1, msgs, &reply, conv->appdata_ptr);
    if (reply != nullptr) {
      std::free(reply->resp);
      std::free(reply);
    }
    if (rc != PAM_SUCCESS) throw sshpk::ConversationError(pam_strerror(handle_, rc));
  }

 private:
  pam_handle_t* handle_;
};

std::optional<std::string> config_argument(int argc, const char** argv) {
  for (int i = 0; i < argc; ++i) {
    if (std::strncmp(argv[i], "config=", 7) == 0) return std::string(argv[i] + 7);
  }
  return std::nullopt;
}

}  // namespace

extern "C" {

PAM_EXTERN int pam_sm_authenticate(pam_handle_t* handle, int /*flags*/, int argc, const char** argv) {
  const char* user = nullptr;
  if (pam_get_user(handle, &user, nullptr) != PAM_SUCCESS || user == nullptr) return PAM_AUTH_ERR;
  try {
    const auto explicit_path = config_argument(argc, argv);
    const sshpk::Config config = sshpk::load_config(
        sshpk::resolve_config_path(explicit_path ? std::optional<std::filesystem::path>(*explicit_path)
                                                 : std::nullopt));
    sshpk::CredentialStore store(config.store_path);
    PamConversation conversation(handle);
    const auto verdict =
        sshpk::authenticate(user, conversation, sshpk::BridgeConfig::from(config), store);
    switch (sshpk::module_result(verdict)) {
      case sshpk::ModuleResult::kSuccess: return PAM_SUCCESS;
      case sshpk::ModuleResult::kIgnore: return PAM_IGNORE;
      case sshpk::ModuleResult::kAuthError: return PAM_AUTH_ERR;
    }
  } catch (const std::exception& e) {
    sshpk::log(sshpk::LogLevel::kError, std::string("pam_sshpk: ") + e.what());
  }
  return PAM_AUTH_ERR;
}

PAM_EXTERN int pam_sm_setcred(pam_handle_t*, int, int, const char**) { return PAM_SUCCESS; }

}  // extern "C"
