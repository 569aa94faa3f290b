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
#include <condition_variable>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace sshpk {

struct PamVerdict {
  enum class Kind { kSuccess, kAuthError, kTimeout };

  Kind kind = Kind::kAuthError;
  std::string detail;

  static PamVerdict success(std::string detail = {}) { return {Kind::kSuccess, std::move(detail)}; }
  static PamVerdict auth_error(std::string detail) { return {Kind::kAuthError, std::move(detail)}; }
  static PamVerdict timeout(std::string detail = "timeout") { return {Kind::kTimeout, std::move(detail)}; }

  bool ok() const { return kind == Kind::kSuccess; }
};

std::string_view to_string(PamVerdict::Kind kind);

// Single-slot conduit from a challenge server to the waiting authenticate
// call. The first offer wins; later offers are refused.
class VerdictChannel {
 public:
  // Returns false when a verdict was already delivered.
  bool offer(PamVerdict verdict) {
    {
      std::lock_guard lock(mutex_);
      if (verdict_) return false;
      verdict_ = std::move(verdict);
      ++offers_accepted_;
    }
    cv_.notify_all();
    return true;
  }

  std::optional<PamVerdict> wait_until(std::chrono::steady_clock::time_point deadline) {
    std::unique_lock lock(mutex_);
    cv_.wait_until(lock, deadline, [&] { return verdict_.has_value(); });
    return verdict_;
  }

  std::optional<PamVerdict> peek() const {
    std::lock_guard lock(mutex_);
    return verdict_;
  }

  int offers_accepted() const {
    std::lock_guard lock(mutex_);
    return offers_accepted_;
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::optional<PamVerdict> verdict_;
  int offers_accepted_ = 0;
};

}  // namespace sshpk
