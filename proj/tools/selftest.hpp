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
#include <iosfwd>
#include <string>
#include <vector>

namespace sshpk::cli {

struct SelftestOptions {
  // Client data claims a foreign origin; the run must then fail.
  bool inject_origin_mismatch = false;
  std::chrono::seconds auth_timeout{10};
};

struct SelftestStep {
  std::string name;
  bool passed = false;
  std::string detail;
  std::chrono::milliseconds elapsed{0};
};

struct SelftestReport {
  std::vector<SelftestStep> steps;
  std::chrono::milliseconds elapsed{0};
  bool passed() const;
};

// Registration then authentication through the real server, bridge and
// virtual authenticator against a throw-away store, which is removed before
// returning.
SelftestReport run_selftest(const SelftestOptions& options, std::ostream& out);

}  // namespace sshpk::cli
