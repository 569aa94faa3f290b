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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace sshpk {

struct Asset {
  std::span<const unsigned char> bytes;
  std::string_view content_type;
};

// Frontend files embedded at build time, keyed by absolute request path
// ("/app.js"). The ceremony page is "/ceremony.html".
const std::map<std::string, std::span<const unsigned char>>& asset_manifest();

// Exact manifest lookup. Paths containing ".." or backslashes never match.
std::optional<Asset> find_asset(std::string_view path);

std::string_view content_type_for(std::string_view path);

}  // namespace sshpk
