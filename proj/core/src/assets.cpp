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

#include "sshpk/assets.hpp"

namespace sshpk {
namespace detail {
const std::map<std::string, std::span<const unsigned char>>& embedded_assets();
}  // namespace detail

const std::map<std::string, std::span<const unsigned char>>& asset_manifest() {
  return detail::embedded_assets();
}

std::string_view content_type_for(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".html")) return "text/html";
  if (ends_with(".js")) return "application/javascript";
  if (ends_with(".css")) return "text/css";
  if (ends_with(".json")) return "application/json";
  if (ends_with(".svg")) return "image/svg+xml";
  return "application/octet-stream";
}

std::optional<Asset> find_asset(std::string_view path) {
  if (path.find("..") != std::string_view::npos || path.find('\\') != std::string_view::npos) {
    return std::nullopt;
  }
  const auto& manifest = asset_manifest();
  auto it = manifest.find(std::string(path));
  if (it == manifest.end()) return std::nullopt;
  return Asset{it->second, content_type_for(path)};
}

}  // namespace sshpk
