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

#include <sys/types.h>

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sshpk {

class PersistenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Advisory whole-file lock (flock) held for the object's lifetime. The lock
// lives on a sidecar file because the data file itself is replaced by rename.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& lock_path);
  ~FileLock();

  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

// Called after each chunk reaches the temporary file, with the running byte
// count. Used by tests to inject crashes mid-write.
using WriteProgressHook = std::function<void(std::size_t written, std::size_t total)>;

// Writes to a sibling temporary file, fsyncs, then renames over `path`.
// Readers observe either the previous or the new content, never a mix.
void write_file_atomic(const std::filesystem::path& path, std::string_view content,
                       mode_t mode = 0600, const WriteProgressHook& hook = {});

// nullopt when the file does not exist.
std::optional<std::string> read_file(const std::filesystem::path& path);

}  // namespace sshpk
