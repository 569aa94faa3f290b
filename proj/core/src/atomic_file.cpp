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

#include "sshpk/atomic_file.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sshpk/base64url.hpp"
#include "sshpk/crypto.hpp"

namespace sshpk {
namespace {

constexpr std::size_t kChunkSize = 512;

std::string errno_message(const std::string& what, const std::filesystem::path& path) {
  return what + " '" + path.string() + "': " + std::strerror(errno);
}

void fsync_directory(const std::filesystem::path& dir) {
  const int fd = ::open(dir.empty() ? "." : dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

FileLock::FileLock(const std::filesystem::path& lock_path) {
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
  if (fd_ < 0) throw PersistenceError(errno_message("cannot open lock file", lock_path));
  while (::flock(fd_, LOCK_EX) != 0) {
    if (errno == EINTR) continue;
    const std::string msg = errno_message("cannot lock", lock_path);
    ::close(fd_);
    throw PersistenceError(msg);
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content, mode_t mode,
                       const WriteProgressHook& hook) {
  std::uint8_t suffix[8];
  secure_random_fill(suffix);
  const std::filesystem::path dir = path.parent_path();
  const std::filesystem::path tmp =
      dir / ("." + path.filename().string() + ".tmp." + encode_base64url(suffix));

  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, mode);
  if (fd < 0) throw PersistenceError(errno_message("cannot create", tmp));

  auto fail = [&](const std::string& msg) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw PersistenceError(msg);
  };

  std::size_t written = 0;
  while (written < content.size()) {
    const std::size_t n = std::min(kChunkSize, content.size() - written);
    const ssize_t rc = ::write(fd, content.data() + written, n);
    if (rc < 0) {
      if (errno == EINTR) continue;
      fail(errno_message("write failed for", tmp));
    }
    written += static_cast<std::size_t>(rc);
    if (hook) {
      try {
        hook(written, content.size());
      } catch (...) {
        ::close(fd);
        ::unlink(tmp.c_str());
        throw;
      }
    }
  }
  if (::fchmod(fd, mode) != 0) fail(errno_message("chmod failed for", tmp));
  if (::fsync(fd) != 0) fail(errno_message("fsync failed for", tmp));
  if (::close(fd) != 0) {
    ::unlink(tmp.c_str());
    throw PersistenceError(errno_message("close failed for", tmp));
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string msg = errno_message("rename failed onto", path);
    ::unlink(tmp.c_str());
    throw PersistenceError(msg);
  }
  fsync_directory(dir);
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (errno == ENOENT || !std::filesystem::exists(path)) return std::nullopt;
    throw PersistenceError(errno_message("cannot read", path));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw PersistenceError(errno_message("read failed for", path));
  return buf.str();
}

}  // namespace sshpk
