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

#include "sshpk/cbor.hpp"

#include <limits>

namespace sshpk::cbor {
namespace {

constexpr int kMaxDepth = 16;

enum MajorType : std::uint8_t {
  kUnsigned = 0,
  kNegative = 1,
  kByteString = 2,
  kTextString = 3,
  kArray = 4,
  kMap = 5,
  kTag = 6,
  kSimpleOrFloat = 7,
};

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::size_t position() const { return pos_; }

  Value read_item(int depth) {
    if (depth > kMaxDepth) throw DecodeError("cbor nesting too deep");
    const std::uint8_t initial = next();
    const auto major = static_cast<MajorType>(initial >> 5);
    const std::uint8_t info = initial & 0x1f;

    if (major == kSimpleOrFloat) {
      switch (info) {
        case 20: return Value(Simple::kFalse);
        case 21: return Value(Simple::kTrue);
        case 22: return Value(Simple::kNull);
        case 31: throw DecodeError("cbor indefinite-length break not allowed");
        default: throw DecodeError("unsupported cbor simple or float value");
      }
    }
    if (info == 31) throw DecodeError("cbor indefinite length not allowed");
    const std::uint64_t arg = read_argument(info);

    switch (major) {
      case kUnsigned:
        if (arg > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
          throw DecodeError("cbor integer out of range");
        }
        return Value(static_cast<std::int64_t>(arg));
      case kNegative:
        if (arg > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
          throw DecodeError("cbor integer out of range");
        }
        return Value(-1 - static_cast<std::int64_t>(arg));
      case kByteString: {
        auto span = take(arg);
        return Value(Bytes(span.begin(), span.end()));
      }
      case kTextString: {
        auto span = take(arg);
        return Value(std::string(span.begin(), span.end()));
      }
      case kArray: {
        check_count(arg);
        Array items;
        items.reserve(static_cast<std::size_t>(arg));
        for (std::uint64_t i = 0; i < arg; ++i) items.push_back(read_item(depth + 1));
        return Value(std::move(items));
      }
      case kMap: {
        check_count(arg);
        Map entries;
        entries.reserve(static_cast<std::size_t>(arg));
        for (std::uint64_t i = 0; i < arg; ++i) {
          Value key = read_item(depth + 1);
          for (const auto& [existing, unused] : entries) {
            if (existing == key) throw DecodeError("duplicate cbor map key");
          }
          Value val = read_item(depth + 1);
          entries.emplace_back(std::move(key), std::move(val));
        }
        return Value(std::move(entries));
      }
      case kTag:
        throw DecodeError("cbor tags not supported");
      default:
        throw DecodeError("unreachable cbor major type");
    }
  }

 private:
  std::uint8_t next() {
    if (pos_ >= data_.size()) throw DecodeError("truncated cbor input");
    return data_[pos_++];
  }

  ByteView take(std::uint64_t n) {
    if (n > data_.size() - pos_) throw DecodeError("truncated cbor input");
    auto span = data_.subspan(pos_, static_cast<std::size_t>(n));
    pos_ += static_cast<std::size_t>(n);
    return span;
  }

  // Each element needs at least one byte, which bounds allocation on hostile
  // length prefixes.
  void check_count(std::uint64_t n) const {
    if (n > data_.size() - pos_) throw DecodeError("truncated cbor input");
  }

  std::uint64_t read_argument(std::uint8_t info) {
    if (info < 24) return info;
    int width = 0;
    switch (info) {
      case 24: width = 1; break;
      case 25: width = 2; break;
      case 26: width = 4; break;
      case 27: width = 8; break;
      default: throw DecodeError("reserved cbor additional info");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 8) | next();
    return v;
  }

  ByteView data_;
  std::size_t pos_ = 0;
};

void write_head(Bytes& out, std::uint8_t major, std::uint64_t arg) {
  const auto m = static_cast<std::uint8_t>(major << 5);
  if (arg < 24) {
    out.push_back(static_cast<std::uint8_t>(m | arg));
  } else if (arg <= 0xff) {
    out.push_back(m | 24);
    out.push_back(static_cast<std::uint8_t>(arg));
  } else if (arg <= 0xffff) {
    out.push_back(m | 25);
    for (int s = 8; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(arg >> s));
  } else if (arg <= 0xffffffffULL) {
    out.push_back(m | 26);
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(arg >> s));
  } else {
    out.push_back(m | 27);
    for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(arg >> s));
  }
}

void encode_into(Bytes& out, const Value& v) {
  if (v.is_int()) {
    const std::int64_t i = v.as_int();
    if (i >= 0) {
      write_head(out, kUnsigned, static_cast<std::uint64_t>(i));
    } else {
      write_head(out, kNegative, static_cast<std::uint64_t>(-1 - i));
    }
  } else if (v.is_bytes()) {
    const auto& b = v.as_bytes();
    write_head(out, kByteString, b.size());
    out.insert(out.end(), b.begin(), b.end());
  } else if (v.is_text()) {
    const auto& s = v.as_text();
    write_head(out, kTextString, s.size());
    out.insert(out.end(), s.begin(), s.end());
  } else if (v.is_array()) {
    write_head(out, kArray, v.as_array().size());
    for (const auto& item : v.as_array()) encode_into(out, item);
  } else if (v.is_map()) {
    write_head(out, kMap, v.as_map().size());
    for (const auto& [key, val] : v.as_map()) {
      encode_into(out, key);
      encode_into(out, val);
    }
  } else {
    out.push_back(static_cast<std::uint8_t>((kSimpleOrFloat << 5) |
                                            static_cast<std::uint8_t>(v.as_simple())));
  }
}

}  // namespace

const Value* Value::find(const Value& key) const {
  if (!is_map()) return nullptr;
  for (const auto& [k, v] : as_map()) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool operator==(const Value& a, const Value& b) {
  if (a.v_.index() != b.v_.index()) return false;
  if (a.is_array()) return a.as_array() == b.as_array();
  if (a.is_map()) return a.as_map() == b.as_map();
  return a.v_ == b.v_;
}

Decoded decode_prefix(ByteView data) {
  Reader reader(data);
  Value v = reader.read_item(0);
  return {std::move(v), reader.position()};
}

Value decode(ByteView data) {
  auto [value, consumed] = decode_prefix(data);
  if (consumed != data.size()) throw DecodeError("trailing bytes after cbor item");
  return value;
}

Bytes encode(const Value& value) {
  Bytes out;
  encode_into(out, value);
  return out;
}

}  // namespace sshpk::cbor
