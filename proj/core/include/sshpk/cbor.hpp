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

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sshpk/bytes.hpp"

// Minimal CBOR (RFC 8949) subset used by authenticator messages: integers,
// byte and text strings, arrays, maps, and the simple values false/true/null.
// Only definite lengths are accepted and duplicate map keys are rejected.
namespace sshpk::cbor {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Value;

using Array = std::vector<Value>;
using Map = std::vector<std::pair<Value, Value>>;

enum class Simple : std::uint8_t { kFalse = 20, kTrue = 21, kNull = 22 };

class Value {
 public:
  Value() : v_(Simple::kNull) {}
  Value(std::int64_t i) : v_(i) {}
  Value(int i) : v_(std::int64_t{i}) {}
  Value(Bytes b) : v_(std::move(b)) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(Array a) : v_(std::make_shared<Array>(std::move(a))) {}
  Value(Map m) : v_(std::make_shared<Map>(std::move(m))) {}
  Value(bool b) : v_(b ? Simple::kTrue : Simple::kFalse) {}
  Value(Simple s) : v_(s) {}

  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_bytes() const { return std::holds_alternative<Bytes>(v_); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_array() const { return std::holds_alternative<std::shared_ptr<Array>>(v_); }
  bool is_map() const { return std::holds_alternative<std::shared_ptr<Map>>(v_); }
  bool is_simple() const { return std::holds_alternative<Simple>(v_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  const Bytes& as_bytes() const { return std::get<Bytes>(v_); }
  const std::string& as_text() const { return std::get<std::string>(v_); }
  const Array& as_array() const { return *std::get<std::shared_ptr<Array>>(v_); }
  const Map& as_map() const { return *std::get<std::shared_ptr<Map>>(v_); }
  Simple as_simple() const { return std::get<Simple>(v_); }

  // Map lookup; nullptr when absent or when this value is not a map.
  const Value* find(const Value& key) const;

  friend bool operator==(const Value& a, const Value& b);

 private:
  std::variant<std::int64_t, Bytes, std::string, std::shared_ptr<Array>,
               std::shared_ptr<Map>, Simple>
      v_;
};

struct Decoded {
  Value value;
  std::size_t consumed;
};

// Decodes one item from the front of `data`; trailing bytes are left alone.
Decoded decode_prefix(ByteView data);

// Decodes exactly one item spanning all of `data`.
Value decode(ByteView data);

// Encodes with shortest-form heads; map entries keep insertion order.
Bytes encode(const Value& value);

}  // namespace sshpk::cbor
