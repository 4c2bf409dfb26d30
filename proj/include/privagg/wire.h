/*
 * Copyright 2026 The privagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PRIVAGG_WIRE_H_
#define PRIVAGG_WIRE_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "privagg/field.h"

namespace privagg {

// Big-endian integer writers used by every wire format in the project.
void AppendU32BE(uint32_t v, std::string* out);
void AppendU64BE(uint64_t v, std::string* out);

// Sequential reader over a byte buffer. All reads fail with Truncated when
// the buffer runs out.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  absl::StatusOr<uint8_t> ReadU8();
  absl::StatusOr<uint32_t> ReadU32BE();
  absl::StatusOr<uint64_t> ReadU64BE();
  absl::StatusOr<std::string_view> ReadBytes(size_t n);
  absl::StatusOr<FieldElement> ReadElement(const Field& field);

  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  size_t pos_ = 0;
};

std::string HexEncode(std::string_view bytes);

}  // namespace privagg

#endif  // PRIVAGG_WIRE_H_
