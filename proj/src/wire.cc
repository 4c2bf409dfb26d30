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

#include "privagg/wire.h"

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {

void AppendU32BE(uint32_t v, std::string* out) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out->push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

void AppendU64BE(uint64_t v, std::string* out) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out->push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

absl::StatusOr<std::string_view> ByteReader::ReadBytes(size_t n) {
  if (remaining() < n) {
    return Error(ErrorKind::kTruncated,
                 absl::StrCat("wanted ", n, " bytes at offset ", pos_,
                              ", only ", remaining(), " left"));
  }
  std::string_view out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

absl::StatusOr<uint8_t> ByteReader::ReadU8() {
  PRIVAGG_ASSIGN_OR_RETURN(std::string_view b, ReadBytes(1));
  return static_cast<uint8_t>(b[0]);
}

absl::StatusOr<uint32_t> ByteReader::ReadU32BE() {
  PRIVAGG_ASSIGN_OR_RETURN(std::string_view b, ReadBytes(4));
  uint32_t v = 0;
  for (char c : b) v = (v << 8) | static_cast<uint8_t>(c);
  return v;
}

absl::StatusOr<uint64_t> ByteReader::ReadU64BE() {
  PRIVAGG_ASSIGN_OR_RETURN(std::string_view b, ReadBytes(8));
  uint64_t v = 0;
  for (char c : b) v = (v << 8) | static_cast<uint8_t>(c);
  return v;
}

absl::StatusOr<FieldElement> ByteReader::ReadElement(const Field& field) {
  PRIVAGG_ASSIGN_OR_RETURN(std::string_view b,
                           ReadBytes(field.element_width_bytes()));
  return field.ParseElement(b);
}

std::string HexEncode(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (char c : bytes) {
    uint8_t b = static_cast<uint8_t>(c);
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

}  // namespace privagg
