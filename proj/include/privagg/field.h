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

#ifndef PRIVAGG_FIELD_H_
#define PRIVAGG_FIELD_H_

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace privagg {

// An element of a prime field, always held in canonical form [0, p). The
// modulus is not stored; arithmetic goes through the owning Field.
struct FieldElement {
  uint64_t value = 0;

  friend bool operator==(FieldElement, FieldElement) = default;
  friend auto operator<=>(FieldElement, FieldElement) = default;
};

std::ostream& operator<<(std::ostream& os, FieldElement e);

// Arithmetic in F_p for an odd prime p < 2^64.
//
// Elements travel on the wire as fixed-width little-endian integers of
// element_width_bytes() bytes.
class Field {
 public:
  // 2^64 - 2^32 + 1. Two-adicity 32, fits one machine word.
  static constexpr uint64_t kGoldilocksModulus = 0xFFFFFFFF00000001ULL;
  // 15 * 2^27 + 1.
  static constexpr uint64_t kBabyBearModulus = 2013265921ULL;

  // Fails with ConfigError unless `modulus` is an odd prime.
  static absl::StatusOr<Field> Create(uint64_t modulus);

  // The production field (Goldilocks).
  static const Field& Default();

  uint64_t modulus() const { return p_; }
  int two_adicity() const { return two_adicity_; }
  int bit_length() const { return bit_length_; }
  int element_width_bytes() const { return width_bytes_; }

  FieldElement Zero() const { return FieldElement{0}; }
  FieldElement One() const { return FieldElement{1}; }

  // Reduces an arbitrary integer into the field.
  FieldElement FromUint(uint64_t v) const { return FieldElement{v % p_}; }
  FieldElement FromInt(int64_t v) const;

  FieldElement Add(FieldElement a, FieldElement b) const {
    uint64_t s = a.value + b.value;
    if (s < a.value || s >= p_) s -= p_;
    return FieldElement{s};
  }
  FieldElement Sub(FieldElement a, FieldElement b) const {
    return FieldElement{a.value >= b.value ? a.value - b.value
                                           : a.value + (p_ - b.value)};
  }
  FieldElement Neg(FieldElement a) const {
    return FieldElement{a.value == 0 ? 0 : p_ - a.value};
  }
  FieldElement Mul(FieldElement a, FieldElement b) const {
    return FieldElement{static_cast<uint64_t>(
        (static_cast<unsigned __int128>(a.value) * b.value) % p_)};
  }
  FieldElement Pow(FieldElement base, uint64_t exponent) const;

  // ZeroInverse when a == 0.
  absl::StatusOr<FieldElement> Inverse(FieldElement a) const;

  // Generator of the multiplicative subgroup of order 2^log_order. Requires
  // log_order <= two_adicity().
  FieldElement RootOfUnity(int log_order) const;

  bool IsCanonical(uint64_t v) const { return v < p_; }

  // Appends the fixed-width little-endian encoding of `e`.
  void AppendElement(FieldElement e, std::string* out) const;
  // Parses exactly element_width_bytes() bytes; rejects non-canonical values.
  absl::StatusOr<FieldElement> ParseElement(std::string_view bytes) const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.p_ == b.p_;
  }

 private:
  explicit Field(uint64_t p);

  uint64_t p_;
  int two_adicity_;
  int bit_length_;
  int width_bytes_;
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool IsPrime(uint64_t n);

}  // namespace privagg

#endif  // PRIVAGG_FIELD_H_
