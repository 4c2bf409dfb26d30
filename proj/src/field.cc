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

#include "privagg/field.h"

#include <bit>

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {
namespace {

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, m);
    base = MulMod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

std::ostream& operator<<(std::ostream& os, FieldElement e) {
  return os << e.value;
}

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                         23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                     29ULL, 31ULL, 37ULL}) {
    uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Field::Field(uint64_t p) : p_(p) {
  two_adicity_ = std::countr_zero(p - 1);
  bit_length_ = 64 - std::countl_zero(p);
  width_bytes_ = (bit_length_ + 7) / 8;
}

absl::StatusOr<Field> Field::Create(uint64_t modulus) {
  if (modulus <= 2 || !IsPrime(modulus)) {
    return Error(ErrorKind::kConfigError,
                 absl::StrCat("modulus ", modulus, " is not an odd prime"));
  }
  return Field(modulus);
}

const Field& Field::Default() {
  static const Field* const kField = new Field(kGoldilocksModulus);
  return *kField;
}

FieldElement Field::FromInt(int64_t v) const {
  if (v >= 0) return FromUint(static_cast<uint64_t>(v));
  // -(v) may not fit for INT64_MIN; go through unsigned negation.
  uint64_t magnitude = ~static_cast<uint64_t>(v) + 1;
  return Neg(FromUint(magnitude));
}

FieldElement Field::Pow(FieldElement base, uint64_t exponent) const {
  return FieldElement{PowMod(base.value, exponent, p_)};
}

absl::StatusOr<FieldElement> Field::Inverse(FieldElement a) const {
  if (a.value == 0) {
    return Error(ErrorKind::kZeroInverse, "zero has no inverse");
  }
  // Extended Euclid over signed 128-bit to stay exact for p near 2^64.
  __int128 t = 0, new_t = 1;
  __int128 r = p_, new_r = a.value;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += p_;
  return FieldElement{static_cast<uint64_t>(t)};
}

FieldElement Field::RootOfUnity(int log_order) const {
  // Any quadratic non-residue z gives z^((p-1)/2^v) of order exactly 2^v.
  uint64_t z = 2;
  while (PowMod(z, (p_ - 1) / 2, p_) != p_ - 1) ++z;
  uint64_t root = PowMod(z, (p_ - 1) >> two_adicity_, p_);
  for (int i = log_order; i < two_adicity_; ++i) root = MulMod(root, root, p_);
  return FieldElement{root};
}

void Field::AppendElement(FieldElement e, std::string* out) const {
  uint64_t v = e.value;
  for (int i = 0; i < width_bytes_; ++i) {
    out->push_back(static_cast<char>(v & 0xFF));
    v >>= 8;
  }
}

absl::StatusOr<FieldElement> Field::ParseElement(std::string_view bytes) const {
  if (bytes.size() != static_cast<size_t>(width_bytes_)) {
    return Error(ErrorKind::kTruncated,
                 absl::StrCat("field element needs ", width_bytes_,
                              " bytes, got ", bytes.size()));
  }
  uint64_t v = 0;
  for (int i = width_bytes_ - 1; i >= 0; --i) {
    v = (v << 8) | static_cast<uint8_t>(bytes[i]);
  }
  if (v >= p_) {
    return Error(ErrorKind::kMalformedShare,
                 absl::StrCat("non-canonical field element ", v));
  }
  return FieldElement{v};
}

}  // namespace privagg
