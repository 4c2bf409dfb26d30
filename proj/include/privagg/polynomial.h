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

#ifndef PRIVAGG_POLYNOMIAL_H_
#define PRIVAGG_POLYNOMIAL_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "privagg/field.h"

namespace privagg {

// Dense polynomial, lowest-degree coefficient first. Trailing zeros are
// allowed; Degree() ignores them.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<FieldElement> coefficients)
      : coefficients_(std::move(coefficients)) {}

  const std::vector<FieldElement>& coefficients() const {
    return coefficients_;
  }

  // Index of the last nonzero coefficient; nullopt for the zero polynomial.
  std::optional<size_t> Degree() const;
  bool IsZero() const { return !Degree().has_value(); }

  FieldElement Evaluate(const Field& field, FieldElement at) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  std::vector<FieldElement> coefficients_;
};

// Multiplication. PolyMul picks the NTT path when the field's two-adicity
// admits the product length and the inputs are large enough to benefit; the
// result is coefficient-identical to PolyMulSchoolbook either way.
Polynomial PolyMul(const Field& field, const Polynomial& a,
                   const Polynomial& b);
Polynomial PolyMulSchoolbook(const Field& field, const Polynomial& a,
                             const Polynomial& b);
// Fails with InvalidInput when the product length exceeds 2^two_adicity.
absl::StatusOr<Polynomial> PolyMulNtt(const Field& field, const Polynomial& a,
                                      const Polynomial& b);

// Unique polynomial of degree < |domain| through (domain[i], values[i]).
absl::StatusOr<Polynomial> Interpolate(const Field& field,
                                       std::span<const FieldElement> domain,
                                       std::span<const FieldElement> values);

// Precomputed weights for evaluating, at `target`, the interpolant through
// any values on `domain`: P(target) = sum_t coeffs[t] * P(domain[t]).
struct LagrangeRow {
  std::vector<FieldElement> domain;
  FieldElement target;
  std::vector<FieldElement> coeffs;
};

absl::StatusOr<LagrangeRow> LagrangeCoefficients(
    const Field& field, std::span<const FieldElement> domain, FieldElement r);

// Row for the consecutive domain {0, 1, ..., size-1}; O(size) inversions
// instead of O(size^2) products.
LagrangeRow ConsecutiveLagrangeRow(const Field& field, size_t size,
                                   FieldElement r);

// LengthMismatch when |values| != |row.domain|.
absl::StatusOr<FieldElement> InterpolateEval(
    const Field& field, const LagrangeRow& row,
    std::span<const FieldElement> values);

// {0, 1, ..., size-1} as field elements.
std::vector<FieldElement> ConsecutiveDomain(const Field& field, size_t size);

// Given P(0..n-1) for deg P < n, returns P(0..total-1) by extending the
// forward-difference table. Additions only.
std::vector<FieldElement> ExtendConsecutive(
    const Field& field, std::span<const FieldElement> values, size_t total);

// Read-mostly cache of consecutive-domain rows keyed by (field, domain size,
// r).
class LagrangeRowCache {
 public:
  explicit LagrangeRowCache(size_t max_entries = 64)
      : max_entries_(max_entries) {}

  std::shared_ptr<const LagrangeRow> Get(const Field& field, size_t size,
                                         FieldElement r);

 private:
  using Key = std::tuple<uint64_t, size_t, uint64_t>;
  size_t max_entries_;
  mutable std::shared_mutex mu_;
  std::map<Key, std::shared_ptr<const LagrangeRow>> rows_;
};

}  // namespace privagg

#endif  // PRIVAGG_POLYNOMIAL_H_
