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

#ifndef PRIVAGG_AFE_H_
#define PRIVAGG_AFE_H_

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "privagg/circuit.h"
#include "privagg/field.h"
#include "privagg/prg.h"

namespace privagg {

enum class AfeType {
  kSum,
  kMean,
  kVariance,
  kBoolOr,
  kBoolAnd,
  kMinMaxExact,
  kMinMaxApprox,
  kFreqCount,
  kCountMin,
  kMostPopular,
  kLinReg,
  kRSquared,
};

// Parameters for every kind; each kind reads only its own fields.
struct AfeKind {
  AfeType type = AfeType::kSum;
  uint32_t bits = 0;       // b: sum, mean, variance, popular, linreg, rsquared
  uint32_t lambda = 0;     // or, and
  uint64_t range = 0;      // B: minmax, approx, freq
  bool is_max = false;     // minmax, approx
  uint64_t factor = 2;     // c: approx
  double epsilon = 0.1;    // countmin
  double delta = 0.05;     // countmin
  uint64_t seed = 0;       // countmin row hashes
  uint32_t dim = 1;        // d: linreg
  uint32_t frac_bits = 0;  // linreg
  bool is_signed = false;  // linreg
  std::vector<int64_t> model;  // rsquared: m0, m1, ..., md

  friend bool operator==(const AfeKind&, const AfeKind&) = default;
};

// Canonical text: "<name> key=value ...", e.g. "sum b=4",
// "countmin eps=0.1 delta=0.05 seed=7", "rsquared coeffs=1,2 b=4".
absl::StatusOr<AfeKind> ParseAfeKind(std::string_view text);
std::string FormatAfeKind(const AfeKind& kind);
std::string_view AfeTypeName(AfeType type);

// Domain values:
//   uint64_t               sum, mean, variance, or, and, minmax, approx, freq,
//                          countmin
//   std::string            popular ('0'/'1' string, character i is bit i)
//   std::vector<double>    linreg (x_1, ..., x_d, y)
//   std::vector<uint64_t>  rsquared (x_1, ..., x_d, y)
using AfeValue = std::variant<uint64_t, std::string, std::vector<double>,
                              std::vector<uint64_t>>;

// Literal grammar: integers, bit strings, comma-separated tuples.
absl::StatusOr<AfeValue> ParseAfeValue(const AfeKind& kind,
                                       std::string_view literal);
std::string FormatAfeValue(const AfeValue& value);

struct SumResult {
  mpz_class sum;
  friend bool operator==(const SumResult&, const SumResult&) = default;
};
struct MeanResult {
  mpq_class mean;
  friend bool operator==(const MeanResult& a, const MeanResult& b) {
    return a.mean == b.mean;
  }
};
struct VarianceResult {
  mpq_class mean;
  mpq_class variance;
  friend bool operator==(const VarianceResult& a, const VarianceResult& b) {
    return a.mean == b.mean && a.variance == b.variance;
  }
};
struct BoolResult {
  bool value = false;
  friend bool operator==(const BoolResult&, const BoolResult&) = default;
};
// Empty when no client contributed.
struct MinMaxResult {
  std::optional<uint64_t> value;
  friend bool operator==(const MinMaxResult&, const MinMaxResult&) = default;
};
// The extreme value lies in [lo, hi); estimate = lo.
struct ApproxResult {
  std::optional<uint64_t> lo;
  std::optional<uint64_t> hi;
  friend bool operator==(const ApproxResult&, const ApproxResult&) = default;
};
struct CountsResult {
  std::vector<uint64_t> counts;
  friend bool operator==(const CountsResult&, const CountsResult&) = default;
};
struct CountMinResult {
  uint32_t rows = 0;
  uint32_t width = 0;
  std::vector<uint64_t> table;  // row-major
  std::vector<uint64_t> hash_a;
  std::vector<uint64_t> hash_b;

  uint64_t Estimate(uint64_t item) const;
  friend bool operator==(const CountMinResult&,
                         const CountMinResult&) = default;
};
struct PopularResult {
  std::string bits;
  friend bool operator==(const PopularResult&, const PopularResult&) = default;
};
// coefficients c_0 (intercept), c_1..c_d on the original real scale.
struct LinRegResult {
  std::vector<mpq_class> coefficients;
  friend bool operator==(const LinRegResult& a, const LinRegResult& b) {
    return a.coefficients == b.coefficients;
  }
};
struct RSquaredResult {
  mpq_class r_squared;
  mpq_class mean_y;
  mpq_class variance_y;
  friend bool operator==(const RSquaredResult& a, const RSquaredResult& b) {
    return a.r_squared == b.r_squared && a.mean_y == b.mean_y &&
           a.variance_y == b.variance_y;
  }
};

using AggregateResult =
    std::variant<SumResult, MeanResult, VarianceResult, BoolResult,
                 MinMaxResult, ApproxResult, CountsResult, CountMinResult,
                 PopularResult, LinRegResult, RSquaredResult>;

// key=value rendering used in run summaries.
std::string FormatResult(const AggregateResult& result);

// Count-min dimensions and row hashes shared by encoder and decoder.
struct CountMinShape {
  uint32_t rows = 0;
  uint32_t width = 0;
  std::vector<uint64_t> hash_a;
  std::vector<uint64_t> hash_b;

  uint32_t Bucket(uint32_t row, uint64_t item) const;
};
CountMinShape MakeCountMinShape(const AfeKind& kind);

// Bin boundaries for MinMaxApprox: bin 0 = {0}, bin j = [c^(j-1), c^j)
// clipped to B.
std::vector<uint64_t> ApproxBinStarts(uint64_t range, uint64_t factor);

class Afe {
 public:
  // Validates parameters against the field. Instances are memoized per
  // (kind, modulus).
  static absl::StatusOr<std::shared_ptr<const Afe>> Create(const AfeKind& kind,
                                                           const Field& field);

  const AfeKind& kind() const { return kind_; }
  const Field& field() const { return field_; }
  const ValidCircuit& circuit() const { return *circuit_; }
  size_t encoding_length() const { return circuit_->input_count(); }
  size_t truncated_length() const { return truncated_length_; }

  // DomainError for values outside the kind's domain.
  absl::StatusOr<std::vector<FieldElement>> Encode(const AfeValue& value,
                                                   Csprng& rng) const;
  absl::StatusOr<std::vector<FieldElement>> Truncate(
      std::span<const FieldElement> encoding) const;
  // `sigma` is the field sum of n truncated encodings.
  absl::StatusOr<AggregateResult> Decode(std::span<const FieldElement> sigma,
                                         uint64_t n) const;

 private:
  Afe(const AfeKind& kind, const Field& field) : kind_(kind), field_(field) {}

  AfeKind kind_;
  Field field_;
  std::unique_ptr<ValidCircuit> circuit_;
  size_t truncated_length_ = 0;
};

}  // namespace privagg

#endif  // PRIVAGG_AFE_H_
