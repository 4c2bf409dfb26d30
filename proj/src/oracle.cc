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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "privagg/harness.h"
#include "privagg/status.h"

namespace privagg {
namespace {

absl::Status Domain(std::string_view what) {
  return Error(ErrorKind::kDomainError, std::string(what));
}

absl::Status Empty() { return Error(ErrorKind::kEmptyAggregate, "no inputs"); }

absl::StatusOr<std::vector<uint64_t>> Scalars(std::span<const AfeValue> in,
                                              uint64_t limit) {
  std::vector<uint64_t> out;
  for (const AfeValue& v : in) {
    const auto* x = std::get_if<uint64_t>(&v);
    if (x == nullptr) return Domain("expected an integer");
    if (limit != 0 && *x >= limit) {
      return Domain(absl::StrCat(*x, " outside [0, ", limit, ")"));
    }
    out.push_back(*x);
  }
  return out;
}

mpq_class Ratio(const mpz_class& num, uint64_t den) {
  mpq_class q(num, mpz_class(std::to_string(den)));
  q.canonicalize();
  return q;
}

mpz_class Big(uint64_t v) { return mpz_class(std::to_string(v)); }

// Gauss-Jordan elimination with exact pivots.
absl::StatusOr<std::vector<mpq_class>> Solve(
    std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) {
      return Error(ErrorKind::kSingularSystem, "normal equations are singular");
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const mpq_class inv = 1 / a[col][col];
    for (size_t k = 0; k < n; ++k) a[col][k] *= inv;
    b[col] *= inv;
    for (size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const mpq_class factor = a[row][col];
      for (size_t k = 0; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  return b;
}

absl::StatusOr<AggregateResult> LinRegOracle(const AfeKind& kind,
                                             std::span<const AfeValue> in) {
  const uint32_t d = kind.dim;
  const double lo = kind.is_signed ? -std::ldexp(1.0, kind.bits - 1) : 0.0;
  const double hi = std::ldexp(1.0, kind.bits) + lo;
  std::vector<std::vector<mpq_class>> a(d + 1, std::vector<mpq_class>(d + 1));
  std::vector<mpq_class> rhs(d + 1);
  for (const AfeValue& v : in) {
    const auto* row = std::get_if<std::vector<double>>(&v);
    if (row == nullptr || row->size() != d + 1) {
      return Domain(absl::StrCat("expected ", d + 1, " components"));
    }
    std::vector<mpq_class> z{1};
    for (double c : *row) {
      const double scaled = std::nearbyint(std::ldexp(c, kind.frac_bits));
      if (!std::isfinite(c) || scaled < lo || scaled >= hi) {
        return Domain("value outside the fixed-point range");
      }
      z.push_back(mpq_class(c));
    }
    const mpq_class y = z.back();
    z.pop_back();
    for (uint32_t i = 0; i <= d; ++i) {
      for (uint32_t j = 0; j <= d; ++j) a[i][j] += z[i] * z[j];
      rhs[i] += z[i] * y;
    }
  }
  if (in.empty()) return Empty();
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<mpq_class> c,
                           Solve(std::move(a), std::move(rhs)));
  return LinRegResult{std::move(c)};
}

absl::StatusOr<AggregateResult> RSquaredOracle(const AfeKind& kind,
                                               std::span<const AfeValue> in) {
  const size_t d = kind.model.size() - 1;
  std::vector<mpq_class> ys;
  mpq_class ss_res = 0;
  for (const AfeValue& v : in) {
    const auto* row = std::get_if<std::vector<uint64_t>>(&v);
    if (row == nullptr || row->size() != d + 1) {
      return Domain(absl::StrCat("expected ", d + 1, " components"));
    }
    for (uint64_t c : *row) {
      if (c >> kind.bits) return Domain("component needs too many bits");
    }
    mpq_class y(Big((*row)[d]));
    mpq_class pred(static_cast<long>(kind.model[0]));
    for (size_t i = 0; i < d; ++i) {
      pred += mpq_class(static_cast<long>(kind.model[i + 1])) *
              mpq_class(Big((*row)[i]));
    }
    ss_res += (y - pred) * (y - pred);
    ys.push_back(y);
  }
  if (ys.empty()) return Empty();
  mpq_class mean = 0;
  for (const mpq_class& y : ys) mean += y;
  mean /= mpq_class(Big(ys.size()));
  mpq_class ss_tot = 0;
  for (const mpq_class& y : ys) ss_tot += (y - mean) * (y - mean);
  if (ss_tot == 0) return Domain("y has zero variance");
  RSquaredResult out;
  out.r_squared = 1 - ss_res / ss_tot;
  out.mean_y = mean;
  out.variance_y = ss_tot / mpq_class(Big(ys.size()));
  return out;
}

}  // namespace

absl::StatusOr<AggregateResult> PlaintextOracle(
    const AfeKind& kind, std::span<const AfeValue> inputs) {
  const uint64_t n = inputs.size();
  const uint64_t bits_limit = kind.bits >= 64 ? 0 : uint64_t{1} << kind.bits;
  switch (kind.type) {
    case AfeType::kSum:
    case AfeType::kMean: {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<uint64_t> xs,
                               Scalars(inputs, bits_limit));
      mpz_class sum = 0;
      for (uint64_t x : xs) sum += Big(x);
      if (kind.type == AfeType::kSum) return SumResult{sum};
      if (n == 0) return Empty();
      return MeanResult{Ratio(sum, n)};
    }
    case AfeType::kVariance: {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<uint64_t> xs,
                               Scalars(inputs, bits_limit));
      if (n == 0) return Empty();
      mpz_class sum = 0;
      for (uint64_t x : xs) sum += Big(x);
      const mpq_class mean = Ratio(sum, n);
      mpq_class var = 0;
      for (uint64_t x : xs)
        var += (mpq_class(Big(x)) - mean) * (mpq_class(Big(x)) - mean);
      var /= mpq_class(Big(n));
      return VarianceResult{mean, var};
    }
    case AfeType::kBoolOr:
    case AfeType::kBoolAnd: {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<uint64_t> xs, Scalars(inputs, 2));
      if (kind.type == AfeType::kBoolOr) {
        return BoolResult{std::any_of(xs.begin(), xs.end(),
                                      [](uint64_t x) { return x == 1; })};
      }
      return BoolResult{
          std::all_of(xs.begin(), xs.end(), [](uint64_t x) { return x == 1; })};
    }
    case AfeType::kMinMaxExact:
    case AfeType::kMinMaxApprox: {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<uint64_t> xs,
                               Scalars(inputs, kind.range));
      std::optional<uint64_t> best;
      if (!xs.empty()) {
        best = kind.is_max ? *std::max_element(xs.begin(), xs.end())
                           : *std::min_element(xs.begin(), xs.end());
      }
      if (kind.type == AfeType::kMinMaxExact) return MinMaxResult{best};
      if (!best.has_value()) return ApproxResult{};
      std::vector<uint64_t> starts = ApproxBinStarts(kind.range, kind.factor);
      size_t bin = 0;
      while (bin + 1 < starts.size() && starts[bin + 1] <= *best) ++bin;
      const uint64_t hi =
          bin + 1 < starts.size() ? starts[bin + 1] : kind.range;
      return ApproxResult{starts[bin], hi};
    }
    case AfeType::kFreqCount: {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<uint64_t> xs,
                               Scalars(inputs, kind.range));
      CountsResult out;
      out.counts.assign(kind.range, 0);
      for (uint64_t x : xs) ++out.counts[x];
      return out;
    }
    case AfeType::kCountMin: {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<uint64_t> xs, Scalars(inputs, 0));
      CountMinShape shape = MakeCountMinShape(kind);
      CountMinResult out;
      out.rows = shape.rows;
      out.width = shape.width;
      out.hash_a = shape.hash_a;
      out.hash_b = shape.hash_b;
      out.table.assign(size_t{shape.rows} * shape.width, 0);
      for (uint64_t x : xs) {
        for (uint32_t r = 0; r < shape.rows; ++r) {
          ++out.table[size_t{r} * shape.width + shape.Bucket(r, x)];
        }
      }
      return out;
    }
    case AfeType::kMostPopular: {
      std::vector<uint64_t> ones(kind.bits, 0);
      for (const AfeValue& v : inputs) {
        const auto* s = std::get_if<std::string>(&v);
        if (s == nullptr || s->size() != kind.bits ||
            s->find_first_not_of("01") != std::string::npos) {
          return Domain(absl::StrCat("expected a ", kind.bits, "-bit string"));
        }
        for (size_t i = 0; i < s->size(); ++i) ones[i] += (*s)[i] == '1';
      }
      if (n == 0) return Empty();
      PopularResult out;
      for (size_t i = 0; i < ones.size(); ++i) {
        if (2 * ones[i] == n) {
          return Error(ErrorKind::kNoMajority, absl::StrCat("tie at bit ", i));
        }
        out.bits.push_back(2 * ones[i] > n ? '1' : '0');
      }
      return out;
    }
    case AfeType::kLinReg:
      return LinRegOracle(kind, inputs);
    case AfeType::kRSquared:
      return RSquaredOracle(kind, inputs);
  }
  return Error(ErrorKind::kConfigError, "unknown kind");
}

}  // namespace privagg
