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

#include "privagg/polynomial.h"

#include <algorithm>
#include <bit>
#include <mutex>

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {
namespace {

constexpr size_t kNttThreshold = 32;

absl::Status CheckDistinct(const Field& field,
                           std::span<const FieldElement> domain) {
  std::vector<FieldElement> sorted;
  sorted.reserve(domain.size());
  for (FieldElement x : domain) {
    sorted.push_back(FieldElement{x.value % field.modulus()});
  }
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) {
    return Error(ErrorKind::kDuplicateDomainPoint,
                 absl::StrCat("domain point ", dup->value, " repeated"));
  }
  return absl::OkStatus();
}

// Inverts every element of `values` with a single field inversion. All inputs
// must be nonzero.
std::vector<FieldElement> BatchInverse(const Field& field,
                                       std::span<const FieldElement> values) {
  std::vector<FieldElement> prefix(values.size());
  FieldElement acc = field.One();
  for (size_t i = 0; i < values.size(); ++i) {
    prefix[i] = acc;
    acc = field.Mul(acc, values[i]);
  }
  FieldElement inv = field.Inverse(acc).value();
  std::vector<FieldElement> out(values.size());
  for (size_t i = values.size(); i-- > 0;) {
    out[i] = field.Mul(inv, prefix[i]);
    inv = field.Mul(inv, values[i]);
  }
  return out;
}

// Barycentric weights 1 / prod_{k != j} (x_j - x_k) for a distinct domain.
std::vector<FieldElement> BarycentricWeights(
    const Field& field, std::span<const FieldElement> domain) {
  std::vector<FieldElement> denominators(domain.size(), field.One());
  for (size_t j = 0; j < domain.size(); ++j) {
    for (size_t k = 0; k < domain.size(); ++k) {
      if (k == j) continue;
      denominators[j] =
          field.Mul(denominators[j], field.Sub(domain[j], domain[k]));
    }
  }
  return BatchInverse(field, denominators);
}

void Ntt(const Field& field, std::vector<FieldElement>& a, bool inverse) {
  const size_t n = a.size();
  const int log_n = std::countr_zero(n);
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int s = 1; s <= log_n; ++s) {
    const size_t len = size_t{1} << s;
    FieldElement w_len = field.RootOfUnity(s);
    if (inverse) w_len = field.Inverse(w_len).value();
    for (size_t i = 0; i < n; i += len) {
      FieldElement w = field.One();
      for (size_t j = 0; j < len / 2; ++j) {
        FieldElement u = a[i + j];
        FieldElement v = field.Mul(a[i + j + len / 2], w);
        a[i + j] = field.Add(u, v);
        a[i + j + len / 2] = field.Sub(u, v);
        w = field.Mul(w, w_len);
      }
    }
  }
  if (inverse) {
    FieldElement n_inv = field.Inverse(field.FromUint(n)).value();
    for (FieldElement& x : a) x = field.Mul(x, n_inv);
  }
}

}  // namespace

std::optional<size_t> Polynomial::Degree() const {
  for (size_t i = coefficients_.size(); i-- > 0;) {
    if (coefficients_[i].value != 0) return i;
  }
  return std::nullopt;
}

FieldElement Polynomial::Evaluate(const Field& field, FieldElement at) const {
  FieldElement acc = field.Zero();
  for (size_t i = coefficients_.size(); i-- > 0;) {
    acc = field.Add(field.Mul(acc, at), coefficients_[i]);
  }
  return acc;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  std::optional<size_t> da = a.Degree();
  if (da != b.Degree()) return false;
  if (!da.has_value()) return true;
  return std::equal(a.coefficients_.begin(), a.coefficients_.begin() + *da + 1,
                    b.coefficients_.begin());
}

Polynomial PolyMulSchoolbook(const Field& field, const Polynomial& a,
                             const Polynomial& b) {
  const auto& ac = a.coefficients();
  const auto& bc = b.coefficients();
  if (ac.empty() || bc.empty()) return Polynomial();
  std::vector<FieldElement> out(ac.size() + bc.size() - 1, field.Zero());
  for (size_t i = 0; i < ac.size(); ++i) {
    if (ac[i].value == 0) continue;
    for (size_t j = 0; j < bc.size(); ++j) {
      out[i + j] = field.Add(out[i + j], field.Mul(ac[i], bc[j]));
    }
  }
  return Polynomial(std::move(out));
}

absl::StatusOr<Polynomial> PolyMulNtt(const Field& field, const Polynomial& a,
                                      const Polynomial& b) {
  const auto& ac = a.coefficients();
  const auto& bc = b.coefficients();
  if (ac.empty() || bc.empty()) return Polynomial();
  const size_t out_len = ac.size() + bc.size() - 1;
  const size_t n = std::bit_ceil(out_len);
  if (std::countr_zero(n) > field.two_adicity()) {
    return Error(ErrorKind::kInvalidInput,
                 absl::StrCat("product length ", out_len,
                              " exceeds the field's 2-adic subgroup"));
  }
  std::vector<FieldElement> fa(ac.begin(), ac.end());
  std::vector<FieldElement> fb(bc.begin(), bc.end());
  fa.resize(n, field.Zero());
  fb.resize(n, field.Zero());
  Ntt(field, fa, false);
  Ntt(field, fb, false);
  for (size_t i = 0; i < n; ++i) fa[i] = field.Mul(fa[i], fb[i]);
  Ntt(field, fa, true);
  fa.resize(out_len);
  return Polynomial(std::move(fa));
}

Polynomial PolyMul(const Field& field, const Polynomial& a,
                   const Polynomial& b) {
  const size_t smaller =
      std::min(a.coefficients().size(), b.coefficients().size());
  if (smaller >= kNttThreshold) {
    absl::StatusOr<Polynomial> fast = PolyMulNtt(field, a, b);
    if (fast.ok()) return *std::move(fast);
  }
  return PolyMulSchoolbook(field, a, b);
}

absl::StatusOr<Polynomial> Interpolate(const Field& field,
                                       std::span<const FieldElement> domain,
                                       std::span<const FieldElement> values) {
  if (domain.size() != values.size()) {
    return Error(ErrorKind::kLengthMismatch,
                 absl::StrCat(domain.size(), " domain points but ",
                              values.size(), " values"));
  }
  PRIVAGG_RETURN_IF_ERROR(CheckDistinct(field, domain));
  const size_t n = domain.size();
  if (n == 0) return Polynomial();

  // master(t) = prod_j (t - x_j), degree n.
  std::vector<FieldElement> master(n + 1, field.Zero());
  master[0] = field.One();
  for (size_t j = 0; j < n; ++j) {
    for (size_t i = j + 2; i-- > 0;) {
      FieldElement shifted = i > 0 ? master[i - 1] : field.Zero();
      master[i] = field.Sub(shifted, field.Mul(master[i], domain[j]));
    }
  }

  std::vector<FieldElement> weights = BarycentricWeights(field, domain);
  std::vector<FieldElement> out(n, field.Zero());
  std::vector<FieldElement> quotient(n);
  for (size_t j = 0; j < n; ++j) {
    FieldElement scale = field.Mul(values[j], weights[j]);
    if (scale.value == 0) continue;
    // master / (t - x_j) by synthetic division from the top.
    FieldElement carry = field.Zero();
    for (size_t i = n; i-- > 0;) {
      carry = field.Add(master[i + 1], field.Mul(carry, domain[j]));
      quotient[i] = carry;
    }
    for (size_t i = 0; i < n; ++i) {
      out[i] = field.Add(out[i], field.Mul(scale, quotient[i]));
    }
  }
  return Polynomial(std::move(out));
}

absl::StatusOr<LagrangeRow> LagrangeCoefficients(
    const Field& field, std::span<const FieldElement> domain, FieldElement r) {
  PRIVAGG_RETURN_IF_ERROR(CheckDistinct(field, domain));
  LagrangeRow row{std::vector<FieldElement>(domain.begin(), domain.end()), r,
                  std::vector<FieldElement>(domain.size(), field.Zero())};
  auto hit = std::find(domain.begin(), domain.end(), r);
  if (hit != domain.end()) {
    row.coeffs[hit - domain.begin()] = field.One();
    return row;
  }
  std::vector<FieldElement> weights = BarycentricWeights(field, domain);
  std::vector<FieldElement> gaps(domain.size());
  FieldElement vanishing = field.One();
  for (size_t j = 0; j < domain.size(); ++j) {
    gaps[j] = field.Sub(r, domain[j]);
    vanishing = field.Mul(vanishing, gaps[j]);
  }
  std::vector<FieldElement> gap_inv = BatchInverse(field, gaps);
  for (size_t j = 0; j < domain.size(); ++j) {
    row.coeffs[j] = field.Mul(field.Mul(weights[j], vanishing), gap_inv[j]);
  }
  return row;
}

LagrangeRow ConsecutiveLagrangeRow(const Field& field, size_t size,
                                   FieldElement r) {
  LagrangeRow row{ConsecutiveDomain(field, size), r,
                  std::vector<FieldElement>(size, field.Zero())};
  if (size == 0) return row;
  if (r.value < size) {
    row.coeffs[r.value] = field.One();
    return row;
  }
  // w_j = (-1)^(n-1-j) / (j! (n-1-j)!).
  std::vector<FieldElement> factorial(size);
  factorial[0] = field.One();
  for (size_t i = 1; i < size; ++i) {
    factorial[i] = field.Mul(factorial[i - 1], field.FromUint(i));
  }
  std::vector<FieldElement> denominators(size);
  std::vector<FieldElement> gaps(size);
  FieldElement vanishing = field.One();
  for (size_t j = 0; j < size; ++j) {
    denominators[j] = field.Mul(factorial[j], factorial[size - 1 - j]);
    gaps[j] = field.Sub(r, field.FromUint(j));
    vanishing = field.Mul(vanishing, gaps[j]);
  }
  std::vector<FieldElement> all(denominators);
  all.insert(all.end(), gaps.begin(), gaps.end());
  std::vector<FieldElement> inv = BatchInverse(field, all);
  for (size_t j = 0; j < size; ++j) {
    FieldElement c = field.Mul(field.Mul(inv[j], inv[size + j]), vanishing);
    if ((size - 1 - j) % 2 == 1) c = field.Neg(c);
    row.coeffs[j] = c;
  }
  return row;
}

absl::StatusOr<FieldElement> InterpolateEval(
    const Field& field, const LagrangeRow& row,
    std::span<const FieldElement> values) {
  if (values.size() != row.coeffs.size()) {
    return Error(ErrorKind::kLengthMismatch,
                 absl::StrCat("row has ", row.coeffs.size(), " points but ",
                              values.size(), " values given"));
  }
  FieldElement acc = field.Zero();
  for (size_t t = 0; t < values.size(); ++t) {
    acc = field.Add(acc, field.Mul(row.coeffs[t], values[t]));
  }
  return acc;
}

std::vector<FieldElement> ConsecutiveDomain(const Field& field, size_t size) {
  std::vector<FieldElement> domain(size);
  for (size_t i = 0; i < size; ++i) domain[i] = field.FromUint(i);
  return domain;
}

std::vector<FieldElement> ExtendConsecutive(
    const Field& field, std::span<const FieldElement> values, size_t total) {
  std::vector<FieldElement> out(values.begin(), values.end());
  const size_t n = values.size();
  if (n == 0 || total <= n) {
    out.resize(std::min(total, n));
    return out;
  }
  // diag[k] = k-th backward difference at the last known point.
  std::vector<FieldElement> work(values.begin(), values.end());
  std::vector<FieldElement> diag(n);
  diag[0] = values[n - 1];
  for (size_t k = 1; k < n; ++k) {
    for (size_t i = 0; i + k < n; ++i) {
      work[i] = field.Sub(work[i + 1], work[i]);
    }
    diag[k] = work[n - 1 - k];
  }
  out.reserve(total);
  while (out.size() < total) {
    for (size_t k = n - 1; k-- > 0;) diag[k] = field.Add(diag[k], diag[k + 1]);
    out.push_back(diag[0]);
  }
  return out;
}

std::shared_ptr<const LagrangeRow> LagrangeRowCache::Get(const Field& field,
                                                         size_t size,
                                                         FieldElement r) {
  const Key key{field.modulus(), size, r.value};
  {
    std::shared_lock lock(mu_);
    auto it = rows_.find(key);
    if (it != rows_.end()) return it->second;
  }
  auto row = std::make_shared<const LagrangeRow>(
      ConsecutiveLagrangeRow(field, size, r));
  std::unique_lock lock(mu_);
  if (rows_.size() >= max_entries_) rows_.clear();
  rows_.emplace(key, row);
  return row;
}

}  // namespace privagg
