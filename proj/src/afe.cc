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

#include "privagg/afe.h"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {

namespace {

using Terms = std::vector<std::pair<Wire, FieldElement>>;

mpz_class ToMpz(uint64_t v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

mpz_class Pow2(uint32_t k) {
  mpz_class out = 1;
  out <<= k;
  return out;
}

uint64_t SplitMix64(uint64_t* state) {
  uint64_t z = (*state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Bits of x, least significant first.
void AppendBits(const Field& field, uint64_t x, uint32_t bits,
                std::vector<FieldElement>* out) {
  for (uint32_t i = 0; i < bits; ++i) {
    out->push_back(field.FromUint((x >> i) & 1));
  }
}

// Bit checks on inputs [first, first+bits) and value = sum 2^i bit_i.
void AddRangeProof(CircuitBuilder& b, Wire value, size_t first, uint32_t bits) {
  const Field& field = b.field();
  Terms terms{{value, field.One()}};
  FieldElement pow = field.One();
  const FieldElement two = field.FromUint(2);
  for (uint32_t i = 0; i < bits; ++i) {
    Wire bit = b.Input(first + i);
    b.AssertBit(bit);
    terms.emplace_back(bit, field.Neg(pow));
    pow = field.Mul(pow, two);
  }
  b.AssertZero(std::move(terms), field.Zero());
}

// Each input in [first, first+count) is a bit and they sum to one.
void AddOneHot(CircuitBuilder& b, size_t first, size_t count) {
  const Field& field = b.field();
  Terms terms;
  for (size_t i = 0; i < count; ++i) {
    Wire bit = b.Input(first + i);
    b.AssertBit(bit);
    terms.emplace_back(bit, field.One());
  }
  b.AssertZero(std::move(terms), field.Neg(field.One()));
}

// beta_0 and beta_i - beta_(i-1) are bits and beta_(count-1) = 1, which pins
// beta to a unary step vector.
void AddUnary(CircuitBuilder& b, size_t count) {
  const Field& field = b.field();
  b.AssertBit(b.Input(0));
  for (size_t i = 1; i < count; ++i) {
    b.AssertBit(b.Sub(b.Input(i), b.Input(i - 1)));
  }
  b.AssertZero({{b.Input(count - 1), field.One()}}, field.Neg(field.One()));
}

size_t PairCount(uint32_t d) { return static_cast<size_t>(d) * (d + 1) / 2; }

// Largest absolute residual a model can produce on inputs below 2^b.
mpz_class ResidualBound(const AfeKind& kind) {
  mpz_class top = Pow2(kind.bits) - 1;
  mpz_class bound = top;
  for (size_t i = 0; i < kind.model.size(); ++i) {
    mpz_class m = kind.model[i];
    bound += abs(m) * (i == 0 ? mpz_class(1) : top);
  }
  return bound;
}

absl::Status CheckBelowModulus(const Field& field, const mpz_class& v,
                               std::string_view what) {
  if (v >= ToMpz(field.modulus())) {
    return Error(ErrorKind::kConfigError,
                 absl::StrCat(std::string(what), " does not fit field of size ",
                              field.modulus()));
  }
  return absl::OkStatus();
}

absl::Status CheckOverflow(const Field& field, uint64_t n,
                           const mpz_class& per_client) {
  if (ToMpz(n) * per_client >= ToMpz(field.modulus())) {
    return Error(
        ErrorKind::kOverflowRisk,
        absl::StrCat(n, " contributions may wrap modulo ", field.modulus()));
  }
  return absl::OkStatus();
}

absl::Status DomainErrorFor(const AfeKind& kind, std::string_view detail) {
  return Error(ErrorKind::kDomainError,
               absl::StrCat(std::string(AfeTypeName(kind.type)), ": ",
                            std::string(detail)));
}

template <typename T>
absl::StatusOr<T> Get(const AfeKind& kind, const AfeValue& value) {
  if (const T* v = std::get_if<T>(&value)) return *v;
  return DomainErrorFor(kind, "value has the wrong shape for this kind");
}

absl::Status ValidateKind(const AfeKind& kind, const Field& field) {
  auto config = [&](std::string_view msg) {
    return Error(ErrorKind::kConfigError,
                 absl::StrCat(std::string(AfeTypeName(kind.type)), ": ",
                              std::string(msg)));
  };
  switch (kind.type) {
    case AfeType::kSum:
    case AfeType::kMean:
      if (kind.bits < 1 || kind.bits > 62) return config("b out of range");
      return CheckBelowModulus(field, Pow2(kind.bits), "2^b");
    case AfeType::kVariance:
      if (kind.bits < 1 || kind.bits > 31) return config("b out of range");
      return CheckBelowModulus(field, Pow2(2 * kind.bits), "2^(2b)");
    case AfeType::kBoolOr:
    case AfeType::kBoolAnd:
      if (kind.lambda < 1 || kind.lambda > 4096) {
        return config("lambda out of range");
      }
      return absl::OkStatus();
    case AfeType::kMinMaxExact:
    case AfeType::kFreqCount:
      if (kind.range < 1 || kind.range > (1u << 20)) {
        return config("B out of range");
      }
      return CheckBelowModulus(field, ToMpz(kind.range), "B");
    case AfeType::kMinMaxApprox:
      if (kind.range < 1 || kind.factor < 2) {
        return config("need B >= 1 and c >= 2");
      }
      return absl::OkStatus();
    case AfeType::kCountMin:
      if (!(kind.epsilon > 0 && kind.epsilon < 1) ||
          !(kind.delta > 0 && kind.delta < 1)) {
        return config("eps and delta must lie in (0, 1)");
      }
      return absl::OkStatus();
    case AfeType::kMostPopular:
      if (kind.bits < 1 || kind.bits > 4096) return config("b out of range");
      return absl::OkStatus();
    case AfeType::kLinReg:
      if (kind.dim < 1 || kind.dim > 16) return config("d out of range");
      if (kind.bits < 1 || kind.bits > 31) return config("b out of range");
      if (kind.frac_bits >= kind.bits) return config("frac must be below b");
      return CheckBelowModulus(field, Pow2(2 * kind.bits), "2^(2b)");
    case AfeType::kRSquared: {
      if (kind.model.size() < 2) return config("need at least 2 coefficients");
      if (kind.bits < 1 || kind.bits > 31) return config("b out of range");
      mpz_class e = ResidualBound(kind);
      PRIVAGG_RETURN_IF_ERROR(
          CheckBelowModulus(field, Pow2(2 * kind.bits), "2^(2b)"));
      return CheckBelowModulus(field, e * e, "squared residual bound");
    }
  }
  return config("unknown kind");
}

std::unique_ptr<ValidCircuit> BuildCircuit(const AfeKind& kind,
                                           const Field& field,
                                           size_t* truncated) {
  auto finish = [](CircuitBuilder&& b) {
    return std::make_unique<ValidCircuit>(std::move(b).Build());
  };
  switch (kind.type) {
    case AfeType::kSum:
    case AfeType::kMean: {
      CircuitBuilder b(field, 1 + kind.bits);
      AddRangeProof(b, b.Input(0), 1, kind.bits);
      *truncated = 1;
      return finish(std::move(b));
    }
    case AfeType::kVariance: {
      CircuitBuilder b(field, 2 + kind.bits);
      AddRangeProof(b, b.Input(0), 2, kind.bits);
      Wire sq = b.Mul(b.Input(0), b.Input(0));
      b.AssertZero({{sq, field.One()}, {b.Input(1), field.Neg(field.One())}},
                   field.Zero());
      *truncated = 2;
      return finish(std::move(b));
    }
    case AfeType::kBoolOr:
    case AfeType::kBoolAnd: {
      *truncated = kind.lambda;
      return finish(CircuitBuilder(field, kind.lambda));
    }
    case AfeType::kMinMaxExact: {
      CircuitBuilder b(field, kind.range);
      AddUnary(b, kind.range);
      *truncated = kind.range;
      return finish(std::move(b));
    }
    case AfeType::kMinMaxApprox: {
      size_t bins = ApproxBinStarts(kind.range, kind.factor).size();
      CircuitBuilder b(field, bins);
      AddUnary(b, bins);
      *truncated = bins;
      return finish(std::move(b));
    }
    case AfeType::kFreqCount: {
      CircuitBuilder b(field, kind.range);
      AddOneHot(b, 0, kind.range);
      *truncated = kind.range;
      return finish(std::move(b));
    }
    case AfeType::kCountMin: {
      CountMinShape shape = MakeCountMinShape(kind);
      CircuitBuilder b(field, size_t{shape.rows} * shape.width);
      for (uint32_t r = 0; r < shape.rows; ++r) {
        AddOneHot(b, size_t{r} * shape.width, shape.width);
      }
      *truncated = size_t{shape.rows} * shape.width;
      return finish(std::move(b));
    }
    case AfeType::kMostPopular: {
      CircuitBuilder b(field, kind.bits);
      for (uint32_t i = 0; i < kind.bits; ++i) b.AssertBit(b.Input(i));
      *truncated = kind.bits;
      return finish(std::move(b));
    }
    case AfeType::kLinReg: {
      // Layout: X_1..X_d | X_iX_j (i<=j) | Y | X_iY | bits(X_i) | bits(Y).
      const uint32_t d = kind.dim;
      const size_t pairs = PairCount(d);
      const size_t y_idx = d + pairs;
      const size_t xy_first = y_idx + 1;
      const size_t bits_first = xy_first + d;
      *truncated = bits_first;
      CircuitBuilder b(field, bits_first + size_t{d + 1} * kind.bits);
      const FieldElement minus_one = field.Neg(field.One());
      for (uint32_t i = 0; i < d; ++i) {
        AddRangeProof(b, b.Input(i), bits_first + size_t{i} * kind.bits,
                      kind.bits);
      }
      AddRangeProof(b, b.Input(y_idx), bits_first + size_t{d} * kind.bits,
                    kind.bits);
      size_t q = d;
      for (uint32_t i = 0; i < d; ++i) {
        for (uint32_t j = i; j < d; ++j) {
          Wire prod = b.Mul(b.Input(i), b.Input(j));
          b.AssertZero({{prod, field.One()}, {b.Input(q++), minus_one}},
                       field.Zero());
        }
      }
      for (uint32_t i = 0; i < d; ++i) {
        Wire prod = b.Mul(b.Input(i), b.Input(y_idx));
        b.AssertZero({{prod, field.One()}, {b.Input(xy_first + i), minus_one}},
                     field.Zero());
      }
      return finish(std::move(b));
    }
    case AfeType::kRSquared: {
      // Layout: y | y^2 | (y - yhat)^2 | x_1..x_d | bits(y) | bits(x_i).
      const size_t d = kind.model.size() - 1;
      const size_t bits_first = 3 + d;
      CircuitBuilder b(field, bits_first + (d + 1) * kind.bits);
      const FieldElement minus_one = field.Neg(field.One());
      Wire y = b.Input(0);
      AddRangeProof(b, y, bits_first, kind.bits);
      for (size_t i = 0; i < d; ++i) {
        AddRangeProof(b, b.Input(3 + i), bits_first + (i + 1) * kind.bits,
                      kind.bits);
      }
      Wire sq = b.Mul(y, y);
      b.AssertZero({{sq, field.One()}, {b.Input(1), minus_one}}, field.Zero());
      Wire resid = b.AddConst(y, field.Neg(field.FromInt(kind.model[0])));
      for (size_t i = 0; i < d; ++i) {
        resid = b.Sub(resid, b.MulConst(b.Input(3 + i),
                                        field.FromInt(kind.model[i + 1])));
      }
      Wire rsq = b.Mul(resid, resid);
      b.AssertZero({{rsq, field.One()}, {b.Input(2), minus_one}}, field.Zero());
      *truncated = 3;
      return finish(std::move(b));
    }
  }
  return nullptr;
}

uint64_t ApproxBin(const std::vector<uint64_t>& starts, uint64_t v) {
  size_t j = 0;
  while (j + 1 < starts.size() && starts[j + 1] <= v) ++j;
  return j;
}

absl::StatusOr<uint64_t> ToCount(const Field& field, FieldElement e,
                                 uint64_t n) {
  (void)field;
  if (e.value > n) {
    return Error(
        ErrorKind::kMalformedShare,
        absl::StrCat("count ", e.value, " exceeds ", n, " contributions"));
  }
  return e.value;
}

// Solves A x = rhs over the rationals; SingularSystem when A is singular.
absl::StatusOr<std::vector<mpq_class>> SolveRational(
    std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> rhs) {
  const size_t n = rhs.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t row = col + 1; row < n; ++row) {
      if (abs(a[row][col]) > abs(a[pivot][col])) pivot = row;
    }
    if (a[pivot][col] == 0) {
      return Error(ErrorKind::kSingularSystem, "normal equations are singular");
    }
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (size_t row = col + 1; row < n; ++row) {
      if (a[row][col] == 0) continue;
      mpq_class factor = a[row][col] / a[col][col];
      for (size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::vector<mpq_class> x(n);
  for (size_t i = n; i-- > 0;) {
    mpq_class acc = rhs[i];
    for (size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}

absl::StatusOr<uint64_t> Quantize(const AfeKind& kind, double v) {
  if (!std::isfinite(v)) return DomainErrorFor(kind, "non-finite input");
  double scaled = std::nearbyint(std::ldexp(v, kind.frac_bits));
  double offset = kind.is_signed ? std::ldexp(1.0, kind.bits - 1) : 0.0;
  double q = scaled + offset;
  if (q < 0 || q >= std::ldexp(1.0, kind.bits)) {
    return DomainErrorFor(
        kind, absl::StrCat("value ", v, " outside the fixed-point range"));
  }
  return static_cast<uint64_t>(q);
}

std::mutex& CacheMutex() {
  static std::mutex* mu = new std::mutex;
  return *mu;
}

std::map<std::pair<std::string, uint64_t>, std::shared_ptr<const Afe>>&
Cache() {
  static auto* cache = new std::map<std::pair<std::string, uint64_t>,
                                    std::shared_ptr<const Afe>>();
  return *cache;
}

}  // namespace

uint32_t CountMinShape::Bucket(uint32_t row, uint64_t item) const {
  uint64_t mixed = hash_a[row] * item + hash_b[row];
  return static_cast<uint32_t>(((mixed >> 32) * width) >> 32);
}

CountMinShape MakeCountMinShape(const AfeKind& kind) {
  CountMinShape shape;
  shape.rows = static_cast<uint32_t>(std::ceil(std::log(1.0 / kind.delta)));
  shape.width = static_cast<uint32_t>(std::ceil(std::exp(1.0) / kind.epsilon));
  if (shape.rows == 0) shape.rows = 1;
  uint64_t state = kind.seed;
  for (uint32_t r = 0; r < shape.rows; ++r) {
    shape.hash_a.push_back(SplitMix64(&state) | 1);
    shape.hash_b.push_back(SplitMix64(&state));
  }
  return shape;
}

uint64_t CountMinResult::Estimate(uint64_t item) const {
  CountMinShape shape{rows, width, hash_a, hash_b};
  uint64_t best = UINT64_MAX;
  for (uint32_t r = 0; r < rows; ++r) {
    best = std::min(best, table[size_t{r} * width + shape.Bucket(r, item)]);
  }
  return best;
}

std::vector<uint64_t> ApproxBinStarts(uint64_t range, uint64_t factor) {
  std::vector<uint64_t> starts{0};
  unsigned __int128 s = 1;
  while (s < range) {
    starts.push_back(static_cast<uint64_t>(s));
    s *= factor;
  }
  return starts;
}

absl::StatusOr<std::shared_ptr<const Afe>> Afe::Create(const AfeKind& kind,
                                                       const Field& field) {
  auto key = std::make_pair(FormatAfeKind(kind), field.modulus());
  {
    std::lock_guard<std::mutex> lock(CacheMutex());
    auto it = Cache().find(key);
    if (it != Cache().end()) return it->second;
  }
  PRIVAGG_RETURN_IF_ERROR(ValidateKind(kind, field));
  std::shared_ptr<Afe> afe(new Afe(kind, field));
  afe->circuit_ = BuildCircuit(kind, field, &afe->truncated_length_);
  const size_t m = afe->circuit_->mul_count();
  if (ToMpz(uint64_t{2} * m + 2) > ToMpz(field.modulus())) {
    return Error(ErrorKind::kConfigError,
                 absl::StrCat("circuit with M = ", m, " needs 2M+2 <= p"));
  }
  std::lock_guard<std::mutex> lock(CacheMutex());
  auto [it, inserted] = Cache().emplace(key, std::move(afe));
  return it->second;
}

absl::StatusOr<std::vector<FieldElement>> Afe::Encode(const AfeValue& value,
                                                      Csprng& rng) const {
  const Field& f = field_;
  std::vector<FieldElement> out;
  out.reserve(encoding_length());
  switch (kind_.type) {
    case AfeType::kSum:
    case AfeType::kMean: {
      PRIVAGG_ASSIGN_OR_RETURN(uint64_t x, Get<uint64_t>(kind_, value));
      if (x >> kind_.bits) {
        return DomainErrorFor(
            kind_, absl::StrCat(x, " needs more than ", kind_.bits, " bits"));
      }
      out.push_back(f.FromUint(x));
      AppendBits(f, x, kind_.bits, &out);
      break;
    }
    case AfeType::kVariance: {
      PRIVAGG_ASSIGN_OR_RETURN(uint64_t x, Get<uint64_t>(kind_, value));
      if (x >> kind_.bits) {
        return DomainErrorFor(
            kind_, absl::StrCat(x, " needs more than ", kind_.bits, " bits"));
      }
      out.push_back(f.FromUint(x));
      out.push_back(f.FromUint(x * x));
      AppendBits(f, x, kind_.bits, &out);
      break;
    }
    case AfeType::kBoolOr:
    case AfeType::kBoolAnd: {
      PRIVAGG_ASSIGN_OR_RETURN(uint64_t x, Get<uint64_t>(kind_, value));
      if (x > 1) return DomainErrorFor(kind_, "value must be 0 or 1");
      const bool zeros = (kind_.type == AfeType::kBoolOr) == (x == 0);
      for (uint32_t i = 0; i < kind_.lambda; ++i) {
        out.push_back(zeros ? f.Zero() : f.FromUint(rng.NextBit()));
      }
      break;
    }
    case AfeType::kMinMaxExact:
    case AfeType::kMinMaxApprox: {
      PRIVAGG_ASSIGN_OR_RETURN(uint64_t x, Get<uint64_t>(kind_, value));
      if (x >= kind_.range) {
        return DomainErrorFor(kind_,
                              absl::StrCat(x, " not below B = ", kind_.range));
      }
      uint64_t pos = x;
      size_t count = kind_.range;
      if (kind_.type == AfeType::kMinMaxApprox) {
        std::vector<uint64_t> starts =
            ApproxBinStarts(kind_.range, kind_.factor);
        pos = ApproxBin(starts, x);
        count = starts.size();
      }
      for (size_t i = 0; i < count; ++i) {
        out.push_back(i >= pos ? f.One() : f.Zero());
      }
      break;
    }
    case AfeType::kFreqCount: {
      PRIVAGG_ASSIGN_OR_RETURN(uint64_t x, Get<uint64_t>(kind_, value));
      if (x >= kind_.range) {
        return DomainErrorFor(kind_,
                              absl::StrCat(x, " not below B = ", kind_.range));
      }
      for (uint64_t i = 0; i < kind_.range; ++i) {
        out.push_back(i == x ? f.One() : f.Zero());
      }
      break;
    }
    case AfeType::kCountMin: {
      PRIVAGG_ASSIGN_OR_RETURN(uint64_t x, Get<uint64_t>(kind_, value));
      CountMinShape shape = MakeCountMinShape(kind_);
      out.assign(size_t{shape.rows} * shape.width, f.Zero());
      for (uint32_t r = 0; r < shape.rows; ++r) {
        out[size_t{r} * shape.width + shape.Bucket(r, x)] = f.One();
      }
      break;
    }
    case AfeType::kMostPopular: {
      PRIVAGG_ASSIGN_OR_RETURN(std::string s, Get<std::string>(kind_, value));
      if (s.size() != kind_.bits) {
        return DomainErrorFor(kind_, absl::StrCat("expected ", kind_.bits,
                                                  " bits, got ", s.size()));
      }
      for (char c : s) {
        if (c != '0' && c != '1') {
          return DomainErrorFor(kind_, "bit strings contain only 0 and 1");
        }
        out.push_back(f.FromUint(c == '1'));
      }
      break;
    }
    case AfeType::kLinReg: {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<double> v,
                               Get<std::vector<double>>(kind_, value));
      const uint32_t d = kind_.dim;
      if (v.size() != d + 1) {
        return DomainErrorFor(kind_,
                              absl::StrCat("expected ", d + 1, " components"));
      }
      std::vector<uint64_t> q(d + 1);
      for (uint32_t i = 0; i <= d; ++i) {
        PRIVAGG_ASSIGN_OR_RETURN(q[i], Quantize(kind_, v[i]));
      }
      const uint64_t y = q[d];
      for (uint32_t i = 0; i < d; ++i) out.push_back(f.FromUint(q[i]));
      for (uint32_t i = 0; i < d; ++i) {
        for (uint32_t j = i; j < d; ++j) out.push_back(f.FromUint(q[i] * q[j]));
      }
      out.push_back(f.FromUint(y));
      for (uint32_t i = 0; i < d; ++i) out.push_back(f.FromUint(q[i] * y));
      for (uint32_t i = 0; i <= d; ++i) AppendBits(f, q[i], kind_.bits, &out);
      break;
    }
    case AfeType::kRSquared: {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<uint64_t> v,
                               Get<std::vector<uint64_t>>(kind_, value));
      const size_t d = kind_.model.size() - 1;
      if (v.size() != d + 1) {
        return DomainErrorFor(kind_,
                              absl::StrCat("expected ", d + 1, " components"));
      }
      for (uint64_t c : v) {
        if (c >> kind_.bits) {
          return DomainErrorFor(
              kind_, absl::StrCat(c, " needs more than ", kind_.bits, " bits"));
        }
      }
      const uint64_t y = v[d];
      __int128 resid = static_cast<__int128>(y) - kind_.model[0];
      for (size_t i = 0; i < d; ++i) {
        resid -= static_cast<__int128>(kind_.model[i + 1]) * v[i];
      }
      unsigned __int128 rsq = static_cast<unsigned __int128>(resid * resid);
      out.push_back(f.FromUint(y));
      out.push_back(f.FromUint(y * y));
      out.push_back(FieldElement{static_cast<uint64_t>(rsq % f.modulus())});
      for (size_t i = 0; i < d; ++i) out.push_back(f.FromUint(v[i]));
      AppendBits(f, y, kind_.bits, &out);
      for (size_t i = 0; i < d; ++i) AppendBits(f, v[i], kind_.bits, &out);
      break;
    }
  }
  return out;
}

absl::StatusOr<std::vector<FieldElement>> Afe::Truncate(
    std::span<const FieldElement> encoding) const {
  if (encoding.size() != encoding_length()) {
    return Error(ErrorKind::kLengthMismatch,
                 absl::StrCat("encoding has ", encoding.size(),
                              " components, expected ", encoding_length()));
  }
  return std::vector<FieldElement>(encoding.begin(),
                                   encoding.begin() + truncated_length_);
}

absl::StatusOr<AggregateResult> Afe::Decode(std::span<const FieldElement> sigma,
                                            uint64_t n) const {
  const Field& f = field_;
  if (sigma.size() != truncated_length_) {
    return Error(ErrorKind::kLengthMismatch,
                 absl::StrCat("aggregate has ", sigma.size(),
                              " components, expected ", truncated_length_));
  }
  auto empty = [&]() {
    return Error(ErrorKind::kEmptyAggregate,
                 absl::StrCat(std::string(AfeTypeName(kind_.type)),
                              " of zero contributions"));
  };
  switch (kind_.type) {
    case AfeType::kSum:
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, Pow2(kind_.bits)));
      return SumResult{ToMpz(sigma[0].value)};
    case AfeType::kMean: {
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, Pow2(kind_.bits)));
      if (n == 0) return empty();
      mpq_class mean(ToMpz(sigma[0].value), ToMpz(n));
      mean.canonicalize();
      return MeanResult{mean};
    }
    case AfeType::kVariance: {
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, Pow2(2 * kind_.bits)));
      if (n == 0) return empty();
      mpq_class mean(ToMpz(sigma[0].value), ToMpz(n));
      mean.canonicalize();
      mpq_class second(ToMpz(sigma[1].value), ToMpz(n));
      second.canonicalize();
      return VarianceResult{mean, second - mean * mean};
    }
    case AfeType::kBoolOr:
    case AfeType::kBoolAnd: {
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, 1));
      bool any_odd = false;
      for (FieldElement e : sigma) any_odd |= (e.value & 1) != 0;
      return BoolResult{kind_.type == AfeType::kBoolOr ? any_odd : !any_odd};
    }
    case AfeType::kMinMaxExact:
    case AfeType::kMinMaxApprox: {
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, 1));
      std::optional<uint64_t> pos;
      if (n > 0) {
        for (size_t i = 0; i < sigma.size(); ++i) {
          PRIVAGG_ASSIGN_OR_RETURN(uint64_t c, ToCount(f, sigma[i], n));
          if (kind_.is_max ? c == n : c > 0) {
            pos = i;
            break;
          }
        }
        if (!pos.has_value()) {
          return Error(ErrorKind::kMalformedShare,
                       "cumulative counts never reach the batch size");
        }
      }
      if (kind_.type == AfeType::kMinMaxExact) return MinMaxResult{pos};
      if (!pos.has_value()) return ApproxResult{};
      std::vector<uint64_t> starts = ApproxBinStarts(kind_.range, kind_.factor);
      uint64_t hi = *pos + 1 < starts.size() ? starts[*pos + 1] : kind_.range;
      return ApproxResult{starts[*pos], hi};
    }
    case AfeType::kFreqCount: {
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, 1));
      CountsResult out;
      for (FieldElement e : sigma) {
        PRIVAGG_ASSIGN_OR_RETURN(uint64_t c, ToCount(f, e, n));
        out.counts.push_back(c);
      }
      return out;
    }
    case AfeType::kCountMin: {
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, 1));
      CountMinShape shape = MakeCountMinShape(kind_);
      CountMinResult out;
      out.rows = shape.rows;
      out.width = shape.width;
      out.hash_a = shape.hash_a;
      out.hash_b = shape.hash_b;
      for (FieldElement e : sigma) {
        PRIVAGG_ASSIGN_OR_RETURN(uint64_t c, ToCount(f, e, n));
        out.table.push_back(c);
      }
      return out;
    }
    case AfeType::kMostPopular: {
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, 1));
      if (n == 0) return empty();
      PopularResult out;
      for (size_t i = 0; i < sigma.size(); ++i) {
        PRIVAGG_ASSIGN_OR_RETURN(uint64_t c, ToCount(f, sigma[i], n));
        if (2 * static_cast<unsigned __int128>(c) == n) {
          return Error(ErrorKind::kNoMajority,
                       absl::StrCat("bit ", i, " is set in exactly half of ", n,
                                    " contributions"));
        }
        out.bits.push_back(2 * static_cast<unsigned __int128>(c) > n ? '1'
                                                                     : '0');
      }
      return out;
    }
    case AfeType::kLinReg: {
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, Pow2(2 * kind_.bits)));
      if (n == 0) return empty();
      const uint32_t d = kind_.dim;
      auto q = [&](size_t idx) { return mpq_class(ToMpz(sigma[idx].value)); };
      std::vector<std::vector<mpq_class>> a(d + 1,
                                            std::vector<mpq_class>(d + 1));
      std::vector<mpq_class> rhs(d + 1);
      a[0][0] = mpq_class(ToMpz(n));
      size_t idx = d;
      for (uint32_t i = 0; i < d; ++i) {
        a[0][i + 1] = a[i + 1][0] = q(i);
        for (uint32_t j = i; j < d; ++j) {
          a[i + 1][j + 1] = a[j + 1][i + 1] = q(idx++);
        }
      }
      const size_t y_idx = d + PairCount(d);
      rhs[0] = q(y_idx);
      for (uint32_t i = 0; i < d; ++i) rhs[i + 1] = q(y_idx + 1 + i);
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<mpq_class> c,
                               SolveRational(std::move(a), std::move(rhs)));
      // Undo the fixed-point scale and offset; slopes are scale-free.
      const mpq_class scale(Pow2(kind_.frac_bits));
      const mpq_class offset(kind_.is_signed ? Pow2(kind_.bits - 1) : 0);
      mpq_class slope_sum = 0;
      for (uint32_t i = 1; i <= d; ++i) slope_sum += c[i];
      c[0] = (c[0] - offset + offset * slope_sum) / scale;
      return LinRegResult{std::move(c)};
    }
    case AfeType::kRSquared: {
      mpz_class e = ResidualBound(kind_);
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, Pow2(2 * kind_.bits)));
      PRIVAGG_RETURN_IF_ERROR(CheckOverflow(f, n, e * e));
      if (n == 0) return empty();
      mpq_class sy(ToMpz(sigma[0].value));
      mpq_class syy(ToMpz(sigma[1].value));
      mpq_class sres(ToMpz(sigma[2].value));
      mpq_class nn(ToMpz(n));
      mpq_class ss_tot = syy - sy * sy / nn;
      if (ss_tot == 0) {
        return DomainErrorFor(kind_, "y has zero variance; R^2 undefined");
      }
      RSquaredResult out;
      out.r_squared = 1 - sres / ss_tot;
      out.mean_y = sy / nn;
      out.variance_y = ss_tot / nn;
      return out;
    }
  }
  return Error(ErrorKind::kConfigError, "unknown kind");
}

}  // namespace privagg
