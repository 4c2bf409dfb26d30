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

#include "privagg/prg.h"
#include "test_util.h"

namespace privagg {
namespace {

using ::privagg::testing::BabyBear;
using ::privagg::testing::Elems;
using ::privagg::testing::F101;

// Textbook Lagrange basis evaluated with a brute-force inverse.
std::vector<uint64_t> NaiveLagrange(const std::vector<uint64_t>& domain,
                                    uint64_t r, uint64_t p) {
  auto inv = [p](uint64_t a) {
    for (uint64_t x = 1; x < p; ++x) {
      if (a * x % p == 1) return x;
    }
    return uint64_t{0};
  };
  std::vector<uint64_t> out;
  for (size_t t = 0; t < domain.size(); ++t) {
    uint64_t num = 1;
    uint64_t den = 1;
    for (size_t k = 0; k < domain.size(); ++k) {
      if (k == t) continue;
      num = num * ((r + p - domain[k]) % p) % p;
      den = den * ((domain[t] + p - domain[k]) % p) % p;
    }
    out.push_back(num * inv(den) % p);
  }
  return out;
}

std::vector<uint64_t> Values(const std::vector<FieldElement>& v) {
  std::vector<uint64_t> out;
  for (FieldElement e : v) out.push_back(e.value);
  return out;
}

Polynomial RandomPoly(const Field& f, size_t len, Csprng& rng) {
  std::vector<FieldElement> c(len);
  for (FieldElement& e : c) e = rng.NextElement(f);
  return Polynomial(c);
}

TEST(LagrangeTest, EvaluationAtDomainPointSelectsIt) {
  auto row = LagrangeCoefficients(F101(), Elems({0, 1}), FieldElement{0});
  ASSERT_OK(row);
  EXPECT_EQ(row->coeffs, Elems({1, 0}));
}

TEST(LagrangeTest, LineThroughTwoPointsAtTwo) {
  EXPECT_EQ(NaiveLagrange({0, 1}, 2, 101), (std::vector<uint64_t>{100, 2}));
  auto row = LagrangeCoefficients(F101(), Elems({0, 1}), FieldElement{2});
  ASSERT_OK(row);
  EXPECT_EQ(row->coeffs, Elems({100, 2}));
}

TEST(LagrangeTest, QuadraticDomainAtThree) {
  EXPECT_EQ(NaiveLagrange({0, 1, 2}, 3, 101),
            (std::vector<uint64_t>{1, 98, 3}));
  auto row = LagrangeCoefficients(F101(), Elems({0, 1, 2}), FieldElement{3});
  ASSERT_OK(row);
  EXPECT_EQ(row->coeffs, Elems({1, 98, 3}));
  // t^2 at 0, 1, 2 evaluated at 3 gives 9.
  EXPECT_EQ(*InterpolateEval(F101(), *row, Elems({0, 1, 4})), FieldElement{9});
}

TEST(LagrangeTest, DuplicateDomainPointRejected) {
  EXPECT_ERROR_KIND(
      LagrangeCoefficients(F101(), Elems({0, 1, 1}), FieldElement{5}),
      ErrorKind::kDuplicateDomainPoint);
  EXPECT_ERROR_KIND(
      LagrangeCoefficients(F101(), Elems({3, 104}), FieldElement{5}),
      ErrorKind::kDuplicateDomainPoint);
}

TEST(LagrangeTest, ConsecutiveRowMatchesNaiveOracle) {
  for (size_t n = 1; n <= 20; ++n) {
    std::vector<uint64_t> domain;
    for (size_t i = 0; i < n; ++i) domain.push_back(i);
    for (uint64_t r :
         {uint64_t{0}, uint64_t{n - 1}, uint64_t{n + 3}, uint64_t{77}}) {
      LagrangeRow row =
          ConsecutiveLagrangeRow(F101(), n, FieldElement{r % 101});
      EXPECT_EQ(Values(row.coeffs), NaiveLagrange(domain, r % 101, 101))
          << "n=" << n << " r=" << r;
    }
  }
}

TEST(InterpolateEvalTest, LineExample) {
  auto row = LagrangeCoefficients(F101(), Elems({0, 1}), FieldElement{2});
  EXPECT_EQ(*InterpolateEval(F101(), *row, Elems({3, 5})), FieldElement{7});
}

TEST(InterpolateEvalTest, ConstantValuesGiveConstant) {
  Csprng rng(1);
  for (int i = 0; i < 50; ++i) {
    FieldElement y = rng.NextElement(F101());
    FieldElement r = rng.NextElement(F101());
    LagrangeRow row = ConsecutiveLagrangeRow(F101(), 2, r);
    EXPECT_EQ(*InterpolateEval(F101(), row, std::vector{y, y}), y);
  }
}

TEST(InterpolateEvalTest, SquareAtFive) {
  auto row = LagrangeCoefficients(F101(), Elems({0, 1, 2}), FieldElement{5});
  EXPECT_EQ(*InterpolateEval(F101(), *row, Elems({0, 1, 4})), FieldElement{25});
}

TEST(InterpolateEvalTest, LengthMismatch) {
  auto row = LagrangeCoefficients(F101(), Elems({0, 1}), FieldElement{2});
  EXPECT_ERROR_KIND(InterpolateEval(F101(), *row, Elems({1, 2, 3})),
                    ErrorKind::kLengthMismatch);
}

TEST(InterpolateEvalTest, RandomPolynomialsAgreeWithHorner) {
  for (const Field& f : {F101(), BabyBear(), Field::Default()}) {
    Csprng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      size_t m = 1 + rng.Uniform(40);
      Polynomial p = RandomPoly(f, m + 1, rng);
      FieldElement r = rng.NextElement(f);
      std::vector<FieldElement> vals;
      for (FieldElement x : ConsecutiveDomain(f, m + 1)) {
        vals.push_back(p.Evaluate(f, x));
      }
      if (f.modulus() > m + 1) {
        LagrangeRow row = ConsecutiveLagrangeRow(f, m + 1, r);
        EXPECT_EQ(*InterpolateEval(f, row, vals), p.Evaluate(f, r));
      }
    }
  }
}

TEST(PolyMulTest, DifferenceOfSquares) {
  const Field& f = F101();
  Polynomial a(Elems({1, 1}));
  Polynomial b(Elems({1, 100}));
  EXPECT_EQ(PolyMul(f, a, b), Polynomial(Elems({1, 0, 100})));
}

TEST(PolyMulTest, ZeroIsAbsorbing) {
  Polynomial a(Elems({4, 5, 6}));
  Polynomial z(Elems({0}));
  EXPECT_TRUE(PolyMul(F101(), a, z).IsZero());
  EXPECT_TRUE(PolyMul(F101(), a, Polynomial()).IsZero());
}

TEST(PolyMulTest, DegreeAddsAndMatchesPointwise) {
  const Field& f = Field::Default();
  Csprng rng(9);
  for (size_t m : {1, 4, 16, 64}) {
    Polynomial a = RandomPoly(f, m + 1, rng);
    Polynomial b = RandomPoly(f, m + 1, rng);
    Polynomial c = PolyMul(f, a, b);
    ASSERT_TRUE(c.Degree().has_value());
    EXPECT_EQ(*c.Degree(), *a.Degree() + *b.Degree());
    for (size_t t = 0; t < 4 * m + 1; ++t) {
      FieldElement x = rng.NextElement(f);
      EXPECT_EQ(c.Evaluate(f, x), f.Mul(a.Evaluate(f, x), b.Evaluate(f, x)));
    }
  }
}

TEST(PolyMulTest, AgreesWithConvolutionOracle) {
  const Field& f = BabyBear();
  Csprng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    size_t la = 1 + rng.Uniform(65);
    size_t lb = 1 + rng.Uniform(65);
    Polynomial a = RandomPoly(f, la, rng);
    Polynomial b = RandomPoly(f, lb, rng);
    std::vector<FieldElement> conv(la + lb - 1, f.Zero());
    for (size_t i = 0; i < la; ++i) {
      for (size_t j = 0; j < lb; ++j) {
        conv[i + j] =
            f.Add(conv[i + j], f.Mul(a.coefficients()[i], b.coefficients()[j]));
      }
    }
    EXPECT_EQ(PolyMul(f, a, b), Polynomial(conv));
    EXPECT_EQ(PolyMulSchoolbook(f, a, b), Polynomial(conv));
  }
}

TEST(PolyMulTest, NttIsCoefficientIdenticalToSchoolbook) {
  for (const Field& f : {BabyBear(), Field::Default()}) {
    Csprng rng(17);
    for (size_t len : {1, 2, 3, 31, 32, 33, 100, 257}) {
      Polynomial a = RandomPoly(f, len, rng);
      Polynomial b = RandomPoly(f, len + 5, rng);
      auto ntt = PolyMulNtt(f, a, b);
      ASSERT_OK(ntt);
      EXPECT_EQ(ntt->coefficients(), PolyMulSchoolbook(f, a, b).coefficients());
    }
  }
}

TEST(PolyMulTest, NttRefusesOversizedProducts) {
  Polynomial a(Elems({1, 2, 3}));
  EXPECT_ERROR_KIND(PolyMulNtt(F101(), a, a), ErrorKind::kInvalidInput);
}

TEST(InterpolateTest, SinglePointIsConstant) {
  auto p = Interpolate(F101(), Elems({0}), Elems({42}));
  ASSERT_OK(p);
  EXPECT_EQ(*p, Polynomial(Elems({42})));
}

TEST(InterpolateTest, TwoPointsGiveLine) {
  auto p = Interpolate(F101(), Elems({0, 1}), Elems({3, 5}));
  ASSERT_OK(p);
  EXPECT_EQ(*p, Polynomial(Elems({3, 2})));
}

TEST(InterpolateTest, RoundTripOnDomain) {
  const Field& f = Field::Default();
  Csprng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    size_t n = 1 + rng.Uniform(50);
    std::vector<FieldElement> domain;
    std::vector<FieldElement> values;
    for (size_t i = 0; i < n; ++i) {
      domain.push_back(FieldElement{rng.NextU64() % f.modulus()});
      values.push_back(rng.NextElement(f));
    }
    auto p = Interpolate(f, domain, values);
    ASSERT_OK(p);
    for (size_t i = 0; i < n; ++i) {
      EXPECT_EQ(p->Evaluate(f, domain[i]), values[i]);
    }
    EXPECT_LT(p->coefficients().size(), n + 1);
  }
}

TEST(InterpolateTest, Errors) {
  EXPECT_ERROR_KIND(Interpolate(F101(), Elems({0, 0}), Elems({1, 2})),
                    ErrorKind::kDuplicateDomainPoint);
  EXPECT_ERROR_KIND(Interpolate(F101(), Elems({0, 1}), Elems({1})),
                    ErrorKind::kLengthMismatch);
}

TEST(PolynomialTest, DegreeIgnoresTrailingZeros) {
  EXPECT_EQ(Polynomial(Elems({1, 2, 0, 0})).Degree(), 1u);
  EXPECT_FALSE(Polynomial(Elems({0, 0})).Degree().has_value());
  EXPECT_EQ(Polynomial(Elems({1, 2, 0})), Polynomial(Elems({1, 2})));
}

TEST(ExtendConsecutiveTest, MatchesEvaluation) {
  const Field& f = Field::Default();
  Csprng rng(23);
  for (size_t m : {0, 1, 2, 7, 33}) {
    Polynomial p = RandomPoly(f, m + 1, rng);
    std::vector<FieldElement> base;
    for (size_t t = 0; t <= m; ++t)
      base.push_back(p.Evaluate(f, FieldElement{t}));
    std::vector<FieldElement> ext = ExtendConsecutive(f, base, 2 * m + 1);
    ASSERT_EQ(ext.size(), 2 * m + 1);
    for (size_t t = 0; t <= 2 * m; ++t) {
      EXPECT_EQ(ext[t], p.Evaluate(f, FieldElement{t}));
    }
  }
}

TEST(LagrangeRowCacheTest, KeysIncludeTheField) {
  LagrangeRowCache cache(4);
  auto a = cache.Get(F101(), 3, FieldElement{7});
  auto b = cache.Get(BabyBear(), 3, FieldElement{7});
  EXPECT_NE(a->coeffs, b->coeffs);
  EXPECT_EQ(cache.Get(F101(), 3, FieldElement{7}), a);
  for (uint64_t r = 10; r < 20; ++r) cache.Get(F101(), 3, FieldElement{r});
  EXPECT_EQ(cache.Get(F101(), 3, FieldElement{7})->coeffs, a->coeffs);
}

}  // namespace
}  // namespace privagg
