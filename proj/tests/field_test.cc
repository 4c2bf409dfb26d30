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

#include <gmpxx.h>

#include "privagg/prg.h"
#include "privagg/wire.h"
#include "test_util.h"

namespace privagg {
namespace {

using ::privagg::testing::F101;

// Brute-force inverse used as an independent oracle in F_101.
uint64_t BruteInverse(uint64_t a, uint64_t p) {
  for (uint64_t x = 1; x < p; ++x) {
    if ((a * x) % p == 1) return x;
  }
  return 0;
}

TEST(FieldTest, InverseOfOneIsOne) {
  EXPECT_EQ(*F101().Inverse(FieldElement{1}), FieldElement{1});
}

TEST(FieldTest, InverseOfTwoIs51) {
  EXPECT_EQ(BruteInverse(2, 101), 51u);
  EXPECT_EQ(*F101().Inverse(FieldElement{2}), FieldElement{51});
}

TEST(FieldTest, InverseOfMinusOneIsItself) {
  EXPECT_EQ(BruteInverse(100, 101), 100u);
  EXPECT_EQ(*F101().Inverse(FieldElement{100}), FieldElement{100});
}

TEST(FieldTest, InverseOfZeroFails) {
  EXPECT_ERROR_KIND(F101().Inverse(FieldElement{0}), ErrorKind::kZeroInverse);
}

TEST(FieldTest, EveryNonzeroInverseMatchesBruteForce) {
  for (uint64_t a = 1; a < 101; ++a) {
    EXPECT_EQ(F101().Inverse(FieldElement{a})->value, BruteInverse(a, 101));
  }
}

TEST(FieldTest, CreateRejectsNonPrimes) {
  EXPECT_ERROR_KIND(Field::Create(100), ErrorKind::kConfigError);
  EXPECT_ERROR_KIND(Field::Create(2), ErrorKind::kConfigError);
  EXPECT_ERROR_KIND(Field::Create(1), ErrorKind::kConfigError);
  EXPECT_TRUE(Field::Create(Field::kGoldilocksModulus).ok());
}

TEST(FieldTest, ParamsOfKnownFields) {
  const Field& g = Field::Default();
  EXPECT_EQ(g.modulus(), 0xFFFFFFFF00000001ULL);
  EXPECT_EQ(g.two_adicity(), 32);
  EXPECT_EQ(g.element_width_bytes(), 8);
  EXPECT_EQ(F101().two_adicity(), 2);
  EXPECT_EQ(F101().element_width_bytes(), 1);
  Field bb = *Field::Create(Field::kBabyBearModulus);
  EXPECT_EQ(bb.two_adicity(), 27);
  EXPECT_EQ(bb.element_width_bytes(), 4);
}

TEST(FieldTest, IsPrimeAgreesWithGmp) {
  for (uint64_t n = 0; n < 5000; ++n) {
    mpz_class z(static_cast<unsigned long>(n));
    EXPECT_EQ(IsPrime(n), mpz_probab_prime_p(z.get_mpz_t(), 30) > 0) << n;
  }
  EXPECT_TRUE(IsPrime(Field::kGoldilocksModulus));
  EXPECT_FALSE(IsPrime(Field::kGoldilocksModulus - 2));
}

TEST(FieldTest, RingAxiomsOnRandomTriples) {
  for (const Field& f :
       {F101(), Field::Default(), *Field::Create(Field::kBabyBearModulus)}) {
    Csprng rng(11);
    for (int i = 0; i < 2000; ++i) {
      FieldElement a = rng.NextElement(f);
      FieldElement b = rng.NextElement(f);
      FieldElement c = rng.NextElement(f);
      EXPECT_EQ(f.Add(f.Add(a, b), c), f.Add(a, f.Add(b, c)));
      EXPECT_EQ(f.Mul(f.Mul(a, b), c), f.Mul(a, f.Mul(b, c)));
      EXPECT_EQ(f.Mul(a, f.Add(b, c)), f.Add(f.Mul(a, b), f.Mul(a, c)));
      EXPECT_EQ(f.Add(a, b), f.Add(b, a));
      EXPECT_EQ(f.Mul(a, b), f.Mul(b, a));
      EXPECT_EQ(
          f.Add(a, FieldElement{a.value == 0 ? 0 : f.modulus() - a.value}),
          f.Zero());
      EXPECT_EQ(f.Sub(f.Add(a, b), b), a);
      if (a.value != 0) EXPECT_EQ(f.Mul(a, *f.Inverse(a)), f.One());
    }
  }
}

TEST(FieldTest, MulMatchesGmpInLargeField) {
  const Field& f = Field::Default();
  Csprng rng(3);
  mpz_class p(std::to_string(f.modulus()));
  for (int i = 0; i < 1000; ++i) {
    FieldElement a = rng.NextElement(f);
    FieldElement b = rng.NextElement(f);
    mpz_class expect = mpz_class(std::to_string(a.value)) *
                       mpz_class(std::to_string(b.value)) % p;
    EXPECT_EQ(std::to_string(f.Mul(a, b).value), expect.get_str());
  }
}

TEST(FieldTest, FromIntWrapsNegatives) {
  EXPECT_EQ(F101().FromInt(-1), FieldElement{100});
  EXPECT_EQ(F101().FromInt(-202), FieldElement{0});
  EXPECT_EQ(F101().FromInt(205), FieldElement{3});
}

TEST(FieldTest, RootOfUnityHasExactOrder) {
  const Field& f = Field::Default();
  for (int k = 1; k <= 32; k += 5) {
    FieldElement w = f.RootOfUnity(k);
    EXPECT_EQ(f.Pow(w, uint64_t{1} << k), f.One());
    EXPECT_NE(f.Pow(w, uint64_t{1} << (k - 1)), f.One());
  }
}

TEST(FieldTest, WireEncodingIsFixedWidthLittleEndian) {
  const Field& f = Field::Default();
  std::string out;
  f.AppendElement(FieldElement{0x0102030405060708ULL}, &out);
  EXPECT_EQ(HexEncode(out), "0807060504030201");
  EXPECT_EQ(*f.ParseElement(out), FieldElement{0x0102030405060708ULL});
  EXPECT_ERROR_KIND(f.ParseElement(out.substr(1)), ErrorKind::kTruncated);
  std::string big(8, '\xff');
  EXPECT_ERROR_KIND(f.ParseElement(big), ErrorKind::kMalformedShare);
  std::string small;
  F101().AppendElement(FieldElement{100}, &small);
  EXPECT_EQ(small.size(), 1u);
  EXPECT_ERROR_KIND(F101().ParseElement(std::string(1, char(101))),
                    ErrorKind::kMalformedShare);
}

}  // namespace
}  // namespace privagg
