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

// Acceptance suite: one pass/fail line per criterion.
//
//   privagg_acceptance [--server-bin <path>] [--only N]

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privagg/harness.h"
#include "privagg/net.h"
#include "privagg/status.h"
#include "privagg/transport.h"

namespace privagg {
namespace {

using Stopwatch = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Stopwatch::time_point start) {
  return std::chrono::duration<double>(Stopwatch::now() - start).count();
}

double BinomialSigma(double p, uint64_t n) {
  return std::sqrt(p * (1 - p) / static_cast<double>(n));
}

AfeKind Kind(std::string_view text) {
  auto kind = ParseAfeKind(text);
  if (!kind.ok()) {
    std::fprintf(stderr, "bad kind %s: %s\n", std::string(text).c_str(),
                 kind.status().ToString().c_str());
    std::abort();
  }
  return *kind;
}

// A uniformly random value from the kind's domain.
AfeValue RandomValue(const AfeKind& kind, Csprng& rng) {
  switch (kind.type) {
    case AfeType::kSum:
    case AfeType::kMean:
    case AfeType::kVariance:
      return rng.Uniform(uint64_t{1} << kind.bits);
    case AfeType::kBoolOr:
    case AfeType::kBoolAnd:
      return rng.Uniform(2);
    case AfeType::kMinMaxExact:
    case AfeType::kMinMaxApprox:
    case AfeType::kFreqCount:
      return rng.Uniform(kind.range);
    case AfeType::kCountMin:
      return rng.Uniform(64);
    case AfeType::kMostPopular: {
      std::string bits;
      for (uint32_t i = 0; i < kind.bits; ++i)
        bits.push_back('0' + rng.NextBit());
      return bits;
    }
    case AfeType::kLinReg: {
      const int64_t half = int64_t{1} << (kind.bits - 1);
      const int64_t lo = kind.is_signed ? -half : 0;
      const uint64_t span =
          kind.is_signed ? 2 * half : uint64_t{1} << kind.bits;
      std::vector<double> row;
      for (uint32_t i = 0; i <= kind.dim; ++i) {
        const int64_t k = lo + static_cast<int64_t>(rng.Uniform(span));
        row.push_back(std::ldexp(static_cast<double>(k),
                                 -static_cast<int>(kind.frac_bits)));
      }
      return row;
    }
    case AfeType::kRSquared: {
      std::vector<uint64_t> row;
      for (size_t i = 0; i < kind.model.size(); ++i) {
        row.push_back(rng.Uniform(uint64_t{1} << kind.bits));
      }
      return row;
    }
  }
  return uint64_t{0};
}

const std::vector<std::string>& AllKinds() {
  static const auto* kinds = new std::vector<std::string>{
      "sum b=8",
      "mean b=8",
      "variance b=8",
      "or lambda=8",
      "and lambda=8",
      "minmax B=32 mode=max",
      "approx B=1024 c=2 mode=min",
      "freq B=16",
      "countmin eps=0.1 delta=0.05 seed=7",
      "popular b=8",
      "linreg d=2 b=8 frac=2 signed=1",
      "rsquared coeffs=1,2,-1 b=6",
  };
  return *kinds;
}

absl::StatusOr<ProvedSubmission> HonestProof(const Afe& afe,
                                             const AfeValue& value, int s,
                                             Csprng& rng) {
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> x, afe.Encode(value, rng));
  return Prove(afe.circuit(), x, s, rng);
}

absl::StatusOr<bool> VerifyFresh(const ValidCircuit& c,
                                 const ProvedSubmission& p, Csprng& rng,
                                 bool unoptimized = false) {
  const Field& f = c.field();
  PRIVAGG_ASSIGN_OR_RETURN(
      VerifierPoint point,
      MakeVerifierPoint(f, c.mul_count(),
                        SampleVerifierR(f, c.mul_count(), rng)));
  std::vector<FieldElement> coeffs =
      ExpandPrg(f, rng.NextKey(), c.check_count());
  return VerifyLocally(c, point, p.x_shares, p.proof_shares, coeffs,
                       unoptimized);
}

// 1. Every honest proof is accepted.
Outcome Completeness() {
  constexpr uint64_t kTrials = 10000;
  const auto start = Stopwatch::now();
  Csprng rng(1);
  std::string failures;
  uint64_t total = 0;
  for (uint64_t modulus :
       {Field::kGoldilocksModulus, Field::kBabyBearModulus}) {
    Field field = *Field::Create(modulus);
    for (const std::string& text : AllKinds()) {
      auto afe = Afe::Create(Kind(text), field);
      if (!afe.ok()) {
        absl::StrAppend(&failures, " [", text, " p=", modulus, ": ",
                        afe.status().ToString(), "]");
        continue;
      }
      uint64_t accepted = 0;
      for (uint64_t t = 0; t < kTrials; ++t) {
        auto proved =
            HonestProof(**afe, RandomValue((*afe)->kind(), rng), 2, rng);
        if (!proved.ok()) break;
        auto ok = VerifyFresh((*afe)->circuit(), *proved, rng);
        accepted += ok.ok() && *ok ? 1 : 0;
      }
      total += accepted;
      if (accepted != kTrials) {
        absl::StrAppend(&failures, " [", text, " p=", modulus, ": ", accepted,
                        "/", kTrials, "]");
      }
    }
  }
  const double secs = Seconds(start);
  return {failures.empty() && secs < 60,
          absl::StrFormat("%d/%d accepted over 12 kinds x 2 fields in %.1fs%s",
                          total, 24 * kTrials, secs, failures)};
}

// 2. Forgery accept rates stay below (2M+1)/p.
Outcome Soundness() {
  constexpr uint64_t kTrials = 10000;
  const Strategy families[] = {
      Strategy::kMalformedEncoding, Strategy::kBadTriple, Strategy::kShiftedH,
      Strategy::kWrongF0G0, Strategy::kInconsistentShare};
  struct Case {
    std::string afe;
    uint64_t modulus;
    AfeValue value;
  };
  const Case cases[] = {
      {"sum b=1", 101, uint64_t{1}},
      {"sum b=4", 101, uint64_t{9}},
      {"freq B=8", 101, uint64_t{3}},
      {"sum b=8", Field::kGoldilocksModulus, uint64_t{200}},
  };
  bool pass = true;
  std::string detail;
  uint64_t seed = 2;
  for (const Case& c : cases) {
    DeploymentConfig cfg;
    cfg.modulus = c.modulus;
    cfg.servers = 2;
    cfg.afe = Kind(c.afe);
    auto dep = Deployment::Create(cfg);
    if (!dep.ok()) return {false, dep.status().ToString()};
    const size_t m = (*dep)->circuit().mul_count();
    auto rows = SoundnessSweep(**dep, c.value, families, kTrials, seed++);
    if (!rows.ok()) return {false, rows.status().ToString()};
    uint64_t worst = 0;
    double bound = 0;
    for (const SweepRow& row : *rows) {
      worst = std::max(worst, row.accepts);
      const bool ok = c.modulus == 101 ? row.rate <= row.bound + 3 * row.sigma
                                       : row.accepts == 0;
      if (!ok) {
        pass = false;
        absl::StrAppend(&detail, " FAIL ",
                        std::string(StrategyName(row.family)));
      }
      bound = row.bound + 3 * row.sigma;
    }
    if (c.modulus == 101) {
      absl::StrAppend(
          &detail,
          absl::StrFormat(" M=%d max %.4f<=%.4f;", m,
                          static_cast<double>(worst) / kTrials, bound));
    } else {
      absl::StrAppend(&detail,
                      absl::StrFormat(" 64-bit M=%d accepts=%d;", m, worst));
    }
  }
  return {pass, detail};
}

// 3. Adaptive forgeries against a fixed r.
Outcome Adaptive() {
  Field f101 = *Field::Create(101);
  auto r = AdaptiveSweep(f101, 32, 10000, 3);
  if (!r.ok()) return {false, r.status().ToString()};
  return {r->rate <= r->bound + 3 * r->sigma && r->successes > 0,
          absl::StrFormat("q=32 rate %.4f <= bound %.4f + 3 sigma %.4f",
                          r->rate, r->bound, 3 * r->sigma)};
}

// 4. Server-to-server bytes do not depend on L.
Outcome ConstantServerBytes() {
  std::vector<uint64_t> per;
  std::string detail;
  for (uint64_t l : {16, 256, 4096}) {
    DeploymentConfig cfg;
    cfg.servers = 3;
    cfg.afe = Kind(absl::StrCat("freq B=", l));
    std::vector<AfeValue> inputs;
    for (uint64_t i = 0; i < 8; ++i) inputs.push_back(i * 3 % l);
    RunReport r = RunSimulation(cfg, inputs, {}, 4);
    if (r.accepted() != inputs.size() || r.server_bytes % inputs.size() != 0) {
      return {false, absl::StrCat("L=", l, " run failed: ", r.error)};
    }
    per.push_back(r.server_bytes / inputs.size());
    absl::StrAppend(&detail, " L=", l, ":", per.back(), "B");
  }
  const bool pass = per[0] == per[1] && per[1] == per[2];
  return {pass, absl::StrCat("server bytes per submission", detail)};
}

// 5. PRG compression of client uploads.
Outcome Compression() {
  constexpr int kServers = 5;
  DeploymentConfig cfg;
  cfg.servers = kServers;
  cfg.afe = Kind("freq B=1024");
  auto dep = Deployment::Create(cfg);
  if (!dep.ok()) return {false, dep.status().ToString()};
  Csprng rng(5);
  auto x = (*dep)->afe().Encode(uint64_t{77}, rng);
  if (!x.ok()) return {false, x.status().ToString()};
  auto size_of = [&](bool compress) -> absl::StatusOr<std::vector<size_t>> {
    PRIVAGG_ASSIGN_OR_RETURN(
        ProvedSubmission p,
        Prove((*dep)->circuit(), *x, kServers, rng, {}, compress));
    Submission sub = Package(RandomNonce(rng), std::move(p));
    std::vector<size_t> sizes;
    for (const UploadMsg& u : sub.uploads) {
      PRIVAGG_ASSIGN_OR_RETURN(std::string bytes,
                               (*dep)->codec().Encode(Frame{cfg.epoch, u}));
      sizes.push_back(bytes.size());
    }
    return sizes;
  };
  auto packed = size_of(true);
  auto plain = size_of(false);
  if (!packed.ok() || !plain.ok()) return {false, "encoding failed"};
  size_t packed_total = 0;
  size_t plain_total = 0;
  for (size_t v : *packed) packed_total += v;
  for (size_t v : *plain) plain_total += v;
  const double one = static_cast<double>(plain->back());
  const double ratio = packed_total / one;
  return {
      ratio < 1.05,
      absl::StrFormat("L=1024 s=5: compressed %d B = %.4fx one explicit "
                      "share (%d B); uncompressed %.2fx",
                      packed_total, ratio, plain->back(), plain_total / one)};
}

// 6. Decode of summed truncated encodings against the plaintext oracle.
Outcome OracleEquivalence() {
  constexpr int kInstances = 200;
  Field field = *Field::Create(Field::kGoldilocksModulus);
  Csprng rng(6);
  std::string failures;
  auto aggregate =
      [&](const Afe& afe,
          const std::vector<AfeValue>& in) -> absl::StatusOr<AggregateResult> {
    std::vector<FieldElement> sigma(afe.truncated_length(), field.Zero());
    for (const AfeValue& v : in) {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> x, afe.Encode(v, rng));
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> t, afe.Truncate(x));
      for (size_t i = 0; i < t.size(); ++i)
        sigma[i] = field.Add(sigma[i], t[i]);
    }
    return afe.Decode(sigma, in.size());
  };
  auto same = [](const absl::StatusOr<AggregateResult>& a,
                 const absl::StatusOr<AggregateResult>& b) {
    if (a.ok() != b.ok()) return false;
    if (!a.ok()) return GetErrorKind(a.status()) == GetErrorKind(b.status());
    return *a == *b;
  };

  uint64_t exact_checked = 0;
  for (const std::string& text : AllKinds()) {
    const AfeKind kind = Kind(text);
    if (kind.type == AfeType::kBoolOr || kind.type == AfeType::kBoolAnd) {
      continue;
    }
    auto afe = Afe::Create(kind, field);
    if (!afe.ok()) return {false, afe.status().ToString()};
    int mismatches = 0;
    for (int i = 0; i < kInstances; ++i) {
      const uint64_t n = 1 + rng.Uniform(100);
      std::vector<AfeValue> in;
      for (uint64_t j = 0; j < n; ++j) in.push_back(RandomValue(kind, rng));
      if (!same(aggregate(**afe, in), PlaintextOracle(kind, in))) ++mismatches;
    }
    exact_checked += kInstances;
    if (mismatches > 0) {
      absl::StrAppend(&failures, " [", text, ": ", mismatches, " mismatches]");
    }
  }

  // OR and AND: one-sided error at most 2^-lambda per aggregate.
  constexpr uint64_t kBoolTrials = 100000;
  std::string bool_detail;
  for (const char* text : {"or lambda=8", "and lambda=8"}) {
    const AfeKind kind = Kind(text);
    auto afe = Afe::Create(kind, field);
    uint64_t errors = 0;
    for (uint64_t t = 0; t < kBoolTrials; ++t) {
      const uint64_t n = 1 + rng.Uniform(8);
      std::vector<AfeValue> in;
      for (uint64_t j = 0; j < n; ++j) {
        // One flipped input makes the aggregate depend on the random mask.
        const bool flipped = j == 0;
        const uint64_t v = kind.type == AfeType::kBoolOr ? flipped : !flipped;
        in.push_back(v);
      }
      if (!same(aggregate(**afe, in), PlaintextOracle(kind, in))) ++errors;
    }
    const double bound = std::ldexp(1.0, -8);
    const double rate = static_cast<double>(errors) / kBoolTrials;
    const double limit = bound + 3 * BinomialSigma(bound, kBoolTrials);
    if (rate > limit) absl::StrAppend(&failures, " [", text, " error rate]");
    absl::StrAppend(&bool_detail,
                    absl::StrFormat(" %s err %.5f<=%.5f", text, rate, limit));
  }

  // CountMin: estimates within eps*n with frequency at least 1-delta.
  {
    const AfeKind kind = Kind("countmin eps=0.1 delta=0.05 seed=7");
    auto afe = Afe::Create(kind, field);
    uint64_t queries = 0;
    uint64_t good = 0;
    for (int i = 0; i < kInstances; ++i) {
      const uint64_t n = 1 + rng.Uniform(100);
      std::vector<AfeValue> in;
      std::vector<uint64_t> truth(64, 0);
      for (uint64_t j = 0; j < n; ++j) {
        const uint64_t v = rng.Uniform(64);
        ++truth[v];
        in.push_back(v);
      }
      auto r = aggregate(**afe, in);
      if (!r.ok()) return {false, r.status().ToString()};
      const auto& cm = std::get<CountMinResult>(*r);
      for (uint64_t item = 0; item < 64; ++item) {
        const uint64_t est = cm.Estimate(item);
        ++queries;
        good += est >= truth[item] &&
                static_cast<double>(est - truth[item]) <= 0.1 * n;
      }
    }
    const double freq = static_cast<double>(good) / queries;
    const double need = 1 - 0.05 - 3 * BinomialSigma(0.05, queries);
    if (freq < need) absl::StrAppend(&failures, " [countmin guarantee]");
    absl::StrAppend(
        &bool_detail,
        absl::StrFormat(" countmin within eps*n %.4f>=%.4f", freq, need));
  }

  // MinMaxApprox: the reported bin contains the extreme and spans a factor
  // of at most c.
  for (const char* text :
       {"approx B=1024 c=2 mode=min", "approx B=1024 c=2 mode=max"}) {
    const AfeKind kind = Kind(text);
    auto afe = Afe::Create(kind, field);
    int bad = 0;
    for (int i = 0; i < kInstances; ++i) {
      const uint64_t n = 1 + rng.Uniform(100);
      std::vector<AfeValue> in;
      uint64_t lo = kind.range;
      uint64_t hi = 0;
      for (uint64_t j = 0; j < n; ++j) {
        const uint64_t v = rng.Uniform(kind.range) >> rng.Uniform(10);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        in.push_back(v);
      }
      const uint64_t truth = kind.is_max ? hi : lo;
      auto r = aggregate(**afe, in);
      if (!r.ok()) {
        ++bad;
        continue;
      }
      const auto& a = std::get<ApproxResult>(*r);
      if (!a.lo || !a.hi || truth < *a.lo || truth >= *a.hi ||
          *a.hi > std::max<uint64_t>(kind.factor * *a.lo, 1)) {
        ++bad;
      }
    }
    if (bad > 0) absl::StrAppend(&failures, " [", text, ": ", bad, " outside]");
  }

  return {failures.empty(),
          absl::StrCat(exact_checked, " exact instances over 10 kinds;",
                       bool_detail, failures)};
}

// 7. Least squares against the rational oracle.
Outcome Regression() {
  Field field = *Field::Create(Field::kGoldilocksModulus);
  Csprng rng(7);
  double worst = 0;
  std::string failures;
  for (uint32_t d : {1u, 2u, 4u}) {
    const AfeKind kind =
        Kind(absl::StrCat("linreg d=", d, " b=16 frac=8 signed=1"));
    auto afe = Afe::Create(kind, field);
    if (!afe.ok()) return {false, afe.status().ToString()};
    const double tol = std::ldexp(1.0, 1 - static_cast<int>(kind.frac_bits));
    for (int instance = 0; instance < 50; ++instance) {
      std::vector<double> model;
      for (uint32_t i = 0; i <= d; ++i) {
        model.push_back(-2 + 4 * (rng.NextU64() >> 11) * 0x1.0p-53);
      }
      auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * ((rng.NextU64() >> 11) * 0x1.0p-53);
      };
      std::vector<AfeValue> in;
      for (int j = 0; j < 100; ++j) {
        std::vector<double> row;
        double y = model[0];
        for (uint32_t i = 0; i < d; ++i) {
          row.push_back(uniform(-4, 4));
          y += model[i + 1] * row.back();
        }
        row.push_back(y + uniform(-0.5, 0.5));
        in.push_back(row);
      }
      std::vector<FieldElement> sigma((*afe)->truncated_length(), field.Zero());
      for (const AfeValue& v : in) {
        auto x = (*afe)->Encode(v, rng);
        auto t = (*afe)->Truncate(*x);
        for (size_t i = 0; i < t->size(); ++i) {
          sigma[i] = field.Add(sigma[i], (*t)[i]);
        }
      }
      auto got = (*afe)->Decode(sigma, in.size());
      auto want = PlaintextOracle(kind, in);
      if (!got.ok() || !want.ok()) {
        absl::StrAppend(&failures, " [d=", d, " decode failed]");
        continue;
      }
      const auto& g = std::get<LinRegResult>(*got).coefficients;
      const auto& w = std::get<LinRegResult>(*want).coefficients;
      for (size_t i = 0; i < w.size(); ++i) {
        const double err = std::abs(mpq_class(g[i] - w[i]).get_d());
        worst = std::max(worst, err);
        if (err > tol) absl::StrAppend(&failures, " [d=", d, " coeff ", i, "]");
      }
    }

    // Integer points on a hyperplane are recovered exactly.
    std::vector<AfeValue> line;
    std::vector<int64_t> truth{3};
    for (uint32_t i = 0; i < d; ++i)
      truth.push_back(static_cast<int64_t>(i) - 1);
    for (int j = 0; j < 20; ++j) {
      std::vector<double> row;
      int64_t y = truth[0];
      for (uint32_t i = 0; i < d; ++i) {
        const int64_t xi = static_cast<int64_t>(rng.Uniform(9)) - 4;
        row.push_back(static_cast<double>(xi));
        y += truth[i + 1] * xi;
      }
      row.push_back(static_cast<double>(y));
      line.push_back(row);
    }
    std::vector<FieldElement> sigma((*afe)->truncated_length(), field.Zero());
    for (const AfeValue& v : line) {
      auto t = (*afe)->Truncate(*(*afe)->Encode(v, rng));
      for (size_t i = 0; i < t->size(); ++i)
        sigma[i] = field.Add(sigma[i], (*t)[i]);
    }
    auto got = (*afe)->Decode(sigma, line.size());
    bool exact = got.ok();
    if (exact) {
      const auto& g = std::get<LinRegResult>(*got).coefficients;
      for (size_t i = 0; i < truth.size(); ++i) {
        exact = exact && g[i] == mpq_class(static_cast<long>(truth[i]));
      }
    }
    if (!exact) absl::StrAppend(&failures, " [d=", d, " collinear not exact]");
  }
  return {failures.empty(),
          absl::StrFormat("d=1,2,4 x 50 instances: max |error| %.2e <= 2^-7; "
                          "collinear exact%s",
                          worst, failures)};
}

// 8. Honest views do not depend on the input; an unblinded prover leaks.
Outcome Privacy() {
  DeploymentConfig cfg;
  cfg.modulus = 101;
  cfg.servers = 3;
  cfg.afe = Kind("sum b=4");
  auto dep = Deployment::Create(cfg);
  if (!dep.ok()) return {false, dep.status().ToString()};
  auto honest = PrivacyProbe(**dep, uint64_t{15}, uint64_t{0}, 100000, 0, 8);
  if (!honest.ok()) return {false, honest.status().ToString()};
  auto pair = PrivacyProbe(**dep, uint64_t{6}, uint64_t{9}, 100000, 2, 18);
  if (!pair.ok()) return {false, pair.status().ToString()};
  ProbeOptions broken;
  broken.blind = false;
  auto leak =
      PrivacyProbe(**dep, uint64_t{15}, uint64_t{0}, 100000, 0, 28, broken);
  if (!leak.ok()) return {false, leak.status().ToString()};
  const double max_honest = std::max(honest->max_tv, pair->max_tv);
  return {
      max_honest < 0.05 && leak->max_tv > 0.2,
      absl::StrFormat("honest max TV %.4f < 0.05 over %d coordinates; "
                      "unblinded f(0) TV %.4f > 0.2",
                      max_honest, honest->coordinates.size(), leak->max_tv)};
}

// 9. Robustness enumeration and the verification-off negative control.
Outcome Robustness() {
  RobustnessReport r = RobustnessEnumeration(3, 6, 9);
  std::string detail =
      absl::StrCat(r.runs, " runs, ", r.violations,
                   " outside reachable set; "
                   "forgery shifts total: verified=",
                   r.protected_total_unchanged ? "no" : "YES",
                   " unverified=", r.unprotected_total_shifted ? "yes" : "NO");
  if (!r.failures.empty()) absl::StrAppend(&detail, "; first: ", r.failures[0]);
  return {r.runs > 0 && r.violations == 0 && r.protected_total_unchanged &&
              r.unprotected_total_shifted,
          detail};
}

// 10. Optimized and reference verifiers agree.
Outcome VerifierEquivalence() {
  Csprng rng(10);
  const Strategy families[] = {
      Strategy::kMalformedEncoding, Strategy::kBadTriple, Strategy::kShiftedH,
      Strategy::kWrongF0G0, Strategy::kInconsistentShare};
  const char* kinds[] = {"sum b=4", "freq B=8", "variance b=3", "popular b=5"};
  int disagreements = 0;
  int accepted = 0;
  int total = 0;
  for (uint64_t modulus : {uint64_t{101}, Field::kGoldilocksModulus}) {
    Field field = *Field::Create(modulus);
    for (int i = 0; i < 500; ++i) {
      const AfeKind kind = Kind(kinds[i % 4]);
      auto afe = Afe::Create(kind, field);
      if (!afe.ok()) return {false, afe.status().ToString()};
      const ValidCircuit& c = (*afe)->circuit();
      auto x = (*afe)->Encode(RandomValue(kind, rng), rng);
      absl::StatusOr<ProvedSubmission> proved;
      if (i % 2 == 0) {
        proved = Prove(c, *x, 3, rng);
      } else {
        AdversarySpec spec;
        spec.strategy = families[(i / 2) % 5];
        spec.delta = 1 + rng.Uniform(modulus - 1);
        spec.coordinate = rng.Uniform(x->size());
        proved = ForgeProof(c, *x, 3, spec, rng);
      }
      if (!proved.ok()) return {false, proved.status().ToString()};
      auto point = MakeVerifierPoint(
          field, c.mul_count(), SampleVerifierR(field, c.mul_count(), rng));
      std::vector<FieldElement> coeffs =
          ExpandPrg(field, rng.NextKey(), c.check_count());
      auto fast = VerifyLocally(c, *point, proved->x_shares,
                                proved->proof_shares, coeffs, false);
      auto slow = VerifyLocally(c, *point, proved->x_shares,
                                proved->proof_shares, coeffs, true);
      ++total;
      if (!fast.ok() || !slow.ok() || *fast != *slow) ++disagreements;
      accepted += fast.ok() && *fast;
    }
  }
  return {disagreements == 0,
          absl::StrCat(total, " submissions (", accepted, " accepted), ",
                       disagreements, " disagreements")};
}

// 11. Three server processes over TCP, with a leader crash.
class Process {
 public:
  static pid_t Spawn(const std::vector<std::string>& args) {
    const pid_t pid = fork();
    if (pid == 0) {
      std::vector<char*> argv;
      for (const std::string& a : args)
        argv.push_back(const_cast<char*>(a.c_str()));
      argv.push_back(nullptr);
      execv(argv[0], argv.data());
      _exit(127);
    }
    return pid;
  }
};

std::vector<uint16_t> FreePorts(int n) {
  std::vector<std::unique_ptr<TcpListener>> held;
  std::vector<uint16_t> ports;
  for (int i = 0; i < n; ++i) {
    auto l = TcpListener::Bind("127.0.0.1:0");
    ports.push_back((*l)->port());
    held.push_back(*std::move(l));
  }
  return ports;
}

Outcome Networked(const std::string& server_bin) {
  if (server_bin.empty() || !std::filesystem::exists(server_bin)) {
    return {false, "privagg-server binary not available"};
  }
  const auto dir = std::filesystem::temp_directory_path() /
                   absl::StrCat("privagg-acceptance-", getpid());
  std::filesystem::create_directories(dir);
  const std::vector<uint16_t> ports = FreePorts(3);
  std::string text = "servers=3\nafe=sum b=4\ntimeout_ms=500\nmin_batch=1\n";
  for (int i = 0; i < 3; ++i) {
    absl::StrAppend(&text, "server.", i, "=127.0.0.1:", ports[i], "\n");
  }
  const std::string config_path = (dir / "deploy.conf").string();
  std::ofstream(config_path) << text;
  auto config = DeploymentConfig::Parse(text);
  auto dep = Deployment::Create(*config);
  if (!dep.ok()) return {false, dep.status().ToString()};

  auto snap = [&](int i) {
    return (dir / absl::StrCat("s", i, ".snap")).string();
  };
  auto server_args = [&](int i) {
    return std::vector<std::string>{server_bin, "--config",      config_path,
                                    "--id",     absl::StrCat(i), "--snapshot",
                                    snap(i)};
  };
  std::vector<pid_t> pids(3);
  pids[2] = Process::Spawn(server_args(2));
  pids[1] = Process::Spawn(server_args(1));
  std::vector<std::string> leader = server_args(0);
  leader.push_back("--crash-after");
  leader.push_back("40");
  pids[0] = Process::Spawn(leader);

  // Restarts the leader from its snapshot once the crash hook fires.
  std::atomic<bool> restarted{false};
  std::atomic<bool> done{false};
  int crash_status = 0;
  std::thread watcher([&] {
    while (!done) {
      int status = 0;
      if (waitpid(pids[0], &status, WNOHANG) == pids[0]) {
        crash_status = status;
        pids[0] = Process::Spawn(server_args(0));
        restarted = true;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  });

  Csprng rng(11);
  uint64_t expected = 0;
  int accepted = 0;
  std::string error;
  for (int i = 0; i < 100 && error.empty(); ++i) {
    const uint64_t v = rng.Uniform(16);
    auto sub = ClientSubmit(**dep, v, rng);
    auto verdict =
        SubmitWithRetry(*dep, *sub, std::chrono::milliseconds(30000));
    if (!verdict.ok()) {
      error = absl::StrCat("submission ", i, ": ", verdict.status().ToString());
    } else if (*verdict) {
      ++accepted;
      expected += v;
    }
  }
  done = true;
  watcher.join();

  std::string published = "none";
  bool total_ok = false;
  std::vector<AccPublishMsg> pubs;
  if (error.empty()) {
    auto client = NetClient::Connect(*dep, std::chrono::milliseconds(5000));
    if (client.ok()) {
      auto got =
          (*client)->RequestPublications(std::chrono::milliseconds(10000));
      if (got.ok()) {
        pubs = *got;
        auto result = Publish(**dep, pubs);
        if (result.ok()) {
          published = FormatResult(*result);
          total_ok = published == absl::StrCat("sum=", expected);
        } else {
          published = result.status().ToString();
        }
      }
    }
  }
  for (pid_t pid : pids) kill(pid, SIGTERM);
  for (pid_t pid : pids) waitpid(pid, nullptr, 0);

  // Every snapshot replays to the state the server published.
  bool snapshots_ok = pubs.size() == 3;
  for (int i = 0; i < 3 && snapshots_ok; ++i) {
    std::ifstream in(snap(i), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    auto state = ReadSnapshot(**dep, ss.str());
    snapshots_ok =
        state.ok() &&
        state->accumulator.accepted_count == pubs[i].accepted_count &&
        state->accumulator.sums == pubs[i].accumulator &&
        AcceptedSetDigest(state->accepted) == pubs[i].digest;
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);

  const bool crashed = restarted && WIFEXITED(crash_status);
  return {
      error.empty() && accepted == 100 && total_ok && crashed && snapshots_ok,
      absl::StrCat("100 submissions, ", accepted, " accepted; published ",
                   published, " vs oracle sum=", expected,
                   "; leader crash+restart ", crashed ? "yes" : "NO",
                   "; snapshots consistent ", snapshots_ok ? "yes" : "NO",
                   error.empty() ? "" : "; ", error)};
}

}  // namespace
}  // namespace privagg

int main(int argc, char** argv) {
  using privagg::Outcome;
  std::string server_bin;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--server-bin") == 0 && i + 1 < argc) {
      server_bin = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--server-bin <path>] [--only N]\n",
                   argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria =
      {
          {"SNIP completeness", privagg::Completeness},
          {"soundness bound", privagg::Soundness},
          {"adaptive-query bound", privagg::Adaptive},
          {"constant server-to-server bytes", privagg::ConstantServerBytes},
          {"PRG share compression", privagg::Compression},
          {"AFE oracle equivalence", privagg::OracleEquivalence},
          {"regression fidelity", privagg::Regression},
          {"privacy marginals", privagg::Privacy},
          {"robustness enumeration", privagg::Robustness},
          {"optimized verifier equivalence", privagg::VerifierEquivalence},
          {"networked smoke with leader crash",
           [&] { return privagg::Networked(server_bin); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i + 1)) continue;
    const auto start = privagg::Stopwatch::now();
    Outcome o = criteria[i].second();
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %-34s %s (%.1fs) %s\n", i + 1,
                criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                privagg::Seconds(start), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
