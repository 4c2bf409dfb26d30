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
#include <numeric>

#include "absl/strings/str_cat.h"
#include "privagg/harness.h"
#include "privagg/status.h"

namespace privagg {
namespace {

constexpr uint64_t kMaxProbeModulus = 1 << 16;

struct Transcript {
  std::vector<uint64_t> values;  // one per coordinate
};

// One verification as seen by `observer`, with a malicious peer perturbing
// the protocol according to `options`.
absl::StatusOr<Transcript> ObserveOnce(const Deployment& dep,
                                       const AfeValue& value, int observer,
                                       const ProbeOptions& options,
                                       Csprng& rng) {
  const Field& f = dep.field();
  const ValidCircuit& c = dep.circuit();
  const int s = dep.servers();
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> x,
                           dep.afe().Encode(value, rng));
  ProveOptions prove;
  prove.blind = options.blind;
  PRIVAGG_ASSIGN_OR_RETURN(ProofPlaintext proof, BuildProof(c, x, rng, prove));
  std::vector<SnipProofShare> proofs = ShareProof(f, proof, s, rng, false);
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<ShareVector> xs, Split(f, x, s, rng));
  PRIVAGG_ASSIGN_OR_RETURN(
      VerifierPoint point,
      MakeVerifierPoint(f, c.mul_count(),
                        SampleVerifierR(f, c.mul_count(), rng)));
  std::vector<FieldElement> coeffs =
      ExpandPrg(f, rng.NextKey(), c.check_count());

  const int malicious = (observer + 1) % s;
  std::vector<VerifierState> states;
  FieldElement d = f.Zero();
  FieldElement e = f.Zero();
  for (int j = 0; j < s; ++j) {
    std::vector<FieldElement> share = xs[j].Expand(f);
    PRIVAGG_ASSIGN_OR_RETURN(
        Round1Output r1, VerifierRound1(c, point, share, proofs[j], j == 0));
    if (j == malicious && options.sigma_tamper == 0) {
      r1.d_share = f.Add(r1.d_share, f.FromUint(options.d_shift));
    }
    d = f.Add(d, r1.d_share);
    e = f.Add(e, r1.e_share);
    states.push_back(std::move(r1.state));
  }
  std::vector<FieldElement> sigmas;
  std::vector<FieldElement> batches;
  for (int j = 0; j < s; ++j) {
    PRIVAGG_ASSIGN_OR_RETURN(Round2Output r2,
                             VerifierRound2(f, states[j], d, e, s, coeffs));
    if (j == malicious) {
      r2.sigma_share = f.Add(r2.sigma_share, f.FromUint(options.sigma_tamper));
    }
    sigmas.push_back(r2.sigma_share);
    batches.push_back(r2.batch_share);
  }
  PRIVAGG_ASSIGN_OR_RETURN(bool accept, Decide(f, sigmas, batches, s));

  const SnipProofShare& mine = proofs[observer];
  std::vector<FieldElement> h = mine.h_points.Expand(f);
  Transcript t;
  t.values = {xs[observer].Expand(f)[0].value,
              mine.f0.value,
              mine.g0.value,
              h[0].value,
              h[h.size() - 1].value,
              mine.triple.a.value,
              mine.triple.b.value,
              mine.triple.c.value,
              d.value,
              e.value};
  for (int j = 0; j < s; ++j) {
    if (j != observer) t.values.push_back(sigmas[j].value);
  }
  t.values.push_back(accept ? 1 : 0);
  return t;
}

double Sigma(double p, uint64_t n) {
  return n == 0 ? 0 : std::sqrt(p * (1 - p) / static_cast<double>(n));
}

}  // namespace

absl::StatusOr<PrivacyReport> PrivacyProbe(const Deployment& deployment,
                                           const AfeValue& x0,
                                           const AfeValue& x1, uint64_t trials,
                                           int observer, uint64_t seed,
                                           const ProbeOptions& options) {
  const uint64_t p = deployment.field().modulus();
  if (p > kMaxProbeModulus) {
    return Error(ErrorKind::kInvalidInput,
                 "the privacy probe needs a field of at most 2^16 elements");
  }
  if (observer < 0 || observer >= deployment.servers()) {
    return Error(ErrorKind::kInvalidInput, "observer is not a server index");
  }
  PrivacyReport report;
  report.trials = trials;
  report.coordinates = {"x_share[0]",  "f0_share", "g0_share", "h_share[0]",
                        "h_share[2M]", "a_share",  "b_share",  "c_share",
                        "d",           "e"};
  for (int j = 0; j < deployment.servers(); ++j) {
    if (j != observer)
      report.coordinates.push_back(absl::StrCat("sigma[", j, "]"));
  }
  report.coordinates.push_back("verdict");
  const size_t k = report.coordinates.size();
  std::vector<std::vector<std::vector<uint64_t>>> hist(
      2, std::vector<std::vector<uint64_t>>(k, std::vector<uint64_t>(p, 0)));

  Csprng rng(seed);
  for (uint64_t t = 0; t < trials; ++t) {
    for (int which = 0; which < 2; ++which) {
      PRIVAGG_ASSIGN_OR_RETURN(
          Transcript tr, ObserveOnce(deployment, which == 0 ? x0 : x1, observer,
                                     options, rng));
      for (size_t i = 0; i < k; ++i) ++hist[which][i][tr.values[i]];
    }
  }
  for (size_t i = 0; i < k; ++i) {
    double tv = 0;
    for (uint64_t v = 0; v < p; ++v) {
      tv += std::abs(static_cast<double>(hist[0][i][v]) -
                     static_cast<double>(hist[1][i][v]));
    }
    tv /= 2.0 * static_cast<double>(std::max<uint64_t>(trials, 1));
    report.tv.push_back(tv);
    report.max_tv = std::max(report.max_tv, tv);
  }
  return report;
}

absl::StatusOr<std::vector<SweepRow>> SoundnessSweep(
    const Deployment& deployment, const AfeValue& value,
    std::span<const Strategy> families, uint64_t trials, uint64_t seed) {
  const Field& f = deployment.field();
  const ValidCircuit& c = deployment.circuit();
  const size_t m = c.mul_count();
  const double p = static_cast<double>(f.modulus());
  Csprng rng(seed);
  std::vector<SweepRow> rows;
  for (Strategy family : families) {
    SweepRow row;
    row.family = family;
    row.trials = trials;
    row.bound = static_cast<double>(2 * m + 1) / p;
    row.sigma = Sigma(row.bound, trials);
    for (uint64_t t = 0; t < trials; ++t) {
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> x,
                               deployment.afe().Encode(value, rng));
      AdversarySpec spec;
      spec.strategy = family;
      spec.delta = 1 + rng.Uniform(f.modulus() - 1);
      spec.coordinate = family == Strategy::kShiftedH ? rng.Uniform(2 * m + 1)
                                                      : rng.Uniform(x.size());
      PRIVAGG_ASSIGN_OR_RETURN(
          ProvedSubmission proved,
          ForgeProof(c, std::move(x), deployment.servers(), spec, rng));
      PRIVAGG_ASSIGN_OR_RETURN(
          VerifierPoint point,
          MakeVerifierPoint(f, m, SampleVerifierR(f, m, rng)));
      std::vector<FieldElement> coeffs =
          ExpandPrg(f, rng.NextKey(), c.check_count());
      PRIVAGG_ASSIGN_OR_RETURN(bool accept,
                               VerifyLocally(c, point, proved.x_shares,
                                             proved.proof_shares, coeffs));
      row.accepts += accept ? 1 : 0;
    }
    row.rate = static_cast<double>(row.accepts) / static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

absl::StatusOr<AdaptiveReport> AdaptiveSweep(const Field& field,
                                             uint64_t queries, uint64_t trials,
                                             uint64_t seed) {
  AfeKind kind;
  kind.type = AfeType::kSum;
  kind.bits = 1;
  PRIVAGG_ASSIGN_OR_RETURN(std::shared_ptr<const Afe> afe,
                           Afe::Create(kind, field));
  const ValidCircuit& c = afe->circuit();
  const size_t m = c.mul_count();
  if (m != 1) return Error(ErrorKind::kInvalidInput, "expected M = 1");
  const uint64_t p = field.modulus();
  const int s = 2;
  // (x, bit) = (2, 2): the linear check holds, the bit check does not.
  const std::vector<FieldElement> x{field.FromUint(2), field.FromUint(2)};

  AdaptiveReport report;
  report.trials = trials;
  report.queries = queries;
  report.bound =
      static_cast<double>((2 * m + 1) * queries) / static_cast<double>(p);
  report.sigma = Sigma(std::min(report.bound, 1.0), trials);
  Csprng rng(seed);
  for (uint64_t t = 0; t < trials; ++t) {
    PRIVAGG_ASSIGN_OR_RETURN(
        VerifierPoint point,
        MakeVerifierPoint(field, m, SampleVerifierR(field, m, rng)));
    // Untried candidates for r, in an order fixed before any query.
    std::vector<uint64_t> candidates;
    for (uint64_t v = m + 1; v < p; ++v) candidates.push_back(v);
    for (size_t i = candidates.size(); i > 1; --i) {
      std::swap(candidates[i - 1], candidates[rng.Uniform(i)]);
    }
    size_t next = 0;
    bool success = false;
    for (uint64_t q = 0; q < queries && !success; ++q) {
      if (next + 2 > candidates.size()) break;
      const FieldElement r1 = field.FromUint(candidates[next++]);
      const FieldElement r2 = field.FromUint(candidates[next++]);
      ProveOptions options;
      options.require_valid = false;
      PRIVAGG_ASSIGN_OR_RETURN(ProofPlaintext proof,
                               BuildProof(c, x, rng, options));
      // E(t) = k (t - r1)(t - r2) with E(1) = -h(1): the gate output reads
      // as zero and f g - h vanishes exactly at r1 and r2.
      const FieldElement one = field.One();
      const FieldElement denom =
          field.Mul(field.Sub(one, r1), field.Sub(one, r2));
      PRIVAGG_ASSIGN_OR_RETURN(FieldElement inv, field.Inverse(denom));
      const FieldElement k = field.Neg(field.Mul(proof.h_points[1], inv));
      for (size_t i = 0; i < proof.h_points.size(); ++i) {
        const FieldElement ti = field.FromUint(i);
        const FieldElement e =
            field.Mul(k, field.Mul(field.Sub(ti, r1), field.Sub(ti, r2)));
        proof.h_points[i] = field.Add(proof.h_points[i], e);
      }
      PRIVAGG_ASSIGN_OR_RETURN(std::vector<ShareVector> xs,
                               Split(field, x, s, rng));
      std::vector<SnipProofShare> proofs = ShareProof(field, proof, s, rng);
      std::vector<FieldElement> coeffs =
          ExpandPrg(field, rng.NextKey(), c.check_count());
      PRIVAGG_ASSIGN_OR_RETURN(bool accept,
                               VerifyLocally(c, point, xs, proofs, coeffs));
      success = accept;
    }
    report.successes += success ? 1 : 0;
  }
  report.rate = static_cast<double>(report.successes) /
                static_cast<double>(std::max<uint64_t>(trials, 1));
  return report;
}

namespace {

DeploymentConfig SumConfig(uint32_t bits, bool verify) {
  DeploymentConfig cfg;
  cfg.servers = 3;
  cfg.afe.type = AfeType::kSum;
  cfg.afe.bits = bits;
  cfg.min_batch = 0;
  cfg.timeout_ms = 100;
  cfg.verify = verify;
  return cfg;
}

std::optional<uint64_t> TotalOf(const RunReport& r) {
  if (!r.aggregate.has_value()) return std::nullopt;
  const auto* sum = std::get_if<SumResult>(&*r.aggregate);
  if (sum == nullptr || !sum->sum.fits_ulong_p()) return std::nullopt;
  return sum->sum.get_ui();
}

}  // namespace

RobustnessReport RobustnessEnumeration(uint32_t max_bits, int max_clients,
                                       uint64_t seed) {
  constexpr Strategy kClientStrategies[] = {
      Strategy::kMalformedEncoding, Strategy::kBadTriple,
      Strategy::kShiftedH,          Strategy::kWrongF0G0,
      Strategy::kInconsistentShare, Strategy::kValidButFalseData,
  };
  RobustnessReport report;
  Csprng rng(seed);
  for (uint32_t b = 1; b <= max_bits; ++b) {
    const uint64_t top = (uint64_t{1} << b) - 1;
    const DeploymentConfig cfg = SumConfig(b, true);
    for (int n = 1; n <= max_clients; ++n) {
      for (int k = 0; k <= n; ++k) {
        for (Strategy strategy : kClientStrategies) {
          if (k == 0 && strategy != kClientStrategies[0]) continue;
          std::vector<AfeValue> inputs;
          for (int i = 0; i < n; ++i) inputs.push_back(rng.Uniform(top + 1));
          // Adversaries sit at random distinct positions.
          std::vector<int> order(n);
          std::iota(order.begin(), order.end(), 0);
          for (int i = n; i > 1; --i) {
            std::swap(order[i - 1], order[rng.Uniform(i)]);
          }
          std::vector<AdversarySpec> advs;
          std::vector<bool> adversarial(n, false);
          for (int a = 0; a < k; ++a) {
            AdversarySpec spec;
            spec.role = AdversarySpec::kClient;
            spec.target = order[a];
            spec.strategy = strategy;
            spec.delta = 1 + rng.Uniform(1000);
            spec.coordinate = rng.Uniform(2 * b + 1);
            spec.value = absl::StrCat(rng.Uniform(top + 1));
            advs.push_back(spec);
            adversarial[order[a]] = true;
          }
          uint64_t honest = 0;
          for (int i = 0; i < n; ++i) {
            if (!adversarial[i]) honest += std::get<uint64_t>(inputs[i]);
          }
          RunReport r = RunSimulation(cfg, inputs, advs, rng.NextU64());
          ++report.runs;
          bool ok = true;
          for (int i = 0; i < n; ++i) {
            if (!adversarial[i] && r.submissions[i].accepted != true)
              ok = false;
          }
          const uint64_t extra = r.accepted() - static_cast<uint64_t>(n - k);
          auto total = TotalOf(r);
          if (!total.has_value() || *total < honest ||
              *total - honest > extra * top) {
            ok = false;
          }
          if (!ok) {
            ++report.violations;
            report.failures.push_back(
                absl::StrCat("b=", b, " n=", n, " k=", k, " ",
                             std::string(StrategyName(strategy)),
                             " total=", total ? absl::StrCat(*total) : "none",
                             " honest=", honest, " accepted=", r.accepted()));
          }
        }
      }
    }
  }

  // One out-of-range forgery among honest clients, with and without SNIP
  // verification.
  const uint32_t b = std::min<uint32_t>(max_bits, 3);
  std::vector<AfeValue> inputs{uint64_t{1}, uint64_t{2}, uint64_t{3}};
  AdversarySpec forge;
  forge.role = AdversarySpec::kClient;
  forge.target = 2;
  forge.strategy = Strategy::kMalformedEncoding;
  forge.coordinate = 0;
  forge.delta = 1000;
  std::vector<AdversarySpec> advs{forge};
  auto guarded = TotalOf(RunSimulation(SumConfig(b, true), inputs, advs, seed));
  auto open = TotalOf(RunSimulation(SumConfig(b, false), inputs, advs, seed));
  report.protected_total_unchanged = guarded.has_value() && *guarded == 3;
  report.unprotected_total_shifted =
      open.has_value() && *open > 3 + ((uint64_t{1} << b) - 1);
  return report;
}

}  // namespace privagg
