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

#include "privagg/snip.h"

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {

namespace {

LagrangeRowCache& RowCache() {
  static LagrangeRowCache* cache = new LagrangeRowCache(256);
  return *cache;
}

absl::Status CheckProofShape(const ValidCircuit& circuit,
                             std::span<const FieldElement> x_share,
                             const SnipProofShare& proof) {
  const size_t m = circuit.mul_count();
  if (x_share.size() != circuit.input_count()) {
    return Error(
        ErrorKind::kMalformedShare,
        absl::StrCat("encoding share has ", x_share.size(),
                     " elements, circuit takes ", circuit.input_count()));
  }
  if (proof.h_points.length() != 2 * m + 1) {
    return Error(ErrorKind::kMalformedShare,
                 absl::StrCat("h share has ", proof.h_points.length(),
                              " points, expected ", 2 * m + 1));
  }
  return absl::OkStatus();
}

// Shares of f and g on {0..M} plus the h points and check shares.
struct LocalPoints {
  std::vector<FieldElement> f;
  std::vector<FieldElement> g;
  std::vector<FieldElement> h;
  std::vector<FieldElement> checks;
};

absl::StatusOr<LocalPoints> LocalPointsFor(
    const ValidCircuit& circuit, std::span<const FieldElement> x_share,
    const SnipProofShare& proof, bool is_first) {
  PRIVAGG_RETURN_IF_ERROR(CheckProofShape(circuit, x_share, proof));
  const size_t m = circuit.mul_count();
  LocalPoints out;
  out.h = proof.h_points.Expand(circuit.field());
  std::span<const FieldElement> products(out.h.data() + 1, m);
  PRIVAGG_ASSIGN_OR_RETURN(
      DerivedShares derived,
      circuit.DeriveWireShares(x_share, products, is_first));
  out.f.reserve(m + 1);
  out.g.reserve(m + 1);
  out.f.push_back(proof.f0);
  out.g.push_back(proof.g0);
  out.f.insert(out.f.end(), derived.f_points.begin(), derived.f_points.end());
  out.g.insert(out.g.end(), derived.g_points.begin(), derived.g_points.end());
  out.checks = std::move(derived.check_shares);
  return out;
}

Round1Output FinishRound1(const Field& field, FieldElement r, FieldElement fr,
                          FieldElement gr, FieldElement hr,
                          std::vector<FieldElement> checks,
                          const BeaverTripleShare& triple) {
  Round1Output out;
  out.d_share = field.Sub(fr, triple.a);
  out.e_share = field.Sub(field.Mul(r, gr), triple.b);
  out.state.rh_share = field.Mul(r, hr);
  out.state.check_shares = std::move(checks);
  out.state.triple = triple;
  return out;
}

}  // namespace

absl::StatusOr<ProofPlaintext> BuildProof(const ValidCircuit& circuit,
                                          std::span<const FieldElement> x,
                                          Csprng& rng,
                                          const ProveOptions& options) {
  const Field& field = circuit.field();
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> trace, circuit.Eval(x));
  if (options.require_valid) {
    for (FieldElement v : circuit.CheckValues(trace)) {
      if (v.value != 0) {
        return Error(ErrorKind::kInvalidInput,
                     "encoding does not satisfy the validity circuit");
      }
    }
  }
  MulIo io = circuit.MulInputs(trace);
  const size_t m = circuit.mul_count();

  ProofPlaintext proof;
  proof.f0 = options.blind ? rng.NextElement(field) : field.Zero();
  proof.g0 = options.blind ? rng.NextElement(field) : field.Zero();

  std::vector<FieldElement> f_vals{proof.f0};
  std::vector<FieldElement> g_vals{proof.g0};
  f_vals.insert(f_vals.end(), io.u.begin(), io.u.end());
  g_vals.insert(g_vals.end(), io.v.begin(), io.v.end());
  std::vector<FieldElement> f_ext = ExtendConsecutive(field, f_vals, 2 * m + 1);
  std::vector<FieldElement> g_ext = ExtendConsecutive(field, g_vals, 2 * m + 1);
  proof.h_points.resize(2 * m + 1);
  for (size_t t = 0; t <= 2 * m; ++t) {
    proof.h_points[t] = field.Mul(f_ext[t], g_ext[t]);
  }
  proof.triple = SampleTriple(field, rng);
  return proof;
}

void SnipProofShare::AppendTo(const Field& field, std::string* out) const {
  field.AppendElement(f0, out);
  field.AppendElement(g0, out);
  field.AppendElement(triple.a, out);
  field.AppendElement(triple.b, out);
  field.AppendElement(triple.c, out);
  h_points.AppendTo(field, out);
}

size_t SnipProofShare::EncodedSize(const Field& field) const {
  return 5 * field.element_width_bytes() + h_points.EncodedSize(field);
}

absl::StatusOr<SnipProofShare> SnipProofShare::Parse(const Field& field,
                                                     ByteReader* reader,
                                                     int server_index) {
  SnipProofShare share;
  PRIVAGG_ASSIGN_OR_RETURN(share.f0, reader->ReadElement(field));
  PRIVAGG_ASSIGN_OR_RETURN(share.g0, reader->ReadElement(field));
  PRIVAGG_ASSIGN_OR_RETURN(share.triple.a, reader->ReadElement(field));
  PRIVAGG_ASSIGN_OR_RETURN(share.triple.b, reader->ReadElement(field));
  PRIVAGG_ASSIGN_OR_RETURN(share.triple.c, reader->ReadElement(field));
  PRIVAGG_ASSIGN_OR_RETURN(share.h_points,
                           ShareVector::Parse(field, reader, server_index));
  return share;
}

std::vector<SnipProofShare> ShareProof(const Field& field,
                                       const ProofPlaintext& proof, int s,
                                       Csprng& rng, bool compress) {
  std::vector<FieldElement> f0 = SplitScalar(field, proof.f0, s, rng);
  std::vector<FieldElement> g0 = SplitScalar(field, proof.g0, s, rng);
  std::vector<BeaverTripleShare> triples =
      SplitTriple(field, proof.triple, s, rng);
  absl::StatusOr<std::vector<ShareVector>> h =
      compress ? SplitPrg(field, proof.h_points, s, rng)
               : Split(field, proof.h_points, s, rng);
  std::vector<SnipProofShare> out(s);
  for (int i = 0; i < s; ++i) {
    out[i] = {f0[i], g0[i], std::move((*h)[i]), triples[i]};
  }
  return out;
}

absl::StatusOr<ProvedSubmission> Prove(const ValidCircuit& circuit,
                                       std::span<const FieldElement> x, int s,
                                       Csprng& rng, const ProveOptions& options,
                                       bool compress) {
  const Field& field = circuit.field();
  if (s < 2) {
    return Error(ErrorKind::kTooFewServers,
                 absl::StrCat("need at least 2 servers, got ", s));
  }
  PRIVAGG_ASSIGN_OR_RETURN(ProofPlaintext proof,
                           BuildProof(circuit, x, rng, options));
  ProvedSubmission out;
  if (compress) {
    PRIVAGG_ASSIGN_OR_RETURN(out.x_shares, SplitPrg(field, x, s, rng));
  } else {
    PRIVAGG_ASSIGN_OR_RETURN(out.x_shares, Split(field, x, s, rng));
  }
  out.proof_shares = ShareProof(field, proof, s, rng, compress);
  return out;
}

absl::StatusOr<VerifierPoint> MakeVerifierPoint(const Field& field,
                                                size_t mul_count,
                                                FieldElement r) {
  if (r.value <= mul_count) {
    return Error(
        ErrorKind::kConfigError,
        absl::StrCat("r = ", r.value, " lies in {0..", mul_count, "}"));
  }
  if (2 * static_cast<unsigned __int128>(mul_count) + 2 > field.modulus()) {
    return Error(ErrorKind::kConfigError,
                 absl::StrCat("field of size ", field.modulus(),
                              " too small for M = ", mul_count));
  }
  VerifierPoint point;
  point.r = r;
  point.mul_count = mul_count;
  point.row_f = RowCache().Get(field, mul_count + 1, r);
  point.row_h = RowCache().Get(field, 2 * mul_count + 1, r);
  return point;
}

FieldElement SampleVerifierR(const Field& field, size_t mul_count,
                             Csprng& rng) {
  return FieldElement{mul_count + 1 +
                      rng.Uniform(field.modulus() - mul_count - 1)};
}

absl::StatusOr<VerifierConfig> VerifierConfig::Create(const Field& field,
                                                      size_t mul_count,
                                                      FieldElement r,
                                                      uint64_t budget) {
  PRIVAGG_ASSIGN_OR_RETURN(VerifierPoint point,
                           MakeVerifierPoint(field, mul_count, r));
  return VerifierConfig(field, std::move(point), budget);
}

VerifierConfig VerifierConfig::Sample(const Field& field, size_t mul_count,
                                      uint64_t budget, Csprng& rng) {
  FieldElement r = SampleVerifierR(field, mul_count, rng);
  return *Create(field, mul_count, r, budget);
}

absl::StatusOr<VerifierPoint> VerifierConfig::Acquire() {
  if (uses_ >= budget_) {
    return Error(ErrorKind::kRotationExhausted,
                 absl::StrCat("r used ", uses_, " times, budget ", budget_));
  }
  ++uses_;
  return point_;
}

void VerifierConfig::Rotate(Csprng& rng) {
  FieldElement r = SampleVerifierR(field_, point_.mul_count, rng);
  point_ = *MakeVerifierPoint(field_, point_.mul_count, r);
  uses_ = 0;
  ++rotations_;
}

VerifierPoint VerifierConfig::AcquireOrRotate(Csprng& rng) {
  if (uses_ >= budget_) Rotate(rng);
  ++uses_;
  return point_;
}

absl::StatusOr<Round1Output> VerifierRound1(
    const ValidCircuit& circuit, const VerifierPoint& point,
    std::span<const FieldElement> x_share, const SnipProofShare& proof,
    bool is_first) {
  const Field& field = circuit.field();
  if (point.mul_count != circuit.mul_count()) {
    return Error(ErrorKind::kConfigError, "verifier point built for another M");
  }
  PRIVAGG_ASSIGN_OR_RETURN(LocalPoints pts,
                           LocalPointsFor(circuit, x_share, proof, is_first));
  PRIVAGG_ASSIGN_OR_RETURN(FieldElement fr,
                           InterpolateEval(field, *point.row_f, pts.f));
  PRIVAGG_ASSIGN_OR_RETURN(FieldElement gr,
                           InterpolateEval(field, *point.row_f, pts.g));
  PRIVAGG_ASSIGN_OR_RETURN(FieldElement hr,
                           InterpolateEval(field, *point.row_h, pts.h));
  return FinishRound1(field, point.r, fr, gr, hr, std::move(pts.checks),
                      proof.triple);
}

absl::StatusOr<Round1Output> VerifierRound1Unoptimized(
    const ValidCircuit& circuit, FieldElement r,
    std::span<const FieldElement> x_share, const SnipProofShare& proof,
    bool is_first) {
  const Field& field = circuit.field();
  const size_t m = circuit.mul_count();
  PRIVAGG_ASSIGN_OR_RETURN(LocalPoints pts,
                           LocalPointsFor(circuit, x_share, proof, is_first));
  std::vector<FieldElement> small = ConsecutiveDomain(field, m + 1);
  std::vector<FieldElement> large = ConsecutiveDomain(field, 2 * m + 1);
  PRIVAGG_ASSIGN_OR_RETURN(Polynomial f, Interpolate(field, small, pts.f));
  PRIVAGG_ASSIGN_OR_RETURN(Polynomial g, Interpolate(field, small, pts.g));
  PRIVAGG_ASSIGN_OR_RETURN(Polynomial h, Interpolate(field, large, pts.h));
  return FinishRound1(field, r, f.Evaluate(field, r), g.Evaluate(field, r),
                      h.Evaluate(field, r), std::move(pts.checks),
                      proof.triple);
}

absl::StatusOr<Round2Output> VerifierRound2(
    const Field& field, const VerifierState& state, FieldElement d,
    FieldElement e, int s, std::span<const FieldElement> batch_coeffs) {
  PRIVAGG_ASSIGN_OR_RETURN(FieldElement inv_s,
                           field.Inverse(field.FromUint(s)));
  FieldElement sigma = field.Mul(field.Mul(d, e), inv_s);
  sigma = field.Add(sigma, field.Mul(d, state.triple.b));
  sigma = field.Add(sigma, field.Mul(e, state.triple.a));
  sigma = field.Add(sigma, state.triple.c);
  sigma = field.Sub(sigma, state.rh_share);
  Round2Output out;
  out.sigma_share = sigma;
  PRIVAGG_ASSIGN_OR_RETURN(
      out.batch_share, BatchCombine(field, state.check_shares, batch_coeffs));
  return out;
}

absl::StatusOr<bool> Decide(const Field& field,
                            std::span<const FieldElement> sigma_shares,
                            std::span<const FieldElement> batch_shares, int s) {
  if (sigma_shares.size() != static_cast<size_t>(s) ||
      batch_shares.size() != static_cast<size_t>(s)) {
    return Error(
        ErrorKind::kMissingShare,
        absl::StrCat("expected ", s, " round-2 shares, got ",
                     sigma_shares.size(), " and ", batch_shares.size()));
  }
  return SumElements(field, sigma_shares).value == 0 &&
         SumElements(field, batch_shares).value == 0;
}

absl::StatusOr<bool> VerifyLocally(const ValidCircuit& circuit,
                                   const VerifierPoint& point,
                                   std::span<const ShareVector> x_shares,
                                   std::span<const SnipProofShare> proofs,
                                   std::span<const FieldElement> batch_coeffs,
                                   bool unoptimized) {
  const Field& field = circuit.field();
  const int s = static_cast<int>(x_shares.size());
  if (proofs.size() != x_shares.size()) {
    return Error(ErrorKind::kMissingShare, "proof and encoding share counts");
  }
  std::vector<Round1Output> r1;
  r1.reserve(s);
  FieldElement d = field.Zero();
  FieldElement e = field.Zero();
  for (int i = 0; i < s; ++i) {
    std::vector<FieldElement> x = x_shares[i].Expand(field);
    absl::StatusOr<Round1Output> out =
        unoptimized
            ? VerifierRound1Unoptimized(circuit, point.r, x, proofs[i], i == 0)
            : VerifierRound1(circuit, point, x, proofs[i], i == 0);
    if (!out.ok()) return out.status();
    d = field.Add(d, out->d_share);
    e = field.Add(e, out->e_share);
    r1.push_back(*std::move(out));
  }
  std::vector<FieldElement> sigmas;
  std::vector<FieldElement> batches;
  for (int i = 0; i < s; ++i) {
    PRIVAGG_ASSIGN_OR_RETURN(
        Round2Output out,
        VerifierRound2(field, r1[i].state, d, e, s, batch_coeffs));
    sigmas.push_back(out.sigma_share);
    batches.push_back(out.batch_share);
  }
  return Decide(field, sigmas, batches, s);
}

}  // namespace privagg
