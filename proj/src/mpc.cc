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

#include "absl/strings/str_cat.h"
#include "privagg/snip.h"
#include "privagg/status.h"

namespace privagg {

ValidCircuit TripleCheckCircuit(const Field& field, size_t count) {
  CircuitBuilder b(field, 3 * count);
  for (size_t t = 0; t < count; ++t) {
    Wire prod = b.Mul(b.Input(3 * t), b.Input(3 * t + 1));
    b.AssertZero(
        {{prod, field.One()}, {b.Input(3 * t + 2), field.Neg(field.One())}},
        field.Zero());
  }
  return std::move(b).Build();
}

absl::StatusOr<MpcClientMaterial> PrepareMpcTriples(const Field& field,
                                                    size_t count, int s,
                                                    Csprng& rng,
                                                    FieldElement corrupt_c) {
  std::vector<FieldElement> flat;
  flat.reserve(3 * count);
  for (size_t t = 0; t < count; ++t) {
    BeaverTriple triple = SampleTriple(field, rng);
    if (t == 0) triple.c = field.Add(triple.c, corrupt_c);
    flat.push_back(triple.a);
    flat.push_back(triple.b);
    flat.push_back(triple.c);
  }
  ValidCircuit circuit = TripleCheckCircuit(field, count);
  ProveOptions options;
  options.require_valid = false;
  PRIVAGG_ASSIGN_OR_RETURN(ProvedSubmission proved,
                           Prove(circuit, flat, s, rng, options));
  MpcClientMaterial out;
  out.triple_shares = std::move(proved.x_shares);
  out.triple_proof = std::move(proved.proof_shares);
  return out;
}

absl::StatusOr<bool> MpcValidate(const ValidCircuit& circuit,
                                 std::span<const ShareVector> x_shares,
                                 const MpcClientMaterial& material, Csprng& rng,
                                 const MpcOptions& options) {
  const Field& field = circuit.field();
  const size_t m = circuit.mul_count();
  const int s = static_cast<int>(x_shares.size());
  if (material.triple_shares.size() != x_shares.size() ||
      material.triple_proof.size() != x_shares.size()) {
    return Error(ErrorKind::kMissingShare, "triple material per server");
  }
  for (const ShareVector& t : material.triple_shares) {
    if (t.length() != 3 * m) {
      return Error(ErrorKind::kArityMismatch,
                   absl::StrCat("expected ", m, " triples per server"));
    }
  }

  ValidCircuit triple_circuit = TripleCheckCircuit(field, m);
  PRIVAGG_ASSIGN_OR_RETURN(
      VerifierPoint point,
      MakeVerifierPoint(
          field, triple_circuit.mul_count(),
          SampleVerifierR(field, triple_circuit.mul_count(), rng)));
  std::vector<FieldElement> triple_coeffs =
      ExpandPrg(field, rng.NextKey(), triple_circuit.check_count());
  PRIVAGG_ASSIGN_OR_RETURN(
      bool triples_ok,
      VerifyLocally(triple_circuit, point, material.triple_shares,
                    material.triple_proof, triple_coeffs));
  if (!triples_ok) {
    return Error(ErrorKind::kBadTripleProof,
                 "client triples failed their proof");
  }

  std::vector<std::vector<FieldElement>> xs(s);
  std::vector<std::vector<FieldElement>> triples(s);
  for (int i = 0; i < s; ++i) {
    xs[i] = x_shares[i].Expand(field);
    triples[i] = material.triple_shares[i].Expand(field);
    if (xs[i].size() != circuit.input_count()) {
      return Error(ErrorKind::kArityMismatch, "encoding share length");
    }
  }

  const std::vector<size_t> depths = circuit.MulDepths();
  const size_t max_depth =
      depths.empty() ? 0 : *std::max_element(depths.begin(), depths.end());
  FieldElement inv_s = *field.Inverse(field.FromUint(s));
  std::vector<std::vector<FieldElement>> products(
      s, std::vector<FieldElement>(m, field.Zero()));
  MulIo io;
  // One broadcast of (d, e) shares per multiplicative depth level.
  for (size_t level = 1; level <= max_depth; ++level) {
    if (options.drop_level == level) {
      return Error(ErrorKind::kMissingRound,
                   absl::StrCat("Beaver round ", level, " lost"));
    }
    std::vector<FieldElement> d(m, field.Zero());
    std::vector<FieldElement> e(m, field.Zero());
    std::vector<MulIo> local(s);
    for (int i = 0; i < s; ++i) {
      circuit.ReplayShares(xs[i], products[i], i == 0, &local[i]);
      for (size_t t = 0; t < m; ++t) {
        if (depths[t] != level) continue;
        d[t] = field.Add(d[t], field.Sub(local[i].u[t], triples[i][3 * t]));
        e[t] = field.Add(e[t], field.Sub(local[i].v[t], triples[i][3 * t + 1]));
      }
    }
    for (int i = 0; i < s; ++i) {
      for (size_t t = 0; t < m; ++t) {
        if (depths[t] != level) continue;
        FieldElement z = field.Mul(field.Mul(d[t], e[t]), inv_s);
        z = field.Add(z, field.Mul(d[t], triples[i][3 * t + 1]));
        z = field.Add(z, field.Mul(e[t], triples[i][3 * t]));
        z = field.Add(z, triples[i][3 * t + 2]);
        products[i][t] = z;
      }
    }
  }

  std::vector<FieldElement> coeffs =
      ExpandPrg(field, rng.NextKey(), circuit.check_count());
  FieldElement total = field.Zero();
  for (int i = 0; i < s; ++i) {
    std::vector<FieldElement> checks =
        circuit.ReplayShares(xs[i], products[i], i == 0, &io);
    PRIVAGG_ASSIGN_OR_RETURN(FieldElement share,
                             BatchCombine(field, checks, coeffs));
    total = field.Add(total, share);
  }
  return total.value == 0;
}

}  // namespace privagg
