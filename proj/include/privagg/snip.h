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

#ifndef PRIVAGG_SNIP_H_
#define PRIVAGG_SNIP_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privagg/circuit.h"
#include "privagg/field.h"
#include "privagg/polynomial.h"
#include "privagg/prg.h"
#include "privagg/sharing.h"
#include "privagg/wire.h"

namespace privagg {

// The client's proof before sharing: f(0), g(0), h at 0..2M and a triple.
struct ProofPlaintext {
  FieldElement f0;
  FieldElement g0;
  std::vector<FieldElement> h_points;
  BeaverTriple triple;
};

struct ProveOptions {
  // Refuse to prove an encoding the circuit rejects.
  bool require_valid = true;
  // Sample f(0), g(0) uniformly. Disabling this is only useful as a broken
  // prover for privacy tests.
  bool blind = true;
};

absl::StatusOr<ProofPlaintext> BuildProof(const ValidCircuit& circuit,
                                          std::span<const FieldElement> x,
                                          Csprng& rng,
                                          const ProveOptions& options = {});

struct SnipProofShare {
  FieldElement f0;
  FieldElement g0;
  ShareVector h_points;
  BeaverTripleShare triple;

  // f0 | g0 | a | b | c (fixed width) followed by the h share vector.
  void AppendTo(const Field& field, std::string* out) const;
  size_t EncodedSize(const Field& field) const;
  static absl::StatusOr<SnipProofShare> Parse(const Field& field,
                                              ByteReader* reader,
                                              int server_index = 0);

  friend bool operator==(const SnipProofShare&,
                         const SnipProofShare&) = default;
};

std::vector<SnipProofShare> ShareProof(const Field& field,
                                       const ProofPlaintext& proof, int s,
                                       Csprng& rng, bool compress = true);

struct ProvedSubmission {
  std::vector<ShareVector> x_shares;
  std::vector<SnipProofShare> proof_shares;
};

// Encoding shares are PRG-compressed when `compress` is set, as are the
// h-point shares.
absl::StatusOr<ProvedSubmission> Prove(const ValidCircuit& circuit,
                                       std::span<const FieldElement> x, int s,
                                       Csprng& rng,
                                       const ProveOptions& options = {},
                                       bool compress = true);

// r together with the Lagrange rows for {0..M} and {0..2M} at r.
struct VerifierPoint {
  FieldElement r;
  size_t mul_count = 0;
  std::shared_ptr<const LagrangeRow> row_f;
  std::shared_ptr<const LagrangeRow> row_h;
};

// ConfigError when r lies in {0, ..., M}.
absl::StatusOr<VerifierPoint> MakeVerifierPoint(const Field& field,
                                                size_t mul_count,
                                                FieldElement r);

// Uniform over F minus {0, ..., M}.
FieldElement SampleVerifierR(const Field& field, size_t mul_count, Csprng& rng);

// Leader-side r management with a rotation budget of Q uses per point.
class VerifierConfig {
 public:
  static absl::StatusOr<VerifierConfig> Create(const Field& field,
                                               size_t mul_count, FieldElement r,
                                               uint64_t budget);
  static VerifierConfig Sample(const Field& field, size_t mul_count,
                               uint64_t budget, Csprng& rng);

  // Counts one use. RotationExhausted once `budget` uses were taken.
  absl::StatusOr<VerifierPoint> Acquire();
  void Rotate(Csprng& rng);
  // Rotates only when exhausted, then acquires.
  VerifierPoint AcquireOrRotate(Csprng& rng);

  const VerifierPoint& point() const { return point_; }
  FieldElement r() const { return point_.r; }
  uint64_t uses() const { return uses_; }
  uint64_t budget() const { return budget_; }
  uint64_t rotations() const { return rotations_; }

 private:
  VerifierConfig(const Field& field, VerifierPoint point, uint64_t budget)
      : field_(field), point_(std::move(point)), budget_(budget) {}

  Field field_;
  VerifierPoint point_;
  uint64_t budget_;
  uint64_t uses_ = 0;
  uint64_t rotations_ = 0;
};

struct VerifierState {
  FieldElement rh_share;
  std::vector<FieldElement> check_shares;
  BeaverTripleShare triple;
};

struct Round1Output {
  FieldElement d_share;
  FieldElement e_share;
  VerifierState state;
};

// MalformedShare when share lengths disagree with the circuit.
absl::StatusOr<Round1Output> VerifierRound1(
    const ValidCircuit& circuit, const VerifierPoint& point,
    std::span<const FieldElement> x_share, const SnipProofShare& proof,
    bool is_first);

// Reference path: interpolates f, g, h to coefficient form and evaluates.
absl::StatusOr<Round1Output> VerifierRound1Unoptimized(
    const ValidCircuit& circuit, FieldElement r,
    std::span<const FieldElement> x_share, const SnipProofShare& proof,
    bool is_first);

struct Round2Output {
  FieldElement sigma_share;
  FieldElement batch_share;
};

absl::StatusOr<Round2Output> VerifierRound2(
    const Field& field, const VerifierState& state, FieldElement d,
    FieldElement e, int s, std::span<const FieldElement> batch_coeffs);

// Accept iff both sums vanish. MissingShare unless exactly s shares each.
absl::StatusOr<bool> Decide(const Field& field,
                            std::span<const FieldElement> sigma_shares,
                            std::span<const FieldElement> batch_shares, int s);

// Runs both rounds for all servers in-process.
absl::StatusOr<bool> VerifyLocally(const ValidCircuit& circuit,
                                   const VerifierPoint& point,
                                   std::span<const ShareVector> x_shares,
                                   std::span<const SnipProofShare> proofs,
                                   std::span<const FieldElement> batch_coeffs,
                                   bool unoptimized = false);

// Server-side validation with client-supplied Beaver triples.

// Inputs (a_1, b_1, c_1, ..., a_M, b_M, c_M); checks a_t * b_t = c_t.
ValidCircuit TripleCheckCircuit(const Field& field, size_t count);

struct MpcClientMaterial {
  // Per server: flattened triple shares, length 3M.
  std::vector<ShareVector> triple_shares;
  std::vector<SnipProofShare> triple_proof;
};

// `corrupt_c` is added to c of the first triple, for negative tests.
absl::StatusOr<MpcClientMaterial> PrepareMpcTriples(
    const Field& field, size_t count, int s, Csprng& rng,
    FieldElement corrupt_c = FieldElement{0});

struct MpcOptions {
  // Depth level whose broadcast is lost; 0 disables.
  size_t drop_level = 0;
};

// BadTripleProof when the triple SNIP fails; MissingRound when a Beaver
// broadcast is lost.
absl::StatusOr<bool> MpcValidate(const ValidCircuit& circuit,
                                 std::span<const ShareVector> x_shares,
                                 const MpcClientMaterial& material, Csprng& rng,
                                 const MpcOptions& options = {});

}  // namespace privagg

#endif  // PRIVAGG_SNIP_H_
