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

// Deterministic simulation of clients and servers with adversaries,
// plaintext oracles and statistical probes.

#ifndef PRIVAGG_HARNESS_H_
#define PRIVAGG_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "privagg/afe.h"
#include "privagg/protocol.h"
#include "privagg/snip.h"

namespace privagg {

enum class Strategy {
  // Client side.
  kMalformedEncoding,  // x[coordinate] += delta, honest proof of the result
  kBadTriple,          // triple c += delta
  kShiftedH,           // h(point) += delta
  kWrongF0G0,          // f(0) += delta in the shared proof only
  kInconsistentShare,  // one server's x share shifted by delta
  kValidButFalseData,  // honest submission of `value` instead of the input
  // Server side.
  kDropRound,    // drops every outgoing frame of `message`
  kTamperSigma,  // adds delta to every sigma share
  kCrashAfter,   // goes silent after `count` verdicts, then restarts
};

struct AdversarySpec {
  enum Role { kClient, kServer };
  Role role = kClient;
  int target = 0;  // submission index or server index
  Strategy strategy = Strategy::kMalformedEncoding;
  uint64_t coordinate = 0;  // malformed: encoding index; shifted-h: point
  uint64_t delta = 1;
  std::string value;  // false data literal
  MessageType message = MessageType::kRound2;
  uint64_t count = 1;

  friend bool operator==(const AdversarySpec&, const AdversarySpec&) = default;
};

// One spec per line:
//   client 3 malformed coord=0 delta=100
//   client 0 bad-triple delta=1
//   client 1 shifted-h point=2 delta=1
//   client 2 wrong-f0g0 delta=1
//   client 4 inconsistent-share delta=1
//   client 5 false-data value=7
//   server 1 drop-round type=ROUND2
//   server 2 tamper-sigma delta=1
//   server 0 crash-after n=5
// Blank lines and '#' comments are skipped. ParseError on anything else.
absl::StatusOr<AdversarySpec> ParseAdversary(std::string_view line);
absl::StatusOr<std::vector<AdversarySpec>> ParseAdversaries(
    std::string_view text);
std::string FormatAdversary(const AdversarySpec& spec);
// The client strategy names accepted above, e.g. "bad-triple".
absl::StatusOr<Strategy> ParseStrategyName(std::string_view name);
std::string_view StrategyName(Strategy strategy);

// One domain literal per line; blank lines and '#' comments are skipped.
absl::StatusOr<std::vector<AfeValue>> ParseInputs(const AfeKind& kind,
                                                  std::string_view text);

// Applies a client strategy to an otherwise honest submission of `value`.
// Forgeries reuse the honest prover and mutate its output.
absl::StatusOr<Submission> ForgeSubmission(const Deployment& deployment,
                                           const AfeValue& value,
                                           const AdversarySpec& spec,
                                           Csprng& rng);

// Proof-level forgery used by the soundness sweeps: shares of an encoding
// and proof for `x` with the strategy applied.
absl::StatusOr<ProvedSubmission> ForgeProof(const ValidCircuit& circuit,
                                            std::vector<FieldElement> x, int s,
                                            const AdversarySpec& spec,
                                            Csprng& rng, bool compress = true);

// Direct computation of each statistic with exact arithmetic.
absl::StatusOr<AggregateResult> PlaintextOracle(
    const AfeKind& kind, std::span<const AfeValue> inputs);

struct SubmissionOutcome {
  Nonce nonce{};
  std::string value;  // literal submitted
  bool adversarial = false;
  std::optional<bool> accepted;  // empty when no verdict arrived
  std::string error;             // client-side failure, if any
};

struct RunReport {
  std::string afe;
  int servers = 0;
  uint64_t seed = 0;
  std::vector<SubmissionOutcome> submissions;
  std::optional<AggregateResult> aggregate;
  std::string error;  // publication or setup failure
  std::optional<AggregateResult> oracle;
  uint64_t upload_bytes = 0;
  uint64_t server_bytes = 0;
  uint64_t verdict_bytes = 0;
  uint64_t publish_bytes = 0;
  uint64_t frames_dropped = 0;
  uint64_t restarts = 0;
  uint64_t retries = 0;
  int64_t virtual_ms = 0;
  std::vector<std::string> transcript;

  uint64_t accepted() const;
  uint64_t rejected() const;
  uint64_t undecided() const;
  bool oracle_match() const;
  // key=value lines, stable order; reproducible from (config, seed).
  std::string Summary() const;
  std::string Transcript() const;
};

// Runs every input as one submission through in-process servers on a
// virtual clock. Never fails: errors land in the report.
RunReport RunSimulation(const DeploymentConfig& config,
                        std::span<const AfeValue> inputs,
                        std::span<const AdversarySpec> adversaries,
                        uint64_t seed);

struct ProbeOptions {
  bool blind = true;
  // A malicious server other than the observer adds this to its d share
  // and the verdict becomes an extra observed coordinate.
  uint64_t d_shift = 1;
  // Added to the malicious server's sigma share instead, when nonzero.
  uint64_t sigma_tamper = 0;
};

struct PrivacyReport {
  uint64_t trials = 0;
  std::vector<std::string> coordinates;
  std::vector<double> tv;
  double max_tv = 0;
};

// Empirical total variation between the observer's view of x0 and of x1,
// per coordinate, over `trials` independent submissions of each.
absl::StatusOr<PrivacyReport> PrivacyProbe(const Deployment& deployment,
                                           const AfeValue& x0,
                                           const AfeValue& x1, uint64_t trials,
                                           int observer, uint64_t seed,
                                           const ProbeOptions& options = {});

struct SweepRow {
  Strategy family;
  uint64_t trials = 0;
  uint64_t accepts = 0;
  double rate = 0;
  double bound = 0;  // (2M+1)/p
  double sigma = 0;  // binomial standard deviation at the bound
};

// Accept rates of forgeries of valid encodings of `value` with a fresh
// verifier point per trial.
absl::StatusOr<std::vector<SweepRow>> SoundnessSweep(
    const Deployment& deployment, const AfeValue& value,
    std::span<const Strategy> families, uint64_t trials, uint64_t seed);

struct AdaptiveReport {
  uint64_t trials = 0;
  uint64_t queries = 0;
  uint64_t successes = 0;  // trials in which some query was accepted
  double rate = 0;
  double bound = 0;  // (2M+1)q/p
  double sigma = 0;
};

// Fixed r per trial; the adversary submits `queries` forgeries of an
// out-of-range Sum{b=1} encoding, each planting two untried candidate roots
// in h and learning from every rejection.
absl::StatusOr<AdaptiveReport> AdaptiveSweep(const Field& field,
                                             uint64_t queries, uint64_t trials,
                                             uint64_t seed);

struct RobustnessReport {
  uint64_t runs = 0;
  uint64_t violations = 0;
  std::vector<std::string> failures;
  // Out-of-range forgery against protected and unprotected deployments.
  bool protected_total_unchanged = false;
  bool unprotected_total_shifted = false;
};

// Sum{b} for every b <= max_bits and n <= max_clients, every number of
// adversarial clients and every client strategy: each published total must
// be reachable by some choice of valid inputs for the adversaries.
RobustnessReport RobustnessEnumeration(uint32_t max_bits, int max_clients,
                                       uint64_t seed);

}  // namespace privagg

#endif  // PRIVAGG_HARNESS_H_
