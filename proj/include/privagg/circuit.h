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

#ifndef PRIVAGG_CIRCUIT_H_
#define PRIVAGG_CIRCUIT_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "privagg/field.h"

namespace privagg {

// Wire ids: inputs occupy 0..L-1, gate g writes wire L+g.
struct Wire {
  size_t id = 0;
};

enum class GateOp { kAdd, kMulConst, kAddConst, kMul };

struct Gate {
  GateOp op;
  size_t left = 0;
  size_t right = 0;       // kAdd and kMul only
  FieldElement constant;  // kMulConst and kAddConst only
};

// W = constant + sum coeff * wire; the check passes when W = 0.
struct ZeroCheck {
  std::vector<std::pair<size_t, FieldElement>> terms;
  FieldElement constant;
};

class ValidCircuit;

class CircuitBuilder {
 public:
  CircuitBuilder(const Field& field, size_t input_count);

  Wire Input(size_t i) const;
  Wire Add(Wire a, Wire b);
  Wire Sub(Wire a, Wire b);
  Wire MulConst(Wire a, FieldElement k);
  Wire AddConst(Wire a, FieldElement k);
  Wire Mul(Wire a, Wire b);

  // Affine zero-check; consumes no multiplication gate.
  void AssertZero(std::vector<std::pair<Wire, FieldElement>> terms,
                  FieldElement constant);
  void AssertZero(Wire w);
  // Quadratic check b*(b-1) = 0; one multiplication gate.
  void AssertBit(Wire b);

  const Field& field() const { return field_; }

  // Pads with a dummy 0*0 multiplication when the circuit has none.
  ValidCircuit Build() &&;

 private:
  Wire Push(Gate gate);

  Field field_;
  size_t input_count_;
  std::vector<Gate> gates_;
  std::vector<ZeroCheck> checks_;
};

struct MulIo {
  std::vector<FieldElement> u;
  std::vector<FieldElement> v;
};

struct DerivedShares {
  std::vector<FieldElement> f_points;  // [f](1..M)
  std::vector<FieldElement> g_points;  // [g](1..M)
  std::vector<FieldElement> check_shares;
};

class ValidCircuit {
 public:
  const Field& field() const { return field_; }
  size_t input_count() const { return input_count_; }
  size_t wire_count() const { return input_count_ + gates_.size(); }
  size_t mul_count() const { return mul_gates_.size(); }
  size_t check_count() const { return checks_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<size_t>& mul_gates() const { return mul_gates_; }
  const std::vector<ZeroCheck>& checks() const { return checks_; }

  // Multiplicative depth of each multiplication gate, 1-based.
  std::vector<size_t> MulDepths() const;

  // Full wire trace. ArityMismatch when |x| != L.
  absl::StatusOr<std::vector<FieldElement>> Eval(
      std::span<const FieldElement> x) const;
  std::vector<FieldElement> CheckValues(
      std::span<const FieldElement> trace) const;
  absl::StatusOr<bool> IsValid(std::span<const FieldElement> x) const;

  MulIo MulInputs(std::span<const FieldElement> trace) const;

  // Replays affine gates on one server's shares, taking the outputs of the
  // multiplication gates from `mul_outputs` (the [h](1..M) shares). Only the
  // first server adds constants.
  absl::StatusOr<DerivedShares> DeriveWireShares(
      std::span<const FieldElement> x_share,
      std::span<const FieldElement> mul_outputs, bool is_first) const;

  // Unchecked replay returning the check shares and filling `inputs`. Input
  // shares of a gate are meaningful once the outputs of every earlier-depth
  // gate are set, which is how the Beaver evaluator proceeds level by level.
  std::vector<FieldElement> ReplayShares(
      std::span<const FieldElement> x_share,
      std::span<const FieldElement> mul_outputs, bool is_first,
      MulIo* inputs) const;

  std::string Dump() const;

 private:
  friend class CircuitBuilder;
  explicit ValidCircuit(const Field& field) : field_(field) {}

  Field field_;
  size_t input_count_ = 0;
  std::vector<Gate> gates_;
  std::vector<size_t> mul_gates_;
  std::vector<ZeroCheck> checks_;
};

// Share of sum_j coeffs[j] * W_j. LengthMismatch when sizes differ.
absl::StatusOr<FieldElement> BatchCombine(
    const Field& field, std::span<const FieldElement> check_shares,
    std::span<const FieldElement> coeffs);

}  // namespace privagg

#endif  // PRIVAGG_CIRCUIT_H_
