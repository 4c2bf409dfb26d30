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

#include "privagg/circuit.h"

#include <algorithm>
#include <cassert>

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {

CircuitBuilder::CircuitBuilder(const Field& field, size_t input_count)
    : field_(field), input_count_(input_count) {
  assert(input_count > 0);
}

Wire CircuitBuilder::Input(size_t i) const {
  assert(i < input_count_);
  return Wire{i};
}

Wire CircuitBuilder::Push(Gate gate) {
  gates_.push_back(gate);
  return Wire{input_count_ + gates_.size() - 1};
}

Wire CircuitBuilder::Add(Wire a, Wire b) {
  return Push(Gate{GateOp::kAdd, a.id, b.id, field_.Zero()});
}

Wire CircuitBuilder::Sub(Wire a, Wire b) {
  return Add(a, MulConst(b, field_.Neg(field_.One())));
}

Wire CircuitBuilder::MulConst(Wire a, FieldElement k) {
  return Push(Gate{GateOp::kMulConst, a.id, 0, k});
}

Wire CircuitBuilder::AddConst(Wire a, FieldElement k) {
  return Push(Gate{GateOp::kAddConst, a.id, 0, k});
}

Wire CircuitBuilder::Mul(Wire a, Wire b) {
  return Push(Gate{GateOp::kMul, a.id, b.id, field_.Zero()});
}

void CircuitBuilder::AssertZero(
    std::vector<std::pair<Wire, FieldElement>> terms, FieldElement constant) {
  ZeroCheck check;
  check.constant = constant;
  for (const auto& [w, k] : terms) check.terms.emplace_back(w.id, k);
  checks_.push_back(std::move(check));
}

void CircuitBuilder::AssertZero(Wire w) {
  AssertZero({{w, field_.One()}}, field_.Zero());
}

void CircuitBuilder::AssertBit(Wire b) {
  AssertZero(Mul(b, AddConst(b, field_.Neg(field_.One()))));
}

ValidCircuit CircuitBuilder::Build() && {
  bool has_mul = std::any_of(gates_.begin(), gates_.end(), [](const Gate& g) {
    return g.op == GateOp::kMul;
  });
  if (!has_mul) {
    Wire z = MulConst(Input(0), field_.Zero());
    Mul(z, z);
  }
  ValidCircuit circuit(field_);
  circuit.input_count_ = input_count_;
  circuit.gates_ = std::move(gates_);
  circuit.checks_ = std::move(checks_);
  for (size_t g = 0; g < circuit.gates_.size(); ++g) {
    if (circuit.gates_[g].op == GateOp::kMul) circuit.mul_gates_.push_back(g);
  }
  return circuit;
}

std::vector<size_t> ValidCircuit::MulDepths() const {
  std::vector<size_t> depth(wire_count(), 0);
  std::vector<size_t> out;
  for (size_t g = 0; g < gates_.size(); ++g) {
    const Gate& gate = gates_[g];
    size_t d = depth[gate.left];
    if (gate.op == GateOp::kAdd || gate.op == GateOp::kMul) {
      d = std::max(d, depth[gate.right]);
    }
    if (gate.op == GateOp::kMul) {
      ++d;
      out.push_back(d);
    }
    depth[input_count_ + g] = d;
  }
  return out;
}

absl::StatusOr<std::vector<FieldElement>> ValidCircuit::Eval(
    std::span<const FieldElement> x) const {
  if (x.size() != input_count_) {
    return Error(ErrorKind::kArityMismatch,
                 absl::StrCat("circuit takes ", input_count_, " inputs, got ",
                              x.size()));
  }
  std::vector<FieldElement> w(x.begin(), x.end());
  w.reserve(wire_count());
  for (const Gate& gate : gates_) {
    switch (gate.op) {
      case GateOp::kAdd:
        w.push_back(field_.Add(w[gate.left], w[gate.right]));
        break;
      case GateOp::kMulConst:
        w.push_back(field_.Mul(w[gate.left], gate.constant));
        break;
      case GateOp::kAddConst:
        w.push_back(field_.Add(w[gate.left], gate.constant));
        break;
      case GateOp::kMul:
        w.push_back(field_.Mul(w[gate.left], w[gate.right]));
        break;
    }
  }
  return w;
}

std::vector<FieldElement> ValidCircuit::CheckValues(
    std::span<const FieldElement> trace) const {
  std::vector<FieldElement> out;
  out.reserve(checks_.size());
  for (const ZeroCheck& check : checks_) {
    FieldElement acc = check.constant;
    for (const auto& [wire, k] : check.terms) {
      acc = field_.Add(acc, field_.Mul(k, trace[wire]));
    }
    out.push_back(acc);
  }
  return out;
}

absl::StatusOr<bool> ValidCircuit::IsValid(
    std::span<const FieldElement> x) const {
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> trace, Eval(x));
  for (FieldElement v : CheckValues(trace)) {
    if (v.value != 0) return false;
  }
  return true;
}

MulIo ValidCircuit::MulInputs(std::span<const FieldElement> trace) const {
  MulIo io;
  io.u.reserve(mul_gates_.size());
  io.v.reserve(mul_gates_.size());
  for (size_t g : mul_gates_) {
    io.u.push_back(trace[gates_[g].left]);
    io.v.push_back(trace[gates_[g].right]);
  }
  return io;
}

std::vector<FieldElement> ValidCircuit::ReplayShares(
    std::span<const FieldElement> x_share,
    std::span<const FieldElement> mul_outputs, bool is_first,
    MulIo* inputs) const {
  std::vector<FieldElement> w(x_share.begin(), x_share.end());
  w.reserve(wire_count());
  inputs->u.clear();
  inputs->v.clear();
  size_t t = 0;
  for (const Gate& gate : gates_) {
    switch (gate.op) {
      case GateOp::kAdd:
        w.push_back(field_.Add(w[gate.left], w[gate.right]));
        break;
      case GateOp::kMulConst:
        w.push_back(field_.Mul(w[gate.left], gate.constant));
        break;
      case GateOp::kAddConst:
        w.push_back(is_first ? field_.Add(w[gate.left], gate.constant)
                             : w[gate.left]);
        break;
      case GateOp::kMul:
        inputs->u.push_back(w[gate.left]);
        inputs->v.push_back(w[gate.right]);
        w.push_back(mul_outputs[t++]);
        break;
    }
  }
  std::vector<FieldElement> out;
  out.reserve(checks_.size());
  for (const ZeroCheck& check : checks_) {
    FieldElement acc = is_first ? check.constant : field_.Zero();
    for (const auto& [wire, k] : check.terms) {
      acc = field_.Add(acc, field_.Mul(k, w[wire]));
    }
    out.push_back(acc);
  }
  return out;
}

absl::StatusOr<DerivedShares> ValidCircuit::DeriveWireShares(
    std::span<const FieldElement> x_share,
    std::span<const FieldElement> mul_outputs, bool is_first) const {
  if (x_share.size() != input_count_ || mul_outputs.size() != mul_count()) {
    return Error(ErrorKind::kArityMismatch,
                 absl::StrCat("expected ", input_count_, " input and ",
                              mul_count(), " product shares, got ",
                              x_share.size(), " and ", mul_outputs.size()));
  }
  MulIo io;
  DerivedShares out;
  out.check_shares = ReplayShares(x_share, mul_outputs, is_first, &io);
  out.f_points = std::move(io.u);
  out.g_points = std::move(io.v);
  return out;
}

std::string ValidCircuit::Dump() const {
  std::string out = absl::StrCat("inputs ", input_count_, " mul ", mul_count(),
                                 " checks ", checks_.size(), "\n");
  for (size_t g = 0; g < gates_.size(); ++g) {
    const Gate& gate = gates_[g];
    size_t id = input_count_ + g;
    switch (gate.op) {
      case GateOp::kAdd:
        absl::StrAppend(&out, "w", id, " = add w", gate.left, " w", gate.right,
                        "\n");
        break;
      case GateOp::kMulConst:
        absl::StrAppend(&out, "w", id, " = mulc w", gate.left, " ",
                        gate.constant.value, "\n");
        break;
      case GateOp::kAddConst:
        absl::StrAppend(&out, "w", id, " = addc w", gate.left, " ",
                        gate.constant.value, "\n");
        break;
      case GateOp::kMul:
        absl::StrAppend(&out, "w", id, " = mul w", gate.left, " w", gate.right,
                        "\n");
        break;
    }
  }
  for (const ZeroCheck& check : checks_) {
    absl::StrAppend(&out, "zero ", check.constant.value);
    for (const auto& [wire, k] : check.terms) {
      absl::StrAppend(&out, " + ", k.value, "*w", wire);
    }
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<FieldElement> BatchCombine(
    const Field& field, std::span<const FieldElement> check_shares,
    std::span<const FieldElement> coeffs) {
  if (check_shares.size() != coeffs.size()) {
    return Error(ErrorKind::kLengthMismatch,
                 absl::StrCat(check_shares.size(), " checks but ",
                              coeffs.size(), " coefficients"));
  }
  FieldElement acc = field.Zero();
  for (size_t j = 0; j < coeffs.size(); ++j) {
    acc = field.Add(acc, field.Mul(coeffs[j], check_shares[j]));
  }
  return acc;
}

}  // namespace privagg
