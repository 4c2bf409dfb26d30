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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "privagg/harness.h"
#include "privagg/status.h"

namespace py = pybind11;

namespace privagg {
namespace {

struct PyError {
  std::string kind;
  std::string message;
};

[[noreturn]] void Raise(const absl::Status& status) {
  throw PyError{std::string(ErrorKindName(GetErrorKind(status))),
                std::string(status.message())};
}

template <typename T>
T Unwrap(absl::StatusOr<T> v) {
  if (!v.ok()) Raise(v.status());
  return *std::move(v);
}

std::vector<AfeValue> Values(const AfeKind& kind,
                             const std::vector<std::string>& literals) {
  std::vector<AfeValue> out;
  for (const std::string& s : literals)
    out.push_back(Unwrap(ParseAfeValue(kind, s)));
  return out;
}

std::shared_ptr<const Deployment> MakeDeployment(const std::string& config) {
  return Unwrap(Deployment::Create(Unwrap(DeploymentConfig::Parse(config))));
}

std::string CanonicalKind(const std::string& text) {
  return FormatAfeKind(Unwrap(ParseAfeKind(text)));
}

std::string Oracle(const std::string& kind_text,
                   const std::vector<std::string>& inputs) {
  const AfeKind kind = Unwrap(ParseAfeKind(kind_text));
  return FormatResult(Unwrap(PlaintextOracle(kind, Values(kind, inputs))));
}

std::string Aggregate(const std::string& kind_text,
                      const std::vector<std::string>& inputs, uint64_t modulus,
                      uint64_t seed) {
  const AfeKind kind = Unwrap(ParseAfeKind(kind_text));
  const Field field = Unwrap(Field::Create(modulus));
  auto afe = Unwrap(Afe::Create(kind, field));
  Csprng rng(seed);
  std::vector<FieldElement> sigma(afe->truncated_length(), field.Zero());
  for (const AfeValue& v : Values(kind, inputs)) {
    auto t = Unwrap(afe->Truncate(Unwrap(afe->Encode(v, rng))));
    for (size_t i = 0; i < t.size(); ++i) sigma[i] = field.Add(sigma[i], t[i]);
  }
  return FormatResult(Unwrap(afe->Decode(sigma, inputs.size())));
}

bool ProveAndVerify(const std::string& config, const std::string& value,
                    uint64_t seed, const std::string& forge) {
  auto dep = MakeDeployment(config);
  Csprng rng(seed);
  const AfeValue v = Unwrap(ParseAfeValue(dep->config().afe, value));
  std::vector<FieldElement> x = Unwrap(dep->afe().Encode(v, rng));
  const ValidCircuit& c = dep->circuit();
  ProvedSubmission proved =
      forge.empty() ? Unwrap(Prove(c, x, dep->servers(), rng))
                    : Unwrap(ForgeProof(
                          c, x, dep->servers(),
                          Unwrap(ParseAdversary("client 0 " + forge)), rng));
  const Field& f = dep->field();
  VerifierPoint point = Unwrap(MakeVerifierPoint(
      f, c.mul_count(), SampleVerifierR(f, c.mul_count(), rng)));
  std::vector<FieldElement> coeffs =
      ExpandPrg(f, rng.NextKey(), c.check_count());
  return Unwrap(
      VerifyLocally(c, point, proved.x_shares, proved.proof_shares, coeffs));
}

py::dict Simulate(const std::string& config,
                  const std::vector<std::string>& inputs,
                  const std::vector<std::string>& adversaries, uint64_t seed) {
  const DeploymentConfig cfg = Unwrap(DeploymentConfig::Parse(config));
  std::vector<AdversarySpec> advs;
  for (const std::string& a : adversaries)
    advs.push_back(Unwrap(ParseAdversary(a)));
  RunReport r = RunSimulation(cfg, Values(cfg.afe, inputs), advs, seed);
  py::dict out;
  out["accepted"] = r.accepted();
  out["rejected"] = r.rejected();
  out["undecided"] = r.undecided();
  out["aggregate"] =
      r.aggregate ? py::cast(FormatResult(*r.aggregate)) : py::none();
  out["oracle"] = r.oracle ? py::cast(FormatResult(*r.oracle)) : py::none();
  out["oracle_match"] = r.oracle_match();
  out["error"] = r.error;
  out["server_bytes"] = r.server_bytes;
  out["upload_bytes"] = r.upload_bytes;
  out["summary"] = r.Summary();
  return out;
}

std::vector<py::dict> Soundness(const std::string& config,
                                const std::string& value,
                                const std::vector<std::string>& families,
                                uint64_t trials, uint64_t seed) {
  auto dep = MakeDeployment(config);
  std::vector<Strategy> fs;
  for (const std::string& name : families)
    fs.push_back(Unwrap(ParseStrategyName(name)));
  const AfeValue v = Unwrap(ParseAfeValue(dep->config().afe, value));
  std::vector<py::dict> out;
  for (const SweepRow& row :
       Unwrap(SoundnessSweep(*dep, v, fs, trials, seed))) {
    py::dict d;
    d["family"] = std::string(StrategyName(row.family));
    d["trials"] = row.trials;
    d["accepts"] = row.accepts;
    d["rate"] = row.rate;
    d["bound"] = row.bound;
    d["sigma"] = row.sigma;
    out.push_back(std::move(d));
  }
  return out;
}

py::dict Privacy(const std::string& config, const std::string& x0,
                 const std::string& x1, uint64_t trials, int observer,
                 uint64_t seed, bool blind) {
  auto dep = MakeDeployment(config);
  const AfeKind& kind = dep->config().afe;
  ProbeOptions options;
  options.blind = blind;
  PrivacyReport r = Unwrap(PrivacyProbe(*dep, Unwrap(ParseAfeValue(kind, x0)),
                                        Unwrap(ParseAfeValue(kind, x1)), trials,
                                        observer, seed, options));
  py::dict tv;
  for (size_t i = 0; i < r.coordinates.size(); ++i)
    tv[py::str(r.coordinates[i])] = r.tv[i];
  py::dict out;
  out["tv"] = tv;
  out["max_tv"] = r.max_tv;
  return out;
}

}  // namespace
}  // namespace privagg

PYBIND11_MODULE(_privagg, m) {
  using namespace privagg;
  m.doc() = "Private aggregation with secret-shared non-interactive proofs.";
  static py::exception<PyError> error(m, "PrivaggError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const PyError& e) {
      py::set_error(error, (e.kind + ": " + e.message).c_str());
    }
  });

  m.attr("GOLDILOCKS") = Field::kGoldilocksModulus;
  m.attr("BABY_BEAR") = Field::kBabyBearModulus;
  m.def("canonical_kind", &CanonicalKind, py::arg("kind"),
        "Canonical text of an AFE kind such as 'sum b=4'.");
  m.def("oracle", &Oracle, py::arg("kind"), py::arg("inputs"),
        "Plaintext statistic of domain literals.");
  m.def("aggregate", &Aggregate, py::arg("kind"), py::arg("inputs"),
        py::arg("modulus") = Field::kGoldilocksModulus, py::arg("seed") = 0,
        "Encode, truncate, sum and decode without proofs.");
  m.def("prove_and_verify", &ProveAndVerify, py::arg("config"),
        py::arg("value"), py::arg("seed") = 0, py::arg("forge") = "",
        "One submission through both verification rounds in-process.");
  m.def("simulate", &Simulate, py::arg("config"), py::arg("inputs"),
        py::arg("adversaries") = std::vector<std::string>{},
        py::arg("seed") = 0, "Deterministic simulation of a deployment.");
  m.def("soundness_sweep", &Soundness, py::arg("config"), py::arg("value"),
        py::arg("families"), py::arg("trials"), py::arg("seed") = 0);
  m.def("privacy_probe", &Privacy, py::arg("config"), py::arg("x0"),
        py::arg("x1"), py::arg("trials"), py::arg("observer") = 0,
        py::arg("seed") = 0, py::arg("blind") = true);
}
