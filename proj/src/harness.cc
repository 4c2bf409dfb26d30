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

#include "privagg/harness.h"

#include <map>
#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "privagg/status.h"
#include "privagg/wire.h"

namespace privagg {
namespace {

struct StrategyInfo {
  Strategy strategy;
  std::string_view name;
  AdversarySpec::Role role;
};

constexpr StrategyInfo kStrategies[] = {
    {Strategy::kMalformedEncoding, "malformed", AdversarySpec::kClient},
    {Strategy::kBadTriple, "bad-triple", AdversarySpec::kClient},
    {Strategy::kShiftedH, "shifted-h", AdversarySpec::kClient},
    {Strategy::kWrongF0G0, "wrong-f0g0", AdversarySpec::kClient},
    {Strategy::kInconsistentShare, "inconsistent-share",
     AdversarySpec::kClient},
    {Strategy::kValidButFalseData, "false-data", AdversarySpec::kClient},
    {Strategy::kDropRound, "drop-round", AdversarySpec::kServer},
    {Strategy::kTamperSigma, "tamper-sigma", AdversarySpec::kServer},
    {Strategy::kCrashAfter, "crash-after", AdversarySpec::kServer},
};

absl::Status ParseErr(std::string_view line, std::string_view why) {
  return Error(
      ErrorKind::kParseError,
      absl::StrCat("adversary '", std::string(line), "': ", std::string(why)));
}

std::optional<MessageType> MessageTypeFromName(std::string_view name) {
  for (int t = 1; t <= 8; ++t) {
    auto type = static_cast<MessageType>(t);
    if (MessageTypeName(type) == name) return type;
  }
  return std::nullopt;
}

std::string_view StripComment(std::string_view line) {
  size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

}  // namespace

std::string_view StrategyName(Strategy strategy) {
  for (const StrategyInfo& info : kStrategies) {
    if (info.strategy == strategy) return info.name;
  }
  return "unknown";
}

absl::StatusOr<Strategy> ParseStrategyName(std::string_view name) {
  for (const StrategyInfo& info : kStrategies) {
    if (info.name == name) return info.strategy;
  }
  return Error(ErrorKind::kParseError,
               absl::StrCat("unknown strategy '", std::string(name), "'"));
}

absl::StatusOr<AdversarySpec> ParseAdversary(std::string_view line) {
  const std::string text(
      absl::StripAsciiWhitespace(std::string(StripComment(line))));
  std::vector<std::string> tokens =
      absl::StrSplit(text, ' ', absl::SkipWhitespace());
  if (tokens.size() < 3)
    return ParseErr(line, "expected role, index, strategy");
  AdversarySpec spec;
  if (tokens[0] == "client") {
    spec.role = AdversarySpec::kClient;
  } else if (tokens[0] == "server") {
    spec.role = AdversarySpec::kServer;
  } else {
    return ParseErr(line, "role must be client or server");
  }
  if (!absl::SimpleAtoi(tokens[1], &spec.target) || spec.target < 0) {
    return ParseErr(line, "bad index");
  }
  const StrategyInfo* info = nullptr;
  for (const StrategyInfo& s : kStrategies) {
    if (s.name == tokens[2]) info = &s;
  }
  if (info == nullptr) return ParseErr(line, "unknown strategy");
  if (info->role != spec.role) {
    return ParseErr(line, "strategy does not match the role");
  }
  spec.strategy = info->strategy;
  for (size_t i = 3; i < tokens.size(); ++i) {
    const size_t eq = tokens[i].find('=');
    if (eq == std::string::npos) return ParseErr(line, "expected key=value");
    const std::string key = tokens[i].substr(0, eq);
    const std::string value = tokens[i].substr(eq + 1);
    bool ok = true;
    if (key == "coord" || key == "point") {
      ok = absl::SimpleAtoi(value, &spec.coordinate);
    } else if (key == "delta" || key == "alpha") {
      ok = absl::SimpleAtoi(value, &spec.delta);
    } else if (key == "value") {
      spec.value = value;
    } else if (key == "n") {
      ok = absl::SimpleAtoi(value, &spec.count);
    } else if (key == "type") {
      auto type = MessageTypeFromName(value);
      ok = type.has_value();
      if (ok) spec.message = *type;
    } else {
      return ParseErr(line, absl::StrCat("unknown key ", key));
    }
    if (!ok) return ParseErr(line, absl::StrCat("bad value for ", key));
  }
  if (spec.strategy == Strategy::kValidButFalseData && spec.value.empty()) {
    return ParseErr(line, "false-data needs value=");
  }
  return spec;
}

absl::StatusOr<std::vector<AdversarySpec>> ParseAdversaries(
    std::string_view text) {
  std::vector<AdversarySpec> out;
  const std::string all(text);
  for (absl::string_view line : absl::StrSplit(all, '\n')) {
    const std::string stripped(
        StripComment(std::string_view(line.data(), line.size())));
    if (absl::StripAsciiWhitespace(stripped).empty()) continue;
    PRIVAGG_ASSIGN_OR_RETURN(AdversarySpec spec, ParseAdversary(stripped));
    out.push_back(std::move(spec));
  }
  return out;
}

std::string FormatAdversary(const AdversarySpec& spec) {
  std::string out = absl::StrCat(
      spec.role == AdversarySpec::kClient ? "client" : "server", " ",
      spec.target, " ", std::string(StrategyName(spec.strategy)));
  switch (spec.strategy) {
    case Strategy::kMalformedEncoding:
      absl::StrAppend(&out, " coord=", spec.coordinate, " delta=", spec.delta);
      break;
    case Strategy::kShiftedH:
      absl::StrAppend(&out, " point=", spec.coordinate, " delta=", spec.delta);
      break;
    case Strategy::kBadTriple:
    case Strategy::kWrongF0G0:
    case Strategy::kInconsistentShare:
    case Strategy::kTamperSigma:
      absl::StrAppend(&out, " delta=", spec.delta);
      break;
    case Strategy::kValidButFalseData:
      absl::StrAppend(&out, " value=", spec.value);
      break;
    case Strategy::kDropRound:
      absl::StrAppend(&out,
                      " type=", std::string(MessageTypeName(spec.message)));
      break;
    case Strategy::kCrashAfter:
      absl::StrAppend(&out, " n=", spec.count);
      break;
  }
  return out;
}

absl::StatusOr<std::vector<AfeValue>> ParseInputs(const AfeKind& kind,
                                                  std::string_view text) {
  std::vector<AfeValue> out;
  const std::string all(text);
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(all, '\n')) {
    ++line_no;
    const std::string line(absl::StripAsciiWhitespace(
        std::string(StripComment(std::string_view(raw.data(), raw.size())))));
    if (line.empty()) continue;
    auto value = ParseAfeValue(kind, line);
    if (!value.ok()) {
      return Error(ErrorKind::kParseError,
                   absl::StrCat("input line ", line_no, ": ",
                                std::string(value.status().message())));
    }
    out.push_back(*std::move(value));
  }
  return out;
}

absl::StatusOr<ProvedSubmission> ForgeProof(const ValidCircuit& circuit,
                                            std::vector<FieldElement> x, int s,
                                            const AdversarySpec& spec,
                                            Csprng& rng, bool compress) {
  const Field& f = circuit.field();
  const FieldElement delta = f.FromUint(spec.delta);
  if (spec.strategy == Strategy::kMalformedEncoding) {
    if (x.empty()) return Error(ErrorKind::kInvalidInput, "empty encoding");
    const size_t i = spec.coordinate % x.size();
    x[i] = f.Add(x[i], delta);
  }
  ProveOptions options;
  options.require_valid = false;
  PRIVAGG_ASSIGN_OR_RETURN(ProofPlaintext proof,
                           BuildProof(circuit, x, rng, options));
  switch (spec.strategy) {
    case Strategy::kBadTriple:
      proof.triple.c = f.Add(proof.triple.c, delta);
      break;
    case Strategy::kShiftedH: {
      const size_t k = spec.coordinate % proof.h_points.size();
      proof.h_points[k] = f.Add(proof.h_points[k], delta);
      break;
    }
    case Strategy::kWrongF0G0:
      proof.f0 = f.Add(proof.f0, delta);
      break;
    default:
      break;
  }
  ProvedSubmission out;
  PRIVAGG_ASSIGN_OR_RETURN(
      out.x_shares, compress ? SplitPrg(f, x, s, rng) : Split(f, x, s, rng));
  out.proof_shares = ShareProof(f, proof, s, rng, compress);
  if (spec.strategy == Strategy::kInconsistentShare) {
    // The last share is always explicit.
    std::vector<FieldElement> last = out.x_shares[s - 1].Expand(f);
    const size_t i = spec.coordinate % last.size();
    last[i] = f.Add(last[i], delta);
    out.x_shares[s - 1] = ShareVector(s - 1, std::move(last));
  }
  return out;
}

absl::StatusOr<Submission> ForgeSubmission(const Deployment& deployment,
                                           const AfeValue& value,
                                           const AdversarySpec& spec,
                                           Csprng& rng) {
  if (spec.strategy == Strategy::kValidButFalseData) {
    PRIVAGG_ASSIGN_OR_RETURN(
        AfeValue other, ParseAfeValue(deployment.afe().kind(), spec.value));
    return ClientSubmit(deployment, other, rng);
  }
  if (spec.role != AdversarySpec::kClient) {
    return Error(ErrorKind::kInvalidInput, "not a client strategy");
  }
  const Nonce nonce = RandomNonce(rng);
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> x,
                           deployment.afe().Encode(value, rng));
  PRIVAGG_ASSIGN_OR_RETURN(ProvedSubmission proved,
                           ForgeProof(deployment.circuit(), std::move(x),
                                      deployment.servers(), spec, rng));
  return Package(nonce, std::move(proved));
}

uint64_t RunReport::accepted() const {
  uint64_t n = 0;
  for (const auto& s : submissions) n += s.accepted == true;
  return n;
}

uint64_t RunReport::rejected() const {
  uint64_t n = 0;
  for (const auto& s : submissions) n += s.accepted == false;
  return n;
}

uint64_t RunReport::undecided() const {
  return submissions.size() - accepted() - rejected();
}

bool RunReport::oracle_match() const {
  return aggregate.has_value() && oracle.has_value() && *aggregate == *oracle;
}

std::string RunReport::Transcript() const {
  std::string out;
  for (const std::string& line : transcript) absl::StrAppend(&out, line, "\n");
  return out;
}

std::string RunReport::Summary() const {
  std::string verdicts;
  for (const auto& s : submissions) {
    verdicts.push_back(!s.accepted.has_value() ? '-' : *s.accepted ? 'A' : 'R');
  }
  const uint64_t decided = accepted() + rejected();
  const Digest digest = Sha256(Transcript());
  std::string out;
  absl::StrAppend(&out, "afe=", afe, "\n");
  absl::StrAppend(&out, "servers=", servers, "\n");
  absl::StrAppend(&out, "seed=", seed, "\n");
  absl::StrAppend(&out, "submissions=", submissions.size(), "\n");
  absl::StrAppend(&out, "accepted=", accepted(), "\n");
  absl::StrAppend(&out, "rejected=", rejected(), "\n");
  absl::StrAppend(&out, "undecided=", undecided(), "\n");
  absl::StrAppend(&out, "verdicts=", verdicts, "\n");
  absl::StrAppend(
      &out, "aggregate=", aggregate ? FormatResult(*aggregate) : "none", "\n");
  absl::StrAppend(&out, "error=", error.empty() ? "none" : error, "\n");
  absl::StrAppend(&out, "oracle=", oracle ? FormatResult(*oracle) : "none",
                  "\n");
  absl::StrAppend(&out, "oracle_match=", oracle_match() ? 1 : 0, "\n");
  absl::StrAppend(&out, "upload_bytes=", upload_bytes, "\n");
  absl::StrAppend(&out, "server_bytes=", server_bytes, "\n");
  absl::StrAppend(&out, "server_bytes_per_submission=",
                  decided == 0 ? 0 : server_bytes / decided, "\n");
  absl::StrAppend(&out, "verdict_bytes=", verdict_bytes, "\n");
  absl::StrAppend(&out, "publish_bytes=", publish_bytes, "\n");
  absl::StrAppend(&out, "frames_dropped=", frames_dropped, "\n");
  absl::StrAppend(&out, "restarts=", restarts, "\n");
  absl::StrAppend(&out, "retries=", retries, "\n");
  absl::StrAppend(&out, "virtual_ms=", virtual_ms, "\n");
  absl::StrAppend(
      &out, "transcript_sha256=",
      HexEncode(std::string_view(reinterpret_cast<const char*>(digest.data()),
                                 digest.size())),
      "\n");
  return out;
}

namespace {

constexpr int64_t kLatencyMs = 1;
constexpr int64_t kTickMs = 10;
constexpr int64_t kRestartDelayMs = 20;
constexpr int kMaxAttempts = 4;

// Endpoint numbering: servers 0..s-1, clients s..s+n-1, publisher s+n.
class Simulator {
 public:
  Simulator(std::shared_ptr<const Deployment> dep,
            std::span<const AdversarySpec> adversaries, uint64_t seed,
            RunReport* report)
      : dep_(std::move(dep)), report_(report), master_(seed) {
    const int s = dep_->servers();
    snapshots_.resize(s);
    for (int j = 0; j < s; ++j) {
      nodes_.push_back(std::make_unique<ServerNode>(dep_, j, master_.NextU64(),
                                                    &snapshots_[j]));
    }
    for (const AdversarySpec& a : adversaries) {
      if (a.role != AdversarySpec::kServer || a.target >= s) continue;
      switch (a.strategy) {
        case Strategy::kDropRound:
          drops_.insert({a.target, a.message});
          break;
        case Strategy::kTamperSigma:
          nodes_[a.target]->set_sigma_tamper(dep_->field().FromUint(a.delta));
          break;
        case Strategy::kCrashAfter:
          nodes_[a.target]->set_crash_after(a.count);
          break;
        default:
          break;
      }
    }
  }

  Csprng& rng() { return master_; }

  void Run(std::vector<std::optional<Submission>> subs) {
    subs_ = std::move(subs);
    const int s = dep_->servers();
    publisher_ = s + static_cast<int>(subs_.size());
    attempts_.assign(subs_.size(), 0);
    last_send_.assign(subs_.size(), 0);
    for (size_t i = 0; i < subs_.size(); ++i) SendSubmission(i);

    const int64_t timeout = dep_->config().timeout_ms;
    const int64_t limit = 1000 * timeout + 100000;
    while (now_ < limit) {
      Drain();
      if (SubmissionsSettled()) break;
      RetryStale(3 * timeout);
      Advance();
    }
    // Publication phase.
    std::string req =
        *dep_->codec().Encode(Frame{dep_->config().epoch, PublishRequestMsg{}});
    for (int j = 0; j < s; ++j)
      Schedule(publisher_, j, MessageType::kPublishRequest, req);
    const int64_t publish_deadline = now_ + 20 * timeout;
    while (now_ < publish_deadline) {
      Drain();
      if (static_cast<int>(publications_.size()) == s) break;
      Advance();
    }
    report_->virtual_ms = now_;
    std::vector<AccPublishMsg> pubs;
    for (auto& [j, p] : publications_) pubs.push_back(p);
    auto result = Publish(*dep_, pubs);
    if (result.ok()) {
      report_->aggregate = *std::move(result);
    } else {
      report_->error = std::string(result.status().message());
    }
  }

 private:
  struct Delivery {
    int from;
    int to;
    MessageType type;
    std::string bytes;
  };

  std::string Name(int endpoint) const {
    const int s = dep_->servers();
    if (endpoint < s) return absl::StrCat("s", endpoint);
    if (endpoint == publisher_) return "pub";
    return absl::StrCat("c", endpoint - s);
  }

  void Schedule(int from, int to, MessageType type, std::string bytes) {
    const int s = dep_->servers();
    if (from < s && drops_.count({from, type}) > 0) {
      ++report_->frames_dropped;
      report_->transcript.push_back(
          absl::StrFormat("%d %s>%s %s %d drop", now_, Name(from), Name(to),
                          std::string(MessageTypeName(type)), bytes.size()));
      return;
    }
    const uint64_t size = bytes.size();
    if (from >= s) {
      report_->upload_bytes += size;
    } else if (to < s) {
      report_->server_bytes += size;
    } else if (type == MessageType::kAccPublish) {
      report_->publish_bytes += size;
    } else {
      report_->verdict_bytes += size;
    }
    queue_.emplace(std::make_pair(now_ + kLatencyMs, seq_++),
                   Delivery{from, to, type, std::move(bytes)});
  }

  void Emit(int server, std::vector<Envelope> out) {
    const int s = dep_->servers();
    for (Envelope& e : out) {
      const int to = e.to.kind == Peer::kServer ? static_cast<int>(e.to.id)
                                                : s + static_cast<int>(e.to.id);
      Schedule(server, to, e.type, std::move(e.bytes));
    }
  }

  void SendSubmission(size_t i) {
    if (!subs_[i].has_value()) return;
    ++attempts_[i];
    last_send_[i] = now_;
    const int s = dep_->servers();
    for (int j = 0; j < s; ++j) {
      std::string bytes = *dep_->codec().Encode(
          Frame{dep_->config().epoch, subs_[i]->uploads[j]});
      Schedule(s + static_cast<int>(i), j, MessageType::kUpload,
               std::move(bytes));
    }
  }

  void Deliver(Delivery d) {
    const int s = dep_->servers();
    report_->transcript.push_back(
        absl::StrFormat("%d %s>%s %s %d", now_, Name(d.from), Name(d.to),
                        std::string(MessageTypeName(d.type)), d.bytes.size()));
    if (d.to < s) {
      ServerNode& node = *nodes_[d.to];
      if (node.crashed()) {
        ++report_->frames_dropped;
        return;
      }
      const Peer from =
          d.from < s ? Peer{Peer::kServer, static_cast<uint64_t>(d.from)}
                     : Peer{Peer::kClient, static_cast<uint64_t>(d.from - s)};
      Emit(d.to, node.OnFrame(from, d.bytes, now_));
      if (node.crashed() && restart_at_.count(d.to) == 0) {
        restart_at_[d.to] = now_ + kRestartDelayMs;
      }
      return;
    }
    auto frame = dep_->codec().Decode(d.bytes);
    if (!frame.ok()) return;
    if (d.to == publisher_) {
      if (auto* p = std::get_if<AccPublishMsg>(&frame->msg)) {
        publications_.emplace(d.from, *p);
      }
      return;
    }
    const size_t i = static_cast<size_t>(d.to - s);
    if (auto* v = std::get_if<VerdictMsg>(&frame->msg)) {
      auto& outcome = report_->submissions[i];
      if (!outcome.accepted.has_value() && v->nonce == outcome.nonce) {
        outcome.accepted = v->accept;
      }
    }
  }

  void Drain() {
    while (!queue_.empty() && queue_.begin()->first.first <= now_) {
      Delivery d = std::move(queue_.begin()->second);
      queue_.erase(queue_.begin());
      Deliver(std::move(d));
    }
  }

  void Advance() {
    int64_t next = now_ + kTickMs;
    if (!queue_.empty()) next = std::min(next, queue_.begin()->first.first);
    now_ = std::max(next, now_ + 1);
    for (auto it = restart_at_.begin(); it != restart_at_.end();) {
      if (it->second > now_) {
        ++it;
        continue;
      }
      Restart(it->first);
      it = restart_at_.erase(it);
    }
    for (int j = 0; j < dep_->servers(); ++j) Emit(j, nodes_[j]->Tick(now_));
  }

  void Restart(int j) {
    auto node = std::make_unique<ServerNode>(dep_, j, master_.NextU64(),
                                             &snapshots_[j]);
    auto state = ReadSnapshot(*dep_, snapshots_[j].data());
    if (state.ok()) {
      (void)node->Restore(*state);
    } else {
      report_->error = absl::StrCat("restart of s", j, ": ",
                                    std::string(state.status().message()));
    }
    nodes_[j] = std::move(node);
    ++report_->restarts;
    report_->transcript.push_back(absl::StrCat(now_, " s", j, " restart"));
    Emit(j, nodes_[j]->ReplayVerdicts());
  }

  bool SubmissionsSettled() const {
    if (!queue_.empty() || !restart_at_.empty()) return false;
    for (size_t i = 0; i < subs_.size(); ++i) {
      if (!subs_[i].has_value()) continue;
      if (report_->submissions[i].accepted.has_value()) continue;
      if (attempts_[i] < kMaxAttempts) return false;
      if (now_ - last_send_[i] < 3 * dep_->config().timeout_ms) return false;
    }
    for (const auto& n : nodes_) {
      if (n->in_flight() > 0 && !n->crashed()) return false;
    }
    return true;
  }

  void RetryStale(int64_t wait) {
    for (size_t i = 0; i < subs_.size(); ++i) {
      if (!subs_[i].has_value() ||
          report_->submissions[i].accepted.has_value()) {
        continue;
      }
      if (attempts_[i] < kMaxAttempts && now_ - last_send_[i] >= wait) {
        ++report_->retries;
        SendSubmission(i);
      }
    }
  }

  std::shared_ptr<const Deployment> dep_;
  RunReport* report_;
  Csprng master_;
  std::vector<MemorySnapshot> snapshots_;
  std::vector<std::unique_ptr<ServerNode>> nodes_;
  std::set<std::pair<int, MessageType>> drops_;
  std::map<std::pair<int64_t, uint64_t>, Delivery> queue_;
  uint64_t seq_ = 0;
  int64_t now_ = 0;
  int publisher_ = 0;
  std::vector<std::optional<Submission>> subs_;
  std::vector<int> attempts_;
  std::vector<int64_t> last_send_;
  std::map<int, int64_t> restart_at_;
  std::map<int, AccPublishMsg> publications_;
};

}  // namespace

RunReport RunSimulation(const DeploymentConfig& config,
                        std::span<const AfeValue> inputs,
                        std::span<const AdversarySpec> adversaries,
                        uint64_t seed) {
  RunReport report;
  report.afe = FormatAfeKind(config.afe);
  report.servers = config.servers;
  report.seed = seed;
  auto dep = Deployment::Create(config);
  if (!dep.ok()) {
    report.error = std::string(dep.status().message());
    return report;
  }
  Simulator sim(*dep, adversaries, seed, &report);

  std::map<int, const AdversarySpec*> client_adv;
  for (const AdversarySpec& a : adversaries) {
    if (a.role == AdversarySpec::kClient) client_adv[a.target] = &a;
  }
  std::vector<std::optional<Submission>> subs;
  std::vector<AfeValue> honest;  // values behind accepted-able submissions
  std::vector<std::optional<AfeValue>> used(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    Csprng rng = sim.rng().Fork();
    SubmissionOutcome outcome;
    outcome.value = FormatAfeValue(inputs[i]);
    absl::StatusOr<Submission> sub;
    auto adv = client_adv.find(static_cast<int>(i));
    if (adv == client_adv.end()) {
      sub = ClientSubmit(**dep, inputs[i], rng);
      used[i] = inputs[i];
    } else {
      outcome.adversarial = true;
      sub = ForgeSubmission(**dep, inputs[i], *adv->second, rng);
      if (adv->second->strategy == Strategy::kValidButFalseData) {
        auto v = ParseAfeValue(config.afe, adv->second->value);
        if (v.ok()) {
          used[i] = *v;
          outcome.value = FormatAfeValue(*v);
        }
      }
    }
    if (sub.ok()) {
      outcome.nonce = sub->nonce;
      subs.push_back(*std::move(sub));
    } else {
      outcome.error = std::string(sub.status().message());
      subs.push_back(std::nullopt);
    }
    report.submissions.push_back(std::move(outcome));
  }
  sim.Run(std::move(subs));

  for (size_t i = 0; i < inputs.size(); ++i) {
    if (report.submissions[i].accepted == true && used[i].has_value()) {
      honest.push_back(*used[i]);
    }
  }
  auto oracle = PlaintextOracle(config.afe, honest);
  if (oracle.ok()) report.oracle = *std::move(oracle);
  return report;
}

}  // namespace privagg
