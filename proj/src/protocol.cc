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

#include "privagg/protocol.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {

Nonce RandomNonce(Csprng& rng) {
  Nonce nonce;
  rng.Fill(nonce);
  return nonce;
}

Submission Package(const Nonce& nonce, ProvedSubmission proved) {
  Submission out;
  out.nonce = nonce;
  for (size_t i = 0; i < proved.x_shares.size(); ++i) {
    out.uploads.push_back(UploadMsg{nonce, std::move(proved.x_shares[i]),
                                    std::move(proved.proof_shares[i])});
  }
  return out;
}

absl::StatusOr<Submission> ClientSubmit(const Deployment& deployment,
                                        const AfeValue& value, Csprng& rng) {
  Nonce nonce = RandomNonce(rng);
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> x,
                           deployment.afe().Encode(value, rng));
  PRIVAGG_ASSIGN_OR_RETURN(
      ProvedSubmission proved,
      Prove(deployment.circuit(), x, deployment.servers(), rng));
  return Package(nonce, std::move(proved));
}

Accumulator EmptyAccumulator(const Deployment& deployment) {
  return Accumulator{
      std::vector<FieldElement>(deployment.afe().truncated_length(),
                                deployment.field().Zero()),
      0};
}

absl::Status ServerAggregate(const Deployment& deployment,
                             const ShareVector& share, Accumulator* acc) {
  const Field& f = deployment.field();
  if (share.length() != deployment.afe().encoding_length()) {
    return Error(
        ErrorKind::kMalformedShare,
        absl::StrCat("encoding share of length ", share.length(), ", expected ",
                     deployment.afe().encoding_length()));
  }
  std::vector<FieldElement> full = share.Expand(f);
  PRIVAGG_ASSIGN_OR_RETURN(std::vector<FieldElement> truncated,
                           deployment.afe().Truncate(full));
  if (acc->sums.size() != truncated.size()) {
    acc->sums.assign(truncated.size(), f.Zero());
  }
  for (size_t i = 0; i < truncated.size(); ++i) {
    acc->sums[i] = f.Add(acc->sums[i], truncated[i]);
  }
  ++acc->accepted_count;
  return absl::OkStatus();
}

Digest AcceptedSetDigest(const std::set<Nonce>& accepted) {
  std::string data;
  data.reserve(accepted.size() * 16);
  for (const Nonce& n : accepted) {
    data.append(reinterpret_cast<const char*>(n.data()), n.size());
  }
  return Sha256(data);
}

absl::StatusOr<AggregateResult> Publish(
    const Deployment& deployment, std::span<const AccPublishMsg> publications) {
  const Field& f = deployment.field();
  if (publications.size() != static_cast<size_t>(deployment.servers())) {
    return Error(ErrorKind::kMissingShare,
                 absl::StrCat(publications.size(), " publications for ",
                              deployment.servers(), " servers"));
  }
  const AccPublishMsg& first = publications.front();
  for (const AccPublishMsg& p : publications) {
    if (p.accepted_count != first.accepted_count || p.digest != first.digest) {
      return Error(ErrorKind::kCountMismatch,
                   absl::StrCat("servers disagree on the accepted set (",
                                first.accepted_count, " vs ", p.accepted_count,
                                " submissions)"));
    }
    if (p.accumulator.size() != deployment.afe().truncated_length()) {
      return Error(
          ErrorKind::kMalformedShare,
          absl::StrCat("accumulator of length ", p.accumulator.size()));
    }
  }
  if (first.accepted_count < deployment.config().min_batch) {
    return Error(
        ErrorKind::kBatchTooSmall,
        absl::StrCat(first.accepted_count, " accepted submissions, need ",
                     deployment.config().min_batch));
  }
  std::vector<FieldElement> sigma(deployment.afe().truncated_length(),
                                  f.Zero());
  for (const AccPublishMsg& p : publications) {
    for (size_t i = 0; i < sigma.size(); ++i) {
      sigma[i] = f.Add(sigma[i], p.accumulator[i]);
    }
  }
  return deployment.afe().Decode(sigma, first.accepted_count);
}

absl::StatusOr<std::unique_ptr<FileSnapshot>> FileSnapshot::Open(
    const std::string& path) {
  int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) {
    return Error(ErrorKind::kSnapshotCorrupt,
                 absl::StrCat("cannot open snapshot ", path, ": ",
                              std::strerror(errno)));
  }
  struct stat st;
  if (::fstat(fd, &st) == 0 && st.st_size == 0) {
    std::unique_ptr<FileSnapshot> snap(new FileSnapshot(fd));
    PRIVAGG_RETURN_IF_ERROR(snap->Append(kSnapshotMagic));
    return snap;
  }
  return std::unique_ptr<FileSnapshot>(new FileSnapshot(fd));
}

FileSnapshot::~FileSnapshot() { ::close(fd_); }

absl::Status FileSnapshot::Append(std::string_view bytes) {
  size_t done = 0;
  while (done < bytes.size()) {
    ssize_t n = ::write(fd_, bytes.data() + done, bytes.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      return Error(
          ErrorKind::kSnapshotCorrupt,
          absl::StrCat("snapshot write failed: ", std::strerror(errno)));
    }
    done += static_cast<size_t>(n);
  }
  return absl::OkStatus();
}

absl::StatusOr<SnapshotState> ReadSnapshot(const Deployment& deployment,
                                           std::string_view bytes) {
  auto corrupt = [](std::string_view why) {
    return Error(ErrorKind::kSnapshotCorrupt, std::string(why));
  };
  if (bytes.substr(0, kSnapshotMagic.size()) != kSnapshotMagic) {
    return corrupt("bad snapshot magic");
  }
  FrameCodec codec(deployment.field());
  SnapshotState state;
  state.accumulator = EmptyAccumulator(deployment);
  std::string_view rest = bytes.substr(kSnapshotMagic.size());
  bool need_acc = false;
  while (!rest.empty()) {
    auto header = PeekHeader(rest);
    if (!header.ok()) {
      return corrupt(absl::StrCat("damaged record: ",
                                  std::string(header.status().message())));
    }
    const size_t total = kFrameHeaderSize + header->length;
    if (rest.size() < total) return corrupt("truncated record");
    auto frame = codec.Decode(rest.substr(0, total));
    rest.remove_prefix(total);
    if (!frame.ok()) {
      return corrupt(absl::StrCat("damaged record: ",
                                  std::string(frame.status().message())));
    }
    if (frame->epoch != deployment.config().epoch) {
      return corrupt(absl::StrCat("record from epoch ", frame->epoch));
    }
    if (const auto* v = std::get_if<VerdictMsg>(&frame->msg)) {
      if (need_acc) return corrupt("accept without accumulator record");
      if (!state.decided.emplace(v->nonce, v->accept).second) {
        return corrupt("nonce decided twice");
      }
      if (v->accept) {
        state.accepted.insert(v->nonce);
        need_acc = true;
      }
    } else if (const auto* a = std::get_if<AccPublishMsg>(&frame->msg)) {
      if (!need_acc) return corrupt("accumulator record without accept");
      if (a->accepted_count != state.accepted.size() ||
          a->digest != AcceptedSetDigest(state.accepted) ||
          a->accumulator.size() != deployment.afe().truncated_length()) {
        return corrupt("accumulator record disagrees with the nonce log");
      }
      state.accumulator.sums = a->accumulator;
      state.accumulator.accepted_count = a->accepted_count;
      need_acc = false;
    } else {
      return corrupt(absl::StrCat(
          "unexpected ", std::string(MessageTypeName(TypeOf(frame->msg))),
          " record"));
    }
  }
  if (need_acc) return corrupt("accept without accumulator record");
  return state;
}

ServerNode::ServerNode(std::shared_ptr<const Deployment> deployment, int index,
                       uint64_t seed, SnapshotSink* snapshot)
    : dep_(std::move(deployment)),
      index_(index),
      rng_(seed),
      snapshot_(snapshot),
      verifier_(VerifierConfig::Sample(dep_->field(),
                                       dep_->circuit().mul_count(),
                                       dep_->config().rotation_budget, rng_)),
      acc_(EmptyAccumulator(*dep_)) {}

absl::Status ServerNode::Restore(const SnapshotState& state) {
  if (state.accumulator.sums.size() != dep_->afe().truncated_length()) {
    return Error(ErrorKind::kSnapshotCorrupt, "accumulator length mismatch");
  }
  acc_ = state.accumulator;
  decided_ = state.decided;
  accepted_ = state.accepted;
  return absl::OkStatus();
}

bool ServerNode::is_leader() const { return index_ == dep_->config().leader; }

size_t ServerNode::in_flight() const {
  size_t n = queue_.size();
  for (const auto& [nonce, s] : sessions_) n += s.active ? 1 : 0;
  return n;
}

AccPublishMsg ServerNode::Publication() const {
  return AccPublishMsg{acc_.sums, acc_.accepted_count,
                       AcceptedSetDigest(accepted_)};
}

Envelope ServerNode::To(const Peer& peer, Message msg) const {
  MessageType type = TypeOf(msg);
  auto bytes =
      dep_->codec().Encode(Frame{dep_->config().epoch, std::move(msg)});
  return Envelope{peer, type, bytes.ok() ? *std::move(bytes) : std::string()};
}

std::vector<Envelope> ServerNode::ToFollowers(const Message& msg) const {
  std::vector<Envelope> out;
  for (int j = 0; j < dep_->servers(); ++j) {
    if (j == index_) continue;
    out.push_back(To(Peer{Peer::kServer, static_cast<uint64_t>(j)}, msg));
  }
  return out;
}

namespace {

void Append(std::vector<Envelope>& out, std::vector<Envelope> more) {
  for (Envelope& e : more) out.push_back(std::move(e));
}

}  // namespace

std::vector<Envelope> ServerNode::OnFrame(const Peer& from,
                                          std::string_view bytes,
                                          int64_t now_ms) {
  if (crashed_) return {};
  now_ms_ = std::max(now_ms_, now_ms);
  auto frame = dep_->codec().Decode(bytes);
  if (!frame.ok() || frame->epoch != dep_->config().epoch) {
    ++stats_.malformed;
    return {};
  }
  const bool from_leader =
      from.kind == Peer::kServer &&
      from.id == static_cast<uint64_t>(dep_->config().leader);
  const bool from_server = from.kind == Peer::kServer &&
                           from.id < static_cast<uint64_t>(dep_->servers());
  std::vector<Envelope> out;
  std::visit(
      [&](auto&& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, UploadMsg>) {
          out = HandleUpload(from, std::move(msg), now_ms);
        } else if constexpr (std::is_same_v<T, VerifyStartMsg>) {
          if (!is_leader() && from_leader) {
            out = HandleVerifyStart(std::move(msg), now_ms);
          }
        } else if constexpr (std::is_same_v<T, Round1Msg>) {
          if (is_leader() && from_server) {
            out = HandleRound1(static_cast<int>(from.id), msg);
          }
        } else if constexpr (std::is_same_v<T, DeBroadcastMsg>) {
          if (!is_leader() && from_leader) out = HandleDeBroadcast(msg);
        } else if constexpr (std::is_same_v<T, Round2Msg>) {
          if (is_leader() && from_server) {
            out = HandleRound2(static_cast<int>(from.id), msg);
          }
        } else if constexpr (std::is_same_v<T, VerdictMsg>) {
          if (!is_leader() && from_leader) out = HandleVerdict(msg);
        } else if constexpr (std::is_same_v<T, PublishRequestMsg>) {
          publish_waiters_.push_back(from);
          out = ServePublish();
        }
      },
      frame->msg);
  if (crashed_) return {};
  return out;
}

std::vector<Envelope> ServerNode::HandleUpload(const Peer& from, UploadMsg msg,
                                               int64_t now_ms) {
  auto done = decided_.find(msg.nonce);
  if (done != decided_.end()) {
    // Replays are answered with the recorded decision and never re-counted.
    ++stats_.duplicates;
    if (is_leader()) return {To(from, VerdictMsg{msg.nonce, done->second})};
    return {};
  }
  Session& s = sessions_[msg.nonce];
  if (s.upload.has_value()) {
    s.client = from;
    return {};
  }
  msg.x_share.set_server_index(index_);
  msg.proof.h_points.set_server_index(index_);
  const Nonce nonce = msg.nonce;
  s.upload = std::move(msg);
  s.client = from;
  if (!s.active) s.started_ms = now_ms;

  if (!is_leader()) {
    if (!s.start.has_value()) return {};
    auto r1 = LocalRound1(nonce, s);
    if (!r1.has_value()) return {};
    return {
        To(Peer{Peer::kServer, static_cast<uint64_t>(dep_->config().leader)},
           *r1)};
  }
  if (!dep_->config().verify) return Finish(nonce, true);
  size_t active = 0;
  for (const auto& [n, sess] : sessions_) active += sess.active ? 1 : 0;
  if (active >= dep_->config().inflight) {
    queue_.push_back(nonce);
    return {};
  }
  return Start(nonce, now_ms);
}

std::vector<Envelope> ServerNode::Start(const Nonce& nonce, int64_t now_ms) {
  Session& s = sessions_[nonce];
  s.active = true;
  s.started_ms = now_ms;
  VerifierPoint point = verifier_.AcquireOrRotate(rng_);
  s.start = VerifyStartMsg{nonce, point.r, rng_.NextKey()};
  s.round1.assign(dep_->servers(), std::nullopt);
  s.round2.assign(dep_->servers(), std::nullopt);
  std::vector<Envelope> out = ToFollowers(*s.start);
  auto r1 = LocalRound1(nonce, s);
  if (!r1.has_value()) {
    ++stats_.malformed;
    Append(out, Finish(nonce, false));
    return out;
  }
  s.round1[index_] = *r1;
  return out;
}

std::vector<Envelope> ServerNode::StartQueued(int64_t now_ms) {
  std::vector<Envelope> out;
  while (!queue_.empty()) {
    size_t active = 0;
    for (const auto& [n, sess] : sessions_) active += sess.active ? 1 : 0;
    if (active >= dep_->config().inflight) break;
    Nonce nonce = queue_.front();
    queue_.pop_front();
    if (sessions_.count(nonce) == 0) continue;
    Append(out, Start(nonce, now_ms));
    if (crashed_) break;
  }
  return out;
}

std::optional<Round1Msg> ServerNode::LocalRound1(const Nonce& nonce,
                                                 Session& s) {
  auto point =
      MakeVerifierPoint(dep_->field(), dep_->circuit().mul_count(), s.start->r);
  if (!point.ok()) return std::nullopt;
  std::vector<FieldElement> x = s.upload->x_share.Expand(dep_->field());
  auto r1 =
      VerifierRound1(dep_->circuit(), *point, x, s.upload->proof, index_ == 0);
  if (!r1.ok()) return std::nullopt;
  s.state = std::move(r1->state);
  return Round1Msg{nonce, r1->d_share, r1->e_share};
}

std::optional<Round2Msg> ServerNode::LocalRound2(const Nonce& nonce,
                                                 Session& s) {
  if (!s.state.has_value() || !s.de.has_value()) return std::nullopt;
  std::vector<FieldElement> coeffs = ExpandPrg(
      dep_->field(), s.start->coeff_seed, dep_->circuit().check_count());
  auto r2 = VerifierRound2(dep_->field(), *s.state, s.de->d, s.de->e,
                           dep_->servers(), coeffs);
  if (!r2.ok()) return std::nullopt;
  return Round2Msg{nonce, dep_->field().Add(r2->sigma_share, sigma_tamper_),
                   r2->batch_share};
}

std::vector<Envelope> ServerNode::HandleVerifyStart(VerifyStartMsg msg,
                                                    int64_t now_ms) {
  if (decided_.count(msg.nonce) > 0) return {};
  const Nonce nonce = msg.nonce;
  Session& s = sessions_[nonce];
  s.start = msg;
  s.active = true;
  s.started_ms = now_ms;
  if (!s.upload.has_value()) return {};
  auto r1 = LocalRound1(nonce, s);
  if (!r1.has_value()) {
    ++stats_.malformed;
    return {};
  }
  return {To(Peer{Peer::kServer, static_cast<uint64_t>(dep_->config().leader)},
             *r1)};
}

std::vector<Envelope> ServerNode::HandleRound1(int from, const Round1Msg& msg) {
  auto it = sessions_.find(msg.nonce);
  if (it == sessions_.end() || !it->second.active) return {};
  Session& s = it->second;
  if (s.round1[from].has_value() || s.de.has_value()) return {};
  s.round1[from] = msg;
  for (const auto& r : s.round1) {
    if (!r.has_value()) return {};
  }
  const Field& f = dep_->field();
  FieldElement d = f.Zero();
  FieldElement e = f.Zero();
  for (const auto& r : s.round1) {
    d = f.Add(d, r->d_share);
    e = f.Add(e, r->e_share);
  }
  s.de = DeBroadcastMsg{msg.nonce, d, e};
  std::vector<Envelope> out = ToFollowers(*s.de);
  auto r2 = LocalRound2(msg.nonce, s);
  if (!r2.has_value()) {
    Append(out, Finish(msg.nonce, false));
    return out;
  }
  s.round2[index_] = *r2;
  return out;
}

std::vector<Envelope> ServerNode::HandleDeBroadcast(const DeBroadcastMsg& msg) {
  auto it = sessions_.find(msg.nonce);
  if (it == sessions_.end() || !it->second.state.has_value()) return {};
  Session& s = it->second;
  s.de = msg;
  auto r2 = LocalRound2(msg.nonce, s);
  if (!r2.has_value()) return {};
  return {To(Peer{Peer::kServer, static_cast<uint64_t>(dep_->config().leader)},
             *r2)};
}

std::vector<Envelope> ServerNode::HandleRound2(int from, const Round2Msg& msg) {
  auto it = sessions_.find(msg.nonce);
  if (it == sessions_.end() || !it->second.active ||
      !it->second.de.has_value()) {
    return {};
  }
  Session& s = it->second;
  if (s.round2[from].has_value()) return {};
  s.round2[from] = msg;
  std::vector<FieldElement> sigmas;
  std::vector<FieldElement> batches;
  for (const auto& r : s.round2) {
    if (!r.has_value()) return {};
    sigmas.push_back(r->sigma_share);
    batches.push_back(r->batch_share);
  }
  auto accept = Decide(dep_->field(), sigmas, batches, dep_->servers());
  return Finish(msg.nonce, accept.ok() && *accept);
}

bool ServerNode::Record(const Nonce& nonce, bool accept,
                        const Session* session) {
  Accumulator next = acc_;
  if (accept) {
    if (session == nullptr || !session->upload.has_value() ||
        !ServerAggregate(*dep_, session->upload->x_share, &next).ok()) {
      accept = false;
      ++stats_.malformed;
    }
  }
  std::set<Nonce> accepted = accepted_;
  if (accept) accepted.insert(nonce);
  if (snapshot_ != nullptr) {
    FrameCodec plain(dep_->field());
    const uint32_t epoch = dep_->config().epoch;
    std::string record = *plain.Encode(Frame{epoch, VerdictMsg{nonce, accept}});
    if (accept) {
      record += *plain.Encode(
          Frame{epoch, AccPublishMsg{next.sums, next.accepted_count,
                                     AcceptedSetDigest(accepted)}});
    }
    if (!snapshot_->Append(record).ok()) {
      crashed_ = true;
      return false;
    }
  }
  acc_ = std::move(next);
  accepted_ = std::move(accepted);
  decided_[nonce] = accept;
  ++(accept ? stats_.accepted : stats_.rejected);
  if (crash_after_.has_value() &&
      stats_.accepted + stats_.rejected >= *crash_after_) {
    crashed_ = true;
    return false;
  }
  return true;
}

std::vector<Envelope> ServerNode::Finish(const Nonce& nonce, bool accept) {
  auto it = sessions_.find(nonce);
  const Session* session = it == sessions_.end() ? nullptr : &it->second;
  if (!Record(nonce, accept, session)) return {};
  accept = decided_[nonce];
  std::vector<Envelope> out = ToFollowers(VerdictMsg{nonce, accept});
  if (session != nullptr && session->client.has_value()) {
    out.push_back(To(*session->client, VerdictMsg{nonce, accept}));
  }
  if (it != sessions_.end()) sessions_.erase(it);
  if (is_leader()) Append(out, StartQueued(now_ms_));
  if (crashed_) return {};
  Append(out, ServePublish());
  return out;
}

std::vector<Envelope> ServerNode::HandleVerdict(const VerdictMsg& msg) {
  if (decided_.count(msg.nonce) > 0) return {};
  auto it = sessions_.find(msg.nonce);
  if (it == sessions_.end() || !it->second.upload.has_value()) {
    if (msg.accept) {
      // Cannot add a share never received; the digest will expose it.
      ++stats_.malformed;
      if (it != sessions_.end()) sessions_.erase(it);
      return ServePublish();
    }
    if (!Record(msg.nonce, false, nullptr)) return {};
  } else {
    if (!Record(msg.nonce, msg.accept, &it->second)) return {};
  }
  it = sessions_.find(msg.nonce);
  if (it != sessions_.end()) sessions_.erase(it);
  return ServePublish();
}

std::vector<Envelope> ServerNode::Tick(int64_t now_ms) {
  if (crashed_) return {};
  now_ms_ = std::max(now_ms_, now_ms);
  std::vector<Envelope> out;
  const int64_t timeout = dep_->config().timeout_ms;
  std::vector<Nonce> expired;
  for (const auto& [nonce, s] : sessions_) {
    if (is_leader() ? s.active && now_ms - s.started_ms >= timeout
                    : now_ms - s.started_ms >= 2 * timeout) {
      expired.push_back(nonce);
    }
  }
  for (const Nonce& nonce : expired) {
    ++stats_.timeouts;
    if (is_leader()) {
      Append(out, Finish(nonce, false));
      if (crashed_) return {};
    } else {
      sessions_.erase(nonce);
    }
  }
  if (is_leader()) Append(out, StartQueued(now_ms));
  if (crashed_) return {};
  Append(out, ServePublish());
  return out;
}

std::vector<Envelope> ServerNode::ReplayVerdicts() {
  std::vector<Envelope> out;
  if (!is_leader() || crashed_) return out;
  for (const auto& [nonce, accept] : decided_) {
    Append(out, ToFollowers(VerdictMsg{nonce, accept}));
  }
  return out;
}

std::vector<Envelope> ServerNode::ServePublish() {
  if (publish_waiters_.empty() || in_flight() > 0) return {};
  std::vector<Envelope> out;
  for (const Peer& p : publish_waiters_) out.push_back(To(p, Publication()));
  publish_waiters_.clear();
  return out;
}

}  // namespace privagg
