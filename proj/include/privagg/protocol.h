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

#ifndef PRIVAGG_PROTOCOL_H_
#define PRIVAGG_PROTOCOL_H_

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privagg/afe.h"
#include "privagg/field.h"
#include "privagg/prg.h"
#include "privagg/sharing.h"
#include "privagg/snip.h"
#include "privagg/transport.h"

namespace privagg {

// Textual form, one key=value per line, '#' starts a comment:
//   modulus=18446744069414584321
//   servers=3
//   server.0=127.0.0.1:7100
//   leader=0
//   afe=sum b=4
//   rotation_budget=1024
//   min_batch=1
//   epoch=1
//   timeout_ms=2000
// Optional: mac_key=<hex>, verify=0|1, inflight=<n>.
struct DeploymentConfig {
  uint64_t modulus = Field::kGoldilocksModulus;
  int servers = 2;
  std::vector<std::string> addresses;  // empty entries for in-process use
  int leader = 0;
  AfeKind afe;
  uint64_t rotation_budget = 1024;
  uint64_t min_batch = 1;
  uint32_t epoch = 1;
  int64_t timeout_ms = 2000;
  std::string mac_key;  // raw bytes
  bool verify = true;
  size_t inflight = 64;

  // ConfigError on unknown keys, bad values or inconsistent settings.
  static absl::StatusOr<DeploymentConfig> Parse(std::string_view text);
  static absl::StatusOr<DeploymentConfig> Load(const std::string& path);
  std::string Format() const;
  // SHA-256 of Format(); equal on every server of one deployment.
  Digest ConfigDigest() const;
};

// Config plus the objects derived from it.
class Deployment {
 public:
  static absl::StatusOr<std::shared_ptr<const Deployment>> Create(
      const DeploymentConfig& config);

  const DeploymentConfig& config() const { return config_; }
  const Field& field() const { return field_; }
  const Afe& afe() const { return *afe_; }
  const ValidCircuit& circuit() const { return afe_->circuit(); }
  const FrameCodec& codec() const { return codec_; }
  int servers() const { return config_.servers; }

 private:
  Deployment(DeploymentConfig config, Field field,
             std::shared_ptr<const Afe> afe)
      : config_(std::move(config)),
        field_(field),
        afe_(std::move(afe)),
        codec_(field_, config_.mac_key) {}

  DeploymentConfig config_;
  Field field_;
  std::shared_ptr<const Afe> afe_;
  FrameCodec codec_;
};

struct Submission {
  Nonce nonce{};
  std::vector<UploadMsg> uploads;  // one per server
};

Nonce RandomNonce(Csprng& rng);

// Encode, prove and split. DomainError for values outside the AFE domain.
absl::StatusOr<Submission> ClientSubmit(const Deployment& deployment,
                                        const AfeValue& value, Csprng& rng);
Submission Package(const Nonce& nonce, ProvedSubmission proved);

struct Accumulator {
  std::vector<FieldElement> sums;
  uint64_t accepted_count = 0;
  friend bool operator==(const Accumulator&, const Accumulator&) = default;
};

Accumulator EmptyAccumulator(const Deployment& deployment);
// Adds the truncation of an expanded encoding share.
absl::Status ServerAggregate(const Deployment& deployment,
                             const ShareVector& share, Accumulator* acc);

Digest AcceptedSetDigest(const std::set<Nonce>& accepted);

// MissingShare unless one publication per server; CountMismatch when counts
// or accepted-set digests differ; BatchTooSmall below min_batch.
absl::StatusOr<AggregateResult> Publish(
    const Deployment& deployment, std::span<const AccPublishMsg> publications);

// Append-only persistence: "PRIV1" followed by frames. Every decision is a
// VERDICT record; every accept is followed by an ACC_PUBLISH record with the
// new accumulator state.
inline constexpr std::string_view kSnapshotMagic = "PRIV1";

class SnapshotSink {
 public:
  virtual ~SnapshotSink() = default;
  virtual absl::Status Append(std::string_view bytes) = 0;
};

class MemorySnapshot : public SnapshotSink {
 public:
  MemorySnapshot() : data_(kSnapshotMagic) {}
  absl::Status Append(std::string_view bytes) override {
    data_.append(bytes);
    return absl::OkStatus();
  }
  const std::string& data() const { return data_; }

 private:
  std::string data_;
};

class FileSnapshot : public SnapshotSink {
 public:
  // Creates the file with the magic when missing or empty.
  static absl::StatusOr<std::unique_ptr<FileSnapshot>> Open(
      const std::string& path);
  ~FileSnapshot() override;
  absl::Status Append(std::string_view bytes) override;

 private:
  explicit FileSnapshot(int fd) : fd_(fd) {}
  int fd_;
};

struct SnapshotState {
  Accumulator accumulator;
  std::map<Nonce, bool> decided;
  std::set<Nonce> accepted;
};

// SnapshotCorrupt on bad magic, damaged frames, a foreign epoch or records
// that disagree with the nonce log.
absl::StatusOr<SnapshotState> ReadSnapshot(const Deployment& deployment,
                                           std::string_view bytes);

struct Peer {
  enum Kind { kServer, kClient };
  Kind kind = kServer;
  uint64_t id = 0;  // server index or client connection id
  friend bool operator==(const Peer&, const Peer&) = default;
  friend auto operator<=>(const Peer&, const Peer&) = default;
};

struct Envelope {
  Peer to;
  MessageType type;
  std::string bytes;
};

struct NodeStats {
  uint64_t accepted = 0;
  uint64_t rejected = 0;
  uint64_t timeouts = 0;
  uint64_t duplicates = 0;
  uint64_t malformed = 0;
};

// One server's protocol logic. Pure state machine: frames in, envelopes out;
// the caller owns sockets and time.
//
// Leader: UPLOAD -> VERIFY_START to followers, gathers ROUND1, sends
// DE_BCAST, gathers ROUND2, decides, logs, sends VERDICT to followers and
// the client. Followers answer VERIFY_START with ROUND1 and DE_BCAST with
// ROUND2, and apply VERDICT. Any server answers PUBLISH_REQ with ACC_PUBLISH
// once its in-flight sessions have drained.
class ServerNode {
 public:
  ServerNode(std::shared_ptr<const Deployment> deployment, int index,
             uint64_t seed, SnapshotSink* snapshot = nullptr);

  // Replaces state with a snapshot's contents.
  absl::Status Restore(const SnapshotState& state);

  std::vector<Envelope> OnFrame(const Peer& from, std::string_view bytes,
                                int64_t now_ms);
  // Expires sessions and serves deferred publish requests.
  std::vector<Envelope> Tick(int64_t now_ms);
  // Leader after restart: resends every logged verdict to the followers.
  std::vector<Envelope> ReplayVerdicts();

  AccPublishMsg Publication() const;
  const Accumulator& accumulator() const { return acc_; }
  const std::map<Nonce, bool>& decided() const { return decided_; }
  int index() const { return index_; }
  bool is_leader() const;
  size_t in_flight() const;
  const NodeStats& stats() const { return stats_; }
  uint64_t rotations() const { return verifier_.rotations(); }

  // Adversarial hook: added to every sigma share this server reports.
  void set_sigma_tamper(FieldElement delta) { sigma_tamper_ = delta; }
  // Fault hook: after logging this many verdicts the node goes silent.
  void set_crash_after(std::optional<uint64_t> n) { crash_after_ = n; }
  bool crashed() const { return crashed_; }

 private:
  struct Session {
    std::optional<UploadMsg> upload;
    std::optional<Peer> client;
    std::optional<VerifyStartMsg> start;
    std::optional<VerifierState> state;
    std::optional<DeBroadcastMsg> de;
    std::vector<std::optional<Round1Msg>> round1;
    std::vector<std::optional<Round2Msg>> round2;
    int64_t started_ms = 0;
    bool active = false;
  };

  std::vector<Envelope> HandleUpload(const Peer& from, UploadMsg msg,
                                     int64_t now_ms);
  std::vector<Envelope> HandleVerifyStart(VerifyStartMsg msg, int64_t now_ms);
  std::vector<Envelope> HandleRound1(int from, const Round1Msg& msg);
  std::vector<Envelope> HandleDeBroadcast(const DeBroadcastMsg& msg);
  std::vector<Envelope> HandleRound2(int from, const Round2Msg& msg);
  std::vector<Envelope> HandleVerdict(const VerdictMsg& msg);

  // Leader: begins verification of a session holding an upload.
  std::vector<Envelope> Start(const Nonce& nonce, int64_t now_ms);
  std::vector<Envelope> StartQueued(int64_t now_ms);
  // Runs round 1 locally once both the upload and the start are present.
  std::optional<Round1Msg> LocalRound1(const Nonce& nonce, Session& session);
  std::optional<Round2Msg> LocalRound2(const Nonce& nonce, Session& session);
  std::vector<Envelope> Finish(const Nonce& nonce, bool accept);
  // Logs and applies a decision; false if persistence failed.
  bool Record(const Nonce& nonce, bool accept, const Session* session);
  std::vector<Envelope> ServePublish();

  Envelope To(const Peer& peer, Message msg) const;
  std::vector<Envelope> ToFollowers(const Message& msg) const;

  std::shared_ptr<const Deployment> dep_;
  int index_;
  Csprng rng_;
  SnapshotSink* snapshot_;
  VerifierConfig verifier_;
  Accumulator acc_;
  std::map<Nonce, Session> sessions_;
  std::deque<Nonce> queue_;
  std::map<Nonce, bool> decided_;
  std::set<Nonce> accepted_;
  std::vector<Peer> publish_waiters_;
  NodeStats stats_;
  FieldElement sigma_tamper_{0};
  std::optional<uint64_t> crash_after_;
  bool crashed_ = false;
  int64_t now_ms_ = 0;
};

}  // namespace privagg

#endif  // PRIVAGG_PROTOCOL_H_
