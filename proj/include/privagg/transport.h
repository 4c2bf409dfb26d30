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

#ifndef PRIVAGG_TRANSPORT_H_
#define PRIVAGG_TRANSPORT_H_

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privagg/field.h"
#include "privagg/prg.h"
#include "privagg/sharing.h"
#include "privagg/snip.h"

namespace privagg {

// Frame layout:
//   u32 BE payload length | u8 type | u32 BE epoch | payload | [32-byte MAC]
// The MAC, when a key is configured, is HMAC-SHA256 over everything before it.
inline constexpr size_t kFrameHeaderSize = 9;
inline constexpr size_t kMacSize = 32;
inline constexpr uint32_t kMaxPayload = uint32_t{1} << 24;

enum class MessageType : uint8_t {
  kUpload = 0x01,
  kRound1 = 0x02,
  kDeBroadcast = 0x03,
  kRound2 = 0x04,
  kVerdict = 0x05,
  kAccPublish = 0x06,
  kVerifyStart = 0x07,
  kPublishRequest = 0x08,
};

std::string_view MessageTypeName(MessageType type);

using Nonce = std::array<uint8_t, 16>;

std::string NonceHex(const Nonce& nonce);

struct UploadMsg {
  Nonce nonce{};
  ShareVector x_share;
  SnipProofShare proof;
  friend bool operator==(const UploadMsg&, const UploadMsg&) = default;
};

struct Round1Msg {
  Nonce nonce{};
  FieldElement d_share;
  FieldElement e_share;
  friend bool operator==(const Round1Msg&, const Round1Msg&) = default;
};

struct DeBroadcastMsg {
  Nonce nonce{};
  FieldElement d;
  FieldElement e;
  friend bool operator==(const DeBroadcastMsg&,
                         const DeBroadcastMsg&) = default;
};

struct Round2Msg {
  Nonce nonce{};
  FieldElement sigma_share;
  FieldElement batch_share;
  friend bool operator==(const Round2Msg&, const Round2Msg&) = default;
};

struct VerdictMsg {
  Nonce nonce{};
  bool accept = false;
  friend bool operator==(const VerdictMsg&, const VerdictMsg&) = default;
};

// Payload: u32 BE k' | k' elements | u64 BE accepted count | digest.
struct AccPublishMsg {
  std::vector<FieldElement> accumulator;
  uint64_t accepted_count = 0;
  Digest digest{};
  friend bool operator==(const AccPublishMsg&, const AccPublishMsg&) = default;
};

// Leader to followers: evaluation point and batching-coefficient seed.
struct VerifyStartMsg {
  Nonce nonce{};
  FieldElement r;
  PrgKey coeff_seed{};
  friend bool operator==(const VerifyStartMsg&,
                         const VerifyStartMsg&) = default;
};

// Empty payload.
struct PublishRequestMsg {
  friend bool operator==(const PublishRequestMsg&,
                         const PublishRequestMsg&) = default;
};

using Message =
    std::variant<UploadMsg, Round1Msg, DeBroadcastMsg, Round2Msg, VerdictMsg,
                 AccPublishMsg, VerifyStartMsg, PublishRequestMsg>;

MessageType TypeOf(const Message& msg);

struct Frame {
  uint32_t epoch = 0;
  Message msg;
  friend bool operator==(const Frame&, const Frame&) = default;
};

class FrameCodec {
 public:
  explicit FrameCodec(const Field& field, std::string mac_key = "")
      : field_(field), mac_key_(std::move(mac_key)) {}

  const Field& field() const { return field_; }
  bool has_mac() const { return !mac_key_.empty(); }
  size_t trailer_size() const { return has_mac() ? kMacSize : 0; }

  // LengthOverflow when the payload exceeds 2^24 bytes.
  absl::StatusOr<std::string> Encode(const Frame& frame) const;
  // Exactly one frame. Truncated, UnknownType, LengthOverflow, BadMac, and
  // MalformedShare for trailing or inconsistent payload bytes.
  absl::StatusOr<Frame> Decode(std::string_view bytes) const;

 private:
  Field field_;
  std::string mac_key_;
};

// Reads header fields without decoding the payload.
struct FrameHeader {
  uint32_t length = 0;
  uint8_t type = 0;
  uint32_t epoch = 0;
};
absl::StatusOr<FrameHeader> PeekHeader(std::string_view bytes);

using Clock = std::function<int64_t()>;  // milliseconds
int64_t SteadyNowMs();

// Ordered, reliable frame pipe. Send takes a complete encoded frame; Recv
// yields one complete frame. Timeout when nothing arrives in time;
// ConnectionClosed once the peer is gone and the queue is drained.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual absl::Status Send(std::string frame) = 0;
  virtual absl::StatusOr<std::string> Recv(
      std::chrono::milliseconds timeout) = 0;
  virtual void Close() = 0;
};

enum class FaultAction { kDrop, kDelay, kReorder };

// Applies to the n-th (0-based) frame of `type` sent on the channel, or to
// every such frame when `occurrence` is empty.
struct FaultRule {
  MessageType type = MessageType::kUpload;
  FaultAction action = FaultAction::kDrop;
  std::optional<uint64_t> occurrence;
  int64_t delay_ms = 0;
};

struct ChannelStats {
  uint64_t frames_sent = 0;
  uint64_t bytes_sent = 0;
  uint64_t frames_dropped = 0;
};

// In-memory pipe end. Faults are applied on the sending side, so a rule on
// one end affects what the peer receives.
class InProcessChannel : public Channel {
 public:
  static std::pair<std::unique_ptr<InProcessChannel>,
                   std::unique_ptr<InProcessChannel>>
  Pair(Clock clock = SteadyNowMs);

  ~InProcessChannel() override;

  absl::Status Send(std::string frame) override;
  absl::StatusOr<std::string> Recv(std::chrono::milliseconds timeout) override;
  void Close() override;

  void AddFault(const FaultRule& rule);
  // True when a frame is deliverable now.
  bool Ready();
  // Earliest pending release time of a delayed frame, if any.
  std::optional<int64_t> NextRelease();
  const ChannelStats& stats() const { return stats_; }

 private:
  struct Queue;
  InProcessChannel(std::shared_ptr<Queue> inbox, std::shared_ptr<Queue> outbox,
                   Clock clock);

  std::shared_ptr<Queue> inbox_;
  std::shared_ptr<Queue> outbox_;
  Clock clock_;
  std::vector<FaultRule> faults_;
  std::vector<uint64_t> type_counts_ = std::vector<uint64_t>(256, 0);
  ChannelStats stats_;
};

// Blocking TCP stream carrying frames. `trailer` is the MAC size in use.
class TcpChannel : public Channel {
 public:
  TcpChannel(int fd, size_t trailer);
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  absl::Status Send(std::string frame) override;
  absl::StatusOr<std::string> Recv(std::chrono::milliseconds timeout) override;
  void Close() override;

 private:
  int fd_;
  size_t trailer_;
  std::mutex send_mu_;
  std::string partial_;
};

// "host:port". Port 0 picks a free port.
class TcpListener {
 public:
  static absl::StatusOr<std::unique_ptr<TcpListener>> Bind(
      std::string_view address);
  ~TcpListener();

  uint16_t port() const { return port_; }
  // Timeout when no connection arrives in time.
  absl::StatusOr<std::unique_ptr<TcpChannel>> Accept(
      std::chrono::milliseconds timeout, size_t trailer);
  void Close();

 private:
  TcpListener(int fd, uint16_t port) : fd_(fd), port_(port) {}
  int fd_;
  uint16_t port_;
};

absl::StatusOr<std::unique_ptr<TcpChannel>> TcpConnect(
    std::string_view address, std::chrono::milliseconds timeout,
    size_t trailer);

}  // namespace privagg

#endif  // PRIVAGG_TRANSPORT_H_
