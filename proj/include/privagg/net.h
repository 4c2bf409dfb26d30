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

#ifndef PRIVAGG_NET_H_
#define PRIVAGG_NET_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privagg/protocol.h"
#include "privagg/transport.h"

namespace privagg {

using LogFn = std::function<void(std::string_view)>;

struct NetServerOptions {
  // Overrides the configured address of this server.
  std::string listen;
  std::chrono::milliseconds peer_connect_timeout{10000};
  std::chrono::milliseconds tick{10};
  LogFn log;
};

// Runs a ServerNode over TCP. The leader dials every follower; clients and
// the leader connect to a server's listen address. Frames from all
// connections are fed to the node from a single loop.
class NetServer {
 public:
  // BindError when the address cannot be bound.
  static absl::StatusOr<std::unique_ptr<NetServer>> Create(
      std::shared_ptr<const Deployment> deployment,
      std::unique_ptr<ServerNode> node, NetServerOptions options = {});
  ~NetServer();

  uint16_t port() const { return listener_->port(); }
  const ServerNode& node() const { return *node_; }

  // Serves until Stop() or until the node crashes. Timeout when the leader
  // cannot reach a follower.
  absl::Status Run();
  void Stop() { stop_ = true; }

 private:
  struct Event {
    uint64_t conn = 0;
    std::string bytes;  // empty: connection closed
  };

  NetServer(std::shared_ptr<const Deployment> deployment,
            std::unique_ptr<ServerNode> node, NetServerOptions options,
            std::unique_ptr<TcpListener> listener)
      : dep_(std::move(deployment)),
        node_(std::move(node)),
        options_(std::move(options)),
        listener_(std::move(listener)) {}

  void AcceptLoop();
  void ReadLoop(uint64_t conn, std::shared_ptr<TcpChannel> channel);
  uint64_t AddConnection(std::shared_ptr<TcpChannel> channel);
  void Dispatch(std::vector<Envelope> out);
  void Log(std::string_view line) const;

  std::shared_ptr<const Deployment> dep_;
  std::unique_ptr<ServerNode> node_;
  NetServerOptions options_;
  std::unique_ptr<TcpListener> listener_;
  std::atomic<bool> stop_{false};

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Event> events_;
  std::map<uint64_t, std::shared_ptr<TcpChannel>> conns_;
  uint64_t next_conn_ = 1;
  std::vector<std::thread> threads_;
  std::thread acceptor_;

  // Loop thread only.
  std::map<uint64_t, int> follower_conn_;  // connection -> follower index
  std::map<int, uint64_t> follower_by_index_;
  uint64_t leader_conn_ = 0;
};

// Client side of the wire protocol: one connection per server.
class NetClient {
 public:
  static absl::StatusOr<std::unique_ptr<NetClient>> Connect(
      std::shared_ptr<const Deployment> deployment,
      std::chrono::milliseconds timeout);

  // Sends each upload to its server and waits for the leader's verdict.
  absl::StatusOr<bool> Submit(const Submission& submission,
                              std::chrono::milliseconds timeout);
  // Collects one ACC_PUBLISH per server.
  absl::StatusOr<std::vector<AccPublishMsg>> RequestPublications(
      std::chrono::milliseconds timeout);

 private:
  NetClient(std::shared_ptr<const Deployment> deployment,
            std::vector<std::unique_ptr<TcpChannel>> channels)
      : dep_(std::move(deployment)), channels_(std::move(channels)) {}

  absl::StatusOr<Frame> RecvFrame(int server, int64_t deadline_ms);

  std::shared_ptr<const Deployment> dep_;
  std::vector<std::unique_ptr<TcpChannel>> channels_;
};

// Submits over fresh connections, resending the same nonce after connection
// failures until `deadline` passes. The leader answers a decided nonce with
// its recorded verdict, so retries never double count.
absl::StatusOr<bool> SubmitWithRetry(
    std::shared_ptr<const Deployment> deployment, const Submission& submission,
    std::chrono::milliseconds deadline);

}  // namespace privagg

#endif  // PRIVAGG_NET_H_
