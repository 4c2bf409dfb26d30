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

#include "privagg/net.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {
namespace {

using std::chrono::milliseconds;

constexpr milliseconds kPoll{100};

bool FromLeader(MessageType type) {
  return type == MessageType::kVerifyStart ||
         type == MessageType::kDeBroadcast || type == MessageType::kVerdict;
}

}  // namespace

absl::StatusOr<std::unique_ptr<NetServer>> NetServer::Create(
    std::shared_ptr<const Deployment> deployment,
    std::unique_ptr<ServerNode> node, NetServerOptions options) {
  std::string address = options.listen;
  if (address.empty()) {
    const auto& addrs = deployment->config().addresses;
    if (node->index() < static_cast<int>(addrs.size())) {
      address = addrs[node->index()];
    }
  }
  if (address.empty()) {
    return Error(ErrorKind::kConfigError,
                 absl::StrCat("no address for server ", node->index()));
  }
  PRIVAGG_ASSIGN_OR_RETURN(std::unique_ptr<TcpListener> listener,
                           TcpListener::Bind(address));
  return std::unique_ptr<NetServer>(
      new NetServer(std::move(deployment), std::move(node), std::move(options),
                    std::move(listener)));
}

NetServer::~NetServer() {
  stop_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> threads;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& [id, ch] : conns_) ch->Close();
    threads.swap(threads_);
  }
  for (std::thread& t : threads) t.join();
}

void NetServer::Log(std::string_view line) const {
  if (options_.log) options_.log(line);
}

uint64_t NetServer::AddConnection(std::shared_ptr<TcpChannel> channel) {
  std::lock_guard<std::mutex> lock(mu_);
  const uint64_t id = next_conn_++;
  conns_[id] = channel;
  threads_.emplace_back(&NetServer::ReadLoop, this, id, std::move(channel));
  return id;
}

void NetServer::AcceptLoop() {
  const size_t trailer = dep_->codec().trailer_size();
  while (!stop_) {
    auto ch = listener_->Accept(kPoll, trailer);
    if (ch.ok()) {
      AddConnection(std::shared_ptr<TcpChannel>(std::move(*ch)));
    } else if (GetErrorKind(ch.status()) != ErrorKind::kTimeout) {
      std::this_thread::sleep_for(kPoll);
    }
  }
}

void NetServer::ReadLoop(uint64_t conn, std::shared_ptr<TcpChannel> channel) {
  while (!stop_) {
    auto frame = channel->Recv(kPoll);
    if (!frame.ok() && GetErrorKind(frame.status()) == ErrorKind::kTimeout) {
      continue;
    }
    std::lock_guard<std::mutex> lock(mu_);
    events_.push_back(Event{conn, frame.ok() ? *std::move(frame) : ""});
    cv_.notify_one();
    if (!frame.ok()) return;
  }
}

void NetServer::Dispatch(std::vector<Envelope> out) {
  for (Envelope& e : out) {
    uint64_t conn = 0;
    if (e.to.kind == Peer::kClient) {
      conn = e.to.id;
    } else if (node_->is_leader()) {
      auto it = follower_by_index_.find(static_cast<int>(e.to.id));
      if (it != follower_by_index_.end()) conn = it->second;
    } else {
      conn = leader_conn_;
    }
    std::shared_ptr<TcpChannel> ch;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = conns_.find(conn);
      if (it != conns_.end()) ch = it->second;
    }
    if (ch == nullptr || !ch->Send(std::move(e.bytes)).ok()) {
      Log(absl::StrCat("dropped ", std::string(MessageTypeName(e.type)),
                       ": no connection"));
    }
  }
}

absl::Status NetServer::Run() {
  const size_t trailer = dep_->codec().trailer_size();
  acceptor_ = std::thread(&NetServer::AcceptLoop, this);
  if (node_->is_leader()) {
    for (int j = 0; j < dep_->servers(); ++j) {
      if (j == node_->index()) continue;
      auto ch = TcpConnect(dep_->config().addresses[j],
                           options_.peer_connect_timeout, trailer);
      if (!ch.ok()) {
        stop_ = true;
        return ch.status();
      }
      const uint64_t id =
          AddConnection(std::shared_ptr<TcpChannel>(std::move(*ch)));
      follower_conn_[id] = j;
      follower_by_index_[j] = id;
    }
    Log("connected to all followers");
    Dispatch(node_->ReplayVerdicts());
  }
  const Peer leader{Peer::kServer,
                    static_cast<uint64_t>(dep_->config().leader)};
  while (!stop_ && !node_->crashed()) {
    std::deque<Event> batch;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait_for(lock, options_.tick, [&] { return !events_.empty(); });
      batch.swap(events_);
    }
    for (Event& ev : batch) {
      if (ev.bytes.empty()) {
        std::lock_guard<std::mutex> lock(mu_);
        conns_.erase(ev.conn);
        if (ev.conn == leader_conn_) leader_conn_ = 0;
        continue;
      }
      Peer from{Peer::kClient, ev.conn};
      auto f = follower_conn_.find(ev.conn);
      if (f != follower_conn_.end()) {
        from = Peer{Peer::kServer, static_cast<uint64_t>(f->second)};
      } else if (!node_->is_leader()) {
        auto header = PeekHeader(ev.bytes);
        if (header.ok() && FromLeader(static_cast<MessageType>(header->type))) {
          leader_conn_ = ev.conn;
          from = leader;
        }
      }
      Dispatch(node_->OnFrame(from, ev.bytes, SteadyNowMs()));
      if (node_->crashed()) break;
    }
    Dispatch(node_->Tick(SteadyNowMs()));
  }
  stop_ = true;
  if (node_->crashed()) Log("node stopped after its crash hook fired");
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<NetClient>> NetClient::Connect(
    std::shared_ptr<const Deployment> deployment, milliseconds timeout) {
  std::vector<std::unique_ptr<TcpChannel>> channels;
  const auto& addrs = deployment->config().addresses;
  for (int i = 0; i < deployment->servers(); ++i) {
    if (i >= static_cast<int>(addrs.size()) || addrs[i].empty()) {
      return Error(ErrorKind::kConfigError,
                   absl::StrCat("no address for server ", i));
    }
    PRIVAGG_ASSIGN_OR_RETURN(
        std::unique_ptr<TcpChannel> ch,
        TcpConnect(addrs[i], timeout, deployment->codec().trailer_size()));
    channels.push_back(std::move(ch));
  }
  return std::unique_ptr<NetClient>(
      new NetClient(std::move(deployment), std::move(channels)));
}

absl::StatusOr<Frame> NetClient::RecvFrame(int server, int64_t deadline_ms) {
  const int64_t left = std::max<int64_t>(0, deadline_ms - SteadyNowMs());
  PRIVAGG_ASSIGN_OR_RETURN(std::string bytes,
                           channels_[server]->Recv(milliseconds(left)));
  return dep_->codec().Decode(bytes);
}

absl::StatusOr<bool> NetClient::Submit(const Submission& submission,
                                       milliseconds timeout) {
  const uint32_t epoch = dep_->config().epoch;
  if (submission.uploads.size() != channels_.size()) {
    return Error(ErrorKind::kMissingShare, "one upload per server required");
  }
  for (size_t i = 0; i < channels_.size(); ++i) {
    PRIVAGG_ASSIGN_OR_RETURN(
        std::string bytes,
        dep_->codec().Encode(Frame{epoch, submission.uploads[i]}));
    PRIVAGG_RETURN_IF_ERROR(channels_[i]->Send(std::move(bytes)));
  }
  const int64_t deadline = SteadyNowMs() + timeout.count();
  while (true) {
    PRIVAGG_ASSIGN_OR_RETURN(Frame frame,
                             RecvFrame(dep_->config().leader, deadline));
    const auto* v = std::get_if<VerdictMsg>(&frame.msg);
    if (v != nullptr && v->nonce == submission.nonce) return v->accept;
  }
}

absl::StatusOr<std::vector<AccPublishMsg>> NetClient::RequestPublications(
    milliseconds timeout) {
  const uint32_t epoch = dep_->config().epoch;
  for (auto& ch : channels_) {
    PRIVAGG_ASSIGN_OR_RETURN(
        std::string bytes,
        dep_->codec().Encode(Frame{epoch, PublishRequestMsg{}}));
    PRIVAGG_RETURN_IF_ERROR(ch->Send(std::move(bytes)));
  }
  const int64_t deadline = SteadyNowMs() + timeout.count();
  std::vector<AccPublishMsg> out;
  for (size_t i = 0; i < channels_.size(); ++i) {
    while (true) {
      PRIVAGG_ASSIGN_OR_RETURN(Frame frame,
                               RecvFrame(static_cast<int>(i), deadline));
      if (auto* p = std::get_if<AccPublishMsg>(&frame.msg)) {
        out.push_back(*p);
        break;
      }
    }
  }
  return out;
}

absl::StatusOr<bool> SubmitWithRetry(
    std::shared_ptr<const Deployment> deployment, const Submission& submission,
    milliseconds deadline) {
  const int64_t end = SteadyNowMs() + deadline.count();
  const milliseconds attempt(2 * deployment->config().timeout_ms + 1000);
  absl::Status last = Error(ErrorKind::kTimeout, "no attempt made");
  while (SteadyNowMs() < end) {
    const milliseconds left(std::max<int64_t>(1, end - SteadyNowMs()));
    auto client = NetClient::Connect(deployment, std::min(left, attempt));
    if (client.ok()) {
      auto verdict = (*client)->Submit(submission, std::min(left, attempt));
      if (verdict.ok()) return verdict;
      last = verdict.status();
    } else {
      last = client.status();
    }
    const ErrorKind kind = GetErrorKind(last);
    if (kind != ErrorKind::kConnectionClosed && kind != ErrorKind::kTimeout) {
      return last;
    }
    std::this_thread::sleep_for(milliseconds(50));
  }
  return last;
}

}  // namespace privagg
