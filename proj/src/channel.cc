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

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "privagg/status.h"
#include "privagg/transport.h"
#include "privagg/wire.h"

namespace privagg {

struct InProcessChannel::Queue {
  struct Item {
    std::string bytes;
    int64_t release_ms = 0;
  };
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Item> items;
  std::optional<std::string> held;
  bool closed = false;
};

std::pair<std::unique_ptr<InProcessChannel>, std::unique_ptr<InProcessChannel>>
InProcessChannel::Pair(Clock clock) {
  auto a = std::make_shared<Queue>();
  auto b = std::make_shared<Queue>();
  return {std::unique_ptr<InProcessChannel>(new InProcessChannel(a, b, clock)),
          std::unique_ptr<InProcessChannel>(new InProcessChannel(b, a, clock))};
}

InProcessChannel::InProcessChannel(std::shared_ptr<Queue> inbox,
                                   std::shared_ptr<Queue> outbox, Clock clock)
    : inbox_(std::move(inbox)),
      outbox_(std::move(outbox)),
      clock_(std::move(clock)) {}

InProcessChannel::~InProcessChannel() { Close(); }

void InProcessChannel::AddFault(const FaultRule& rule) {
  faults_.push_back(rule);
}

absl::Status InProcessChannel::Send(std::string frame) {
  std::lock_guard<std::mutex> lock(outbox_->mu);
  if (outbox_->closed) {
    return Error(ErrorKind::kConnectionClosed, "in-process peer closed");
  }
  const uint8_t type = frame.size() > 4 ? static_cast<uint8_t>(frame[4]) : 0;
  const uint64_t seen = type_counts_[type]++;
  ++stats_.frames_sent;
  stats_.bytes_sent += frame.size();

  const FaultRule* rule = nullptr;
  for (const FaultRule& r : faults_) {
    if (static_cast<uint8_t>(r.type) == type &&
        (!r.occurrence.has_value() || *r.occurrence == seen)) {
      rule = &r;
      break;
    }
  }
  const int64_t now = clock_();
  if (rule != nullptr && rule->action == FaultAction::kDrop) {
    ++stats_.frames_dropped;
    return absl::OkStatus();
  }
  if (rule != nullptr && rule->action == FaultAction::kReorder) {
    if (outbox_->held.has_value()) {
      outbox_->items.push_back({std::move(*outbox_->held), now});
    }
    outbox_->held = std::move(frame);
    outbox_->cv.notify_all();
    return absl::OkStatus();
  }
  int64_t release = now;
  if (rule != nullptr && rule->action == FaultAction::kDelay) {
    release = now + rule->delay_ms;
  }
  outbox_->items.push_back({std::move(frame), release});
  if (outbox_->held.has_value()) {
    outbox_->items.push_back({std::move(*outbox_->held), now});
    outbox_->held.reset();
  }
  outbox_->cv.notify_all();
  return absl::OkStatus();
}

absl::StatusOr<std::string> InProcessChannel::Recv(
    std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::unique_lock<std::mutex> lock(inbox_->mu);
  while (true) {
    const int64_t now = clock_();
    for (auto it = inbox_->items.begin(); it != inbox_->items.end(); ++it) {
      if (it->release_ms <= now) {
        std::string out = std::move(it->bytes);
        inbox_->items.erase(it);
        return out;
      }
    }
    // A held frame with nothing behind it to swap with goes out as is.
    if (inbox_->items.empty() && inbox_->held.has_value()) {
      std::string out = std::move(*inbox_->held);
      inbox_->held.reset();
      return out;
    }
    if (inbox_->closed && inbox_->items.empty()) {
      return Error(ErrorKind::kConnectionClosed, "in-process channel closed");
    }
    const auto real_now = std::chrono::steady_clock::now();
    if (real_now >= deadline) {
      return Error(ErrorKind::kTimeout,
                   absl::StrCat("no frame within ", timeout.count(), " ms"));
    }
    auto wait = deadline - real_now;
    if (!inbox_->items.empty()) {
      wait = std::min<std::chrono::steady_clock::duration>(
          wait, std::chrono::milliseconds(1));
    }
    inbox_->cv.wait_for(lock, wait);
  }
}

void InProcessChannel::Close() {
  for (const auto& q : {inbox_, outbox_}) {
    std::lock_guard<std::mutex> lock(q->mu);
    q->closed = true;
    q->cv.notify_all();
  }
}

bool InProcessChannel::Ready() {
  std::lock_guard<std::mutex> lock(inbox_->mu);
  const int64_t now = clock_();
  for (const auto& item : inbox_->items) {
    if (item.release_ms <= now) return true;
  }
  return inbox_->items.empty() && inbox_->held.has_value();
}

std::optional<int64_t> InProcessChannel::NextRelease() {
  std::lock_guard<std::mutex> lock(inbox_->mu);
  std::optional<int64_t> out;
  for (const auto& item : inbox_->items) {
    if (!out.has_value() || item.release_ms < *out) out = item.release_ms;
  }
  return out;
}

namespace {

absl::StatusOr<std::pair<std::string, uint16_t>> SplitAddress(
    std::string_view address) {
  size_t colon = address.rfind(':');
  uint32_t port = 0;
  if (colon == std::string_view::npos ||
      !absl::SimpleAtoi(std::string(address.substr(colon + 1)), &port) ||
      port > 65535) {
    return Error(
        ErrorKind::kConfigError,
        absl::StrCat("address '", std::string(address), "' is not host:port"));
  }
  std::string host(address.substr(0, colon));
  if (host.empty()) host = "0.0.0.0";
  return std::make_pair(host, static_cast<uint16_t>(port));
}

absl::StatusOr<sockaddr_in> Resolve(const std::string& host, uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  int rc = getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || res == nullptr) {
    return Error(ErrorKind::kConfigError,
                 absl::StrCat("cannot resolve ", host, ": ", gai_strerror(rc)));
  }
  sockaddr_in addr;
  std::memcpy(&addr, res->ai_addr, sizeof(addr));
  freeaddrinfo(res);
  addr.sin_port = htons(port);
  return addr;
}

int64_t RemainingMs(int64_t deadline) {
  return std::max<int64_t>(0, deadline - SteadyNowMs());
}

}  // namespace

TcpChannel::TcpChannel(int fd, size_t trailer) : fd_(fd), trailer_(trailer) {
  int one = 1;
  setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpChannel::~TcpChannel() {
  Close();
  ::close(fd_);
}

absl::Status TcpChannel::Send(std::string frame) {
  std::lock_guard<std::mutex> lock(send_mu_);
  size_t sent = 0;
  while (sent < frame.size()) {
    ssize_t n =
        ::send(fd_, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      return Error(ErrorKind::kConnectionClosed,
                   absl::StrCat("send failed: ", std::strerror(errno)));
    }
    sent += static_cast<size_t>(n);
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> TcpChannel::Recv(
    std::chrono::milliseconds timeout) {
  const int64_t deadline = SteadyNowMs() + timeout.count();
  while (true) {
    if (partial_.size() >= kFrameHeaderSize) {
      PRIVAGG_ASSIGN_OR_RETURN(FrameHeader h, PeekHeader(partial_));
      const size_t total = kFrameHeaderSize + h.length + trailer_;
      if (partial_.size() >= total) {
        std::string out = partial_.substr(0, total);
        partial_.erase(0, total);
        return out;
      }
    }
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(RemainingMs(deadline)));
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) {
      return Error(ErrorKind::kTimeout,
                   absl::StrCat("no frame within ", timeout.count(), " ms"));
    }
    char buf[65536];
    ssize_t n = ::recv(fd_, buf, sizeof(buf), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      return Error(ErrorKind::kConnectionClosed, "peer closed the connection");
    }
    partial_.append(buf, static_cast<size_t>(n));
  }
}

void TcpChannel::Close() { ::shutdown(fd_, SHUT_RDWR); }

absl::StatusOr<std::unique_ptr<TcpListener>> TcpListener::Bind(
    std::string_view address) {
  auto split = SplitAddress(address);
  if (!split.ok()) return split.status();
  auto addr = Resolve(split->first, split->second);
  if (!addr.ok()) return addr.status();
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) {
    return Error(ErrorKind::kBindError,
                 absl::StrCat("socket: ", std::strerror(errno)));
  }
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, reinterpret_cast<const sockaddr*>(&*addr), sizeof(*addr)) <
          0 ||
      ::listen(fd, 64) < 0) {
    int err = errno;
    ::close(fd);
    return Error(ErrorKind::kBindError,
                 absl::StrCat("cannot listen on ", std::string(address), ": ",
                              std::strerror(err)));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  return std::unique_ptr<TcpListener>(
      new TcpListener(fd, ntohs(bound.sin_port)));
}

TcpListener::~TcpListener() { Close(); }

void TcpListener::Close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

absl::StatusOr<std::unique_ptr<TcpChannel>> TcpListener::Accept(
    std::chrono::milliseconds timeout, size_t trailer) {
  if (fd_ < 0) return Error(ErrorKind::kConnectionClosed, "listener closed");
  pollfd pfd{fd_, POLLIN, 0};
  int rc;
  do {
    rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  } while (rc < 0 && errno == EINTR);
  if (rc == 0) return Error(ErrorKind::kTimeout, "no incoming connection");
  int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
  if (fd < 0) {
    return Error(ErrorKind::kConnectionClosed,
                 absl::StrCat("accept: ", std::strerror(errno)));
  }
  return std::make_unique<TcpChannel>(fd, trailer);
}

absl::StatusOr<std::unique_ptr<TcpChannel>> TcpConnect(
    std::string_view address, std::chrono::milliseconds timeout,
    size_t trailer) {
  auto split = SplitAddress(address);
  if (!split.ok()) return split.status();
  auto addr = Resolve(split->first, split->second);
  if (!addr.ok()) return addr.status();
  const int64_t deadline = SteadyNowMs() + timeout.count();
  while (true) {
    int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd < 0) {
      return Error(ErrorKind::kConnectionClosed,
                   absl::StrCat("socket: ", std::strerror(errno)));
    }
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&*addr),
                  sizeof(*addr)) == 0) {
      return std::make_unique<TcpChannel>(fd, trailer);
    }
    int err = errno;
    ::close(fd);
    if (SteadyNowMs() >= deadline) {
      return Error(ErrorKind::kTimeout,
                   absl::StrCat("cannot connect to ", std::string(address),
                                ": ", std::strerror(err)));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

}  // namespace privagg
