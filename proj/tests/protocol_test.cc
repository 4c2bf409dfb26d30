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

#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>

#include "absl/strings/str_cat.h"
#include "test_util.h"

namespace privagg {
namespace {

std::shared_ptr<const Deployment> MakeDeployment(
    std::string_view extra = "", std::string_view afe = "sum b=4",
    int servers = 3) {
  std::string text =
      absl::StrCat("servers=", servers, "\nafe=", std::string(afe),
                   "\ntimeout_ms=100\n", std::string(extra));
  auto cfg = DeploymentConfig::Parse(text);
  EXPECT_TRUE(cfg.ok()) << cfg.status();
  auto dep = Deployment::Create(*cfg);
  EXPECT_TRUE(dep.ok()) << dep.status();
  return *dep;
}

// Minimal message pump: servers exchange envelopes through one FIFO, and
// frames addressed to clients land in per-client inboxes.
class Net {
 public:
  using Filter = std::function<bool(int from, const Envelope&)>;

  explicit Net(std::shared_ptr<const Deployment> dep,
               std::vector<MemorySnapshot>* snaps = nullptr)
      : dep_(std::move(dep)) {
    for (int i = 0; i < dep_->servers(); ++i) {
      SnapshotSink* sink = snaps != nullptr ? &(*snaps)[i] : nullptr;
      nodes_.push_back(std::make_unique<ServerNode>(dep_, i, 100 + i, sink));
    }
  }

  ServerNode& node(int i) { return *nodes_[i]; }
  void Replace(int i, std::unique_ptr<ServerNode> n) {
    nodes_[i] = std::move(n);
  }
  void set_filter(Filter f) { filter_ = std::move(f); }
  int64_t now() const { return now_; }

  void Inject(int from, std::vector<Envelope> out) {
    for (Envelope& e : out) {
      if (filter_ && !filter_(from, e)) continue;
      pending_.push_back({from, std::move(e)});
    }
  }

  void SendUpload(uint64_t client, const Submission& sub) {
    for (int i = 0; i < dep_->servers(); ++i) {
      auto bytes =
          dep_->codec().Encode(Frame{dep_->config().epoch, sub.uploads[i]});
      Inject(i, node(i).OnFrame(Peer{Peer::kClient, client}, *bytes, now_));
    }
  }

  // Delivers until nothing is pending.
  void Run() {
    while (!pending_.empty()) {
      auto [from, env] = std::move(pending_.front());
      pending_.pop_front();
      if (env.to.kind == Peer::kClient) {
        inbox_[env.to.id].push_back(*dep_->codec().Decode(env.bytes));
        continue;
      }
      Peer src{Peer::kServer, static_cast<uint64_t>(from)};
      Inject(static_cast<int>(env.to.id),
             node(static_cast<int>(env.to.id)).OnFrame(src, env.bytes, now_));
    }
  }

  // Runs, then advances time in steps and ticks every node.
  void Settle(int64_t until_ms) {
    Run();
    while (now_ < until_ms) {
      now_ += 10;
      for (int i = 0; i < dep_->servers(); ++i) Inject(i, node(i).Tick(now_));
      Run();
    }
  }

  // Swaps the order of the next two pending envelopes.
  void SwapFront() {
    if (pending_.size() >= 2) std::swap(pending_[0], pending_[1]);
  }
  size_t pending() const { return pending_.size(); }
  void DeliverOne() {
    auto [from, env] = std::move(pending_.front());
    pending_.pop_front();
    if (env.to.kind == Peer::kClient) {
      inbox_[env.to.id].push_back(*dep_->codec().Decode(env.bytes));
      return;
    }
    Inject(static_cast<int>(env.to.id),
           node(static_cast<int>(env.to.id))
               .OnFrame(Peer{Peer::kServer, static_cast<uint64_t>(from)},
                        env.bytes, now_));
  }
  MessageType FrontType() const { return pending_.front().second.type; }

  std::vector<VerdictMsg> Verdicts(uint64_t client) {
    std::vector<VerdictMsg> out;
    for (const Frame& f : inbox_[client]) {
      if (auto* v = std::get_if<VerdictMsg>(&f.msg)) out.push_back(*v);
    }
    return out;
  }

  std::vector<AccPublishMsg> Collect() {
    std::vector<AccPublishMsg> pubs;
    const uint64_t client = 999;
    inbox_[client].clear();
    std::string req =
        *dep_->codec().Encode(Frame{dep_->config().epoch, PublishRequestMsg{}});
    for (int i = 0; i < dep_->servers(); ++i) {
      Inject(i, node(i).OnFrame(Peer{Peer::kClient, client}, req, now_));
    }
    Run();
    for (const Frame& f : inbox_[client]) {
      if (auto* p = std::get_if<AccPublishMsg>(&f.msg)) pubs.push_back(*p);
    }
    return pubs;
  }

 private:
  std::shared_ptr<const Deployment> dep_;
  std::vector<std::unique_ptr<ServerNode>> nodes_;
  std::deque<std::pair<int, Envelope>> pending_;
  std::map<uint64_t, std::vector<Frame>> inbox_;
  Filter filter_;
  int64_t now_ = 0;
};

mpz_class SumOf(const absl::StatusOr<AggregateResult>& r) {
  EXPECT_TRUE(r.ok()) << r.status();
  return std::get<SumResult>(*r).sum;
}

Submission Forged(const Deployment& dep, std::vector<FieldElement> x,
                  Csprng& rng) {
  ProveOptions opt;
  opt.require_valid = false;
  auto proved = Prove(dep.circuit(), x, dep.servers(), rng, opt);
  EXPECT_TRUE(proved.ok());
  return Package(RandomNonce(rng), *std::move(proved));
}

TEST(ConfigTest, ParsesAndFormatsCanonically) {
  auto cfg = DeploymentConfig::Parse(
      "# deployment\n"
      "modulus=101\n"
      "servers=3\n"
      "server.0=127.0.0.1:7100\n"
      "server.2 = 127.0.0.1:7102  # trailing comment\n"
      "leader=1\n"
      "afe=sum b=4\n"
      "min_batch=2\n"
      "epoch=9\n"
      "mac_key=00ff\n");
  ASSERT_OK(cfg);
  EXPECT_EQ(cfg->modulus, 101u);
  EXPECT_EQ(cfg->servers, 3);
  EXPECT_EQ(cfg->addresses,
            (std::vector<std::string>{"127.0.0.1:7100", "", "127.0.0.1:7102"}));
  EXPECT_EQ(cfg->leader, 1);
  EXPECT_EQ(cfg->afe.bits, 4u);
  EXPECT_EQ(cfg->epoch, 9u);
  EXPECT_EQ(cfg->mac_key, std::string("\x00\xff", 2));
  auto again = DeploymentConfig::Parse(cfg->Format());
  ASSERT_OK(again);
  EXPECT_EQ(again->Format(), cfg->Format());
  EXPECT_EQ(again->ConfigDigest(), cfg->ConfigDigest());
  cfg->epoch = 10;
  EXPECT_NE(again->ConfigDigest(), cfg->ConfigDigest());
}

TEST(ConfigTest, RejectsBadInput) {
  for (const char* text : {
           "afe=sum b=4\n",                           // servers missing
           "servers=3\n",                             // afe missing
           "servers=1\nafe=sum b=4\n",                // too few
           "servers=3\nafe=sum b=4\nleader=3\n",      // leader out of range
           "servers=3\nafe=sum b=4\nbogus=1\n",       // unknown key
           "servers=3\nservers=3\nafe=sum b=4\n",     // duplicate
           "servers=x\nafe=sum b=4\n",                // not a number
           "servers=3\nafe=nope\n",                   // bad afe
           "servers=3\nafe=sum b=4\nmac_key=zz\n",    // bad hex
           "servers=3\nafe=sum b=4\nserver.3=a:1\n",  // index beyond
           "servers=3\nafe=sum b=4\ntimeout_ms=0\n",
           "servers=3\nafe=sum b=4\nrotation_budget=0\n",
           "servers=3\nafe=sum b=4\ninflight=0\n",
           "servers=3\nafe=sum b=4\nverify=2\n",
           "servers=3\njunk line\n",
       }) {
    EXPECT_ERROR_KIND(DeploymentConfig::Parse(text).status(),
                      ErrorKind::kConfigError)
        << text;
  }
  EXPECT_ERROR_KIND(DeploymentConfig::Load("/nonexistent/x.conf").status(),
                    ErrorKind::kConfigError);
}

TEST(DeploymentTest, RejectsFieldTooSmallForCircuit) {
  auto cfg = DeploymentConfig::Parse("modulus=101\nservers=2\nafe=sum b=60\n");
  ASSERT_OK(cfg);
  EXPECT_ERROR_KIND(Deployment::Create(*cfg).status(), ErrorKind::kConfigError);
  cfg->modulus = 100;
  EXPECT_FALSE(Deployment::Create(*cfg).ok());
}

TEST(ProtocolTest, ThreeServersSumToSix) {
  auto dep = MakeDeployment();
  Net net(dep);
  Csprng rng(1);
  for (uint64_t v : {1, 2, 3}) {
    net.SendUpload(v, *ClientSubmit(*dep, v, rng));
  }
  net.Run();
  for (uint64_t v : {1, 2, 3}) {
    auto verdicts = net.Verdicts(v);
    ASSERT_EQ(verdicts.size(), 1u);
    EXPECT_TRUE(verdicts[0].accept);
  }
  auto pubs = net.Collect();
  ASSERT_EQ(pubs.size(), 3u);
  EXPECT_EQ(SumOf(Publish(*dep, pubs)), 6);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(net.node(i).stats().accepted, 3u);
    EXPECT_EQ(net.node(i).in_flight(), 0u);
  }
}

TEST(ProtocolTest, RejectsForgedSubmissionWithoutTouchingAggregate) {
  auto dep = MakeDeployment();
  Net net(dep);
  Csprng rng(2);
  net.SendUpload(1, *ClientSubmit(*dep, uint64_t{5}, rng));
  std::vector<FieldElement> x(dep->afe().encoding_length(), FieldElement{2});
  net.SendUpload(2, Forged(*dep, x, rng));
  net.Run();
  ASSERT_EQ(net.Verdicts(2).size(), 1u);
  EXPECT_FALSE(net.Verdicts(2)[0].accept);
  auto pubs = net.Collect();
  EXPECT_EQ(pubs[0].accepted_count, 1u);
  EXPECT_EQ(SumOf(Publish(*dep, pubs)), 5);
}

TEST(ProtocolTest, MixedBatchMatchesPlaintextOracle) {
  auto dep = MakeDeployment("", "sum b=6");
  Net net(dep);
  Csprng rng(3);
  uint64_t expected = 0;
  uint64_t client = 0;
  for (int i = 0; i < 40; ++i) {
    const uint64_t v = rng.Uniform(64);
    if (rng.NextBit()) {
      net.SendUpload(client++, *ClientSubmit(*dep, v, rng));
      expected += v;
    } else {
      auto x = *dep->afe().Encode(v, rng);
      const size_t j = rng.Uniform(x.size());
      x[j] = dep->field().Add(x[j], dep->field().One());
      net.SendUpload(client++, Forged(*dep, x, rng));
    }
  }
  net.Run();
  EXPECT_EQ(SumOf(Publish(*dep, net.Collect())), expected);
}

TEST(ProtocolTest, BatchTooSmall) {
  auto dep = MakeDeployment("min_batch=4\n");
  Net net(dep);
  Csprng rng(4);
  for (uint64_t v : {1, 2, 3}) net.SendUpload(v, *ClientSubmit(*dep, v, rng));
  net.Run();
  EXPECT_ERROR_KIND(Publish(*dep, net.Collect()).status(),
                    ErrorKind::kBatchTooSmall);
}

TEST(ProtocolTest, PublishChecksShareCountAndAgreement) {
  auto dep = MakeDeployment();
  Net net(dep);
  Csprng rng(5);
  net.SendUpload(1, *ClientSubmit(*dep, uint64_t{1}, rng));
  net.Run();
  auto pubs = net.Collect();
  EXPECT_ERROR_KIND(Publish(*dep, std::span(pubs).first(2)).status(),
                    ErrorKind::kMissingShare);
  auto bad = pubs;
  bad[1].accepted_count = 2;
  EXPECT_ERROR_KIND(Publish(*dep, bad).status(), ErrorKind::kCountMismatch);
  bad = pubs;
  bad[2].digest[0] ^= 1;
  EXPECT_ERROR_KIND(Publish(*dep, bad).status(), ErrorKind::kCountMismatch);
  bad = pubs;
  bad[0].accumulator.pop_back();
  EXPECT_ERROR_KIND(Publish(*dep, bad).status(), ErrorKind::kMalformedShare);
}

TEST(ProtocolTest, DuplicateNonceAnsweredWithRecordedVerdict) {
  auto dep = MakeDeployment();
  Net net(dep);
  Csprng rng(6);
  Submission sub = *ClientSubmit(*dep, uint64_t{7}, rng);
  net.SendUpload(1, sub);
  net.Run();
  net.SendUpload(1, sub);
  net.Run();
  auto verdicts = net.Verdicts(1);
  ASSERT_EQ(verdicts.size(), 2u);
  EXPECT_TRUE(verdicts[0].accept);
  EXPECT_EQ(verdicts[0], verdicts[1]);
  EXPECT_EQ(net.node(0).stats().duplicates, 1u);
  EXPECT_EQ(SumOf(Publish(*dep, net.Collect())), 7);
}

TEST(ProtocolTest, DroppedBroadcastTimesOutAndRejects) {
  auto dep = MakeDeployment();
  Net net(dep);
  Csprng rng(7);
  net.SendUpload(1, *ClientSubmit(*dep, uint64_t{3}, rng));
  net.Run();
  std::vector<Accumulator> before;
  for (int i = 0; i < 3; ++i) before.push_back(net.node(i).accumulator());

  net.set_filter([](int from, const Envelope& e) {
    return !(from == 0 && e.type == MessageType::kDeBroadcast && e.to.id == 2);
  });
  net.SendUpload(2, *ClientSubmit(*dep, uint64_t{4}, rng));
  net.Run();
  EXPECT_TRUE(net.Verdicts(2).empty());
  EXPECT_EQ(net.node(0).in_flight(), 1u);
  net.Settle(100);
  ASSERT_EQ(net.Verdicts(2).size(), 1u);
  EXPECT_FALSE(net.Verdicts(2)[0].accept);
  EXPECT_EQ(net.node(0).stats().timeouts, 1u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(net.node(i).accumulator(), before[i]);
    EXPECT_EQ(net.node(i).in_flight(), 0u);
  }
  EXPECT_EQ(SumOf(Publish(*dep, net.Collect())), 3);
}

TEST(ProtocolTest, SilentFollowerSessionExpires) {
  auto dep = MakeDeployment();
  Net net(dep);
  Csprng rng(8);
  // The leader never hears of this submission.
  Submission sub = *ClientSubmit(*dep, uint64_t{3}, rng);
  net.set_filter([](int, const Envelope&) { return true; });
  for (int i = 1; i < 3; ++i) {
    auto bytes = dep->codec().Encode(Frame{1, sub.uploads[i]});
    net.node(i).OnFrame(Peer{Peer::kClient, 1}, *bytes, 0);
  }
  net.Settle(300);
  EXPECT_TRUE(net.node(1).decided().empty());
  EXPECT_EQ(net.node(1).stats().timeouts, 1u);
}

TEST(ProtocolTest, ReorderedRoundTwoStillDecides) {
  auto dep = MakeDeployment();
  Net net(dep);
  Csprng rng(9);
  net.SendUpload(1, *ClientSubmit(*dep, uint64_t{9}, rng));
  bool swapped = false;
  while (net.pending() > 0) {
    if (!swapped && net.pending() >= 2 &&
        net.FrontType() == MessageType::kRound2) {
      net.SwapFront();
      swapped = true;
    }
    net.DeliverOne();
  }
  EXPECT_TRUE(swapped);
  ASSERT_EQ(net.Verdicts(1).size(), 1u);
  EXPECT_TRUE(net.Verdicts(1)[0].accept);
}

TEST(ProtocolTest, InflightLimitQueuesSessions) {
  auto dep = MakeDeployment("inflight=1\n");
  Net net(dep);
  Csprng rng(10);
  for (uint64_t v = 1; v <= 5; ++v) {
    net.SendUpload(v, *ClientSubmit(*dep, v, rng));
  }
  net.Run();
  EXPECT_EQ(SumOf(Publish(*dep, net.Collect())), 15);
}

TEST(ProtocolTest, TamperedSigmaRejectsEverything) {
  auto dep = MakeDeployment();
  Net net(dep);
  net.node(2).set_sigma_tamper(FieldElement{1});
  Csprng rng(11);
  for (uint64_t v = 1; v <= 5; ++v) {
    net.SendUpload(v, *ClientSubmit(*dep, v, rng));
  }
  net.Run();
  for (uint64_t v = 1; v <= 5; ++v) {
    ASSERT_EQ(net.Verdicts(v).size(), 1u);
    EXPECT_FALSE(net.Verdicts(v)[0].accept);
  }
}

TEST(ProtocolTest, DisabledVerificationAcceptsForgeries) {
  auto dep = MakeDeployment("verify=0\n");
  Net net(dep);
  Csprng rng(12);
  std::vector<FieldElement> x(dep->afe().encoding_length(), FieldElement{3});
  net.SendUpload(1, Forged(*dep, x, rng));
  net.Run();
  ASSERT_EQ(net.Verdicts(1).size(), 1u);
  EXPECT_TRUE(net.Verdicts(1)[0].accept);
}

TEST(ProtocolTest, PublishWaitsForInFlightSessions) {
  auto dep = MakeDeployment();
  Net net(dep);
  Csprng rng(13);
  net.set_filter([](int from, const Envelope& e) {
    return !(from == 0 && e.type == MessageType::kDeBroadcast);
  });
  net.SendUpload(1, *ClientSubmit(*dep, uint64_t{2}, rng));
  net.SendUpload(2, *ClientSubmit(*dep, uint64_t{3}, rng));
  net.Run();
  net.set_filter(nullptr);
  auto early = net.Collect();
  EXPECT_TRUE(early.empty());
  net.Settle(100);
  // Deferred answers were sent once the sessions drained.
  auto pubs = net.Collect();
  ASSERT_EQ(pubs.size(), 3u);
  EXPECT_EQ(pubs[0].accepted_count, 0u);
}

TEST(ProtocolTest, ServerMessagesHaveConstantSize) {
  std::map<MessageType, std::set<size_t>> sizes;
  for (const char* afe : {"sum b=4", "freq B=256", "sum b=32"}) {
    auto dep = MakeDeployment("", afe);
    Net net(dep);
    net.set_filter([&](int from, const Envelope& e) {
      if (from >= 0 && e.to.kind == Peer::kServer) {
        sizes[e.type].insert(e.bytes.size());
      }
      return true;
    });
    Csprng rng(14);
    net.SendUpload(1, *ClientSubmit(*dep, uint64_t{3}, rng));
    net.Run();
  }
  EXPECT_EQ(sizes.size(), 5u);
  for (const auto& [type, s] : sizes) {
    EXPECT_EQ(s.size(), 1u) << MessageTypeName(type);
  }
}

TEST(ProtocolTest, LeaderCrashRecoversFromSnapshot) {
  auto dep = MakeDeployment();
  std::vector<MemorySnapshot> snaps(3);
  Net net(dep, &snaps);
  net.node(0).set_crash_after(2);
  Csprng rng(15);
  std::vector<Submission> subs;
  for (uint64_t v = 1; v <= 3; ++v) {
    subs.push_back(*ClientSubmit(*dep, v, rng));
    net.SendUpload(v, subs.back());
    net.Run();
  }
  EXPECT_TRUE(net.node(0).crashed());
  EXPECT_EQ(net.Verdicts(1).size(), 1u);
  EXPECT_TRUE(net.Verdicts(2).empty());  // logged but never sent
  EXPECT_TRUE(net.Verdicts(3).empty());

  auto state = ReadSnapshot(*dep, snaps[0].data());
  ASSERT_OK(state);
  EXPECT_EQ(state->decided.size(), 2u);
  auto restarted = std::make_unique<ServerNode>(dep, 0, 777, &snaps[0]);
  ASSERT_OK(restarted->Restore(*state));
  net.Replace(0, std::move(restarted));
  net.Inject(0, net.node(0).ReplayVerdicts());
  net.Run();
  for (uint64_t v = 2; v <= 3; ++v) {
    net.SendUpload(v, subs[v - 1]);
    net.Run();
  }
  for (uint64_t v = 1; v <= 3; ++v) {
    ASSERT_EQ(net.Verdicts(v).size(), 1u) << v;
    EXPECT_TRUE(net.Verdicts(v)[0].accept);
  }
  auto pubs = net.Collect();
  EXPECT_EQ(SumOf(Publish(*dep, pubs)), 6);
  auto reread = ReadSnapshot(*dep, snaps[0].data());
  ASSERT_OK(reread);
  EXPECT_EQ(reread->accumulator, net.node(0).accumulator());
}

TEST(SnapshotTest, RejectsCorruption) {
  auto dep = MakeDeployment();
  std::vector<MemorySnapshot> snaps(3);
  Net net(dep, &snaps);
  Csprng rng(16);
  net.SendUpload(1, *ClientSubmit(*dep, uint64_t{4}, rng));
  net.Run();
  const std::string good = snaps[1].data();
  ASSERT_OK(ReadSnapshot(*dep, good));
  EXPECT_EQ(ReadSnapshot(*dep, good)->accumulator, net.node(1).accumulator());

  auto expect_corrupt = [&](const std::string& bytes) {
    EXPECT_ERROR_KIND(ReadSnapshot(*dep, bytes).status(),
                      ErrorKind::kSnapshotCorrupt);
  };
  expect_corrupt("PRIV2" + good.substr(5));
  expect_corrupt(good.substr(0, good.size() - 1));
  // Accept without its accumulator record.
  std::string verdict_only =
      good.substr(0, kSnapshotMagic.size() + kFrameHeaderSize + 17);
  expect_corrupt(verdict_only);
  std::string flipped = good;
  flipped[kSnapshotMagic.size() + 4] = 0x7f;  // type byte
  expect_corrupt(flipped);
  std::string epoch = good;
  epoch[kSnapshotMagic.size() + 8] ^= 1;
  expect_corrupt(epoch);
  expect_corrupt(good + good.substr(kSnapshotMagic.size()));
  auto empty = ReadSnapshot(*dep, std::string(kSnapshotMagic));
  ASSERT_OK(empty);
  EXPECT_EQ(empty->accumulator, EmptyAccumulator(*dep));
}

TEST(SnapshotTest, FileSnapshotAppendsAcrossReopen) {
  auto dep = MakeDeployment();
  std::string path = ::testing::TempDir() + "/privagg_snapshot_test.bin";
  std::remove(path.c_str());
  {
    auto snap = FileSnapshot::Open(path);
    ASSERT_OK(snap);
    ServerNode node(dep, 1, 1, snap->get());
    Csprng rng(17);
    Submission sub = *ClientSubmit(*dep, uint64_t{6}, rng);
    auto bytes = dep->codec().Encode(Frame{1, sub.uploads[1]});
    node.OnFrame(Peer{Peer::kClient, 0}, *bytes, 0);
    auto verdict = dep->codec().Encode(Frame{1, VerdictMsg{sub.nonce, false}});
    node.OnFrame(Peer{Peer::kServer, 0}, *verdict, 0);
  }
  {
    auto snap = FileSnapshot::Open(path);
    ASSERT_OK(snap);
  }
  std::ifstream in(path, std::ios::binary);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  auto state = ReadSnapshot(*dep, data);
  ASSERT_OK(state);
  EXPECT_EQ(state->decided.size(), 1u);
  EXPECT_TRUE(state->accepted.empty());
  std::remove(path.c_str());
}

TEST(AccumulatorTest, RejectsWrongLengthShare) {
  auto dep = MakeDeployment();
  Accumulator acc = EmptyAccumulator(*dep);
  ShareVector share(0, std::vector<FieldElement>(2, FieldElement{1}));
  EXPECT_ERROR_KIND(ServerAggregate(*dep, share, &acc),
                    ErrorKind::kMalformedShare);
  EXPECT_EQ(acc, EmptyAccumulator(*dep));
}

}  // namespace
}  // namespace privagg
