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

// privagg-server: one aggregation server of a deployment.

#include <csignal>
#include <filesystem>
#include <random>

#include "CLI11.hpp"
#include "privagg/net.h"
#include "privagg/protocol.h"
#include "tool_util.h"

namespace privagg::tools {
namespace {

std::atomic<NetServer*> g_server{nullptr};

void HandleSignal(int) {
  if (NetServer* s = g_server.load()) s->Stop();
}

int Main(int argc, char** argv) {
  CLI::App app{"privagg-server: serve one share of a private aggregation"};
  std::string config_path;
  std::string listen;
  std::string snapshot_path;
  int id = 0;
  int64_t crash_after = -1;
  app.add_option("--config", config_path, "Deployment config file")->required();
  app.add_option("--listen", listen,
                 "host:port to listen on (default: this server's address)");
  app.add_option("--snapshot", snapshot_path,
                 "Append-only state file; resumed from when present");
  app.add_option("--id", id, "Server index in the deployment")
      ->capture_default_str();
  app.add_option("--crash-after", crash_after,
                 "Exit abruptly after logging N verdicts")
      ->group("");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto log = InitLogging("server");
  auto config = DeploymentConfig::Load(config_path);
  if (!config.ok()) {
    log->error("{}", config.status().ToString());
    return kExitConfig;
  }
  auto dep = Deployment::Create(*config);
  if (!dep.ok()) {
    log->error("{}", dep.status().ToString());
    return kExitConfig;
  }
  if (id < 0 || id >= (*dep)->servers()) {
    log->error("--id {} outside [0, {})", id, (*dep)->servers());
    return kExitConfig;
  }

  std::optional<SnapshotState> restored;
  std::unique_ptr<FileSnapshot> sink;
  if (!snapshot_path.empty()) {
    std::error_code ec;
    if (std::filesystem::exists(snapshot_path, ec) &&
        std::filesystem::file_size(snapshot_path, ec) > 0) {
      auto bytes = ReadFile(snapshot_path, ErrorKind::kSnapshotCorrupt);
      if (!bytes.ok()) {
        log->error("{}", bytes.status().ToString());
        return kExitSnapshot;
      }
      auto state = ReadSnapshot(**dep, *bytes);
      if (!state.ok()) {
        log->error("{}", state.status().ToString());
        return kExitSnapshot;
      }
      restored = *std::move(state);
    }
    auto opened = FileSnapshot::Open(snapshot_path);
    if (!opened.ok()) {
      log->error("{}", opened.status().ToString());
      return kExitSnapshot;
    }
    sink = *std::move(opened);
  }

  std::random_device rd;
  const uint64_t seed = (uint64_t{rd()} << 32) ^ rd();
  auto node = std::make_unique<ServerNode>(*dep, id, seed, sink.get());
  if (restored.has_value()) {
    if (absl::Status s = node->Restore(*restored); !s.ok()) {
      log->error("{}", s.ToString());
      return kExitSnapshot;
    }
    log->info("resumed {} verdicts, {} accepted", restored->decided.size(),
              restored->accumulator.accepted_count);
  }
  if (crash_after >= 0) {
    node->set_crash_after(static_cast<uint64_t>(crash_after));
  }

  NetServerOptions options;
  options.listen = listen;
  options.log = [log](std::string_view line) { log->info("{}", line); };
  auto server = NetServer::Create(*dep, std::move(node), options);
  if (!server.ok()) {
    log->error("{}", server.status().ToString());
    return GetErrorKind(server.status()) == ErrorKind::kBindError ? kExitBind
                                                                  : kExitConfig;
  }
  log->info("server {} listening on port {}", id, (*server)->port());
  g_server = server->get();
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  absl::Status status = (*server)->Run();
  g_server = nullptr;
  if (!status.ok()) {
    log->error("{}", status.ToString());
    return kExitFailure;
  }
  if ((*server)->node().crashed()) {
    log->warn("crash hook fired after {} verdicts", crash_after);
    std::_Exit(kExitFailure);
  }
  return kExitOk;
}

}  // namespace
}  // namespace privagg::tools

int main(int argc, char** argv) { return privagg::tools::Main(argc, argv); }
