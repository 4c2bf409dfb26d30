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

// privagg-client: encodes, proves and uploads values to a deployment.

#include <cstdio>

#include "CLI11.hpp"
#include "privagg/harness.h"
#include "privagg/net.h"
#include "privagg/wire.h"
#include "tool_util.h"

namespace privagg::tools {
namespace {

std::string Hex(const Nonce& nonce) {
  return HexEncode(std::string_view(reinterpret_cast<const char*>(nonce.data()),
                                    nonce.size()));
}

int Main(int argc, char** argv) {
  CLI::App app{"privagg-client: submit values to a private aggregation"};
  std::string config_path;
  std::string value_text;
  uint64_t count = 1;
  std::string forge;
  bool publish = false;
  int64_t timeout_ms = 10000;
  app.add_option("--config", config_path, "Deployment config file")->required();
  app.add_option("--value", value_text, "Domain literal to submit")->required();
  app.add_option("--count", count, "Number of submissions")
      ->capture_default_str();
  app.add_option("--forge", forge,
                 "Client forgery, e.g. 'bad-triple' or "
                 "'malformed coord=0 delta=100'");
  app.add_flag("--publish", publish,
               "Afterwards collect every server's publication and print the "
               "aggregate");
  app.add_option("--timeout-ms", timeout_ms, "Deadline per submission")
      ->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto log = InitLogging("client");
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
  auto value = ParseAfeValue(config->afe, value_text);
  if (!value.ok()) {
    log->error("{}", value.status().ToString());
    return kExitConfig;
  }
  std::optional<AdversarySpec> spec;
  if (!forge.empty()) {
    auto parsed = ParseAdversary("client 0 " + forge);
    if (!parsed.ok()) {
      log->error("{}", parsed.status().ToString());
      return kExitConfig;
    }
    spec = *parsed;
  }

  Csprng rng = Csprng::FromEntropy();
  uint64_t accepted = 0;
  for (uint64_t i = 0; i < count; ++i) {
    auto sub = spec.has_value() ? ForgeSubmission(**dep, *value, *spec, rng)
                                : ClientSubmit(**dep, *value, rng);
    if (!sub.ok()) {
      log->error("{}", sub.status().ToString());
      return kExitConfig;
    }
    auto verdict =
        SubmitWithRetry(*dep, *sub, std::chrono::milliseconds(timeout_ms));
    if (!verdict.ok()) {
      log->error("submission {}: {}", i, verdict.status().ToString());
      return kExitFailure;
    }
    accepted += *verdict ? 1 : 0;
    std::printf("submission=%llu nonce=%s verdict=%s\n",
                static_cast<unsigned long long>(i), Hex(sub->nonce).c_str(),
                *verdict ? "accept" : "reject");
  }
  std::printf("accepted=%llu rejected=%llu\n",
              static_cast<unsigned long long>(accepted),
              static_cast<unsigned long long>(count - accepted));

  if (publish) {
    auto client =
        NetClient::Connect(*dep, std::chrono::milliseconds(timeout_ms));
    if (!client.ok()) {
      log->error("{}", client.status().ToString());
      return kExitFailure;
    }
    auto pubs =
        (*client)->RequestPublications(std::chrono::milliseconds(timeout_ms));
    if (!pubs.ok()) {
      log->error("{}", pubs.status().ToString());
      return kExitFailure;
    }
    auto result = Publish(**dep, *pubs);
    if (!result.ok()) {
      std::printf("aggregate=none error=%s\n",
                  std::string(result.status().message()).c_str());
    } else {
      std::printf("aggregate=%s count=%llu\n", FormatResult(*result).c_str(),
                  static_cast<unsigned long long>((*pubs)[0].accepted_count));
    }
  }
  std::fflush(stdout);
  return count > 0 && accepted == 0 ? kExitAllRejected : kExitOk;
}

}  // namespace
}  // namespace privagg::tools

int main(int argc, char** argv) { return privagg::tools::Main(argc, argv); }
