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

// privagg-sim: deterministic in-process run of a whole deployment.

#include <cstdio>
#include <fstream>

#include "CLI11.hpp"
#include "privagg/harness.h"
#include "tool_util.h"

namespace privagg::tools {
namespace {

int Main(int argc, char** argv) {
  CLI::App app{"privagg-sim: simulate clients, servers and adversaries"};
  std::string config_path;
  std::string inputs_path;
  std::string adversaries_path;
  std::string transcript_path;
  uint64_t seed = 0;
  app.add_option("--config", config_path, "Deployment config file")->required();
  app.add_option("--inputs", inputs_path, "One domain literal per line")
      ->required();
  app.add_option("--adversaries", adversaries_path,
                 "One adversary spec per line");
  app.add_option("--seed", seed, "Simulation seed")->required();
  app.add_option("--transcript", transcript_path,
                 "Write the message transcript to this file");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto log = InitLogging("sim");
  auto config = DeploymentConfig::Load(config_path);
  if (!config.ok()) {
    log->error("{}", config.status().ToString());
    return kExitConfig;
  }
  auto text = ReadFile(inputs_path, ErrorKind::kParseError);
  if (!text.ok()) {
    log->error("{}", text.status().ToString());
    return kExitConfig;
  }
  auto inputs = ParseInputs(config->afe, *text);
  if (!inputs.ok()) {
    log->error("{}", inputs.status().ToString());
    return kExitConfig;
  }
  std::vector<AdversarySpec> adversaries;
  if (!adversaries_path.empty()) {
    auto adv_text = ReadFile(adversaries_path, ErrorKind::kParseError);
    if (!adv_text.ok()) {
      log->error("{}", adv_text.status().ToString());
      return kExitConfig;
    }
    auto parsed = ParseAdversaries(*adv_text);
    if (!parsed.ok()) {
      log->error("{}", parsed.status().ToString());
      return kExitConfig;
    }
    adversaries = *std::move(parsed);
  }

  log->info("simulating {} submissions with {} adversaries", inputs->size(),
            adversaries.size());
  RunReport report = RunSimulation(*config, *inputs, adversaries, seed);
  if (!report.error.empty()) log->warn("{}", report.error);
  std::fputs(report.Summary().c_str(), stdout);
  if (!transcript_path.empty()) {
    std::ofstream out(transcript_path, std::ios::binary);
    out << report.Transcript();
    if (!out) {
      log->error("cannot write {}", transcript_path);
      return kExitFailure;
    }
  }
  return kExitOk;
}

}  // namespace
}  // namespace privagg::tools

int main(int argc, char** argv) { return privagg::tools::Main(argc, argv); }
