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

#include <fstream>
#include <map>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/escaping.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "privagg/protocol.h"
#include "privagg/status.h"

namespace privagg {
namespace {

absl::Status Bad(std::string_view key, std::string_view detail) {
  return Error(ErrorKind::kConfigError,
               absl::StrCat("config key '", std::string(key),
                            "': ", std::string(detail)));
}

template <typename T>
absl::Status ParseNumber(std::string_view key, const std::string& value,
                         T* out) {
  if (!absl::SimpleAtoi(value, out)) return Bad(key, "expected an integer");
  return absl::OkStatus();
}

bool IsHex(std::string_view s) {
  if (s.size() % 2 != 0) return false;
  for (char c : s) {
    if (!absl::ascii_isxdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

absl::StatusOr<DeploymentConfig> DeploymentConfig::Parse(
    std::string_view text) {
  DeploymentConfig cfg;
  std::map<std::string, std::string> kv;
  int line_no = 0;
  const std::string all(text);
  for (absl::string_view raw : absl::StrSplit(all, '\n')) {
    ++line_no;
    std::string line(raw);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    absl::string_view trimmed = absl::StripAsciiWhitespace(line);
    if (trimmed.empty()) continue;
    size_t eq = trimmed.find('=');
    if (eq == absl::string_view::npos) {
      return Error(ErrorKind::kConfigError,
                   absl::StrCat("line ", line_no, ": expected key=value"));
    }
    std::string key(absl::StripAsciiWhitespace(trimmed.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(trimmed.substr(eq + 1)));
    if (!kv.emplace(key, value).second) return Bad(key, "given twice");
  }

  std::map<int, std::string> addresses;
  bool have_afe = false;
  bool have_servers = false;
  for (const auto& [key, value] : kv) {
    if (key == "modulus") {
      PRIVAGG_RETURN_IF_ERROR(ParseNumber(key, value, &cfg.modulus));
    } else if (key == "servers") {
      PRIVAGG_RETURN_IF_ERROR(ParseNumber(key, value, &cfg.servers));
      have_servers = true;
    } else if (absl::StartsWith(key, "server.")) {
      int idx = 0;
      if (!absl::SimpleAtoi(key.substr(7), &idx) || idx < 0) {
        return Bad(key, "bad server index");
      }
      addresses[idx] = value;
    } else if (key == "leader") {
      PRIVAGG_RETURN_IF_ERROR(ParseNumber(key, value, &cfg.leader));
    } else if (key == "afe") {
      auto kind = ParseAfeKind(value);
      if (!kind.ok()) return Bad(key, std::string(kind.status().message()));
      cfg.afe = *kind;
      have_afe = true;
    } else if (key == "rotation_budget") {
      PRIVAGG_RETURN_IF_ERROR(ParseNumber(key, value, &cfg.rotation_budget));
    } else if (key == "min_batch") {
      PRIVAGG_RETURN_IF_ERROR(ParseNumber(key, value, &cfg.min_batch));
    } else if (key == "epoch") {
      PRIVAGG_RETURN_IF_ERROR(ParseNumber(key, value, &cfg.epoch));
    } else if (key == "timeout_ms") {
      PRIVAGG_RETURN_IF_ERROR(ParseNumber(key, value, &cfg.timeout_ms));
    } else if (key == "mac_key") {
      if (!IsHex(value)) return Bad(key, "expected an even-length hex string");
      cfg.mac_key = absl::HexStringToBytes(value);
    } else if (key == "verify") {
      if (value != "0" && value != "1") return Bad(key, "expected 0 or 1");
      cfg.verify = value == "1";
    } else if (key == "inflight") {
      PRIVAGG_RETURN_IF_ERROR(ParseNumber(key, value, &cfg.inflight));
    } else {
      return Bad(key, "unknown key");
    }
  }
  if (!have_servers) return Bad("servers", "missing");
  if (!have_afe) return Bad("afe", "missing");
  if (cfg.servers < 2) return Bad("servers", "at least 2 servers required");
  if (cfg.leader < 0 || cfg.leader >= cfg.servers) {
    return Bad("leader", "not a server index");
  }
  if (cfg.rotation_budget == 0) return Bad("rotation_budget", "must be >= 1");
  if (cfg.timeout_ms <= 0) return Bad("timeout_ms", "must be positive");
  if (cfg.inflight == 0) return Bad("inflight", "must be >= 1");
  cfg.addresses.assign(cfg.servers, "");
  for (const auto& [idx, addr] : addresses) {
    if (idx >= cfg.servers) {
      return Bad(absl::StrCat("server.", idx), "index beyond servers");
    }
    cfg.addresses[idx] = addr;
  }
  return cfg;
}

absl::StatusOr<DeploymentConfig> DeploymentConfig::Load(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return Error(ErrorKind::kConfigError,
                 absl::StrCat("cannot read config file ", path));
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

std::string DeploymentConfig::Format() const {
  std::string out =
      absl::StrCat("modulus=", modulus, "\nservers=", servers, "\n");
  for (int i = 0; i < servers; ++i) {
    if (i < static_cast<int>(addresses.size()) && !addresses[i].empty()) {
      absl::StrAppend(&out, "server.", i, "=", addresses[i], "\n");
    }
  }
  absl::StrAppend(&out, "leader=", leader, "\nafe=", FormatAfeKind(afe),
                  "\nrotation_budget=", rotation_budget,
                  "\nmin_batch=", min_batch, "\nepoch=", epoch,
                  "\ntimeout_ms=", timeout_ms, "\n");
  if (!mac_key.empty()) {
    absl::StrAppend(&out, "mac_key=", absl::BytesToHexString(mac_key), "\n");
  }
  absl::StrAppend(&out, "verify=", verify ? 1 : 0, "\ninflight=", inflight,
                  "\n");
  return out;
}

Digest DeploymentConfig::ConfigDigest() const { return Sha256(Format()); }

absl::StatusOr<std::shared_ptr<const Deployment>> Deployment::Create(
    const DeploymentConfig& config) {
  PRIVAGG_ASSIGN_OR_RETURN(Field field, Field::Create(config.modulus));
  PRIVAGG_ASSIGN_OR_RETURN(std::shared_ptr<const Afe> afe,
                           Afe::Create(config.afe, field));
  // The verifier needs a point outside {0, ..., M}.
  if (2 * afe->circuit().mul_count() + 2 > field.modulus()) {
    return Error(
        ErrorKind::kConfigError,
        absl::StrCat("field of size ", field.modulus(), " too small for ",
                     afe->circuit().mul_count(), " multiplication gates"));
  }
  return std::shared_ptr<const Deployment>(
      new Deployment(config, field, std::move(afe)));
}

}  // namespace privagg
