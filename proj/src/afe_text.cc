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

// Text forms of kinds, domain values and results.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "privagg/afe.h"
#include "privagg/status.h"

namespace privagg {

namespace {

constexpr std::pair<AfeType, std::string_view> kNames[] = {
    {AfeType::kSum, "sum"},
    {AfeType::kMean, "mean"},
    {AfeType::kVariance, "variance"},
    {AfeType::kBoolOr, "or"},
    {AfeType::kBoolAnd, "and"},
    {AfeType::kMinMaxExact, "minmax"},
    {AfeType::kMinMaxApprox, "approx"},
    {AfeType::kFreqCount, "freq"},
    {AfeType::kCountMin, "countmin"},
    {AfeType::kMostPopular, "popular"},
    {AfeType::kLinReg, "linreg"},
    {AfeType::kRSquared, "rsquared"},
};

absl::Status ParseError(std::string_view msg) {
  return Error(ErrorKind::kParseError, msg);
}

std::vector<std::string> Split(std::string_view text, char sep) {
  return absl::StrSplit(std::string(text), sep, absl::SkipWhitespace());
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
absl::StatusOr<T> ParseInt(std::string_view s) {
  s = Trim(s);
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return ParseError(absl::StrCat("not an integer: '", std::string(s), "'"));
  }
  return v;
}

absl::StatusOr<double> ParseDouble(std::string_view s) {
  std::string str(Trim(s));
  if (str.empty()) return ParseError("empty number");
  char* end = nullptr;
  double v = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size()) {
    return ParseError(absl::StrCat("not a number: '", str, "'"));
  }
  return v;
}

absl::StatusOr<bool> ParseBool(std::string_view s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  return ParseError(absl::StrCat("not a boolean: '", std::string(s), "'"));
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Rational(const mpq_class& q) { return q.get_str(); }

std::string ApproxDecimal(const mpq_class& q) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", q.get_d());
  return buf;
}

}  // namespace

std::string_view AfeTypeName(AfeType type) {
  for (const auto& [t, name] : kNames) {
    if (t == type) return name;
  }
  return "unknown";
}

absl::StatusOr<AfeKind> ParseAfeKind(std::string_view text) {
  std::vector<std::string> tokens = Split(text, ' ');
  if (tokens.empty()) return ParseError("empty aggregation kind");
  AfeKind kind;
  bool found = false;
  for (const auto& [t, name] : kNames) {
    if (tokens[0] == name) {
      kind.type = t;
      found = true;
    }
  }
  if (!found) {
    return ParseError(
        absl::StrCat("unknown aggregation kind '", tokens[0], "'"));
  }
  std::map<std::string, std::string> params;
  for (size_t i = 1; i < tokens.size(); ++i) {
    size_t eq = tokens[i].find('=');
    if (eq == std::string::npos) {
      return ParseError(
          absl::StrCat("expected key=value, got '", tokens[i], "'"));
    }
    params[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  auto take = [&](const std::string& key) -> absl::StatusOr<std::string> {
    auto it = params.find(key);
    if (it == params.end()) {
      return ParseError(
          absl::StrCat(tokens[0], " needs parameter '", key, "'"));
    }
    std::string v = it->second;
    params.erase(it);
    return v;
  };
  auto take_u32 = [&](const std::string& key) -> absl::StatusOr<uint32_t> {
    PRIVAGG_ASSIGN_OR_RETURN(std::string v, take(key));
    return ParseInt<uint32_t>(v);
  };
  auto take_u64 = [&](const std::string& key) -> absl::StatusOr<uint64_t> {
    PRIVAGG_ASSIGN_OR_RETURN(std::string v, take(key));
    return ParseInt<uint64_t>(v);
  };
  auto take_mode = [&]() -> absl::StatusOr<bool> {
    PRIVAGG_ASSIGN_OR_RETURN(std::string v, take("mode"));
    if (v == "max") return true;
    if (v == "min") return false;
    return ParseError(absl::StrCat("mode must be min or max, got '", v, "'"));
  };

  switch (kind.type) {
    case AfeType::kSum:
    case AfeType::kMean:
    case AfeType::kVariance:
    case AfeType::kMostPopular: {
      PRIVAGG_ASSIGN_OR_RETURN(kind.bits, take_u32("b"));
      break;
    }
    case AfeType::kBoolOr:
    case AfeType::kBoolAnd: {
      PRIVAGG_ASSIGN_OR_RETURN(kind.lambda, take_u32("lambda"));
      break;
    }
    case AfeType::kMinMaxExact: {
      PRIVAGG_ASSIGN_OR_RETURN(kind.range, take_u64("B"));
      PRIVAGG_ASSIGN_OR_RETURN(kind.is_max, take_mode());
      break;
    }
    case AfeType::kMinMaxApprox: {
      PRIVAGG_ASSIGN_OR_RETURN(kind.range, take_u64("B"));
      PRIVAGG_ASSIGN_OR_RETURN(kind.factor, take_u64("c"));
      PRIVAGG_ASSIGN_OR_RETURN(kind.is_max, take_mode());
      break;
    }
    case AfeType::kFreqCount: {
      PRIVAGG_ASSIGN_OR_RETURN(kind.range, take_u64("B"));
      break;
    }
    case AfeType::kCountMin: {
      PRIVAGG_ASSIGN_OR_RETURN(std::string eps, take("eps"));
      PRIVAGG_ASSIGN_OR_RETURN(kind.epsilon, ParseDouble(eps));
      PRIVAGG_ASSIGN_OR_RETURN(std::string delta, take("delta"));
      PRIVAGG_ASSIGN_OR_RETURN(kind.delta, ParseDouble(delta));
      PRIVAGG_ASSIGN_OR_RETURN(kind.seed, take_u64("seed"));
      break;
    }
    case AfeType::kLinReg: {
      PRIVAGG_ASSIGN_OR_RETURN(kind.dim, take_u32("d"));
      PRIVAGG_ASSIGN_OR_RETURN(kind.bits, take_u32("b"));
      PRIVAGG_ASSIGN_OR_RETURN(kind.frac_bits, take_u32("frac"));
      PRIVAGG_ASSIGN_OR_RETURN(std::string sign, take("signed"));
      PRIVAGG_ASSIGN_OR_RETURN(kind.is_signed, ParseBool(sign));
      break;
    }
    case AfeType::kRSquared: {
      PRIVAGG_ASSIGN_OR_RETURN(std::string coeffs, take("coeffs"));
      for (const std::string& c : Split(coeffs, ',')) {
        PRIVAGG_ASSIGN_OR_RETURN(int64_t m, ParseInt<int64_t>(c));
        kind.model.push_back(m);
      }
      PRIVAGG_ASSIGN_OR_RETURN(kind.bits, take_u32("b"));
      break;
    }
  }
  if (!params.empty()) {
    return ParseError(absl::StrCat("unexpected parameter '",
                                   params.begin()->first, "' for ", tokens[0]));
  }
  return kind;
}

std::string FormatAfeKind(const AfeKind& kind) {
  std::string name(AfeTypeName(kind.type));
  const char* mode = kind.is_max ? "max" : "min";
  switch (kind.type) {
    case AfeType::kSum:
    case AfeType::kMean:
    case AfeType::kVariance:
    case AfeType::kMostPopular:
      return absl::StrCat(name, " b=", kind.bits);
    case AfeType::kBoolOr:
    case AfeType::kBoolAnd:
      return absl::StrCat(name, " lambda=", kind.lambda);
    case AfeType::kMinMaxExact:
      return absl::StrCat(name, " B=", kind.range, " mode=", mode);
    case AfeType::kMinMaxApprox:
      return absl::StrCat(name, " B=", kind.range, " c=", kind.factor,
                          " mode=", mode);
    case AfeType::kFreqCount:
      return absl::StrCat(name, " B=", kind.range);
    case AfeType::kCountMin: {
      char eps[32];
      char delta[32];
      std::snprintf(eps, sizeof(eps), "%g", kind.epsilon);
      std::snprintf(delta, sizeof(delta), "%g", kind.delta);
      return absl::StrCat(name, " eps=", eps, " delta=", delta,
                          " seed=", kind.seed);
    }
    case AfeType::kLinReg:
      return absl::StrCat(name, " d=", kind.dim, " b=", kind.bits,
                          " frac=", kind.frac_bits,
                          " signed=", kind.is_signed ? 1 : 0);
    case AfeType::kRSquared:
      return absl::StrCat(name, " coeffs=", absl::StrJoin(kind.model, ","),
                          " b=", kind.bits);
  }
  return name;
}

absl::StatusOr<AfeValue> ParseAfeValue(const AfeKind& kind,
                                       std::string_view literal) {
  literal = Trim(literal);
  switch (kind.type) {
    case AfeType::kMostPopular:
      for (char c : literal) {
        if (c != '0' && c != '1') {
          return ParseError(
              absl::StrCat("not a bit string: '", std::string(literal), "'"));
        }
      }
      return AfeValue(std::string(literal));
    case AfeType::kLinReg: {
      std::vector<double> v;
      for (const std::string& part : Split(literal, ',')) {
        PRIVAGG_ASSIGN_OR_RETURN(double d, ParseDouble(part));
        v.push_back(d);
      }
      return AfeValue(std::move(v));
    }
    case AfeType::kRSquared: {
      std::vector<uint64_t> v;
      for (const std::string& part : Split(literal, ',')) {
        PRIVAGG_ASSIGN_OR_RETURN(uint64_t d, ParseInt<uint64_t>(part));
        v.push_back(d);
      }
      return AfeValue(std::move(v));
    }
    default: {
      PRIVAGG_ASSIGN_OR_RETURN(uint64_t v, ParseInt<uint64_t>(literal));
      return AfeValue(v);
    }
  }
}

std::string FormatAfeValue(const AfeValue& value) {
  struct Visitor {
    std::string operator()(uint64_t v) const { return absl::StrCat(v); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const std::vector<double>& v) const {
      std::vector<std::string> parts;
      for (double d : v) parts.push_back(FormatDouble(d));
      return absl::StrJoin(parts, ",");
    }
    std::string operator()(const std::vector<uint64_t>& v) const {
      return absl::StrJoin(v, ",");
    }
  };
  return std::visit(Visitor{}, value);
}

std::string FormatResult(const AggregateResult& result) {
  struct Visitor {
    std::string operator()(const SumResult& r) const {
      return absl::StrCat("sum=", r.sum.get_str());
    }
    std::string operator()(const MeanResult& r) const {
      return absl::StrCat("mean=", Rational(r.mean),
                          " mean_approx=", ApproxDecimal(r.mean));
    }
    std::string operator()(const VarianceResult& r) const {
      return absl::StrCat("mean=", Rational(r.mean),
                          " variance=", Rational(r.variance),
                          " variance_approx=", ApproxDecimal(r.variance));
    }
    std::string operator()(const BoolResult& r) const {
      return absl::StrCat("value=", r.value ? 1 : 0);
    }
    std::string operator()(const MinMaxResult& r) const {
      return r.value ? absl::StrCat("value=", *r.value) : "value=empty";
    }
    std::string operator()(const ApproxResult& r) const {
      if (!r.lo) return "estimate=empty";
      return absl::StrCat("estimate=", *r.lo, " lo=", *r.lo, " hi=", *r.hi);
    }
    std::string operator()(const CountsResult& r) const {
      return absl::StrCat("counts=", absl::StrJoin(r.counts, ","));
    }
    std::string operator()(const CountMinResult& r) const {
      return absl::StrCat("rows=", r.rows, " width=", r.width,
                          " table=", absl::StrJoin(r.table, ","));
    }
    std::string operator()(const PopularResult& r) const {
      return absl::StrCat("popular=", r.bits);
    }
    std::string operator()(const LinRegResult& r) const {
      std::vector<std::string> exact;
      std::vector<std::string> approx;
      for (const mpq_class& c : r.coefficients) {
        exact.push_back(Rational(c));
        approx.push_back(ApproxDecimal(c));
      }
      return absl::StrCat("coefficients=", absl::StrJoin(exact, ","),
                          " coefficients_approx=", absl::StrJoin(approx, ","));
    }
    std::string operator()(const RSquaredResult& r) const {
      return absl::StrCat("r_squared=", Rational(r.r_squared),
                          " r_squared_approx=", ApproxDecimal(r.r_squared),
                          " mean_y=", Rational(r.mean_y),
                          " variance_y=", Rational(r.variance_y));
    }
  };
  return std::visit(Visitor{}, result);
}

}  // namespace privagg
