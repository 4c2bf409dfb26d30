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

#include "privagg/sharing.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "privagg/status.h"

namespace privagg {

size_t ShareVector::length() const {
  if (const auto* seeded = std::get_if<SeededPayload>(&payload_)) {
    return seeded->length;
  }
  return std::get<std::vector<FieldElement>>(payload_).size();
}

std::vector<FieldElement> ShareVector::Expand(const Field& field) const {
  if (const auto* seeded = std::get_if<SeededPayload>(&payload_)) {
    return ExpandPrg(field, seeded->key, seeded->length);
  }
  return std::get<std::vector<FieldElement>>(payload_);
}

void ShareVector::AppendTo(const Field& field, std::string* out) const {
  if (const auto* seeded = std::get_if<SeededPayload>(&payload_)) {
    out->push_back(static_cast<char>(kSeededTag));
    out->append(reinterpret_cast<const char*>(seeded->key.data()),
                seeded->key.size());
    AppendU32BE(seeded->length, out);
    return;
  }
  const auto& values = std::get<std::vector<FieldElement>>(payload_);
  out->push_back(static_cast<char>(kExplicitTag));
  AppendU32BE(static_cast<uint32_t>(values.size()), out);
  for (FieldElement e : values) field.AppendElement(e, out);
}

size_t ShareVector::EncodedSize(const Field& field) const {
  if (is_seeded()) return 1 + 16 + 4;
  return 1 + 4 + length() * field.element_width_bytes();
}

absl::StatusOr<ShareVector> ShareVector::Parse(const Field& field,
                                               ByteReader* reader,
                                               int server_index) {
  PRIVAGG_ASSIGN_OR_RETURN(uint8_t tag, reader->ReadU8());
  if (tag == kSeededTag) {
    SeededPayload seeded;
    PRIVAGG_ASSIGN_OR_RETURN(std::string_view key, reader->ReadBytes(16));
    std::copy(key.begin(), key.end(), seeded.key.begin());
    PRIVAGG_ASSIGN_OR_RETURN(seeded.length, reader->ReadU32BE());
    return ShareVector(server_index, seeded);
  }
  if (tag != kExplicitTag) {
    return Error(ErrorKind::kMalformedShare,
                 absl::StrCat("unknown share tag ", tag));
  }
  PRIVAGG_ASSIGN_OR_RETURN(uint32_t length, reader->ReadU32BE());
  if (reader->remaining() / field.element_width_bytes() < length) {
    return Error(ErrorKind::kTruncated,
                 absl::StrCat("share declares ", length, " elements"));
  }
  std::vector<FieldElement> values(length);
  for (FieldElement& e : values) {
    PRIVAGG_ASSIGN_OR_RETURN(e, reader->ReadElement(field));
  }
  return ShareVector(server_index, std::move(values));
}

namespace {

absl::Status CheckServerCount(int s) {
  if (s < 2) {
    return Error(ErrorKind::kTooFewServers,
                 absl::StrCat("need at least 2 servers, got ", s));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<ShareVector>> Split(const Field& field,
                                               std::span<const FieldElement> x,
                                               int s, Csprng& rng) {
  PRIVAGG_RETURN_IF_ERROR(CheckServerCount(s));
  std::vector<FieldElement> last(x.begin(), x.end());
  std::vector<ShareVector> shares;
  shares.reserve(s);
  for (int i = 0; i + 1 < s; ++i) {
    std::vector<FieldElement> values(x.size());
    for (size_t j = 0; j < x.size(); ++j) {
      values[j] = rng.NextElement(field);
      last[j] = field.Sub(last[j], values[j]);
    }
    shares.emplace_back(i, std::move(values));
  }
  shares.emplace_back(s - 1, std::move(last));
  return shares;
}

absl::StatusOr<std::vector<ShareVector>> SplitPrg(
    const Field& field, std::span<const FieldElement> x, int s, Csprng& rng) {
  PRIVAGG_RETURN_IF_ERROR(CheckServerCount(s));
  std::vector<FieldElement> last(x.begin(), x.end());
  std::vector<ShareVector> shares;
  shares.reserve(s);
  for (int i = 0; i + 1 < s; ++i) {
    SeededPayload seeded{rng.NextKey(), static_cast<uint32_t>(x.size())};
    std::vector<FieldElement> mask = ExpandPrg(field, seeded.key, x.size());
    for (size_t j = 0; j < x.size(); ++j) last[j] = field.Sub(last[j], mask[j]);
    shares.emplace_back(i, seeded);
  }
  shares.emplace_back(s - 1, std::move(last));
  return shares;
}

absl::StatusOr<std::vector<FieldElement>> Combine(
    const Field& field, std::span<const ShareVector> shares) {
  if (shares.empty()) {
    return Error(ErrorKind::kMissingShare, "no shares supplied");
  }
  std::vector<bool> seen(shares.size(), false);
  for (const ShareVector& share : shares) {
    int idx = share.server_index();
    if (idx < 0 || static_cast<size_t>(idx) >= shares.size() || seen[idx]) {
      return Error(
          ErrorKind::kMissingShare,
          absl::StrCat("server indices do not cover 0..", shares.size() - 1));
    }
    seen[idx] = true;
  }
  const size_t length = shares[0].length();
  std::vector<FieldElement> sum(length, field.Zero());
  for (const ShareVector& share : shares) {
    if (share.length() != length) {
      return Error(
          ErrorKind::kLengthMismatch,
          absl::StrCat("share lengths ", length, " and ", share.length()));
    }
    std::vector<FieldElement> values = share.Expand(field);
    for (size_t j = 0; j < length; ++j) sum[j] = field.Add(sum[j], values[j]);
  }
  return sum;
}

std::vector<FieldElement> SplitScalar(const Field& field, FieldElement x, int s,
                                      Csprng& rng) {
  std::vector<FieldElement> out(s);
  FieldElement last = x;
  for (int i = 0; i + 1 < s; ++i) {
    out[i] = rng.NextElement(field);
    last = field.Sub(last, out[i]);
  }
  out[s - 1] = last;
  return out;
}

FieldElement SumElements(const Field& field,
                         std::span<const FieldElement> values) {
  FieldElement sum = field.Zero();
  for (FieldElement v : values) sum = field.Add(sum, v);
  return sum;
}

BeaverTriple SampleTriple(const Field& field, Csprng& rng) {
  BeaverTriple t;
  t.a = rng.NextElement(field);
  t.b = rng.NextElement(field);
  t.c = field.Mul(t.a, t.b);
  return t;
}

std::vector<BeaverTripleShare> SplitTriple(const Field& field,
                                           const BeaverTriple& triple, int s,
                                           Csprng& rng) {
  std::vector<FieldElement> a = SplitScalar(field, triple.a, s, rng);
  std::vector<FieldElement> b = SplitScalar(field, triple.b, s, rng);
  std::vector<FieldElement> c = SplitScalar(field, triple.c, s, rng);
  std::vector<BeaverTripleShare> out(s);
  for (int i = 0; i < s; ++i) out[i] = {a[i], b[i], c[i]};
  return out;
}

BeaverTriple CombineTriple(const Field& field,
                           std::span<const BeaverTripleShare> shares) {
  BeaverTriple t{field.Zero(), field.Zero(), field.Zero()};
  for (const BeaverTripleShare& sh : shares) {
    t.a = field.Add(t.a, sh.a);
    t.b = field.Add(t.b, sh.b);
    t.c = field.Add(t.c, sh.c);
  }
  return t;
}

}  // namespace privagg
