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

#ifndef PRIVAGG_SHARING_H_
#define PRIVAGG_SHARING_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "privagg/field.h"
#include "privagg/prg.h"
#include "privagg/wire.h"

namespace privagg {

struct SeededPayload {
  PrgKey key;
  uint32_t length = 0;

  friend bool operator==(const SeededPayload&, const SeededPayload&) = default;
};

// One server's additive share of a vector. Seeded payloads expand through
// ExpandPrg to exactly `length` elements.
class ShareVector {
 public:
  static constexpr uint8_t kExplicitTag = 0x00;
  static constexpr uint8_t kSeededTag = 0x01;

  ShareVector() = default;
  ShareVector(int server_index, std::vector<FieldElement> values)
      : server_index_(server_index), payload_(std::move(values)) {}
  ShareVector(int server_index, SeededPayload seeded)
      : server_index_(server_index), payload_(seeded) {}

  int server_index() const { return server_index_; }
  void set_server_index(int index) { server_index_ = index; }
  bool is_seeded() const {
    return std::holds_alternative<SeededPayload>(payload_);
  }
  size_t length() const;

  std::vector<FieldElement> Expand(const Field& field) const;

  // Explicit: 0x00 | u32 BE L | L elements. Seeded: 0x01 | key | u32 BE L.
  void AppendTo(const Field& field, std::string* out) const;
  size_t EncodedSize(const Field& field) const;
  static absl::StatusOr<ShareVector> Parse(const Field& field,
                                           ByteReader* reader,
                                           int server_index = 0);

  friend bool operator==(const ShareVector&, const ShareVector&) = default;

 private:
  int server_index_ = 0;
  std::variant<std::vector<FieldElement>, SeededPayload> payload_;
};

// TooFewServers when s < 2. Shares 0..s-2 are uniform; share s-1 completes
// the sum.
absl::StatusOr<std::vector<ShareVector>> Split(const Field& field,
                                               std::span<const FieldElement> x,
                                               int s, Csprng& rng);

// As Split, but shares 0..s-2 are PRG seeds.
absl::StatusOr<std::vector<ShareVector>> SplitPrg(
    const Field& field, std::span<const FieldElement> x, int s, Csprng& rng);

// Componentwise sum. MissingShare unless the server indices are exactly
// 0..n-1; LengthMismatch if expanded lengths differ.
absl::StatusOr<std::vector<FieldElement>> Combine(
    const Field& field, std::span<const ShareVector> shares);

// Additive sharing of a single scalar.
std::vector<FieldElement> SplitScalar(const Field& field, FieldElement x, int s,
                                      Csprng& rng);
FieldElement SumElements(const Field& field,
                         std::span<const FieldElement> values);

struct BeaverTriple {
  FieldElement a, b, c;
  friend bool operator==(const BeaverTriple&, const BeaverTriple&) = default;
};

using BeaverTripleShare = BeaverTriple;

BeaverTriple SampleTriple(const Field& field, Csprng& rng);
std::vector<BeaverTripleShare> SplitTriple(const Field& field,
                                           const BeaverTriple& triple, int s,
                                           Csprng& rng);
BeaverTriple CombineTriple(const Field& field,
                           std::span<const BeaverTripleShare> shares);

}  // namespace privagg

#endif  // PRIVAGG_SHARING_H_
