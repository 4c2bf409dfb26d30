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

#ifndef PRIVAGG_PRG_H_
#define PRIVAGG_PRG_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privagg/field.h"

namespace privagg {

using PrgKey = std::array<uint8_t, 16>;
using Digest = std::array<uint8_t, 32>;

Digest Sha256(std::string_view data);

// AES-128 in counter mode from a zero IV. The keystream is the PRG output.
class AesCtrStream {
 public:
  explicit AesCtrStream(const PrgKey& key);
  ~AesCtrStream();
  AesCtrStream(AesCtrStream&& other) noexcept;
  AesCtrStream& operator=(AesCtrStream&& other) noexcept;
  AesCtrStream(const AesCtrStream&) = delete;
  AesCtrStream& operator=(const AesCtrStream&) = delete;

  void Fill(std::span<uint8_t> out);

  // Draws fixed-width little-endian candidates and rejects those at or above
  // the largest multiple of p representable in element_width_bytes, so the
  // reduced value is exactly uniform.
  FieldElement NextElement(const Field& field);

 private:
  void Refill();

  struct CipherCtx;
  std::unique_ptr<CipherCtx> ctx_;
  std::array<uint8_t, 4096> buffer_{};
  size_t pos_ = 4096;
};

// G(key): the first `length` field elements of the keystream under `key`.
std::vector<FieldElement> ExpandPrg(const Field& field, const PrgKey& key,
                                    size_t length);

// Seedable CSPRNG used for all protocol randomness. Deterministic for a given
// seed so simulations replay exactly.
class Csprng {
 public:
  explicit Csprng(uint64_t seed);
  static Csprng FromEntropy();
  static Csprng FromKey(const PrgKey& key);

  Csprng(Csprng&&) noexcept = default;
  Csprng& operator=(Csprng&&) noexcept = default;

  void Fill(std::span<uint8_t> out) { stream_.Fill(out); }
  uint64_t NextU64();
  // Uniform in [0, bound); bound > 0.
  uint64_t Uniform(uint64_t bound);
  // Uniform in [0, 1).
  double NextDouble();
  bool NextBit() { return (NextU64() & 1) != 0; }
  FieldElement NextElement(const Field& field) {
    return stream_.NextElement(field);
  }
  FieldElement NextNonzero(const Field& field);
  PrgKey NextKey();
  // Independent child generator; consumes 16 bytes of this stream.
  Csprng Fork() { return FromKey(NextKey()); }

 private:
  explicit Csprng(AesCtrStream stream) : stream_(std::move(stream)) {}
  AesCtrStream stream_;
};

}  // namespace privagg

#endif  // PRIVAGG_PRG_H_
