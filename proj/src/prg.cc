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

#include "privagg/prg.h"

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>

namespace privagg {

struct AesCtrStream::CipherCtx {
  EVP_CIPHER_CTX* ctx = nullptr;
  ~CipherCtx() {
    if (ctx != nullptr) EVP_CIPHER_CTX_free(ctx);
  }
};

Digest Sha256(std::string_view data) {
  Digest out;
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(),
         out.data());
  return out;
}

AesCtrStream::AesCtrStream(const PrgKey& key)
    : ctx_(std::make_unique<CipherCtx>()) {
  ctx_->ctx = EVP_CIPHER_CTX_new();
  static constexpr uint8_t kZeroIv[16] = {};
  if (ctx_->ctx == nullptr ||
      EVP_EncryptInit_ex(ctx_->ctx, EVP_aes_128_ctr(), nullptr, key.data(),
                         kZeroIv) != 1) {
    throw std::runtime_error("AES-128-CTR initialisation failed");
  }
}

AesCtrStream::~AesCtrStream() = default;
AesCtrStream::AesCtrStream(AesCtrStream&& other) noexcept = default;
AesCtrStream& AesCtrStream::operator=(AesCtrStream&& other) noexcept = default;

void AesCtrStream::Refill() {
  static constexpr uint8_t kZeros[4096] = {};
  int out_len = 0;
  EVP_EncryptUpdate(ctx_->ctx, buffer_.data(), &out_len, kZeros,
                    static_cast<int>(buffer_.size()));
  pos_ = 0;
}

void AesCtrStream::Fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buffer_.size()) Refill();
    size_t n = std::min(out.size() - done, buffer_.size() - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

FieldElement AesCtrStream::NextElement(const Field& field) {
  const int width = field.element_width_bytes();
  const unsigned __int128 span = static_cast<unsigned __int128>(1)
                                 << (8 * width);
  const unsigned __int128 limit = span - span % field.modulus();
  uint8_t bytes[8];
  while (true) {
    Fill(std::span<uint8_t>(bytes, width));
    uint64_t v = 0;
    for (int i = width - 1; i >= 0; --i) v = (v << 8) | bytes[i];
    if (v < limit) return FieldElement{v % field.modulus()};
  }
}

std::vector<FieldElement> ExpandPrg(const Field& field, const PrgKey& key,
                                    size_t length) {
  AesCtrStream stream(key);
  std::vector<FieldElement> out(length);
  for (FieldElement& e : out) e = stream.NextElement(field);
  return out;
}

Csprng::Csprng(uint64_t seed)
    : stream_([seed] {
        std::string material = "privagg-csprng-seed";
        for (int i = 0; i < 8; ++i) {
          material.push_back(static_cast<char>((seed >> (8 * i)) & 0xFF));
        }
        Digest digest = Sha256(material);
        PrgKey key;
        std::memcpy(key.data(), digest.data(), key.size());
        return AesCtrStream(key);
      }()) {}

Csprng Csprng::FromEntropy() {
  PrgKey key;
  if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
    throw std::runtime_error("system entropy unavailable");
  }
  return FromKey(key);
}

Csprng Csprng::FromKey(const PrgKey& key) { return Csprng(AesCtrStream(key)); }

uint64_t Csprng::NextU64() {
  uint8_t bytes[8];
  Fill(bytes);
  uint64_t v = 0;
  for (uint8_t b : bytes) v = (v << 8) | b;
  return v;
}

uint64_t Csprng::Uniform(uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  while (true) {
    uint64_t v = NextU64();
    if (v < limit) return v % bound;
  }
}

double Csprng::NextDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

FieldElement Csprng::NextNonzero(const Field& field) {
  while (true) {
    FieldElement e = NextElement(field);
    if (e.value != 0) return e;
  }
}

PrgKey Csprng::NextKey() {
  PrgKey key;
  Fill(key);
  return key;
}

}  // namespace privagg
