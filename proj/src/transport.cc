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

#include "privagg/transport.h"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "privagg/status.h"
#include "privagg/wire.h"

namespace privagg {
namespace {

void AppendNonce(const Nonce& nonce, std::string* out) {
  out->append(reinterpret_cast<const char*>(nonce.data()), nonce.size());
}

absl::StatusOr<Nonce> ReadNonce(ByteReader* reader) {
  PRIVAGG_ASSIGN_OR_RETURN(std::string_view bytes, reader->ReadBytes(16));
  Nonce nonce;
  std::memcpy(nonce.data(), bytes.data(), nonce.size());
  return nonce;
}

Digest Hmac(std::string_view key, std::string_view data) {
  Digest out{};
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(data.data()), data.size(),
       out.data(), &len);
  return out;
}

bool KnownType(uint8_t type) { return type >= 0x01 && type <= 0x08; }

struct PayloadWriter {
  const Field& field;
  std::string* out;

  void operator()(const UploadMsg& m) {
    AppendNonce(m.nonce, out);
    m.x_share.AppendTo(field, out);
    m.proof.AppendTo(field, out);
  }
  void operator()(const Round1Msg& m) {
    AppendNonce(m.nonce, out);
    field.AppendElement(m.d_share, out);
    field.AppendElement(m.e_share, out);
  }
  void operator()(const DeBroadcastMsg& m) {
    AppendNonce(m.nonce, out);
    field.AppendElement(m.d, out);
    field.AppendElement(m.e, out);
  }
  void operator()(const Round2Msg& m) {
    AppendNonce(m.nonce, out);
    field.AppendElement(m.sigma_share, out);
    field.AppendElement(m.batch_share, out);
  }
  void operator()(const VerdictMsg& m) {
    AppendNonce(m.nonce, out);
    out->push_back(m.accept ? 1 : 0);
  }
  void operator()(const AccPublishMsg& m) {
    AppendU32BE(static_cast<uint32_t>(m.accumulator.size()), out);
    for (FieldElement e : m.accumulator) field.AppendElement(e, out);
    AppendU64BE(m.accepted_count, out);
    out->append(reinterpret_cast<const char*>(m.digest.data()),
                m.digest.size());
  }
  void operator()(const VerifyStartMsg& m) {
    AppendNonce(m.nonce, out);
    field.AppendElement(m.r, out);
    out->append(reinterpret_cast<const char*>(m.coeff_seed.data()),
                m.coeff_seed.size());
  }
  void operator()(const PublishRequestMsg&) {}
};

absl::StatusOr<Message> ParsePayload(const Field& field, MessageType type,
                                     ByteReader* reader) {
  switch (type) {
    case MessageType::kUpload: {
      UploadMsg m;
      PRIVAGG_ASSIGN_OR_RETURN(m.nonce, ReadNonce(reader));
      PRIVAGG_ASSIGN_OR_RETURN(m.x_share, ShareVector::Parse(field, reader));
      PRIVAGG_ASSIGN_OR_RETURN(m.proof, SnipProofShare::Parse(field, reader));
      return m;
    }
    case MessageType::kRound1: {
      Round1Msg m;
      PRIVAGG_ASSIGN_OR_RETURN(m.nonce, ReadNonce(reader));
      PRIVAGG_ASSIGN_OR_RETURN(m.d_share, reader->ReadElement(field));
      PRIVAGG_ASSIGN_OR_RETURN(m.e_share, reader->ReadElement(field));
      return m;
    }
    case MessageType::kDeBroadcast: {
      DeBroadcastMsg m;
      PRIVAGG_ASSIGN_OR_RETURN(m.nonce, ReadNonce(reader));
      PRIVAGG_ASSIGN_OR_RETURN(m.d, reader->ReadElement(field));
      PRIVAGG_ASSIGN_OR_RETURN(m.e, reader->ReadElement(field));
      return m;
    }
    case MessageType::kRound2: {
      Round2Msg m;
      PRIVAGG_ASSIGN_OR_RETURN(m.nonce, ReadNonce(reader));
      PRIVAGG_ASSIGN_OR_RETURN(m.sigma_share, reader->ReadElement(field));
      PRIVAGG_ASSIGN_OR_RETURN(m.batch_share, reader->ReadElement(field));
      return m;
    }
    case MessageType::kVerdict: {
      VerdictMsg m;
      PRIVAGG_ASSIGN_OR_RETURN(m.nonce, ReadNonce(reader));
      PRIVAGG_ASSIGN_OR_RETURN(uint8_t bit, reader->ReadU8());
      if (bit > 1) {
        return Error(ErrorKind::kMalformedShare,
                     absl::StrCat("verdict byte ", bit));
      }
      m.accept = bit == 1;
      return m;
    }
    case MessageType::kAccPublish: {
      AccPublishMsg m;
      PRIVAGG_ASSIGN_OR_RETURN(uint32_t count, reader->ReadU32BE());
      if (static_cast<uint64_t>(count) * field.element_width_bytes() >
          reader->remaining()) {
        return Error(ErrorKind::kTruncated,
                     absl::StrCat("accumulator of ", count,
                                  " elements does not fit the payload"));
      }
      m.accumulator.reserve(count);
      for (uint32_t i = 0; i < count; ++i) {
        PRIVAGG_ASSIGN_OR_RETURN(FieldElement e, reader->ReadElement(field));
        m.accumulator.push_back(e);
      }
      PRIVAGG_ASSIGN_OR_RETURN(m.accepted_count, reader->ReadU64BE());
      PRIVAGG_ASSIGN_OR_RETURN(std::string_view digest, reader->ReadBytes(32));
      std::memcpy(m.digest.data(), digest.data(), m.digest.size());
      return m;
    }
    case MessageType::kVerifyStart: {
      VerifyStartMsg m;
      PRIVAGG_ASSIGN_OR_RETURN(m.nonce, ReadNonce(reader));
      PRIVAGG_ASSIGN_OR_RETURN(m.r, reader->ReadElement(field));
      PRIVAGG_ASSIGN_OR_RETURN(std::string_view seed, reader->ReadBytes(16));
      std::memcpy(m.coeff_seed.data(), seed.data(), m.coeff_seed.size());
      return m;
    }
    case MessageType::kPublishRequest:
      return PublishRequestMsg{};
  }
  return Error(ErrorKind::kUnknownType, "unknown message type");
}

}  // namespace

std::string_view MessageTypeName(MessageType type) {
  switch (type) {
    case MessageType::kUpload:
      return "UPLOAD";
    case MessageType::kRound1:
      return "ROUND1";
    case MessageType::kDeBroadcast:
      return "DE_BCAST";
    case MessageType::kRound2:
      return "ROUND2";
    case MessageType::kVerdict:
      return "VERDICT";
    case MessageType::kAccPublish:
      return "ACC_PUBLISH";
    case MessageType::kVerifyStart:
      return "VERIFY_START";
    case MessageType::kPublishRequest:
      return "PUBLISH_REQ";
  }
  return "UNKNOWN";
}

std::string NonceHex(const Nonce& nonce) {
  return HexEncode(std::string_view(reinterpret_cast<const char*>(nonce.data()),
                                    nonce.size()));
}

MessageType TypeOf(const Message& msg) {
  static constexpr MessageType kTypes[] = {
      MessageType::kUpload,      MessageType::kRound1,
      MessageType::kDeBroadcast, MessageType::kRound2,
      MessageType::kVerdict,     MessageType::kAccPublish,
      MessageType::kVerifyStart, MessageType::kPublishRequest};
  return kTypes[msg.index()];
}

absl::StatusOr<std::string> FrameCodec::Encode(const Frame& frame) const {
  std::string payload;
  std::visit(PayloadWriter{field_, &payload}, frame.msg);
  if (payload.size() > kMaxPayload) {
    return Error(ErrorKind::kLengthOverflow,
                 absl::StrCat("payload of ", payload.size(), " bytes"));
  }
  std::string out;
  out.reserve(kFrameHeaderSize + payload.size() + trailer_size());
  AppendU32BE(static_cast<uint32_t>(payload.size()), &out);
  out.push_back(static_cast<char>(TypeOf(frame.msg)));
  AppendU32BE(frame.epoch, &out);
  out += payload;
  if (has_mac()) {
    Digest tag = Hmac(mac_key_, out);
    out.append(reinterpret_cast<const char*>(tag.data()), tag.size());
  }
  return out;
}

absl::StatusOr<FrameHeader> PeekHeader(std::string_view bytes) {
  ByteReader reader(bytes);
  FrameHeader h;
  PRIVAGG_ASSIGN_OR_RETURN(h.length, reader.ReadU32BE());
  PRIVAGG_ASSIGN_OR_RETURN(h.type, reader.ReadU8());
  PRIVAGG_ASSIGN_OR_RETURN(h.epoch, reader.ReadU32BE());
  if (h.length > kMaxPayload) {
    return Error(ErrorKind::kLengthOverflow,
                 absl::StrCat("declared payload of ", h.length, " bytes"));
  }
  if (!KnownType(h.type)) {
    return Error(
        ErrorKind::kUnknownType,
        absl::StrCat("message type 0x",
                     absl::Hex(static_cast<int>(h.type), absl::kZeroPad2)));
  }
  return h;
}

absl::StatusOr<Frame> FrameCodec::Decode(std::string_view bytes) const {
  PRIVAGG_ASSIGN_OR_RETURN(FrameHeader h, PeekHeader(bytes));
  const size_t total = kFrameHeaderSize + h.length + trailer_size();
  if (bytes.size() < total) {
    return Error(
        ErrorKind::kTruncated,
        absl::StrCat("frame needs ", total, " bytes, have ", bytes.size()));
  }
  if (bytes.size() > total) {
    return Error(ErrorKind::kMalformedShare,
                 absl::StrCat(bytes.size() - total, " bytes after the frame"));
  }
  if (has_mac()) {
    std::string_view body = bytes.substr(0, total - kMacSize);
    Digest tag = Hmac(mac_key_, body);
    if (CRYPTO_memcmp(tag.data(), bytes.data() + body.size(), kMacSize) != 0) {
      return Error(ErrorKind::kBadMac, "frame authentication failed");
    }
  }
  ByteReader reader(bytes.substr(kFrameHeaderSize, h.length));
  Frame frame;
  frame.epoch = h.epoch;
  PRIVAGG_ASSIGN_OR_RETURN(
      frame.msg,
      ParsePayload(field_, static_cast<MessageType>(h.type), &reader));
  if (!reader.done()) {
    return Error(
        ErrorKind::kMalformedShare,
        absl::StrCat(
            reader.remaining(), " unread payload bytes in ",
            std::string(MessageTypeName(static_cast<MessageType>(h.type)))));
  }
  return frame;
}

int64_t SteadyNowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace privagg
