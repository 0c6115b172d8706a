#include "hashvault/sha1.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "hashvault/errors.hpp"

namespace hashvault {

Digest Digest::from_hex(std::string_view hex) {
  auto raw = hashvault::from_hex(hex);
  if (raw.size() != kSize) throw ParseError("digest must be 20 octets");
  Digest d;
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

void sha1_compress(Sha1State& state, std::span<const std::uint8_t, 64> block) {
  std::uint32_t w[80];
  for (int t = 0; t < 16; ++t) w[t] = load_be32(block.data() + 4 * t);
  for (int t = 16; t < 80; ++t) w[t] = std::rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);

  std::uint32_t a = state[0], b = state[1], c = state[2], d = state[3], e = state[4];

  auto round = [&](std::uint32_t f, std::uint32_t k, std::uint32_t wt) {
    std::uint32_t tmp = std::rotl(a, 5) + f + e + k + wt;
    e = d;
    d = c;
    c = std::rotl(b, 30);
    b = a;
    a = tmp;
  };

  for (int t = 0; t < 20; ++t) round((b & c) | (~b & d), 0x5A827999, w[t]);
  for (int t = 20; t < 40; ++t) round(b ^ c ^ d, 0x6ED9EBA1, w[t]);
  for (int t = 40; t < 60; ++t) round((b & c) | (b & d) | (c & d), 0x8F1BBCDC, w[t]);
  for (int t = 60; t < 80; ++t) round(b ^ c ^ d, 0xCA62C1D6, w[t]);

  state[0] += a;
  state[1] += b;
  state[2] += c;
  state[3] += d;
  state[4] += e;
}

Bytes MessageBlockStream::unpadded() const {
  Bytes out;
  out.reserve(blocks.size() * 64);
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  out.resize(message_length);
  return out;
}

MessageBlockStream pad_message(ByteView message) {
  const std::uint64_t len = message.size();
  // 0x80 marker plus 8 length octets must fit after the message.
  const std::size_t total = ((len + 8) / 64 + 1) * 64;

  Bytes padded(total, 0);
  std::copy(message.begin(), message.end(), padded.begin());
  padded[len] = 0x80;
  const std::uint64_t bits = len * 8;
  for (int i = 0; i < 8; ++i) padded[total - 1 - i] = static_cast<std::uint8_t>(bits >> (8 * i));

  MessageBlockStream out;
  out.message_length = len;
  out.blocks.resize(total / 64);
  for (std::size_t i = 0; i < out.blocks.size(); ++i)
    std::memcpy(out.blocks[i].data(), padded.data() + 64 * i, 64);
  return out;
}

Sha1& Sha1::update(ByteView data) {
  total_ += data.size();
  std::size_t pos = 0;
  if (buffered_ > 0) {
    std::size_t take = std::min(data.size(), 64 - buffered_);
    std::memcpy(buffer_.data() + buffered_, data.data(), take);
    buffered_ += take;
    pos = take;
    if (buffered_ < 64) return *this;
    sha1_compress(state_, buffer_);
    buffered_ = 0;
  }
  for (; pos + 64 <= data.size(); pos += 64)
    sha1_compress(state_, std::span<const std::uint8_t, 64>(data.data() + pos, 64));
  if (pos < data.size()) {
    buffered_ = data.size() - pos;
    std::memcpy(buffer_.data(), data.data() + pos, buffered_);
  }
  return *this;
}

Digest Sha1::finish() {
  const std::uint64_t bits = total_ * 8;
  buffer_[buffered_++] = 0x80;
  if (buffered_ > 56) {
    std::fill(buffer_.begin() + buffered_, buffer_.end(), 0);
    sha1_compress(state_, buffer_);
    buffered_ = 0;
  }
  std::fill(buffer_.begin() + buffered_, buffer_.begin() + 56, 0);
  for (int i = 0; i < 8; ++i) buffer_[63 - i] = static_cast<std::uint8_t>(bits >> (8 * i));
  sha1_compress(state_, buffer_);

  Digest out;
  for (int i = 0; i < 5; ++i) store_be32(out.bytes.data() + 4 * i, state_[i]);
  return out;
}

Digest sha1_digest(ByteView message) { return Sha1().update(message).finish(); }

Digest sha1_digest(ByteView prefix, ByteView message) {
  return Sha1().update(prefix).update(message).finish();
}

}  // namespace hashvault
