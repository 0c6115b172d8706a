#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hashvault/bytes.hpp"

namespace hashvault {

/// 160-bit SHA-1 output.
struct Digest {
  static constexpr std::size_t kSize = 20;
  std::array<std::uint8_t, kSize> bytes{};

  std::string hex() const { return to_hex(bytes); }
  static Digest from_hex(std::string_view hex);

  auto operator<=>(const Digest&) const = default;
};

using Sha1State = std::array<std::uint32_t, 5>;
using Sha1Block = std::array<std::uint8_t, 64>;

inline constexpr Sha1State kSha1InitialState = {0x67452301, 0xEFCDAB89, 0x98BADCFE,
                                                0x10325476, 0xC3D2E1F0};

/// One application of the SHA-1 compression function, including the
/// feed-forward addition of the incoming chaining value.
void sha1_compress(Sha1State& state, std::span<const std::uint8_t, 64> block);

/// A message after SHA-1 padding: message || 0x80 || zeros || 64-bit
/// big-endian bit length, cut into 64-byte blocks.
struct MessageBlockStream {
  std::vector<Sha1Block> blocks;
  std::uint64_t message_length = 0;  // octets

  /// Concatenated blocks with the padding stripped again.
  Bytes unpadded() const;
};

MessageBlockStream pad_message(ByteView message);

/// Streaming SHA-1. Single owner; copy the object to fork a prefix state.
class Sha1 {
 public:
  Sha1& update(ByteView data);
  Digest finish();

 private:
  Sha1State state_ = kSha1InitialState;
  Sha1Block buffer_{};
  std::size_t buffered_ = 0;
  std::uint64_t total_ = 0;
};

Digest sha1_digest(ByteView message);

/// sha1(prefix || message) without materializing the concatenation.
Digest sha1_digest(ByteView prefix, ByteView message);

}  // namespace hashvault

template <>
struct std::hash<hashvault::Digest> {
  std::size_t operator()(const hashvault::Digest& d) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t); ++i) h = (h << 8) | d.bytes[i];
    return h;
  }
};
