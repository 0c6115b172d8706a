#pragma once

#include <cstddef>
#include <cstdint>

#include "hashvault/bytes.hpp"
#include "hashvault/sha1.hpp"

namespace hashvault {

/// HMAC-SHA1 keyed once; the inner and outer pad states are precomputed so
/// repeated MACs under one key (PBKDF2) only pay for the message blocks.
class HmacSha1 {
 public:
  explicit HmacSha1(ByteView key);

  Digest mac(ByteView message) const;
  Digest mac(ByteView first, ByteView second) const;

 private:
  Sha1 inner_;
  Sha1 outer_;
};

Digest hmac(ByteView key, ByteView message);

/// PBKDF2 with HMAC-SHA1 as the PRF. Throws InvalidParameter when
/// iterations or dk_len is zero.
Bytes pbkdf2(ByteView password, ByteView salt, std::uint64_t iterations, std::size_t dk_len);

}  // namespace hashvault
