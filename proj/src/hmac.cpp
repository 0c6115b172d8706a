#include "hashvault/hmac.hpp"

#include <array>

#include "hashvault/errors.hpp"

namespace hashvault {

HmacSha1::HmacSha1(ByteView key) {
  std::array<std::uint8_t, 64> block{};
  if (key.size() > block.size()) {
    auto hashed = sha1_digest(key);
    std::copy(hashed.bytes.begin(), hashed.bytes.end(), block.begin());
  } else {
    std::copy(key.begin(), key.end(), block.begin());
  }

  std::array<std::uint8_t, 64> ipad, opad;
  for (std::size_t i = 0; i < block.size(); ++i) {
    ipad[i] = block[i] ^ 0x36;
    opad[i] = block[i] ^ 0x5C;
  }
  inner_.update(ipad);
  outer_.update(opad);
}

Digest HmacSha1::mac(ByteView message) const {
  Sha1 inner = inner_;
  auto ih = inner.update(message).finish();
  Sha1 outer = outer_;
  return outer.update(ih.bytes).finish();
}

Digest HmacSha1::mac(ByteView first, ByteView second) const {
  Sha1 inner = inner_;
  auto ih = inner.update(first).update(second).finish();
  Sha1 outer = outer_;
  return outer.update(ih.bytes).finish();
}

Digest hmac(ByteView key, ByteView message) { return HmacSha1(key).mac(message); }

Bytes pbkdf2(ByteView password, ByteView salt, std::uint64_t iterations, std::size_t dk_len) {
  if (iterations == 0) throw InvalidParameter("pbkdf2: iterations must be >= 1");
  if (dk_len == 0) throw InvalidParameter("pbkdf2: dk_len must be >= 1");

  const HmacSha1 prf(password);
  Bytes out;
  out.reserve(dk_len);
  for (std::uint32_t block = 1; out.size() < dk_len; ++block) {
    std::array<std::uint8_t, 4> index;
    store_be32(index.data(), block);
    Digest u = prf.mac(salt, index);
    Digest t = u;
    for (std::uint64_t i = 1; i < iterations; ++i) {
      u = prf.mac(u.bytes);
      for (std::size_t j = 0; j < Digest::kSize; ++j) t.bytes[j] ^= u.bytes[j];
    }
    std::size_t take = std::min(Digest::kSize, dk_len - out.size());
    out.insert(out.end(), t.bytes.begin(), t.bytes.begin() + take);
  }
  return out;
}

}  // namespace hashvault
