#include "hashvault/blowfish.hpp"

#include "hashvault/errors.hpp"

namespace hashvault::bcrypt {

namespace {

inline std::uint32_t round_function(const BlowfishState& st, std::uint32_t x) {
  std::uint32_t h = st.s[0][x >> 24] + st.s[1][(x >> 16) & 0xFF];
  return (h ^ st.s[2][(x >> 8) & 0xFF]) + st.s[3][x & 0xFF];
}

// Reads the next big-endian word from `data`, wrapping around cyclically.
std::uint32_t stream_word(ByteView data, std::size_t& pos) {
  std::uint32_t w = 0;
  for (int i = 0; i < 4; ++i) {
    w = (w << 8) | data[pos];
    pos = (pos + 1) % data.size();
  }
  return w;
}

void check_key(ByteView key) {
  if (key.empty() || key.size() > kMaxKeyBytes)
    throw InvalidParameter("blowfish key must be 1..72 octets");
}

template <bool Salted>
void expand(BlowfishState& st, ByteView salt, ByteView key) {
  check_key(key);
  std::size_t kpos = 0;
  for (auto& sub : st.p) sub ^= stream_word(key, kpos);

  std::uint32_t l = 0, r = 0;
  std::size_t spos = 0;
  auto next = [&] {
    if constexpr (Salted) {
      l ^= stream_word(salt, spos);
      r ^= stream_word(salt, spos);
    }
    st.encrypt(l, r);
  };

  for (std::size_t i = 0; i < st.p.size(); i += 2) {
    next();
    st.p[i] = l;
    st.p[i + 1] = r;
  }
  for (auto& box : st.s) {
    for (std::size_t i = 0; i < box.size(); i += 2) {
      next();
      box[i] = l;
      box[i + 1] = r;
    }
  }
}

}  // namespace

void BlowfishState::encrypt(std::uint32_t& left, std::uint32_t& right) const {
  std::uint32_t l = left, r = right;
  for (int i = 0; i < 16; i += 2) {
    l ^= p[i];
    r ^= round_function(*this, l);
    r ^= p[i + 1];
    l ^= round_function(*this, r);
  }
  l ^= p[16];
  r ^= p[17];
  left = r;
  right = l;
}

void BlowfishState::decrypt(std::uint32_t& left, std::uint32_t& right) const {
  std::uint32_t l = left, r = right;
  for (int i = 17; i > 1; i -= 2) {
    l ^= p[i];
    r ^= round_function(*this, l);
    r ^= p[i - 1];
    l ^= round_function(*this, r);
  }
  l ^= p[1];
  r ^= p[0];
  left = r;
  right = l;
}

Block BlowfishState::encrypt_block(const Block& block) const {
  std::uint32_t l = load_be32(block.data()), r = load_be32(block.data() + 4);
  encrypt(l, r);
  Block out;
  store_be32(out.data(), l);
  store_be32(out.data() + 4, r);
  return out;
}

Block BlowfishState::decrypt_block(const Block& block) const {
  std::uint32_t l = load_be32(block.data()), r = load_be32(block.data() + 4);
  decrypt(l, r);
  Block out;
  store_be32(out.data(), l);
  store_be32(out.data() + 4, r);
  return out;
}

void expand_key(BlowfishState& state, const Salt& salt, ByteView key) {
  expand<true>(state, salt, key);
}

void expand_key(BlowfishState& state, ByteView key) { expand<false>(state, {}, key); }

}  // namespace hashvault::bcrypt
