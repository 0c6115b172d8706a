#include <doctest.h>

#include <random>

#include "hashvault/blowfish.hpp"
#include "hashvault/errors.hpp"
#include "support.hpp"

using namespace hashvault;
using namespace hashvault::bcrypt;

namespace {

Block block_from_hex(std::string_view hex) {
  auto b = from_hex(hex);
  Block out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

BlowfishState keyed(ByteView key) {
  auto st = BlowfishState::initial();
  expand_key(st, key);
  return st;
}

}  // namespace

TEST_CASE("pi constants") {
  auto st = BlowfishState::initial();
  CHECK(st.p[0] == 0x243f6a88u);
  CHECK(st.p[1] == 0x85a308d3u);
  CHECK(st.p[2] == 0x13198a2eu);
  CHECK(st.p[3] == 0x03707344u);
  CHECK(st.p[16] == 0x9216d5d9u);
  CHECK(st.p[17] == 0x8979fb1bu);
  CHECK(st.s[3][255] == 0x3ac372e6u);
  CHECK(st.p.size() + 4 * st.s[0].size() == 18 + 1024);
}

TEST_CASE("reference cipher vectors") {
  auto zero = keyed(Bytes(8, 0));
  CHECK(to_hex(zero.encrypt_block(Block{})) == "4ef997456198dd78");
  auto k = keyed(from_hex("0123456789abcdef"));
  CHECK(to_hex(k.encrypt_block(block_from_hex("1111111111111111"))) == "61f9c3802281b096");
}

TEST_CASE("decrypt inverts encrypt") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 1000; ++i) {
    auto st = keyed(testing::random_bytes(rng, 1 + rng() % 56));
    Block b;
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    auto c = st.encrypt_block(b);
    REQUIRE(st.decrypt_block(c) == b);
    Block other = b;
    other[rng() % 8] ^= 1;
    CHECK(st.encrypt_block(other) != c);
  }
}

TEST_CASE("expand_key") {
  auto once = BlowfishState::initial();
  expand_key(once, as_bytes("key"));
  auto twice = once;
  expand_key(twice, as_bytes("key"));
  CHECK_FALSE(once == twice);

  Salt s{};
  s[0] = 1;
  auto salted = BlowfishState::initial();
  expand_key(salted, s, as_bytes("key"));
  CHECK_FALSE(salted == once);

  auto zero_salted = BlowfishState::initial();
  expand_key(zero_salted, Salt{}, as_bytes("key"));
  CHECK(zero_salted == once);

  auto st = BlowfishState::initial();
  CHECK_THROWS_AS(expand_key(st, ByteView{}), InvalidParameter);
  CHECK_THROWS_AS(expand_key(st, Bytes(73, 1)), InvalidParameter);
  CHECK_NOTHROW(expand_key(st, Bytes(72, 1)));
}
