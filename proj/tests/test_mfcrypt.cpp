#include <doctest.h>

#include <cstring>
#include <random>

#include "hashvault/errors.hpp"
#include "hashvault/hmac.hpp"
#include "hashvault/mfcrypt.hpp"
#include "hashvault/sha1.hpp"
#include "support.hpp"

using namespace hashvault;
using namespace hashvault::mfcrypt;

namespace {

MixBlock counting_block() {
  MixBlock b;
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::uint8_t>(i);
  return b;
}

// Four compressions of the 64-byte half under IVs whose first word is
// xored with 0..3; the first 64 of the 80 output bytes.
std::array<std::uint8_t, 64> expansion(const std::uint8_t* half) {
  std::array<std::uint8_t, 80> wide{};
  for (std::uint32_t c = 0; c < 4; ++c) {
    Sha1State st = kSha1InitialState;
    st[0] ^= c;
    sha1_compress(st, std::span<const std::uint8_t, 64>(half, 64));
    for (int w = 0; w < 5; ++w) store_be32(wide.data() + 20 * c + 4 * w, st[w]);
  }
  std::array<std::uint8_t, 64> out;
  std::memcpy(out.data(), wide.data(), 64);
  return out;
}

MixBlock oracle_mix(MixBlock b) {
  auto e_hi = expansion(b.data() + 64);
  for (int i = 0; i < 64; ++i) b[i] ^= e_hi[i];
  auto e_lo = expansion(b.data());
  for (int i = 0; i < 64; ++i) b[64 + i] ^= e_lo[i];
  return b;
}

MixBlock xored(MixBlock a, const MixBlock& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
  return a;
}

std::uint64_t le_tail(const MixBlock& b) {
  std::uint64_t v = 0;
  for (int i = 127; i >= 120; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

TEST_CASE("block_mix pinned and by construction") {
  const auto b = counting_block();
  CHECK(to_hex(block_mix(b)) ==
        "0345da53507885b7223575aef44bb45df9a3f0ba62c0a2330539398742ad39476729ea552a81164d687c09db"
        "5eb9e09190479d8a6598c2b7d627d46fd70cb448f20295d53e69557bffb6de5e8819b4b497d1c9d961c1f80e"
        "6bef95b14817aaf2feda0977b54764df2164594c31b35f46be67f7a5b4924cacea1211c5454307d7");
  CHECK(block_mix(b) == oracle_mix(b));
}

TEST_CASE("block_mix bit sensitivity") {
  std::mt19937_64 rng(31);
  int unchanged = 0;
  for (int i = 0; i < 100; ++i) {
    MixBlock b;
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    auto flipped = b;
    flipped[rng() % 128] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    unchanged += block_mix(b) == block_mix(flipped);
    CHECK(block_mix(b) == oracle_mix(b));
  }
  CHECK(unchanged == 0);
}

TEST_CASE("integerify reads the last eight octets little-endian") {
  auto b = counting_block();
  CHECK(integerify(b) == 0x7f7e7d7c7b7a7978ull);
  CHECK(integerify(b) == le_tail(b));
}

TEST_CASE("romix with N = 2 unrolled") {
  const auto b = counting_block();
  const MixBlock v0 = b;
  const MixBlock v1 = oracle_mix(v0);
  MixBlock x = oracle_mix(v1);
  x = oracle_mix(xored(x, le_tail(x) % 2 ? v1 : v0));
  x = oracle_mix(xored(x, le_tail(x) % 2 ? v1 : v0));
  CHECK(romix(b, 2) == x);
  CHECK(to_hex(x) ==
        "992f8bf5c1f0a95ffefb24e7fc417b37f0bb01d62cc8261d2fa304008e4d3013eee9520056bc9194140284da"
        "59e33222aec049a01a5c94b3f0708f09a7c6fc87491771e2a1a8962652db75afe1f274ba61e0042e900b0078"
        "85f3453735797a8ae49bf4d7b897bd8af281635af25134455b58213d3d976ea3c03c982348ff45e2");
  CHECK(to_hex(romix(b, 16)) ==
        "848c3eea4b7bc7ac06bea022ae2eebaba84c1e5528bb01f853cf10e811322c7d1312791c464ec495dfa80b7b"
        "4e497492aa6844b1a52400f33a9b7e088969c4574fb4f8de8f7d5f3b925fb06fa98ebc49b4628e5b8a4ef619"
        "f3c9137da76524f08503dd7ce07e9effbb5df8379e449a075294b3d7fe7390d1136849877851c21a");
  CHECK_THROWS_AS(romix(b, 3), InvalidParameter);
  CHECK_THROWS_AS(romix(b, 0), InvalidParameter);
}

TEST_CASE("romix instrumentation") {
  RomixStats prev;
  for (std::uint64_t n : {2u, 64u, 4096u}) {
    RomixStats s;
    romix(counting_block(), n, &s);
    CHECK(s.stored_blocks == n);
    CHECK(s.peak_live_blocks == n + 2);
    CHECK(s.phase1_mix_calls == n);
    CHECK(s.phase2_mix_calls == n);
  }
  RomixStats a, b;
  romix(counting_block(), 1024, &a);
  romix(counting_block(), 2048, &b);
  CHECK(b.stored_blocks == 2 * a.stored_blocks);
  CHECK(b.phase2_mix_calls == 2 * a.phase2_mix_calls);
}

TEST_CASE("mfcrypt oracle values") {
  CHECK(to_hex(mfcrypt::mfcrypt(as_bytes("pleaseletmein"), as_bytes("SodiumChloride"), {1, 1, 16})) ==
        "2e5cbfb7cbf20e9dd693dcd7533c067e");
  CHECK(to_hex(mfcrypt::mfcrypt(as_bytes("pleaseletmein"), as_bytes("SodiumChloride"), {1, 2, 32})) ==
        "6bcf9883e176c07c00139bb817cd043ed7674f3dbe0c51d43bc6d4169c82e880");
  CHECK(to_hex(mfcrypt::mfcrypt(as_bytes("password"), as_bytes("salt"), {10, 2, 32})) ==
        "0d6153a9b1616fbbdb4b88731700003cec437a58d89bde45ad33cefb7fd41c1f");
}

TEST_CASE("pipeline by hand, p = 1 and p = 2") {
  for (std::uint32_t p : {1u, 2u}) {
    auto pre = pbkdf2(as_bytes("pleaseletmein"), as_bytes("SodiumChloride"), 1, p * 128);
    Bytes joined;
    for (std::uint32_t i = 0; i < p; ++i) {
      MixBlock bi;
      std::memcpy(bi.data(), pre.data() + 128 * i, 128);
      auto mixed = romix(bi, 2);
      joined.insert(joined.end(), mixed.begin(), mixed.end());
    }
    auto dk = pbkdf2(as_bytes("pleaseletmein"), joined, 1, 24);
    CHECK(mfcrypt::mfcrypt(as_bytes("pleaseletmein"), as_bytes("SodiumChloride"), {1, p, 24}) == dk);
  }
}

TEST_CASE("dk_len only changes the final expansion") {
  auto long_dk = mfcrypt::mfcrypt(as_bytes("pw"), as_bytes("salt"), {4, 2, 64});
  auto short_dk = mfcrypt::mfcrypt(as_bytes("pw"), as_bytes("salt"), {4, 2, 32});
  CHECK(long_dk.size() == 64);
  CHECK(Bytes(long_dk.begin(), long_dk.begin() + 32) == short_dk);
}

TEST_CASE("salt octet sensitivity") {
  std::mt19937_64 rng(37);
  Bytes salt = testing::random_bytes(rng, 16);
  auto base = mfcrypt::mfcrypt(as_bytes("pw"), salt, {3, 1, 32});
  int unchanged = 0;
  for (int i = 0; i < 100; ++i) {
    auto s = salt;
    s[rng() % 16] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    unchanged += mfcrypt::mfcrypt(as_bytes("pw"), s, {3, 1, 32}) == base;
  }
  CHECK(unchanged == 0);
}

TEST_CASE("worker count and block order do not matter") {
  MfParams params{6, 5, 40};
  auto one = mfcrypt::mfcrypt(as_bytes("pw"), as_bytes("s"), params, {.jobs = 1});
  CHECK(mfcrypt::mfcrypt(as_bytes("pw"), as_bytes("s"), params, {.jobs = 3}) == one);

  std::mt19937_64 rng(41);
  std::vector<MixBlock> blocks(6);
  for (auto& b : blocks)
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  auto forward = blocks, backward = blocks;
  std::vector<std::size_t> fwd{0, 1, 2, 3, 4, 5}, bwd{5, 3, 1, 4, 2, 0};
  RomixStats sf, sb;
  kernels::mix_blocks_serial(forward, 16, fwd, &sf);
  kernels::mix_blocks_parallel(backward, 16, bwd, &sb, 4);
  CHECK(forward == backward);
  CHECK(sf.phase2_mix_calls == 6 * 16);
  CHECK(sb.phase2_mix_calls == sf.phase2_mix_calls);
  CHECK(sb.stored_blocks == 16);
}

TEST_CASE("parameter validation and memory cap") {
  CHECK_THROWS_AS(MfParams({0, 1, 32}).validate(), InvalidParameter);
  CHECK_THROWS_AS(MfParams({25, 1, 32}).validate(), InvalidParameter);
  CHECK_THROWS_AS(MfParams({4, 0, 32}).validate(), InvalidParameter);
  CHECK_THROWS_AS(MfParams({4, 1, 0}).validate(), InvalidParameter);
  CHECK_NOTHROW(MfParams({24, 1, 1}).validate());

  CHECK_THROWS_AS(mfcrypt::mfcrypt(as_bytes("pw"), as_bytes("s"), {10, 1, 32}, {.memory_cap = 1024}),
                  ResourceLimit);
  CHECK_THROWS_AS(check_memory_budget(1u << 24, 1, kDefaultMemoryCap), ResourceLimit);
  CHECK_NOTHROW(check_memory_budget(1u << 23, 1, kDefaultMemoryCap));
}

TEST_CASE("records") {
  auto rec = mfcrypt_hash(as_bytes("pw"), as_bytes("0123456789abcdef"), {5, 2, 20});
  auto text = rec.to_string();
  CHECK(text.starts_with("$mfc$N=5,p=2$30313233343536373839616263646566$"));
  CHECK(MfcryptRecord::parse(text) == rec);
  CHECK(mfcrypt_verify(as_bytes("pw"), rec));
  CHECK_FALSE(mfcrypt_verify(as_bytes("pX"), rec));
  CHECK_THROWS_AS(MfcryptRecord::parse("$mfc$N=5$00$00"), ParseError);
  CHECK_THROWS_AS(MfcryptRecord::parse("$scrypt$N=5,p=2$00$00"), ParseError);
  CHECK_THROWS_AS(MfcryptRecord::parse("$mfc$N=5,p=2$zz$00"), ParseError);
}
