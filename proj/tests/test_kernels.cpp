#include <doctest.h>

#include <random>

#include "hashvault/attack.hpp"
#include "hashvault/mfcrypt.hpp"
#include "hashvault/parallel.hpp"
#include "hashvault/rainbow.hpp"
#include "support.hpp"

using namespace hashvault;

TEST_CASE("worker count resolution") {
  CHECK(effective_jobs(3) == 3);
  CHECK(effective_jobs(0) >= 1);
  CHECK(effective_jobs(-1) >= 1);
  MESSAGE("openmp " << (openmp_enabled() ? "on" : "off") << ", default jobs " << effective_jobs(0));
}

TEST_CASE("chain ends: serial and parallel agree") {
  rainbow::ChainParams params{rainbow::ReductionDomain("abcdefgh", 6), 64, to_bytes("k")};
  auto starts = rainbow::chain_start_indices(params.domain.size(), 257, 11);
  auto serial = rainbow::kernels::chain_ends_serial(params, starts);
  for (int jobs : {1, 2, 5})
    CHECK(rainbow::kernels::chain_ends_parallel(params, starts, jobs) == serial);
  for (std::size_t i = 0; i < starts.size(); i += 50)
    CHECK(params.domain.plaintext(serial[i]) ==
          rainbow::walk_chain(params.domain.plaintext(starts[i]), 64, params));
}

TEST_CASE("lookup_all: serial and parallel agree") {
  rainbow::ChainParams params{rainbow::ReductionDomain("0123456789", 4), 50, {}};
  auto table = rainbow::build_table(params, 100, 3);
  std::vector<Digest> digests;
  for (std::uint64_t i = 0; i < 400; ++i)
    digests.push_back(sha1_digest(as_bytes(params.domain.plaintext(i * 25))));
  auto serial = attack::kernels::lookup_all_serial(digests, table);
  auto parallel = attack::kernels::lookup_all_parallel(digests, table, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].found == parallel[i].found);
    CHECK(serial[i].plaintext == parallel[i].plaintext);
    CHECK(serial[i].steps_examined == parallel[i].steps_examined);
    CHECK(serial[i].false_alarms == parallel[i].false_alarms);
    CHECK(serial[i].hash_operations == parallel[i].hash_operations);
  }
}

TEST_CASE("salted sweep: serial and parallel agree") {
  vault::Vault v(vault::Scheme::sha1_salted(), vault::SaltSource(1), [] { return std::int64_t{0}; });
  for (int i = 0; i < 90; ++i) v.enroll("u" + std::to_string(i), as_bytes(i % 3 ? "abc" : "xyz"));
  v.enroll("b", as_bytes("abc"), vault::Scheme::with_bcrypt(4));
  auto records = v.records();
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < records.size(); i += 2) targets.push_back(i);
  targets.push_back(records.size() - 1);

  std::vector<std::uint8_t> hs, hp;
  auto ops_s = attack::kernels::salted_sweep_serial(records, targets, "abc", hs, std::nullopt);
  auto ops_p = attack::kernels::salted_sweep_parallel(records, targets, "abc", hp, std::nullopt, 3);
  CHECK(ops_s == targets.size());
  CHECK(ops_p == ops_s);
  CHECK(hs == hp);
  CHECK(hs.back() == 1);

  auto past = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK(attack::kernels::salted_sweep_serial(records, targets, "abc", hs, past) == 0);
  CHECK(attack::kernels::salted_sweep_parallel(records, targets, "abc", hp, past, 2) == 0);
}

TEST_CASE("mix blocks: serial and parallel agree") {
  std::mt19937_64 rng(3);
  std::vector<mfcrypt::MixBlock> blocks(7);
  for (auto& b : blocks)
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  std::vector<std::size_t> order{0, 1, 2, 3, 4, 5, 6};
  auto a = blocks, b = blocks;
  mfcrypt::RomixStats sa, sb;
  mfcrypt::kernels::mix_blocks_serial(a, 32, order, &sa);
  mfcrypt::kernels::mix_blocks_parallel(b, 32, order, &sb, 3);
  CHECK(a == b);
  CHECK(sa.phase1_mix_calls == sb.phase1_mix_calls);
  CHECK(sa.phase2_mix_calls == sb.phase2_mix_calls);
  CHECK(sa.stored_blocks == sb.stored_blocks);
  CHECK(sa.peak_live_blocks == sb.peak_live_blocks);
}
