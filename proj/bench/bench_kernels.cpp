// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "hashvault/attack.hpp"
#include "hashvault/mfcrypt.hpp"
#include "hashvault/parallel.hpp"
#include "hashvault/rainbow.hpp"

using namespace hashvault;

namespace {

const rainbow::ChainParams& chain_params() {
  static const rainbow::ChainParams params{rainbow::ReductionDomain("0123456789", 6), 200, {}};
  return params;
}

const std::vector<std::uint64_t>& chain_starts() {
  static const auto starts = rainbow::chain_start_indices(chain_params().domain.size(), 2000, 1);
  return starts;
}

void BM_ChainEndsSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(rainbow::kernels::chain_ends_serial(chain_params(), chain_starts()));
  state.SetItemsProcessed(state.iterations() * chain_starts().size() * chain_params().chain_length);
}

void BM_ChainEndsParallel(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(rainbow::kernels::chain_ends_parallel(chain_params(), chain_starts(), jobs));
  state.SetItemsProcessed(state.iterations() * chain_starts().size() * chain_params().chain_length);
}

const rainbow::RainbowTable& lookup_table() {
  static const auto table =
      rainbow::build_table({rainbow::ReductionDomain("0123456789", 4), 100, {}}, 200, 2012);
  return table;
}

const std::vector<Digest>& lookup_digests() {
  static const auto digests = [] {
    std::vector<Digest> d;
    for (std::uint64_t i = 0; i < 10000; i += 20)
      d.push_back(sha1_digest(as_bytes(lookup_table().domain().plaintext(i))));
    return d;
  }();
  return digests;
}

void BM_LookupAllSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(attack::kernels::lookup_all_serial(lookup_digests(), lookup_table()));
  state.SetItemsProcessed(state.iterations() * lookup_digests().size());
}

void BM_LookupAllParallel(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        attack::kernels::lookup_all_parallel(lookup_digests(), lookup_table(), jobs));
  state.SetItemsProcessed(state.iterations() * lookup_digests().size());
}

struct SweepFixture {
  std::vector<vault::CredentialRecord> records;
  std::vector<std::size_t> targets;
  SweepFixture() {
    vault::Vault v(vault::Scheme::sha1_salted(), vault::SaltSource(1), [] { return std::int64_t{0}; });
    for (int i = 0; i < 20000; ++i) v.enroll("u" + std::to_string(i), as_bytes("pw" + std::to_string(i)));
    records = v.records();
    for (std::size_t i = 0; i < records.size(); ++i) targets.push_back(i);
  }
};

const SweepFixture& sweep() {
  static const SweepFixture f;
  return f;
}

void BM_SaltedSweepSerial(benchmark::State& state) {
  std::vector<std::uint8_t> hit;
  for (auto _ : state)
    benchmark::DoNotOptimize(attack::kernels::salted_sweep_serial(sweep().records, sweep().targets,
                                                                  "123456", hit, std::nullopt));
  state.SetItemsProcessed(state.iterations() * sweep().targets.size());
}

void BM_SaltedSweepParallel(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  std::vector<std::uint8_t> hit;
  for (auto _ : state)
    benchmark::DoNotOptimize(attack::kernels::salted_sweep_parallel(
        sweep().records, sweep().targets, "123456", hit, std::nullopt, jobs));
  state.SetItemsProcessed(state.iterations() * sweep().targets.size());
}

std::vector<mfcrypt::MixBlock> mix_input() {
  std::mt19937_64 rng(1);
  std::vector<mfcrypt::MixBlock> blocks(8);
  for (auto& b : blocks)
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return blocks;
}

const std::vector<std::size_t> kMixOrder{0, 1, 2, 3, 4, 5, 6, 7};

void BM_MixBlocksSerial(benchmark::State& state) {
  const auto input = mix_input();
  for (auto _ : state) {
    auto blocks = input;
    mfcrypt::kernels::mix_blocks_serial(blocks, 1 << 12, kMixOrder, nullptr);
    benchmark::DoNotOptimize(blocks);
  }
  state.SetItemsProcessed(state.iterations() * input.size());
}

void BM_MixBlocksParallel(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  const auto input = mix_input();
  for (auto _ : state) {
    auto blocks = input;
    mfcrypt::kernels::mix_blocks_parallel(blocks, 1 << 12, kMixOrder, nullptr, jobs);
    benchmark::DoNotOptimize(blocks);
  }
  state.SetItemsProcessed(state.iterations() * input.size());
}

void jobs_args(benchmark::internal::Benchmark* b) {
  const int max = effective_jobs(0);
  for (int j = 1; j < max; j *= 2) b->Arg(j);
  b->Arg(max);
}

}  // namespace

BENCHMARK(BM_ChainEndsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChainEndsParallel)->Apply(jobs_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LookupAllSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LookupAllParallel)->Apply(jobs_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SaltedSweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SaltedSweepParallel)->Apply(jobs_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MixBlocksSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MixBlocksParallel)->Apply(jobs_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
