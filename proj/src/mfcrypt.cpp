#include "hashvault/mfcrypt.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <numeric>

#include "hashvault/errors.hpp"
#include "hashvault/hmac.hpp"
#include "hashvault/parallel.hpp"
#include "hashvault/sha1.hpp"

namespace hashvault::mfcrypt {

namespace {

constexpr std::size_t kHalf = kBlockBytes / 2;

// XORs E(half) into target.
void xor_expansion(std::span<const std::uint8_t, kHalf> half, std::uint8_t* target) {
  std::array<std::uint8_t, 80> expanded;
  for (std::uint32_t c = 0; c < 4; ++c) {
    Sha1State st = kSha1InitialState;
    st[0] ^= c;
    sha1_compress(st, half);
    for (int w = 0; w < 5; ++w) store_be32(expanded.data() + 20 * c + 4 * w, st[w]);
  }
  for (std::size_t i = 0; i < kHalf; ++i) target[i] ^= expanded[i];
}

void xor_into(MixBlock& x, const MixBlock& v) {
  for (std::size_t i = 0; i < kBlockBytes; ++i) x[i] ^= v[i];
}

}  // namespace

void MfParams::validate() const {
  if (log2_n < 1 || log2_n > kMaxLog2N)
    throw InvalidParameter("log2 N must be in [1, 24], got " + std::to_string(log2_n));
  if (p < 1) throw InvalidParameter("p must be >= 1");
  if (dk_len < 1) throw InvalidParameter("dk_len must be >= 1");
}

RomixStats& RomixStats::operator+=(const RomixStats& other) {
  stored_blocks = std::max(stored_blocks, other.stored_blocks);
  peak_live_blocks = std::max(peak_live_blocks, other.peak_live_blocks);
  phase1_mix_calls += other.phase1_mix_calls;
  phase2_mix_calls += other.phase2_mix_calls;
  return *this;
}

MixBlock block_mix(const MixBlock& block) {
  MixBlock out = block;
  std::span<const std::uint8_t, kHalf> hi(out.data() + kHalf, kHalf);
  std::span<const std::uint8_t, kHalf> lo(out.data(), kHalf);
  xor_expansion(hi, out.data());
  xor_expansion(lo, out.data() + kHalf);
  return out;
}

std::uint64_t integerify(const MixBlock& block) { return load_le64(block.data() + kBlockBytes - 8); }

MixBlock romix(const MixBlock& block, std::uint64_t n, RomixStats* stats) {
  if (n == 0 || (n & (n - 1)) != 0) throw InvalidParameter("romix N must be a power of two");

  std::vector<MixBlock> v;
  v.reserve(n);
  MixBlock x = block;
  for (std::uint64_t i = 0; i < n; ++i) {
    v.push_back(x);
    x = block_mix(x);
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    xor_into(x, v[integerify(x) & (n - 1)]);
    x = block_mix(x);
  }

  if (stats) {
    // V, the running X, and the temporary inside block_mix.
    RomixStats s{v.size(), v.size() + 2, n, n};
    *stats += s;
  }
  return x;
}

void check_memory_budget(std::uint64_t n, std::uint64_t concurrent, std::uint64_t memory_cap) {
  const unsigned __int128 need = static_cast<unsigned __int128>(n) * kBlockBytes * concurrent;
  if (need > memory_cap)
    throw ResourceLimit("mfcrypt would need " + std::to_string(static_cast<std::uint64_t>(need)) +
                        " bytes, above the cap of " + std::to_string(memory_cap));
}

namespace kernels {

void mix_blocks_serial(std::span<MixBlock> blocks, std::uint64_t n,
                       std::span<const std::size_t> order, RomixStats* stats) {
  for (auto i : order) blocks[i] = romix(blocks[i], n, stats);
}

void mix_blocks_parallel(std::span<MixBlock> blocks, std::uint64_t n,
                         std::span<const std::size_t> order, RomixStats* stats, int jobs) {
  std::vector<RomixStats> per_block(order.size());
  const auto count = static_cast<std::int64_t>(order.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(effective_jobs(jobs))
  for (std::int64_t k = 0; k < count; ++k) {
    const auto i = order[static_cast<std::size_t>(k)];
    blocks[i] = romix(blocks[i], n, &per_block[static_cast<std::size_t>(k)]);
  }
  if (stats)
    for (const auto& s : per_block) *stats += s;
}

}  // namespace kernels

Bytes mfcrypt(ByteView password, ByteView salt, const MfParams& params,
              const MfcryptOptions& options) {
  params.validate();
  const int jobs = effective_jobs(options.jobs);
  check_memory_budget(params.n(), std::min<std::uint64_t>(params.p, jobs), options.memory_cap);

  const Bytes pre = pbkdf2(password, salt, 1, params.p * kBlockBytes);
  std::vector<MixBlock> blocks(params.p);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    std::memcpy(blocks[i].data(), pre.data() + i * kBlockBytes, kBlockBytes);

  std::vector<std::size_t> order(params.p);
  std::iota(order.begin(), order.end(), 0);
  if (jobs == 1 || params.p == 1)
    kernels::mix_blocks_serial(blocks, params.n(), order, options.stats);
  else
    kernels::mix_blocks_parallel(blocks, params.n(), order, options.stats, jobs);

  Bytes joined;
  joined.reserve(params.p * kBlockBytes);
  for (const auto& b : blocks) joined.insert(joined.end(), b.begin(), b.end());
  return pbkdf2(password, joined, 1, params.dk_len);
}

MfcryptRecord mfcrypt_hash(ByteView password, ByteView salt, const MfParams& params,
                           const MfcryptOptions& options) {
  return {params, Bytes(salt.begin(), salt.end()), mfcrypt(password, salt, params, options)};
}

bool mfcrypt_verify(ByteView password, const MfcryptRecord& record,
                    const MfcryptOptions& options) {
  return constant_time_equal(mfcrypt(password, record.salt, record.params, options), record.dk);
}

std::string MfcryptRecord::to_string() const {
  return "$mfc$N=" + std::to_string(params.log2_n) + ",p=" + std::to_string(params.p) + "$" +
         to_hex(salt) + "$" + to_hex(dk);
}

namespace {

std::uint32_t parse_u32(std::string_view text, std::string_view what) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError("malformed mfcrypt " + std::string(what));
  return v;
}

}  // namespace

MfcryptRecord MfcryptRecord::parse(std::string_view text) {
  constexpr std::string_view kPrefix = "$mfc$N=";
  if (!text.starts_with(kPrefix)) throw ParseError("malformed mfcrypt record");
  text.remove_prefix(kPrefix.size());

  auto comma = text.find(",p=");
  auto dollar1 = text.find('$');
  if (comma == std::string_view::npos || dollar1 == std::string_view::npos || comma > dollar1)
    throw ParseError("malformed mfcrypt record");
  auto dollar2 = text.find('$', dollar1 + 1);
  if (dollar2 == std::string_view::npos || text.find('$', dollar2 + 1) != std::string_view::npos)
    throw ParseError("malformed mfcrypt record");

  MfcryptRecord record;
  record.params.log2_n = parse_u32(text.substr(0, comma), "N");
  record.params.p = parse_u32(text.substr(comma + 3, dollar1 - comma - 3), "p");
  record.salt = from_hex(text.substr(dollar1 + 1, dollar2 - dollar1 - 1));
  record.dk = from_hex(text.substr(dollar2 + 1));
  record.params.dk_len = record.dk.size();
  try {
    record.params.validate();
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
  return record;
}

}  // namespace hashvault::mfcrypt
