#include "hashvault/rainbow.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "hashvault/errors.hpp"
#include "hashvault/parallel.hpp"

namespace hashvault::rainbow {

namespace {

using u128 = unsigned __int128;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::size_t kMaxPlaintext = 255;

}  // namespace

ReductionDomain::ReductionDomain(std::string charset, std::size_t length)
    : charset_(std::move(charset)), length_(length), size_(1) {
  if (charset_.empty()) throw InvalidParameter("charset must not be empty");
  if (charset_.size() > 255) throw InvalidParameter("charset longer than 255 characters");
  if (length_ == 0 || length_ > kMaxPlaintext)
    throw InvalidParameter("plaintext length must be in 1..255");

  position_.fill(-1);
  for (std::size_t i = 0; i < charset_.size(); ++i) {
    auto c = static_cast<std::uint8_t>(charset_[i]);
    if (position_[c] >= 0) throw InvalidParameter("charset contains duplicate characters");
    position_[c] = static_cast<std::int16_t>(i);
  }

  for (std::size_t i = 0; i < length_; ++i) {
    u128 next = u128{size_} * charset_.size();
    if (next > UINT64_MAX) throw InvalidParameter("domain size exceeds 64 bits");
    size_ = static_cast<std::uint64_t>(next);
  }
}

void ReductionDomain::write_plaintext(std::uint64_t index, std::span<char> out) const {
  const std::uint64_t base = charset_.size();
  for (std::size_t pos = length_; pos-- > 0;) {
    out[pos] = charset_[index % base];
    index /= base;
  }
}

std::string ReductionDomain::plaintext(std::uint64_t index) const {
  if (index >= size_) throw InvalidParameter("domain index out of range");
  std::string out(length_, '\0');
  write_plaintext(index, out);
  return out;
}

std::optional<std::uint64_t> ReductionDomain::index_of(std::string_view plaintext) const {
  if (plaintext.size() != length_) return std::nullopt;
  std::uint64_t index = 0;
  for (char c : plaintext) {
    auto pos = position_[static_cast<std::uint8_t>(c)];
    if (pos < 0) return std::nullopt;
    index = index * charset_.size() + static_cast<std::uint64_t>(pos);
  }
  return index;
}

void ChainParams::validate() const {
  if (chain_length == 0) throw InvalidParameter("chain length must be >= 1");
  if (salt.size() > 255) throw InvalidParameter("salt longer than 255 octets");
}

std::uint64_t reduce_index(const Digest& digest, std::uint32_t column, std::uint64_t domain_size) {
  u128 x = u128{load_be64(digest.bytes.data())} + column;
  return static_cast<std::uint64_t>(x % domain_size);
}

std::string reduce(const Digest& digest, std::uint32_t column, const ReductionDomain& domain) {
  return domain.plaintext(reduce_index(digest, column, domain.size()));
}

std::uint64_t chain_step(std::uint64_t index, std::uint32_t column, const ChainParams& params) {
  std::array<char, kMaxPlaintext> buf;
  const auto len = params.domain.length();
  params.domain.write_plaintext(index, std::span<char>(buf.data(), len));
  auto d = sha1_digest(params.salt, as_bytes(std::string_view(buf.data(), len)));
  return reduce_index(d, column, params.domain.size());
}

std::string walk_chain(std::string_view start, std::uint32_t steps, const ChainParams& params) {
  auto index = params.domain.index_of(start);
  if (!index) throw InvalidParameter("chain start is outside the domain");
  if (steps > params.chain_length) throw InvalidParameter("steps exceed chain length");
  std::uint64_t i = *index;
  for (std::uint32_t col = 0; col < steps; ++col) i = chain_step(i, col, params);
  return params.domain.plaintext(i);
}

RainbowTable::RainbowTable(ChainParams params, std::vector<ChainRecord> chains)
    : params_(std::move(params)), chains_(std::move(chains)) {
  params_.validate();
  std::sort(chains_.begin(), chains_.end(),
            [](const ChainRecord& a, const ChainRecord& b) {
              return std::tie(a.end, a.start) < std::tie(b.end, b.start);
            });
  for (std::size_t i = 0; i < chains_.size(); ++i) {
    if (!domain().contains(chains_[i].start))
      throw InvalidParameter("chain start is outside the domain");
    auto end = domain().index_of(chains_[i].end);
    if (!end) throw InvalidParameter("chain end is outside the domain");
    auto [it, inserted] = index_.try_emplace(*end, i, i + 1);
    if (!inserted) it->second.second = i + 1;
  }
}

std::span<const ChainRecord> RainbowTable::chains_ending_at(std::uint64_t end_index) const {
  auto it = index_.find(end_index);
  if (it == index_.end()) return {};
  return std::span<const ChainRecord>(chains_).subspan(it->second.first,
                                                       it->second.second - it->second.first);
}

std::vector<std::uint64_t> chain_start_indices(std::uint64_t domain_size, std::uint64_t count,
                                               std::uint64_t seed) {
  if (domain_size == 0) throw InvalidParameter("empty domain");
  if (count > domain_size) throw InvalidParameter("domain too small for the requested chain count");

  std::uint64_t state = seed;
  const std::uint64_t offset = splitmix64(state) % domain_size;
  std::uint64_t stride = 1;
  if (domain_size > 1) {
    stride = splitmix64(state) % (domain_size - 1) + 1;
    while (std::gcd(stride, domain_size) != 1) stride = stride % (domain_size - 1) + 1;
  }

  std::vector<std::uint64_t> starts(count);
  for (std::uint64_t i = 0; i < count; ++i)
    starts[i] = static_cast<std::uint64_t>((u128{offset} + u128{i} * stride) % domain_size);
  return starts;
}

namespace kernels {

std::vector<std::uint64_t> chain_ends_serial(const ChainParams& params,
                                             std::span<const std::uint64_t> starts) {
  std::vector<std::uint64_t> ends(starts.size());
  for (std::size_t c = 0; c < starts.size(); ++c) {
    std::uint64_t i = starts[c];
    for (std::uint32_t col = 0; col < params.chain_length; ++col) i = chain_step(i, col, params);
    ends[c] = i;
  }
  return ends;
}

std::vector<std::uint64_t> chain_ends_parallel(const ChainParams& params,
                                               std::span<const std::uint64_t> starts, int jobs) {
  std::vector<std::uint64_t> ends(starts.size());
  const auto count = static_cast<std::int64_t>(starts.size());
  const std::uint32_t n = params.chain_length;
#pragma omp parallel for schedule(static) num_threads(effective_jobs(jobs))
  for (std::int64_t c = 0; c < count; ++c) {
    std::uint64_t i = starts[c];
    for (std::uint32_t col = 0; col < n; ++col) i = chain_step(i, col, params);
    ends[c] = i;
  }
  return ends;
}

}  // namespace kernels

RainbowTable build_table(const ChainParams& params, std::uint64_t chain_count, std::uint64_t seed,
                         int jobs) {
  params.validate();
  if (chain_count == 0) throw InvalidParameter("chain count must be >= 1");

  auto starts = chain_start_indices(params.domain.size(), chain_count, seed);
  auto ends = effective_jobs(jobs) == 1 ? kernels::chain_ends_serial(params, starts)
                                        : kernels::chain_ends_parallel(params, starts, jobs);

  std::vector<ChainRecord> records;
  records.reserve(chain_count);
  for (std::size_t c = 0; c < starts.size(); ++c)
    records.push_back({params.domain.plaintext(starts[c]), params.domain.plaintext(ends[c])});
  return RainbowTable(params, std::move(records));
}

CrackResult lookup(const Digest& digest, const RainbowTable& table) {
  CrackResult result;
  if (table.chain_count() == 0) return result;

  const auto& params = table.params();
  const auto& domain = table.domain();
  const std::uint32_t n = table.chain_length();

  for (std::uint32_t col = n; col-- > 0;) {
    std::uint64_t end = reduce_index(digest, col, domain.size());
    ++result.steps_examined;
    for (std::uint32_t k = col + 1; k < n; ++k) {
      end = chain_step(end, k, params);
      ++result.steps_examined;
      ++result.hash_operations;
    }

    for (const auto& record : table.chains_ending_at(end)) {
      std::uint64_t p = *domain.index_of(record.start);
      for (std::uint32_t k = 0; k < col; ++k) p = chain_step(p, k, params);
      result.hash_operations += col + 1;

      auto candidate = domain.plaintext(p);
      if (sha1_digest(params.salt, as_bytes(candidate)) == digest) {
        result.found = true;
        result.plaintext = std::move(candidate);
        return result;
      }
      ++result.false_alarms;
    }
  }
  return result;
}

MemoryCost table_memory_cost(const RainbowTable& table) {
  MemoryCost cost;
  cost.chain_bytes = 2ULL * table.chain_count() * table.domain().length();
  cost.index_bytes = table.distinct_endpoints() * (sizeof(std::uint64_t) + 2 * sizeof(std::size_t));
  return cost;
}

std::uint64_t lookup_work_bound(std::uint32_t chain_length) {
  return std::uint64_t{chain_length} * (std::uint64_t{chain_length} + 1) / 2;
}

std::vector<std::uint64_t> covered_indices(const RainbowTable& table) {
  const auto& params = table.params();
  std::vector<std::uint64_t> covered;
  covered.reserve(table.chain_count() * table.chain_length());
  for (const auto& record : table.chains()) {
    std::uint64_t p = *table.domain().index_of(record.start);
    for (std::uint32_t col = 0; col < table.chain_length(); ++col) {
      covered.push_back(p);
      p = chain_step(p, col, params);
    }
  }
  std::sort(covered.begin(), covered.end());
  covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
  return covered;
}

double coverage(const RainbowTable& table) {
  return static_cast<double>(covered_indices(table).size()) /
         static_cast<double>(table.domain().size());
}

}  // namespace hashvault::rainbow
