#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hashvault/bytes.hpp"
#include "hashvault/sha1.hpp"

namespace hashvault::rainbow {

/// Fixed-length plaintexts over an ordered charset. Plaintext i is i written
/// in mixed radix |charset|, most significant character first.
class ReductionDomain {
 public:
  ReductionDomain(std::string charset, std::size_t length);

  const std::string& charset() const { return charset_; }
  std::size_t length() const { return length_; }
  std::uint64_t size() const { return size_; }

  std::string plaintext(std::uint64_t index) const;
  void write_plaintext(std::uint64_t index, std::span<char> out) const;
  std::optional<std::uint64_t> index_of(std::string_view plaintext) const;
  bool contains(std::string_view plaintext) const { return index_of(plaintext).has_value(); }

  bool operator==(const ReductionDomain& other) const {
    return charset_ == other.charset_ && length_ == other.length_;
  }

 private:
  std::string charset_;
  std::size_t length_;
  std::uint64_t size_;
  std::array<std::int16_t, 256> position_;
};

/// Everything that fixes the shape of a chain: plaintext domain, chain
/// length n, and the salt prefix baked into every hash (empty = unsalted).
struct ChainParams {
  ReductionDomain domain;
  std::uint32_t chain_length;
  Bytes salt;

  void validate() const;
  bool operator==(const ChainParams&) const = default;
};

/// Column-dependent reduction: (first 8 digest octets as big-endian integer
/// + column) mod |domain|.
std::uint64_t reduce_index(const Digest& digest, std::uint32_t column, std::uint64_t domain_size);
std::string reduce(const Digest& digest, std::uint32_t column, const ReductionDomain& domain);

/// One hash-then-reduce step in index space.
std::uint64_t chain_step(std::uint64_t index, std::uint32_t column, const ChainParams& params);

/// Applies `steps` hash/reduce steps starting at column 0.
std::string walk_chain(std::string_view start, std::uint32_t steps, const ChainParams& params);

struct ChainRecord {
  std::string start;
  std::string end;

  auto operator<=>(const ChainRecord&) const = default;
};

class RainbowTable {
 public:
  /// Sorts the records by (end, start) and indexes the endpoints. Every
  /// plaintext must lie in the domain.
  RainbowTable(ChainParams params, std::vector<ChainRecord> chains);

  const ChainParams& params() const { return params_; }
  const ReductionDomain& domain() const { return params_.domain; }
  std::uint32_t chain_length() const { return params_.chain_length; }
  const Bytes& salt() const { return params_.salt; }

  std::span<const ChainRecord> chains() const { return chains_; }
  std::size_t chain_count() const { return chains_.size(); }

  /// Records whose endpoint has the given domain index.
  std::span<const ChainRecord> chains_ending_at(std::uint64_t end_index) const;
  std::size_t distinct_endpoints() const { return index_.size(); }
  std::size_t duplicate_endpoints() const { return chains_.size() - index_.size(); }

  bool operator==(const RainbowTable& other) const {
    return params_ == other.params_ && chains_ == other.chains_;
  }

 private:
  ChainParams params_;
  std::vector<ChainRecord> chains_;
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> index_;
};

/// `count` distinct start indices: an affine walk offset + i*stride (mod
/// |domain|) with stride coprime to |domain|, both drawn from `seed`. The
/// first k starts for count m are the starts for count k.
std::vector<std::uint64_t> chain_start_indices(std::uint64_t domain_size, std::uint64_t count,
                                               std::uint64_t seed);

RainbowTable build_table(const ChainParams& params, std::uint64_t chain_count, std::uint64_t seed,
                         int jobs = 0);

struct CrackResult {
  bool found = false;
  std::optional<std::string> plaintext;
  std::uint64_t steps_examined = 0;  // hash/reduce steps walking suffixes to endpoints
  std::uint64_t false_alarms = 0;
  std::uint64_t hash_operations = 0;  // every SHA-1 evaluation, regeneration included
};

CrackResult lookup(const Digest& digest, const RainbowTable& table);

struct MemoryCost {
  std::uint64_t chain_bytes = 0;  // 2 * m * L, the endpoint-only storage
  std::uint64_t index_bytes = 0;  // in-memory endpoint index, reported apart
};

MemoryCost table_memory_cost(const RainbowTable& table);

/// Worst-case hash/reduce steps for one lookup: n(n+1)/2.
std::uint64_t lookup_work_bound(std::uint32_t chain_length);
inline std::uint64_t lookup_work_bound(const RainbowTable& table) {
  return lookup_work_bound(table.chain_length());
}

/// Domain indices that appear in columns 0..n-1 of some chain, found by
/// regenerating every chain. These are exactly the plaintexts whose digests
/// the table can crack. Returned sorted and unique.
std::vector<std::uint64_t> covered_indices(const RainbowTable& table);
double coverage(const RainbowTable& table);

// Binary table file ("RBT1"). Readers throw ParseError on bad magic, bad
// version, bad CRC, truncation, or records not sorted by endpoint.
Bytes serialize_table(const RainbowTable& table);
RainbowTable deserialize_table(ByteView data);
void save_table(const std::string& path, const RainbowTable& table);
RainbowTable load_table(const std::string& path);

namespace kernels {

std::vector<std::uint64_t> chain_ends_serial(const ChainParams& params,
                                             std::span<const std::uint64_t> starts);
std::vector<std::uint64_t> chain_ends_parallel(const ChainParams& params,
                                               std::span<const std::uint64_t> starts, int jobs);

}  // namespace kernels

}  // namespace hashvault::rainbow
