#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hashvault/bytes.hpp"

namespace hashvault::mfcrypt {

/// Width of one mixed block (MFLen), in octets.
inline constexpr std::size_t kBlockBytes = 128;
using MixBlock = std::array<std::uint8_t, kBlockBytes>;

inline constexpr std::uint32_t kMaxLog2N = 24;
inline constexpr std::uint64_t kDefaultMemoryCap = std::uint64_t{1} << 30;

/// N = 2^log2_n stored blocks per romix, p independent blocks, dk_len
/// output octets.
struct MfParams {
  std::uint32_t log2_n = 14;
  std::uint32_t p = 1;
  std::size_t dk_len = 32;

  std::uint64_t n() const { return std::uint64_t{1} << log2_n; }

  /// Throws InvalidParameter unless 1 <= log2_n <= 24, p >= 1, dk_len >= 1.
  void validate() const;

  bool operator==(const MfParams&) const = default;
};

/// Project-defined wide-block mixer built on the SHA-1 compression function:
/// two Feistel rounds over the 64-octet halves, lo ^= E(hi) then
/// hi ^= E(lo), where E(h) is the first 64 octets of four compressions of
/// h under the SHA-1 IV with its first word XORed by 0..3.
MixBlock block_mix(const MixBlock& block);

struct RomixStats {
  std::uint64_t stored_blocks = 0;     // size of the V table at its peak
  std::uint64_t peak_live_blocks = 0;  // V plus the working blocks
  std::uint64_t phase1_mix_calls = 0;
  std::uint64_t phase2_mix_calls = 0;

  RomixStats& operator+=(const RomixStats& other);
};

/// Sequential memory-hard mixing. Phase 1 stores V_0..V_{N-1} with
/// V_0 = block and V_{j+1} = H(V_j); phase 2 runs N data-dependent steps
/// X = H(X ^ V[integerify(X) mod N]). N must be a power of two.
MixBlock romix(const MixBlock& block, std::uint64_t n, RomixStats* stats = nullptr);

/// Little-endian integer from the last 8 octets.
std::uint64_t integerify(const MixBlock& block);

/// Throws ResourceLimit when `concurrent` romix tables of N blocks would
/// exceed `memory_cap` bytes.
void check_memory_budget(std::uint64_t n, std::uint64_t concurrent, std::uint64_t memory_cap);

struct MfcryptOptions {
  int jobs = 0;
  std::uint64_t memory_cap = kDefaultMemoryCap;
  RomixStats* stats = nullptr;  // mix calls summed over the p blocks, block counts per romix
};

/// B_0..B_{p-1} = PBKDF2(P, S, 1, p*MFLen); B_i = romix(B_i, N);
/// DK = PBKDF2(P, B_0 || ... || B_{p-1}, 1, dk_len).
Bytes mfcrypt(ByteView password, ByteView salt, const MfParams& params,
              const MfcryptOptions& options = {});

/// Record text: `$mfc$N=<log2 N>,p=<p>$<hex salt>$<hex dk>`. dk_len is the
/// length of the stored key.
struct MfcryptRecord {
  MfParams params;
  Bytes salt;
  Bytes dk;

  std::string to_string() const;
  static MfcryptRecord parse(std::string_view text);

  bool operator==(const MfcryptRecord&) const = default;
};

MfcryptRecord mfcrypt_hash(ByteView password, ByteView salt, const MfParams& params,
                           const MfcryptOptions& options = {});
bool mfcrypt_verify(ByteView password, const MfcryptRecord& record,
                    const MfcryptOptions& options = {});

namespace kernels {

/// Mixes every block in place. `order` lists the block indices in the
/// order they are scheduled; the result does not depend on it.
void mix_blocks_serial(std::span<MixBlock> blocks, std::uint64_t n,
                       std::span<const std::size_t> order, RomixStats* stats);
void mix_blocks_parallel(std::span<MixBlock> blocks, std::uint64_t n,
                         std::span<const std::size_t> order, RomixStats* stats, int jobs);

}  // namespace kernels

}  // namespace hashvault::mfcrypt
