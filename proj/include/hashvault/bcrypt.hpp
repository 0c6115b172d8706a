#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "hashvault/blowfish.hpp"
#include "hashvault/bytes.hpp"

namespace hashvault::bcrypt {

/// Work factor; EksBlowfish runs 2^cost expansion rounds.
class CostParameter {
 public:
  static constexpr int kMin = 4;
  static constexpr int kMax = 31;

  /// Throws InvalidParameter outside [4, 31].
  explicit CostParameter(int cost);

  int value() const { return cost_; }
  std::uint64_t iterations() const { return std::uint64_t{1} << cost_; }

  auto operator<=>(const CostParameter&) const = default;

 private:
  int cost_;
};

/// Order of the two zero-salt expansions inside the cost loop. The default
/// expands with the salt first, then the key. Deployed bcrypt
/// implementations use the opposite order; that variant exists so the
/// cipher and schedule can be checked against published vectors.
enum class LoopOrder { salt_then_key, key_then_salt };

struct SetupOptions {
  LoopOrder order = LoopOrder::salt_then_key;
  std::uint64_t* expand_key_calls = nullptr;  // incremented per ExpandKey
};

/// InitState, one salted ExpandKey, then 2^cost rounds of the two
/// zero-salt expansions.
BlowfishState eksblowfish_setup(CostParameter cost, const Salt& salt, ByteView key,
                                const SetupOptions& options = {});

using Verifier = std::array<std::uint8_t, 23>;

inline constexpr std::size_t kMaxPasswordBytes = 72;

/// Record text: `$2x$<cost, two digits>$<salt, 32 hex><verifier, 46 hex>`.
struct BcryptRecord {
  CostParameter cost;
  Salt salt;
  Verifier verifier;

  std::string to_string() const;
  static BcryptRecord parse(std::string_view text);

  bool operator==(const BcryptRecord&) const = default;
};

/// The key handed to EksBlowfish: password octets plus a terminating zero,
/// cut at 72 octets. Passwords must be 1..72 octets.
Bytes password_key(ByteView password);

/// Encrypts "OrpheanBeholderScryDoubt" 64 times under the scheduled state
/// and keeps the first 23 octets.
BcryptRecord bcrypt_hash(ByteView password, const Salt& salt, CostParameter cost,
                         const SetupOptions& options = {});

bool bcrypt_verify(ByteView password, const BcryptRecord& record,
                   LoopOrder order = LoopOrder::salt_then_key);

}  // namespace hashvault::bcrypt
