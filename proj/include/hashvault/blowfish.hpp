#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "hashvault/bytes.hpp"

namespace hashvault::bcrypt {

namespace detail {
extern const std::array<std::uint32_t, 18> kInitialP;
extern const std::array<std::array<std::uint32_t, 256>, 4> kInitialS;
}  // namespace detail

using Block = std::array<std::uint8_t, 8>;
using Salt = std::array<std::uint8_t, 16>;

/// Blowfish key schedule: 18 P-array subkeys and four 256-entry S-boxes.
struct BlowfishState {
  std::array<std::uint32_t, 18> p;
  std::array<std::array<std::uint32_t, 256>, 4> s;

  /// The pi-digit constants every schedule starts from.
  static BlowfishState initial() { return {detail::kInitialP, detail::kInitialS}; }

  void encrypt(std::uint32_t& left, std::uint32_t& right) const;
  void decrypt(std::uint32_t& left, std::uint32_t& right) const;

  Block encrypt_block(const Block& block) const;
  Block decrypt_block(const Block& block) const;

  bool operator==(const BlowfishState&) const = default;
};

/// Keys accepted by expand_key: 1..72 octets.
inline constexpr std::size_t kMaxKeyBytes = 72;

/// XORs the cyclic key stream into P, then rewrites every P and S entry
/// with successive encryptions of a running block that absorbs the salt
/// halves, cycling through the 16-octet salt.
void expand_key(BlowfishState& state, const Salt& salt, ByteView key);

/// The zero-salt form: the running block absorbs nothing. This is also the
/// classic Blowfish key schedule when applied to initial().
void expand_key(BlowfishState& state, ByteView key);

}  // namespace hashvault::bcrypt
