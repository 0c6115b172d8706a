#include "hashvault/bcrypt.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "hashvault/errors.hpp"

namespace hashvault::bcrypt {

namespace {

constexpr std::string_view kMagicText = "OrpheanBeholderScryDoubt";
constexpr std::string_view kPrefix = "$2x$";

}  // namespace

CostParameter::CostParameter(int cost) : cost_(cost) {
  if (cost < kMin || cost > kMax)
    throw InvalidParameter("bcrypt cost must be in [" + std::to_string(kMin) + ", " +
                           std::to_string(kMax) + "], got " + std::to_string(cost));
}

BlowfishState eksblowfish_setup(CostParameter cost, const Salt& salt, ByteView key,
                                const SetupOptions& options) {
  std::uint64_t calls = 0;
  BlowfishState state = BlowfishState::initial();
  expand_key(state, salt, key);
  ++calls;

  const std::uint64_t rounds = cost.iterations();
  for (std::uint64_t i = 0; i < rounds; ++i) {
    if (options.order == LoopOrder::salt_then_key) {
      expand_key(state, salt);
      expand_key(state, key);
    } else {
      expand_key(state, key);
      expand_key(state, salt);
    }
    calls += 2;
  }

  if (options.expand_key_calls) *options.expand_key_calls += calls;
  return state;
}

Bytes password_key(ByteView password) {
  if (password.empty() || password.size() > kMaxPasswordBytes)
    throw InvalidParameter("bcrypt password must be 1..72 octets");
  Bytes key(password.begin(), password.end());
  if (key.size() < kMaxKeyBytes) key.push_back(0);
  return key;
}

BcryptRecord bcrypt_hash(ByteView password, const Salt& salt, CostParameter cost,
                         const SetupOptions& options) {
  const Bytes key = password_key(password);
  const BlowfishState state = eksblowfish_setup(cost, salt, key, options);

  std::array<std::uint32_t, 6> words;
  for (std::size_t i = 0; i < words.size(); ++i)
    words[i] = load_be32(as_bytes(kMagicText).data() + 4 * i);
  for (int round = 0; round < 64; ++round)
    for (std::size_t i = 0; i < words.size(); i += 2) state.encrypt(words[i], words[i + 1]);

  std::array<std::uint8_t, 24> ctext;
  for (std::size_t i = 0; i < words.size(); ++i) store_be32(ctext.data() + 4 * i, words[i]);

  BcryptRecord record{cost, salt, {}};
  std::copy_n(ctext.begin(), record.verifier.size(), record.verifier.begin());
  return record;
}

bool bcrypt_verify(ByteView password, const BcryptRecord& record, LoopOrder order) {
  if (password.empty() || password.size() > kMaxPasswordBytes) return false;
  auto again = bcrypt_hash(password, record.salt, record.cost, {.order = order});
  return constant_time_equal(again.verifier, record.verifier);
}

std::string BcryptRecord::to_string() const {
  char cost_text[3];
  std::snprintf(cost_text, sizeof cost_text, "%02d", cost.value());
  return std::string(kPrefix) + cost_text + "$" + to_hex(salt) + to_hex(verifier);
}

BcryptRecord BcryptRecord::parse(std::string_view text) {
  constexpr std::size_t kLength = 4 + 2 + 1 + 32 + 46;
  if (text.size() != kLength || !text.starts_with(kPrefix) || text[6] != '$')
    throw ParseError("malformed bcrypt record");

  int cost = 0;
  auto digits = text.substr(4, 2);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + 2, cost);
  if (ec != std::errc() || ptr != digits.data() + 2) throw ParseError("malformed bcrypt cost");

  Bytes salt = from_hex(text.substr(7, 32));
  Bytes verifier = from_hex(text.substr(39, 46));
  if (salt.size() != 16 || verifier.size() != 23) throw ParseError("malformed bcrypt record");

  BcryptRecord record{[&] {
                        try {
                          return CostParameter(cost);
                        } catch (const InvalidParameter& e) {
                          throw ParseError(e.what());
                        }
                      }(),
                      {},
                      {}};
  std::copy(salt.begin(), salt.end(), record.salt.begin());
  std::copy(verifier.begin(), verifier.end(), record.verifier.begin());
  return record;
}

}  // namespace hashvault::bcrypt
