#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "hashvault/bytes.hpp"

namespace testing {

inline std::string hex_of(hashvault::ByteView b) { return hashvault::to_hex(b); }

inline hashvault::Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  hashvault::Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

inline int popcount_diff(hashvault::ByteView a, hashvault::ByteView b) {
  int bits = 0;
  for (std::size_t i = 0; i < a.size(); ++i) bits += __builtin_popcount(a[i] ^ b[i]);
  return bits;
}

/// Scratch directory removed when the object goes out of scope.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("hashvault-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
