#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hashvault/rainbow.hpp"
#include "hashvault/vault.hpp"

namespace hashvault::attack {

/// Candidate passwords, tried in order.
struct Wordlist {
  std::vector<std::string> entries;
  std::string source;

  /// One candidate per line; CR stripped, blank lines skipped. Throws
  /// InvalidParameter when nothing remains.
  static Wordlist from_file(const std::string& path);
  static Wordlist from_entries(std::vector<std::string> entries, std::string source = "inline");
};

/// Users whose passwords follow a Zipf law over a fixed vocabulary: the
/// word of rank r (0-based) is drawn with probability proportional to
/// 1 / (r + 1)^exponent.
struct ZipfCorpusSpec {
  std::uint64_t users = 1000;
  std::uint64_t vocabulary = 1000;
  double exponent = 1.0;
  std::uint64_t seed = 1;
  // When set, the vocabulary is drawn from this plaintext domain instead of
  // generated words.
  std::optional<rainbow::ReductionDomain> domain;
};

struct SyntheticCorpus {
  std::vector<std::string> vocabulary;  // rank order
  std::vector<std::uint64_t> frequency;  // users per rank
  std::vector<vault::Credential> users;

  /// The k most popular words in rank order.
  Wordlist top_words(std::size_t k) const;
  std::uint64_t distinct_passwords() const;
};

/// Deterministic for a given ZipfCorpusSpec. Without a domain, rank 0 is "123456" and the
/// other words are lowercase/digit strings of length 6..10.
SyntheticCorpus generate_corpus(const ZipfCorpusSpec& spec);

}  // namespace hashvault::attack
