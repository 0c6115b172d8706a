#include "hashvault/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_set>

#include "hashvault/errors.hpp"

namespace hashvault::attack {

namespace {

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::string> generated_vocabulary(std::uint64_t size, std::mt19937_64& rng) {
  static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::vector<std::string> words{"123456"};
  std::unordered_set<std::string> seen(words.begin(), words.end());
  while (words.size() < size) {
    std::size_t len = 6 + rng() % 5;
    std::string w(len, ' ');
    for (auto& c : w) c = kAlphabet[rng() % kAlphabet.size()];
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  words.resize(size);
  return words;
}

std::vector<std::string> domain_vocabulary(const rainbow::ReductionDomain& domain,
                                           std::uint64_t size, std::mt19937_64& rng) {
  if (size > domain.size()) throw InvalidParameter("vocabulary larger than the domain");
  std::vector<std::uint64_t> picks;
  if (size * 2 > domain.size()) {
    picks.resize(domain.size());
    for (std::uint64_t i = 0; i < picks.size(); ++i) picks[i] = i;
    for (std::uint64_t i = picks.size(); i-- > 1;) std::swap(picks[i], picks[rng() % (i + 1)]);
    picks.resize(size);
  } else {
    std::unordered_set<std::uint64_t> seen;
    while (picks.size() < size) {
      auto idx = rng() % domain.size();
      if (seen.insert(idx).second) picks.push_back(idx);
    }
  }
  std::vector<std::string> words;
  words.reserve(size);
  for (auto idx : picks) words.push_back(domain.plaintext(idx));
  return words;
}

}  // namespace

Wordlist Wordlist::from_entries(std::vector<std::string> entries, std::string source) {
  if (entries.empty()) throw InvalidParameter("wordlist is empty");
  return {std::move(entries), std::move(source)};
}

Wordlist Wordlist::from_file(const std::string& path) {
  std::vector<std::string> entries;
  std::string_view text;
  std::string contents = vault::read_file(path);
  text = contents;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) entries.emplace_back(line);
    start = end + 1;
  }
  return from_entries(std::move(entries), path);
}

Wordlist SyntheticCorpus::top_words(std::size_t k) const {
  k = std::min(k, vocabulary.size());
  return Wordlist::from_entries({vocabulary.begin(), vocabulary.begin() + static_cast<std::ptrdiff_t>(k)},
                                "top-" + std::to_string(k));
}

std::uint64_t SyntheticCorpus::distinct_passwords() const {
  return static_cast<std::uint64_t>(
      std::count_if(frequency.begin(), frequency.end(), [](auto f) { return f > 0; }));
}

SyntheticCorpus generate_corpus(const ZipfCorpusSpec& spec) {
  if (spec.users == 0) throw InvalidParameter("corpus needs at least one user");
  if (spec.vocabulary == 0) throw InvalidParameter("corpus needs a non-empty vocabulary");
  if (!(spec.exponent >= 0.0)) throw InvalidParameter("Zipf exponent must be >= 0");

  std::mt19937_64 rng(spec.seed);
  SyntheticCorpus corpus;
  corpus.vocabulary = spec.domain ? domain_vocabulary(*spec.domain, spec.vocabulary, rng)
                                  : generated_vocabulary(spec.vocabulary, rng);
  corpus.frequency.assign(corpus.vocabulary.size(), 0);

  std::vector<double> cumulative(corpus.vocabulary.size());
  double total = 0.0;
  for (std::size_t r = 0; r < cumulative.size(); ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), spec.exponent);
    cumulative[r] = total;
  }

  corpus.users.reserve(spec.users);
  for (std::uint64_t u = 0; u < spec.users; ++u) {
    double x = unit_interval(rng) * total;
    auto rank = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin());
    rank = std::min(rank, cumulative.size() - 1);
    ++corpus.frequency[rank];
    char name[32];
    std::snprintf(name, sizeof name, "user%06llu", static_cast<unsigned long long>(u + 1));
    corpus.users.push_back({name, corpus.vocabulary[rank]});
  }
  return corpus;
}

}  // namespace hashvault::attack
