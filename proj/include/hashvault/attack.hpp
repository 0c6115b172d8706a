#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hashvault/corpus.hpp"
#include "hashvault/rainbow.hpp"
#include "hashvault/vault.hpp"

namespace hashvault::attack {

struct CrackedEntry {
  std::string username;
  std::string plaintext;

  bool operator==(const CrackedEntry&) const = default;
};

/// Outcome of one cracking run. Fields prefixed "timing." in the key=value
/// form vary from run to run; everything else is deterministic for a fixed
/// dump, candidate source and completed run.
struct AttackReport {
  std::string scheme;  // tag shared by the records, or "mixed"
  std::uint64_t records_total = 0;
  std::uint64_t candidates_tried = 0;
  std::uint64_t records_touched = 0;
  std::uint64_t hash_operations = 0;
  std::uint64_t false_alarms = 0;
  std::uint64_t peak_memory_blocks = 0;
  bool stopped_early = false;
  std::vector<CrackedEntry> cracked;  // dump order
  double wall_seconds = 0.0;
  double hash_rate = 0.0;  // hash_operations / wall_seconds

  double cracked_fraction() const {
    return records_total ? static_cast<double>(cracked.size()) / records_total : 0.0;
  }
  /// Cracked accounts per second of wall time.
  double crack_rate() const;

  std::string to_kv(bool include_cracked = true) const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

struct AttackOptions {
  int jobs = 0;
  std::optional<double> time_budget_seconds{};
};

/// Unsalted records are attacked through a digest index: each candidate is
/// hashed once and matched against every record. Salted records are
/// rehashed per (candidate, record) pair; cracked records are not skipped,
/// so a full salted sweep costs candidates x records hash operations.
AttackReport dictionary_attack(std::span<const vault::CredentialRecord> dump,
                               const Wordlist& wordlist, const AttackOptions& options = {});

/// Looks every record up in the table. Records must be sha1 with an
/// unsalted table, or sha1-salted with the table's salt; anything else
/// throws SchemeMismatch before any work is done.
AttackReport rainbow_attack(std::span<const vault::CredentialRecord> dump,
                            const rainbow::RainbowTable& table,
                            const AttackOptions& options = {});

struct BenchResult {
  double median_rate = 0.0;  // hashes per second
  std::vector<double> run_rates;
  std::uint64_t hashes = 0;
};

/// Median hash rate over `runs` runs splitting `duration` evenly, after a
/// warm-up that is not counted. Throws InvalidParameter when duration < 1 s
/// or runs < 3.
BenchResult throughput_bench(const vault::Scheme& scheme, std::chrono::duration<double> duration,
                             int runs = 3);

struct CostRow {
  int cost = 0;
  double median_seconds = 0.0;
  std::optional<double> ratio;  // median_seconds / previous row's
  std::uint64_t expand_key_calls = 0;
};

/// Times bcrypt at each cost in [lo, hi], median of `repetitions` runs.
std::vector<CostRow> cost_scaling_experiment(int lo, int hi, int repetitions = 5);

struct SaltBlowupConfig {
  rainbow::ReductionDomain domain{"0123456789", 4};
  std::uint32_t chain_length = 100;
  std::uint64_t baseline_chains = 40;
  std::uint64_t seed = 2017;
};

struct SaltBlowupRow {
  int salt_bits = 0;
  std::uint64_t salts = 1;
  std::uint64_t chains_needed = 0;  // over all per-salt tables
  double coverage = 0.0;            // pooled over (salt, password) pairs
  double factor = 0.0;              // chains_needed / b=0 chains_needed
};

/// The b-bit salts are the strings "0".."1" of length b (b = 2 gives "00",
/// "01", "10", "11"). For every b, finds the smallest total chain count,
/// spread round-robin over one table per salt value, whose pooled coverage
/// reaches the coverage of the unsalted table with `baseline_chains`.
std::vector<SaltBlowupRow> salt_blowup_experiment(std::span<const int> salt_bits,
                                                  const SaltBlowupConfig& config = {});

/// The b-bit salt strings used by salt_blowup_experiment.
std::vector<std::string> salt_strings(int salt_bits);

struct DuplicateHistogram {
  std::uint64_t records = 0;
  std::uint64_t distinct_verifiers = 0;
  std::map<std::uint64_t, std::uint64_t> multiplicity_counts;  // multiplicity -> verifiers
  std::vector<std::pair<std::string, std::uint64_t>> ranked;   // (scheme$verifier hex, count)

  std::uint64_t top_multiplicity() const { return ranked.empty() ? 0 : ranked.front().second; }
};

DuplicateHistogram duplicate_analysis(std::span<const vault::CredentialRecord> dump);

namespace kernels {

/// Tries one candidate against records[targets[k]] for every k and sets
/// hit[k]; returns the number of hash operations performed. Stops issuing
/// new work once `deadline` passes.
std::uint64_t salted_sweep_serial(std::span<const vault::CredentialRecord> records,
                                  std::span<const std::size_t> targets,
                                  const std::string& candidate, std::vector<std::uint8_t>& hit,
                                  std::optional<std::chrono::steady_clock::time_point> deadline);
std::uint64_t salted_sweep_parallel(std::span<const vault::CredentialRecord> records,
                                    std::span<const std::size_t> targets,
                                    const std::string& candidate, std::vector<std::uint8_t>& hit,
                                    std::optional<std::chrono::steady_clock::time_point> deadline,
                                    int jobs);

std::vector<rainbow::CrackResult> lookup_all_serial(std::span<const Digest> digests,
                                                    const rainbow::RainbowTable& table);
std::vector<rainbow::CrackResult> lookup_all_parallel(std::span<const Digest> digests,
                                                      const rainbow::RainbowTable& table,
                                                      int jobs);

}  // namespace kernels

}  // namespace hashvault::attack
