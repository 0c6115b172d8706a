#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hashvault/attack.hpp"
#include "hashvault/mfcrypt.hpp"
#include "hashvault/rainbow.hpp"

namespace hashvault::experiments {

// Each experiment returns its measurements; judging them against
// thresholds is left to the caller. `to_kv` renders key=value lines, with
// run-dependent values under "timing.".

struct GoldenRow {
  std::string salt;
  std::string input;
  std::string digest;
};

/// sha1(salt || "123456") for the salts "01", "10", "11", "00".
std::vector<GoldenRow> golden_vectors();

struct RainbowOracleConfig {
  rainbow::ReductionDomain domain{"0123456789", 4};
  std::uint32_t chain_length = 100;
  std::uint64_t chain_count = 200;
  std::uint64_t seed = 2012;
  int jobs = 0;
};

struct RainbowOracleResult {
  std::vector<std::uint64_t> predicted;  // domain indices, by chain regeneration
  std::vector<std::uint64_t> cracked;    // domain indices whose digest lookup succeeded
  std::uint64_t domain_size = 0;
  std::uint64_t false_alarms = 0;
  std::uint64_t hash_operations = 0;

  double predicted_coverage() const { return double(predicted.size()) / domain_size; }
  double measured_coverage() const { return double(cracked.size()) / domain_size; }
  std::string to_kv() const;
};

/// Builds a table and looks up the digest of every plaintext in the domain.
RainbowOracleResult rainbow_oracle_experiment(const RainbowOracleConfig& config = {});

struct EndpointLawRow {
  std::uint32_t chain_length = 0;
  std::uint64_t file_bytes = 0;
  std::uint64_t chain_bytes = 0;
  std::uint64_t index_bytes = 0;
};

std::vector<EndpointLawRow> endpoint_law_experiment(const rainbow::ReductionDomain& domain,
                                                    std::uint64_t chain_count,
                                                    const std::vector<std::uint32_t>& lengths,
                                                    std::uint64_t seed, int jobs = 0);

struct MemoryLawRow {
  std::uint64_t n = 0;
  mfcrypt::RomixStats stats;
};

std::vector<MemoryLawRow> memory_law_experiment(const std::vector<std::uint32_t>& log2_ns);

struct PipelineResult {
  Bytes mfcrypt_output;
  Bytes composed_output;  // the four steps spelled out with pbkdf2 and romix
};

PipelineResult pipeline_experiment(std::string_view password, std::string_view salt,
                                   const mfcrypt::MfParams& params);

struct ThroughputRow {
  std::string scheme;
  double rate = 0.0;
};

/// sha1, bcrypt cost 10 and 12, mfcrypt N = 2^10, 2^12, 2^14.
std::vector<ThroughputRow> throughput_experiment(double seconds_per_scheme);

struct DuplicateConfig {
  std::uint64_t users = 10000;
  std::uint64_t vocabulary = 1000;
  double exponent = 1.0;
  std::uint64_t seed = 117;
};

struct DuplicateResult {
  std::uint64_t users = 0;
  std::uint64_t distinct_passwords = 0;
  std::uint64_t unsalted_distinct_verifiers = 0;
  std::uint64_t salted_distinct_verifiers = 0;
  std::string top_password;
  std::uint64_t top_password_users = 0;
  std::uint64_t unsalted_top_multiplicity = 0;
  std::uint64_t salted_top_multiplicity = 0;
  std::uint64_t top_password_cracked = 0;
  std::uint64_t top_password_hash_operations = 0;
  std::uint64_t salted_top_password_hash_operations = 0;

  std::string to_kv() const;
};

DuplicateResult duplicate_experiment(const DuplicateConfig& config = {});

struct BreachDrillConfig {
  std::uint64_t users = 1000;
  std::uint64_t vocabulary = 1000;
  double exponent = 1.0;
  std::uint64_t seed = 2012;
  std::size_t wordlist_size = 100;
  int bcrypt_cost = 10;
  double bcrypt_budget_seconds = 5.0;
  int jobs = 0;
};

struct BreachDrillResult {
  std::uint64_t users = 0;
  attack::AttackReport unsalted;
  std::uint64_t migrated = 0;
  std::uint64_t sha1_records_after = 0;
  attack::AttackReport migrated_attack;
  bool cracks_verified = false;

  double drop_factor() const;
  std::string to_kv() const;
};

/// Enroll unsalted, dump, crack; migrate every account to bcrypt, dump,
/// crack again under a time budget.
BreachDrillResult breach_drill(const BreachDrillConfig& config = {});

}  // namespace hashvault::experiments
