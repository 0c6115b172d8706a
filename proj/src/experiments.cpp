#include "hashvault/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

#include "hashvault/hmac.hpp"
#include "hashvault/parallel.hpp"
#include "hashvault/sha1.hpp"
#include "hashvault/vault.hpp"

namespace hashvault::experiments {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void put(std::string& out, std::string_view key, const std::string& value) {
  out.append(key).append("=").append(value).append("\n");
}

vault::Clock fixed_clock() {
  return [] { return std::int64_t{1338854400}; };
}

}  // namespace

std::vector<GoldenRow> golden_vectors() {
  std::vector<GoldenRow> rows;
  for (const char* salt : {"01", "10", "11", "00"}) {
    std::string input = std::string(salt) + "123456";
    rows.push_back({salt, input, sha1_digest(as_bytes(input)).hex()});
  }
  return rows;
}

// ------------------------------------------------------------- rainbow --

std::string RainbowOracleResult::to_kv() const {
  std::string out;
  put(out, "domain_size", std::to_string(domain_size));
  put(out, "predicted_crackable", std::to_string(predicted.size()));
  put(out, "cracked", std::to_string(cracked.size()));
  put(out, "sets_equal", predicted == cracked ? "1" : "0");
  put(out, "predicted_coverage", fmt(predicted_coverage()));
  put(out, "measured_coverage", fmt(measured_coverage()));
  put(out, "false_alarms", std::to_string(false_alarms));
  put(out, "hash_operations", std::to_string(hash_operations));
  return out;
}

RainbowOracleResult rainbow_oracle_experiment(const RainbowOracleConfig& config) {
  rainbow::ChainParams params{config.domain, config.chain_length, {}};
  auto table = rainbow::build_table(params, config.chain_count, config.seed, config.jobs);

  RainbowOracleResult result;
  result.domain_size = config.domain.size();
  result.predicted = rainbow::covered_indices(table);

  std::vector<Digest> digests(result.domain_size);
  for (std::uint64_t i = 0; i < result.domain_size; ++i)
    digests[i] = sha1_digest(as_bytes(config.domain.plaintext(i)));
  auto results = effective_jobs(config.jobs) == 1
                     ? attack::kernels::lookup_all_serial(digests, table)
                     : attack::kernels::lookup_all_parallel(digests, table, config.jobs);
  for (std::uint64_t i = 0; i < result.domain_size; ++i) {
    result.false_alarms += results[i].false_alarms;
    result.hash_operations += results[i].hash_operations;
    if (results[i].found) result.cracked.push_back(i);
  }
  return result;
}

std::vector<EndpointLawRow> endpoint_law_experiment(const rainbow::ReductionDomain& domain,
                                                    std::uint64_t chain_count,
                                                    const std::vector<std::uint32_t>& lengths,
                                                    std::uint64_t seed, int jobs) {
  std::vector<EndpointLawRow> rows;
  for (auto n : lengths) {
    auto table = rainbow::build_table({domain, n, {}}, chain_count, seed, jobs);
    auto cost = rainbow::table_memory_cost(table);
    rows.push_back({n, rainbow::serialize_table(table).size(), cost.chain_bytes, cost.index_bytes});
  }
  return rows;
}

// ------------------------------------------------------------- mfcrypt --

std::vector<MemoryLawRow> memory_law_experiment(const std::vector<std::uint32_t>& log2_ns) {
  std::vector<MemoryLawRow> rows;
  mfcrypt::MixBlock block;
  for (std::size_t i = 0; i < block.size(); ++i) block[i] = static_cast<std::uint8_t>(i);
  for (auto log2_n : log2_ns) {
    MemoryLawRow row;
    row.n = std::uint64_t{1} << log2_n;
    mfcrypt::romix(block, row.n, &row.stats);
    rows.push_back(row);
  }
  return rows;
}

PipelineResult pipeline_experiment(std::string_view password, std::string_view salt,
                                   const mfcrypt::MfParams& params) {
  PipelineResult result;
  result.mfcrypt_output = mfcrypt::mfcrypt(as_bytes(password), as_bytes(salt), params);

  // (B_0 .. B_{p-1}) <- PBKDF2(P, S, 1, p * MFLen)
  Bytes b = pbkdf2(as_bytes(password), as_bytes(salt), 1, params.p * mfcrypt::kBlockBytes);
  // B_i <- MF(B_i, N)
  for (std::uint32_t i = 0; i < params.p; ++i) {
    mfcrypt::MixBlock block;
    std::memcpy(block.data(), b.data() + i * mfcrypt::kBlockBytes, mfcrypt::kBlockBytes);
    block = mfcrypt::romix(block, params.n());
    std::memcpy(b.data() + i * mfcrypt::kBlockBytes, block.data(), mfcrypt::kBlockBytes);
  }
  // DK <- PBKDF2(P, B_0 || ... || B_{p-1}, 1, dkLen)
  result.composed_output = pbkdf2(as_bytes(password), b, 1, params.dk_len);
  return result;
}

// ----------------------------------------------------------- throughput --

std::vector<ThroughputRow> throughput_experiment(double seconds_per_scheme) {
  const std::vector<vault::Scheme> schemes = {
      vault::Scheme::sha1(),
      vault::Scheme::with_bcrypt(10),
      vault::Scheme::with_bcrypt(12),
      vault::Scheme::with_mfcrypt({10, 1, 32}),
      vault::Scheme::with_mfcrypt({12, 1, 32}),
      vault::Scheme::with_mfcrypt({14, 1, 32}),
  };
  std::vector<ThroughputRow> rows;
  for (const auto& s : schemes) {
    auto r = attack::throughput_bench(s, std::chrono::duration<double>(seconds_per_scheme));
    rows.push_back({s.to_string(), r.median_rate});
  }
  return rows;
}

// ----------------------------------------------------------- duplicates --

std::string DuplicateResult::to_kv() const {
  std::string out;
  put(out, "users", std::to_string(users));
  put(out, "distinct_passwords", std::to_string(distinct_passwords));
  put(out, "unsalted_distinct_verifiers", std::to_string(unsalted_distinct_verifiers));
  put(out, "salted_distinct_verifiers", std::to_string(salted_distinct_verifiers));
  put(out, "top_password", top_password);
  put(out, "top_password_users", std::to_string(top_password_users));
  put(out, "unsalted_top_multiplicity", std::to_string(unsalted_top_multiplicity));
  put(out, "salted_top_multiplicity", std::to_string(salted_top_multiplicity));
  put(out, "top_password_cracked", std::to_string(top_password_cracked));
  put(out, "top_password_hash_operations", std::to_string(top_password_hash_operations));
  put(out, "salted_top_password_hash_operations",
      std::to_string(salted_top_password_hash_operations));
  return out;
}

DuplicateResult duplicate_experiment(const DuplicateConfig& config) {
  auto corpus = attack::generate_corpus(
      {config.users, config.vocabulary, config.exponent, config.seed, std::nullopt});

  vault::Vault unsalted(vault::Scheme::sha1(), vault::SaltSource(config.seed), fixed_clock());
  vault::Vault salted(vault::Scheme::sha1_salted(), vault::SaltSource(config.seed + 1),
                      fixed_clock());
  for (const auto& u : corpus.users) {
    unsalted.enroll(u.username, as_bytes(u.password));
    salted.enroll(u.username, as_bytes(u.password));
  }
  auto unsalted_dump = vault::parse_dump(vault::export_breach_dump(unsalted));
  auto salted_dump = vault::parse_dump(vault::export_breach_dump(salted));

  DuplicateResult r;
  r.users = corpus.users.size();
  r.distinct_passwords = corpus.distinct_passwords();
  auto hu = attack::duplicate_analysis(unsalted_dump);
  auto hs = attack::duplicate_analysis(salted_dump);
  r.unsalted_distinct_verifiers = hu.distinct_verifiers;
  r.salted_distinct_verifiers = hs.distinct_verifiers;
  r.unsalted_top_multiplicity = hu.top_multiplicity();
  r.salted_top_multiplicity = hs.top_multiplicity();
  r.top_password = corpus.vocabulary.front();
  r.top_password_users = corpus.frequency.front();

  auto top = corpus.top_words(1);
  auto report = attack::dictionary_attack(unsalted_dump, top);
  r.top_password_cracked = report.cracked.size();
  r.top_password_hash_operations = report.hash_operations;
  r.salted_top_password_hash_operations = attack::dictionary_attack(salted_dump, top).hash_operations;
  return r;
}

// ----------------------------------------------------------- breach drill --

double BreachDrillResult::drop_factor() const {
  const double before = unsalted.crack_rate();
  const double after = migrated_attack.crack_rate();
  if (after <= 0.0) return std::numeric_limits<double>::infinity();
  return before / after;
}

std::string BreachDrillResult::to_kv() const {
  std::string out;
  put(out, "users", std::to_string(users));
  put(out, "unsalted.cracked", std::to_string(unsalted.cracked.size()));
  put(out, "unsalted.cracked_fraction", fmt(unsalted.cracked_fraction()));
  put(out, "unsalted.hash_operations", std::to_string(unsalted.hash_operations));
  put(out, "migrated", std::to_string(migrated));
  put(out, "sha1_records_after_migration", std::to_string(sha1_records_after));
  put(out, "cracks_verified", cracks_verified ? "1" : "0");
  put(out, "timing.unsalted.wall_seconds", fmt(unsalted.wall_seconds));
  put(out, "timing.unsalted.crack_rate", fmt(unsalted.crack_rate()));
  put(out, "timing.bcrypt.cracked", std::to_string(migrated_attack.cracked.size()));
  put(out, "timing.bcrypt.hash_operations", std::to_string(migrated_attack.hash_operations));
  put(out, "timing.bcrypt.wall_seconds", fmt(migrated_attack.wall_seconds));
  put(out, "timing.bcrypt.crack_rate", fmt(migrated_attack.crack_rate()));
  put(out, "timing.drop_factor", fmt(drop_factor()));
  return out;
}

BreachDrillResult breach_drill(const BreachDrillConfig& config) {
  auto corpus = attack::generate_corpus(
      {config.users, config.vocabulary, config.exponent, config.seed, std::nullopt});
  auto wordlist = corpus.top_words(config.wordlist_size);

  vault::Vault v(vault::Scheme::sha1(), vault::SaltSource(config.seed), fixed_clock());
  for (const auto& u : corpus.users) v.enroll(u.username, as_bytes(u.password));

  BreachDrillResult result;
  result.users = corpus.users.size();
  auto dump = vault::parse_dump(vault::export_breach_dump(v));
  result.unsalted = attack::dictionary_attack(dump, wordlist, {config.jobs, std::nullopt});

  result.cracks_verified = true;
  for (const auto& c : result.unsalted.cracked)
    result.cracks_verified = result.cracks_verified && v.verify(c.username, as_bytes(c.plaintext));

  result.migrated = v.migrate_batch(corpus.users, vault::Scheme::with_bcrypt(config.bcrypt_cost),
                                    config.jobs);
  auto migrated_dump = vault::parse_dump(vault::export_breach_dump(v));
  for (const auto& rec : migrated_dump)
    if (rec.scheme.tag == vault::SchemeTag::sha1) ++result.sha1_records_after;

  result.migrated_attack = attack::dictionary_attack(
      migrated_dump, wordlist, {config.jobs, config.bcrypt_budget_seconds});
  for (const auto& c : result.migrated_attack.cracked)
    result.cracks_verified = result.cracks_verified && v.verify(c.username, as_bytes(c.plaintext));
  return result;
}

}  // namespace hashvault::experiments
