#include "hashvault/attack.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "hashvault/bcrypt.hpp"
#include "hashvault/errors.hpp"
#include "hashvault/parallel.hpp"
#include "hashvault/sha1.hpp"

namespace hashvault::attack {

namespace {

using SteadyClock = std::chrono::steady_clock;
using Deadline = std::optional<SteadyClock::time_point>;

double seconds_since(SteadyClock::time_point start) {
  return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

bool expired(const Deadline& deadline) { return deadline && SteadyClock::now() >= *deadline; }

std::string scheme_summary(std::span<const vault::CredentialRecord> dump) {
  if (dump.empty()) return "none";
  std::set<std::string_view> tags;
  for (const auto& r : dump) tags.insert(r.scheme.tag_name());
  return tags.size() == 1 ? std::string(*tags.begin()) : "mixed";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

// --------------------------------------------------------------- report --

double AttackReport::crack_rate() const {
  return wall_seconds > 0 ? static_cast<double>(cracked.size()) / wall_seconds : 0.0;
}

std::string AttackReport::to_kv(bool include_cracked) const {
  std::string out;
  auto put = [&](std::string_view k, const std::string& v) {
    out.append(k).append("=").append(v).append("\n");
  };
  put("scheme", scheme);
  put("records_total", std::to_string(records_total));
  put("candidates_tried", std::to_string(candidates_tried));
  put("records_touched", std::to_string(records_touched));
  put("hash_operations", std::to_string(hash_operations));
  put("false_alarms", std::to_string(false_alarms));
  put("peak_memory_blocks", std::to_string(peak_memory_blocks));
  put("stopped_early", stopped_early ? "1" : "0");
  put("cracked_count", std::to_string(cracked.size()));
  put("cracked_fraction", format_double(cracked_fraction()));
  if (include_cracked)
    for (const auto& c : cracked) put("crack", c.username + ":" + c.plaintext);
  put("timing.wall_seconds", format_double(wall_seconds));
  put("timing.hash_rate", format_double(hash_rate));
  put("timing.crack_rate", format_double(crack_rate()));
  return out;
}

std::string AttackReport::csv_header() {
  return "scheme,records_total,candidates_tried,records_touched,hash_operations,false_alarms,"
         "peak_memory_blocks,stopped_early,cracked,wall_seconds,hash_rate";
}

std::string AttackReport::to_csv_row() const {
  return scheme + "," + std::to_string(records_total) + "," + std::to_string(candidates_tried) +
         "," + std::to_string(records_touched) + "," + std::to_string(hash_operations) + "," +
         std::to_string(false_alarms) + "," + std::to_string(peak_memory_blocks) + "," +
         (stopped_early ? "1" : "0") + "," + std::to_string(cracked.size()) + "," +
         format_double(wall_seconds) + "," + format_double(hash_rate);
}

// -------------------------------------------------------------- kernels --

namespace kernels {

std::uint64_t salted_sweep_serial(std::span<const vault::CredentialRecord> records,
                                  std::span<const std::size_t> targets,
                                  const std::string& candidate, std::vector<std::uint8_t>& hit,
                                  Deadline deadline) {
  hit.assign(targets.size(), 0);
  std::uint64_t ops = 0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (expired(deadline)) break;
    hit[k] = vault::verify_record(records[targets[k]], as_bytes(candidate));
    ++ops;
  }
  return ops;
}

std::uint64_t salted_sweep_parallel(std::span<const vault::CredentialRecord> records,
                                    std::span<const std::size_t> targets,
                                    const std::string& candidate, std::vector<std::uint8_t>& hit,
                                    Deadline deadline, int jobs) {
  hit.assign(targets.size(), 0);
  std::uint64_t ops = 0;
  const auto count = static_cast<std::int64_t>(targets.size());
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : ops) num_threads(effective_jobs(jobs))
  for (std::int64_t k = 0; k < count; ++k) {
    if (expired(deadline)) continue;
    const auto i = static_cast<std::size_t>(k);
    hit[i] = vault::verify_record(records[targets[i]], as_bytes(candidate));
    ++ops;
  }
  return ops;
}

std::vector<rainbow::CrackResult> lookup_all_serial(std::span<const Digest> digests,
                                                    const rainbow::RainbowTable& table) {
  std::vector<rainbow::CrackResult> results(digests.size());
  for (std::size_t i = 0; i < digests.size(); ++i) results[i] = rainbow::lookup(digests[i], table);
  return results;
}

std::vector<rainbow::CrackResult> lookup_all_parallel(std::span<const Digest> digests,
                                                      const rainbow::RainbowTable& table,
                                                      int jobs) {
  std::vector<rainbow::CrackResult> results(digests.size());
  const auto count = static_cast<std::int64_t>(digests.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(effective_jobs(jobs))
  for (std::int64_t i = 0; i < count; ++i)
    results[static_cast<std::size_t>(i)] =
        rainbow::lookup(digests[static_cast<std::size_t>(i)], table);
  return results;
}

}  // namespace kernels

// ------------------------------------------------------------- attacks --

AttackReport dictionary_attack(std::span<const vault::CredentialRecord> dump,
                               const Wordlist& wordlist, const AttackOptions& options) {
  const auto start = SteadyClock::now();
  Deadline deadline;
  if (options.time_budget_seconds)
    deadline = start + std::chrono::duration_cast<SteadyClock::duration>(
                           std::chrono::duration<double>(*options.time_budget_seconds));

  AttackReport report;
  report.scheme = scheme_summary(dump);
  report.records_total = dump.size();
  report.records_touched = dump.size();

  std::unordered_map<Digest, std::vector<std::size_t>> digest_index;
  std::unordered_map<std::string, std::vector<std::size_t>> plain_index;
  std::vector<std::size_t> salted;
  for (std::size_t i = 0; i < dump.size(); ++i) {
    const auto& rec = dump[i];
    switch (rec.scheme.tag) {
      case vault::SchemeTag::sha1: {
        Digest d;
        std::copy(rec.verifier.begin(), rec.verifier.end(), d.bytes.begin());
        digest_index[d].push_back(i);
        break;
      }
      case vault::SchemeTag::plain: plain_index[to_string(rec.verifier)].push_back(i); break;
      case vault::SchemeTag::mfcrypt:
        report.peak_memory_blocks = std::max(report.peak_memory_blocks, rec.scheme.mf.n());
        [[fallthrough]];
      default: salted.push_back(i); break;
    }
  }

  std::vector<const std::string*> cracked_by(dump.size(), nullptr);
  auto mark = [&](std::size_t i, const std::string& candidate) {
    if (!cracked_by[i]) cracked_by[i] = &candidate;
  };

  const bool serial = effective_jobs(options.jobs) == 1;
  std::vector<std::uint8_t> hit;
  for (const auto& candidate : wordlist.entries) {
    if (expired(deadline)) {
      report.stopped_early = true;
      break;
    }
    ++report.candidates_tried;

    if (!digest_index.empty()) {
      ++report.hash_operations;
      if (auto it = digest_index.find(sha1_digest(as_bytes(candidate))); it != digest_index.end())
        for (auto i : it->second) mark(i, candidate);
    }
    if (auto it = plain_index.find(candidate); it != plain_index.end())
      for (auto i : it->second) mark(i, candidate);

    if (!salted.empty()) {
      auto ops = serial ? kernels::salted_sweep_serial(dump, salted, candidate, hit, deadline)
                        : kernels::salted_sweep_parallel(dump, salted, candidate, hit, deadline,
                                                         options.jobs);
      report.hash_operations += ops;
      if (ops < salted.size()) report.stopped_early = true;
      for (std::size_t k = 0; k < salted.size(); ++k)
        if (hit[k]) mark(salted[k], candidate);
    }
  }

  for (std::size_t i = 0; i < dump.size(); ++i)
    if (cracked_by[i]) report.cracked.push_back({dump[i].username, *cracked_by[i]});

  report.wall_seconds = seconds_since(start);
  report.hash_rate = report.wall_seconds > 0 ? report.hash_operations / report.wall_seconds : 0.0;
  return report;
}

AttackReport rainbow_attack(std::span<const vault::CredentialRecord> dump,
                            const rainbow::RainbowTable& table, const AttackOptions& options) {
  const auto start = SteadyClock::now();
  for (const auto& rec : dump) {
    const bool ok = (rec.scheme.tag == vault::SchemeTag::sha1 && table.salt().empty()) ||
                    (rec.scheme.tag == vault::SchemeTag::sha1_salted && !table.salt().empty() &&
                     rec.salt == table.salt());
    if (!ok)
      throw SchemeMismatch("record '" + rec.username + "' (" + rec.scheme.to_string() +
                           ") cannot be attacked with a table salted with '" +
                           to_hex(table.salt()) + "'");
  }

  AttackReport report;
  report.scheme = scheme_summary(dump);
  report.records_total = dump.size();
  report.records_touched = dump.size();

  std::unordered_map<Digest, std::size_t> slot_of;
  std::vector<Digest> digests;
  std::vector<std::size_t> slot(dump.size());
  for (std::size_t i = 0; i < dump.size(); ++i) {
    Digest d;
    std::copy(dump[i].verifier.begin(), dump[i].verifier.end(), d.bytes.begin());
    auto [it, inserted] = slot_of.try_emplace(d, digests.size());
    if (inserted) digests.push_back(d);
    slot[i] = it->second;
  }

  auto results = effective_jobs(options.jobs) == 1
                     ? kernels::lookup_all_serial(digests, table)
                     : kernels::lookup_all_parallel(digests, table, options.jobs);
  report.candidates_tried = digests.size();
  for (const auto& r : results) {
    report.hash_operations += r.hash_operations;
    report.false_alarms += r.false_alarms;
  }
  for (std::size_t i = 0; i < dump.size(); ++i)
    if (const auto& r = results[slot[i]]; r.found)
      report.cracked.push_back({dump[i].username, *r.plaintext});

  report.wall_seconds = seconds_since(start);
  report.hash_rate = report.wall_seconds > 0 ? report.hash_operations / report.wall_seconds : 0.0;
  return report;
}

// ----------------------------------------------------------- benchmarks --

BenchResult throughput_bench(const vault::Scheme& scheme, std::chrono::duration<double> duration,
                             int runs) {
  if (duration < std::chrono::seconds(1)) throw InvalidParameter("bench duration must be >= 1 s");
  if (runs < 3) throw InvalidParameter("bench needs at least 3 runs");
  scheme.validate();

  const Bytes password = to_bytes("benchmark-password");
  const Bytes salt(scheme.salt_length(), 0x5A);
  volatile std::uint8_t sink = 0;
  auto once = [&] { sink = vault::compute_verifier(scheme, salt, password).front(); };

  once();  // warm-up

  BenchResult result;
  const double per_run = duration.count() / runs;
  for (int r = 0; r < runs; ++r) {
    std::uint64_t count = 0;
    std::uint64_t batch = 1;
    const auto start = SteadyClock::now();
    double elapsed = 0.0;
    for (;;) {
      for (std::uint64_t b = 0; b < batch; ++b) once();
      count += batch;
      elapsed = seconds_since(start);
      if (elapsed >= per_run) break;
      if (elapsed < per_run / 100) batch *= 2;
    }
    result.run_rates.push_back(static_cast<double>(count) / elapsed);
    result.hashes += count;
  }
  result.median_rate = median(result.run_rates);
  return result;
}

std::vector<CostRow> cost_scaling_experiment(int lo, int hi, int repetitions) {
  bcrypt::CostParameter{lo};
  bcrypt::CostParameter{hi};
  if (lo > hi) throw InvalidParameter("cost range is empty");
  if (repetitions < 1) throw InvalidParameter("repetitions must be >= 1");

  const Bytes password = to_bytes("correct horse battery staple");
  bcrypt::Salt salt;
  for (std::size_t i = 0; i < salt.size(); ++i) salt[i] = static_cast<std::uint8_t>(0xA5 ^ i);

  std::vector<CostRow> rows;
  for (int cost = lo; cost <= hi; ++cost) {
    CostRow row;
    row.cost = cost;
    std::vector<double> times;
    for (int r = 0; r < repetitions; ++r) {
      std::uint64_t calls = 0;
      const auto start = SteadyClock::now();
      bcrypt::bcrypt_hash(password, salt, bcrypt::CostParameter(cost), {.expand_key_calls = &calls});
      times.push_back(seconds_since(start));
      row.expand_key_calls = calls;
    }
    row.median_seconds = median(times);
    if (!rows.empty()) row.ratio = row.median_seconds / rows.back().median_seconds;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------- salt blowup --

std::vector<std::string> salt_strings(int salt_bits) {
  if (salt_bits < 0 || salt_bits > 4) throw InvalidParameter("salt bits must be in [0, 4]");
  std::vector<std::string> salts;
  for (std::uint32_t v = 0; v < (1u << salt_bits); ++v) {
    std::string s(static_cast<std::size_t>(salt_bits), '0');
    for (int b = 0; b < salt_bits; ++b)
      if (v & (1u << (salt_bits - 1 - b))) s[static_cast<std::size_t>(b)] = '1';
    salts.push_back(s);
  }
  return salts;
}

namespace {

// Plaintexts covered, summed over one table per salt, when `total` chains
// are dealt round-robin across the salts.
std::uint64_t pooled_covered(const SaltBlowupConfig& config, const std::vector<std::string>& salts,
                             std::uint64_t total) {
  std::uint64_t covered = 0;
  const std::uint64_t per = total / salts.size();
  const std::uint64_t extra = total % salts.size();
  for (std::size_t s = 0; s < salts.size(); ++s) {
    const std::uint64_t chains = per + (s < extra ? 1 : 0);
    if (chains == 0) continue;
    rainbow::ChainParams params{config.domain, config.chain_length, to_bytes(salts[s])};
    covered += rainbow::covered_indices(rainbow::build_table(params, chains, config.seed)).size();
  }
  return covered;
}

// Smallest total chain count whose pooled coverage fraction reaches `target`.
std::uint64_t chains_for_coverage(const SaltBlowupConfig& config,
                                  const std::vector<std::string>& salts, double target) {
  const std::uint64_t space = salts.size() * config.domain.size();
  auto reaches = [&](std::uint64_t total) {
    return static_cast<double>(pooled_covered(config, salts, total)) / space >= target;
  };
  std::uint64_t hi = std::max<std::uint64_t>(1, config.baseline_chains * salts.size());
  while (!reaches(hi)) {
    if (hi >= space) throw InvalidParameter("target coverage unreachable in this domain");
    hi = std::min(space, hi * 2);
  }
  std::uint64_t lo = 0;  // reaches(lo) is false or lo == 0
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    (reaches(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

std::vector<SaltBlowupRow> salt_blowup_experiment(std::span<const int> salt_bits,
                                                  const SaltBlowupConfig& config) {
  if (config.chain_length == 0 || config.baseline_chains == 0)
    throw InvalidParameter("chain length and baseline chain count must be >= 1");
  const std::vector<std::string> unsalted{""};
  const double target = static_cast<double>(pooled_covered(config, unsalted,
                                                           config.baseline_chains)) /
                        config.domain.size();
  const std::uint64_t baseline = chains_for_coverage(config, unsalted, target);

  std::vector<SaltBlowupRow> rows;
  for (int bits : salt_bits) {
    auto salts = salt_strings(bits);
    SaltBlowupRow row;
    row.salt_bits = bits;
    row.salts = salts.size();
    row.chains_needed = bits == 0 ? baseline : chains_for_coverage(config, salts, target);
    row.coverage = static_cast<double>(pooled_covered(config, salts, row.chains_needed)) /
                   (salts.size() * config.domain.size());
    row.factor = static_cast<double>(row.chains_needed) / baseline;
    rows.push_back(row);
  }
  return rows;
}

// ------------------------------------------------------------ duplicates --

DuplicateHistogram duplicate_analysis(std::span<const vault::CredentialRecord> dump) {
  DuplicateHistogram h;
  h.records = dump.size();
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& rec : dump) ++counts[rec.scheme.to_string() + "$" + to_hex(rec.verifier)];

  h.distinct_verifiers = counts.size();
  h.ranked.assign(counts.begin(), counts.end());
  std::sort(h.ranked.begin(), h.ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  for (const auto& [key, count] : h.ranked) ++h.multiplicity_counts[count];
  return h;
}

}  // namespace hashvault::attack
