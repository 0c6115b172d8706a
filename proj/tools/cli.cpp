#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hashvault/attack.hpp"
#include "hashvault/bcrypt.hpp"
#include "hashvault/errors.hpp"
#include "hashvault/experiments.hpp"
#include "hashvault/mfcrypt.hpp"
#include "hashvault/rainbow.hpp"
#include "hashvault/sha1.hpp"
#include "hashvault/vault.hpp"

namespace hashvault::cli {

namespace {

// Flag combinations CLI11 cannot express on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Text arguments are UTF-8 octets; a "0x" prefix means hex.
Bytes decode_text(const std::string& text) {
  if (text.starts_with("0x") || text.starts_with("0X")) return from_hex(text);
  return to_bytes(text);
}

struct SchemeFlags {
  std::string scheme;
  int cost = 10;
  std::uint32_t log_n = 14;
  std::uint32_t p = 1;
  std::size_t dk_len = 32;

  void attach(CLI::App* app, bool required) {
    auto* opt = app->add_option("--scheme", scheme, "plain | sha1 | sha1-salted | bcrypt | mfcrypt");
    if (required) opt->required();
    app->add_option("--cost", cost, "bcrypt cost (4..31)")->capture_default_str();
    app->add_option("--log-n", log_n, "mfcrypt log2 N (1..24)")->capture_default_str();
    app->add_option("--p", p, "mfcrypt parallelism")->capture_default_str();
    app->add_option("--dk-len", dk_len, "mfcrypt derived key length")->capture_default_str();
  }

  vault::Scheme resolve() const {
    vault::Scheme s;
    s.tag = vault::parse_tag(scheme);
    s.bcrypt_cost = cost;
    s.mf = {log_n, p, dk_len};
    s.validate();
    return s;
  }
};

struct PasswordFlags {
  std::string positional;
  std::string file;
  bool from_stdin = false;

  void attach(CLI::App* app) {
    app->add_option("password", positional, "password (UTF-8, or 0x-prefixed hex)");
    app->add_option("--password-file", file, "read the password from the first line of a file");
    app->add_flag("--stdin", from_stdin, "read the password from standard input");
  }

  Bytes resolve(CLI::App* app, std::istream& in) const {
    int sources = (app->count("password") > 0) + (app->count("--password-file") > 0) + from_stdin;
    if (sources != 1)
      throw UsageError("give the password exactly once: argument, --password-file or --stdin");
    std::string line;
    if (from_stdin) {
      std::getline(in, line);
    } else if (!file.empty()) {
      std::ifstream f(file);
      if (!f) throw Error("cannot open " + file);
      std::getline(f, line);
    } else {
      return decode_text(positional);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return decode_text(line);
  }
};

vault::SaltSource salt_source(const std::optional<std::uint64_t>& seed) {
  return seed ? vault::SaltSource(*seed) : vault::SaltSource::from_entropy();
}

std::vector<vault::Credential> read_credentials(const std::string& path) {
  std::vector<vault::Credential> creds;
  std::istringstream lines(vault::read_file(path));
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("credential line without ':' in " + path);
    creds.push_back({line.substr(0, colon), line.substr(colon + 1)});
  }
  return creds;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::string text = header + "\n";
  for (const auto& r : rows) text += r + "\n";
  vault::write_file(path, text);
}

double bench_seconds(double flag_value, bool flag_given) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("HASHVAULT_BENCH_SECONDS")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0') throw UsageError("HASHVAULT_BENCH_SECONDS is not a number");
    return v;
  }
  return 3.0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"hashvault: password storage schemes and the attacks against them", "hashvault"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::function<void()> action;

  // hash ------------------------------------------------------------------
  auto* hash = app.add_subcommand("hash", "hash one password and print the verifier");
  SchemeFlags hash_scheme;
  PasswordFlags hash_pw;
  std::string hash_salt;
  hash_scheme.attach(hash, true);
  hash_pw.attach(hash);
  hash->add_option("--salt", hash_salt, "salt as hex (drawn at random when omitted)");
  hash->add_option("--seed", seed, "seed for drawn salts");
  hash->callback([&] {
    action = [&] {
      auto scheme = hash_scheme.resolve();
      auto password = hash_pw.resolve(hash, in);
      std::optional<Bytes> salt;
      if (hash->count("--salt")) salt = from_hex(hash_salt);
      auto draw = [&](std::size_t n) { return salt ? *salt : salt_source(seed).draw(n); };

      switch (scheme.tag) {
        case vault::SchemeTag::plain: out << to_hex(password) << "\n"; break;
        case vault::SchemeTag::sha1:
          out << sha1_digest(salt ? ByteView(*salt) : ByteView{}, password).hex() << "\n";
          break;
        case vault::SchemeTag::sha1_salted: {
          auto s = draw(16);
          out << to_hex(s) << "$" << sha1_digest(s, password).hex() << "\n";
          break;
        }
        case vault::SchemeTag::bcrypt: {
          auto s = draw(16);
          if (s.size() != 16) throw InvalidParameter("bcrypt salt must be 16 octets");
          bcrypt::Salt bs;
          std::copy(s.begin(), s.end(), bs.begin());
          out << bcrypt::bcrypt_hash(password, bs, bcrypt::CostParameter(scheme.bcrypt_cost))
                     .to_string()
              << "\n";
          break;
        }
        case vault::SchemeTag::mfcrypt: {
          auto s = draw(16);
          out << mfcrypt::mfcrypt_hash(password, s, scheme.mf, {.jobs = jobs}).to_string() << "\n";
          break;
        }
      }
    };
  });

  // enroll ----------------------------------------------------------------
  auto* enroll = app.add_subcommand("enroll", "add users to a vault file (created if missing)");
  SchemeFlags enroll_scheme;
  PasswordFlags enroll_pw;
  std::string enroll_vault, enroll_user, enroll_from;
  enroll->add_option("--vault", enroll_vault, "vault file")->required();
  enroll->add_option("--user", enroll_user, "username");
  enroll->add_option("--from-file", enroll_from, "bulk enrollment from username:password lines");
  enroll->add_option("--seed", seed, "seed for salts");
  enroll_scheme.attach(enroll, false);
  enroll_pw.attach(enroll);
  enroll->callback([&] {
    action = [&] {
      std::optional<vault::Scheme> scheme;
      if (!enroll_scheme.scheme.empty()) scheme = enroll_scheme.resolve();
      const bool exists = std::filesystem::exists(enroll_vault);
      auto v = exists ? vault::Vault::load(enroll_vault, salt_source(seed))
                      : vault::Vault(scheme.value_or(vault::Scheme::with_bcrypt(10)),
                                     salt_source(seed));
      if (!enroll_from.empty()) {
        if (enroll->count("--user")) throw UsageError("--user and --from-file are exclusive");
        auto creds = read_credentials(enroll_from);
        for (const auto& c : creds) v.enroll(c.username, as_bytes(c.password), scheme);
        v.save(enroll_vault);
        out << "enrolled=" << creds.size() << "\n";
        return;
      }
      if (enroll_user.empty()) throw UsageError("enroll needs --user or --from-file");
      auto rec = v.enroll(enroll_user, enroll_pw.resolve(enroll, in), scheme);
      v.save(enroll_vault);
      out << "enrolled=" << rec.username << " scheme=" << rec.scheme.to_string() << "\n";
    };
  });

  // verify ----------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "check a password; exit 0 if it matches, 1 if not");
  PasswordFlags verify_pw;
  std::string verify_vault, verify_user;
  verify->add_option("--vault", verify_vault, "vault file")->required();
  verify->add_option("--user", verify_user, "username")->required();
  verify_pw.attach(verify);
  bool verified = true;
  verify->callback([&] {
    action = [&] {
      auto v = vault::Vault::load(verify_vault);
      verified = v.verify(verify_user, verify_pw.resolve(verify, in));
      if (verified)
        out << "verified=" << verify_user << "\n";
      else
        err << "hashvault: password rejected for '" << verify_user << "'\n";
    };
  });

  // migrate ---------------------------------------------------------------
  auto* migrate = app.add_subcommand("migrate", "re-enroll users under a new scheme");
  SchemeFlags migrate_scheme;
  PasswordFlags migrate_pw;
  std::string migrate_vault, migrate_user, migrate_from;
  migrate->add_option("--vault", migrate_vault, "vault file")->required();
  migrate->add_option("--user", migrate_user, "username");
  migrate->add_option("--from-file", migrate_from, "bulk migration from username:password lines");
  migrate->add_option("--seed", seed, "seed for salts");
  migrate->add_option("--jobs", jobs, "worker threads for bulk migration (0 = all)");
  migrate_scheme.attach(migrate, true);
  migrate_pw.attach(migrate);
  migrate->callback([&] {
    action = [&] {
      auto scheme = migrate_scheme.resolve();
      auto v = vault::Vault::load(migrate_vault, salt_source(seed));
      if (!migrate_from.empty()) {
        if (migrate->count("--user")) throw UsageError("--user and --from-file are exclusive");
        auto creds = read_credentials(migrate_from);
        auto n = v.migrate_batch(creds, scheme, jobs);
        v.save(migrate_vault);
        out << "migrated=" << n << "\n";
        if (n != creds.size())
          err << "hashvault: " << creds.size() - n << " credentials did not verify\n";
        return;
      }
      if (migrate_user.empty()) throw UsageError("migrate needs --user or --from-file");
      auto rec = v.migrate(migrate_user, migrate_pw.resolve(migrate, in), scheme);
      v.save(migrate_vault);
      out << "migrated=" << rec.username << " scheme=" << rec.scheme.to_string() << "\n";
    };
  });

  // dump ------------------------------------------------------------------
  auto* dump = app.add_subcommand("dump", "export what a server breach would expose");
  std::string dump_vault, dump_out;
  vault::DumpOptions dump_options;
  dump->add_option("--vault", dump_vault, "vault file")->required();
  dump->add_option("--out", dump_out, "output file (standard output when omitted)");
  dump->add_flag("--allow-plaintext", dump_options.allow_plaintext, "export plain records too");
  dump->add_flag("--anonymize", dump_options.anonymize, "replace usernames");
  dump->callback([&] {
    action = [&] {
      auto text = vault::export_breach_dump(vault::Vault::load(dump_vault), dump_options);
      if (dump_out.empty())
        out << text;
      else
        vault::write_file(dump_out, text);
    };
  });

  // table-build -----------------------------------------------------------
  auto* table_build = app.add_subcommand("table-build", "precompute a rainbow table");
  std::string tb_out, tb_charset = "0123456789", tb_salt;
  std::size_t tb_length = 4;
  std::uint32_t tb_chain_length = 100;
  std::uint64_t tb_chains = 200, tb_seed = 1;
  table_build->add_option("--out", tb_out, "table file")->required();
  table_build->add_option("--charset", tb_charset, "plaintext characters")->capture_default_str();
  table_build->add_option("--length", tb_length, "plaintext length")->capture_default_str();
  table_build->add_option("--chain-length", tb_chain_length, "steps per chain")->capture_default_str();
  table_build->add_option("--chains", tb_chains, "number of chains")->capture_default_str();
  table_build->add_option("--seed", tb_seed, "seed for chain starts")->capture_default_str();
  table_build->add_option("--salt", tb_salt, "fixed salt prefix as hex");
  table_build->add_option("--jobs", jobs, "worker threads (0 = all)");
  table_build->callback([&] {
    action = [&] {
      rainbow::ChainParams params{rainbow::ReductionDomain(tb_charset, tb_length), tb_chain_length,
                                  from_hex(tb_salt)};
      auto table = rainbow::build_table(params, tb_chains, tb_seed, jobs);
      rainbow::save_table(tb_out, table);
      auto cost = rainbow::table_memory_cost(table);
      out << "chains=" << table.chain_count() << "\n"
          << "chain_length=" << table.chain_length() << "\n"
          << "distinct_endpoints=" << table.distinct_endpoints() << "\n"
          << "duplicate_endpoints=" << table.duplicate_endpoints() << "\n"
          << "chain_bytes=" << cost.chain_bytes << "\n"
          << "index_bytes=" << cost.index_bytes << "\n"
          << "file_bytes=" << rainbow::serialize_table(table).size() << "\n"
          << "coverage=" << fmt(rainbow::coverage(table)) << "\n"
          << "lookup_work_bound=" << rainbow::lookup_work_bound(table) << "\n";
    };
  });

  // crack -----------------------------------------------------------------
  auto* crack = app.add_subcommand("crack", "attack a breach dump with a table or a wordlist");
  std::string crack_dump, crack_table, crack_wordlist, crack_csv;
  double crack_budget = 0;
  bool crack_quiet = false;
  crack->add_option("--dump", crack_dump, "breach dump")->required();
  auto* table_opt = crack->add_option("--table", crack_table, "rainbow table file");
  auto* wordlist_opt = crack->add_option("--wordlist", crack_wordlist, "one candidate per line");
  table_opt->excludes(wordlist_opt);
  crack->add_option("--time-budget", crack_budget, "stop the wordlist attack after this many seconds");
  crack->add_option("--report-csv", crack_csv, "also write the report as CSV");
  crack->add_option("--jobs", jobs, "worker threads (0 = all)");
  crack->add_flag("--quiet", crack_quiet, "omit per-account crack lines");
  crack->callback([&] {
    action = [&] {
      if (crack_table.empty() == crack_wordlist.empty())
        throw UsageError("crack needs exactly one of --table or --wordlist");
      auto records = vault::load_dump(crack_dump);
      attack::AttackOptions options{jobs, std::nullopt};
      if (crack->count("--time-budget")) options.time_budget_seconds = crack_budget;
      auto report =
          crack_table.empty()
              ? attack::dictionary_attack(records, attack::Wordlist::from_file(crack_wordlist), options)
              : attack::rainbow_attack(records, rainbow::load_table(crack_table), options);
      out << report.to_kv(!crack_quiet);
      if (!crack_csv.empty())
        write_csv(crack_csv, attack::AttackReport::csv_header(), {report.to_csv_row()});
    };
  });

  // bench -----------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "measure hashes per second for one scheme");
  SchemeFlags bench_scheme;
  double bench_secs = 0;
  int bench_runs = 3;
  std::string bench_csv;
  bench_scheme.attach(bench, true);
  bench->add_option("--seconds", bench_secs, "total duration (default: $HASHVAULT_BENCH_SECONDS or 3)");
  bench->add_option("--runs", bench_runs, "runs; the median rate is reported")->capture_default_str();
  bench->add_option("--csv", bench_csv, "also write the result as CSV");
  bench->callback([&] {
    action = [&] {
      auto scheme = bench_scheme.resolve();
      double secs = bench_seconds(bench_secs, bench->count("--seconds") > 0);
      auto r = attack::throughput_bench(scheme, std::chrono::duration<double>(secs), bench_runs);
      out << "scheme=" << scheme.to_string() << "\n"
          << "runs=" << r.run_rates.size() << "\n"
          << "timing.seconds=" << fmt(secs) << "\n"
          << "timing.hashes=" << r.hashes << "\n"
          << "timing.median_rate=" << fmt(r.median_rate) << "\n";
      for (auto rate : r.run_rates) out << "timing.run_rate=" << fmt(rate) << "\n";
      if (!bench_csv.empty())
        write_csv(bench_csv, "scheme,seconds,runs,median_rate",
                  {scheme.to_string() + "," + fmt(secs) + "," + std::to_string(r.run_rates.size()) +
                   "," + fmt(r.median_rate)});
    };
  });

  // experiment ------------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "run one of the reproduction experiments");
  experiment->require_subcommand(1);
  std::string exp_csv;
  experiment->add_option("--csv", exp_csv, "write row-shaped results as CSV");
  experiment->add_option("--jobs", jobs, "worker threads (0 = all)");

  auto* golden = experiment->add_subcommand("golden", "sha1(salt || 123456) for the 2-bit salts");
  golden->callback([&] {
    action = [&] {
      for (const auto& row : experiments::golden_vectors())
        out << "sha1(" << row.input << ")=" << row.digest << "\n";
    };
  });

  experiments::RainbowOracleConfig oracle_cfg;
  std::string oracle_charset = "0123456789";
  std::size_t oracle_length = 4;
  auto* oracle = experiment->add_subcommand("rainbow-oracle",
                                            "lookup every digest of a toy domain vs. regeneration");
  oracle->add_option("--charset", oracle_charset)->capture_default_str();
  oracle->add_option("--length", oracle_length)->capture_default_str();
  oracle->add_option("--chain-length", oracle_cfg.chain_length)->capture_default_str();
  oracle->add_option("--chains", oracle_cfg.chain_count)->capture_default_str();
  oracle->add_option("--seed", oracle_cfg.seed)->capture_default_str();
  oracle->callback([&] {
    action = [&] {
      oracle_cfg.domain = rainbow::ReductionDomain(oracle_charset, oracle_length);
      oracle_cfg.jobs = jobs;
      out << experiments::rainbow_oracle_experiment(oracle_cfg).to_kv();
    };
  });

  std::vector<std::uint32_t> el_lengths{10, 100, 1000};
  std::uint64_t el_chains = 1000, el_seed = 3;
  std::size_t el_length = 6;
  auto* endpoint = experiment->add_subcommand("endpoint-law", "table file size across chain lengths");
  endpoint->add_option("--chain-lengths", el_lengths)->delimiter(',')->capture_default_str();
  endpoint->add_option("--chains", el_chains)->capture_default_str();
  endpoint->add_option("--length", el_length, "digits per plaintext")->capture_default_str();
  endpoint->add_option("--seed", el_seed)->capture_default_str();
  endpoint->callback([&] {
    action = [&] {
      auto rows = experiments::endpoint_law_experiment(rainbow::ReductionDomain("0123456789", el_length),
                                                       el_chains, el_lengths, el_seed, jobs);
      std::vector<std::string> csv;
      for (const auto& r : rows) {
        out << "chain_length=" << r.chain_length << " file_bytes=" << r.file_bytes
            << " chain_bytes=" << r.chain_bytes << " index_bytes=" << r.index_bytes << "\n";
        csv.push_back(std::to_string(r.chain_length) + "," + std::to_string(r.file_bytes) + "," +
                      std::to_string(r.chain_bytes) + "," + std::to_string(r.index_bytes));
      }
      if (!exp_csv.empty()) write_csv(exp_csv, "chain_length,file_bytes,chain_bytes,index_bytes", csv);
    };
  });

  std::vector<int> sb_bits{0, 1, 2, 4};
  attack::SaltBlowupConfig sb_cfg;
  auto* blowup = experiment->add_subcommand("salt-blowup", "chains needed per salt width");
  blowup->add_option("--salt-bits", sb_bits)->delimiter(',')->capture_default_str();
  blowup->add_option("--chain-length", sb_cfg.chain_length)->capture_default_str();
  blowup->add_option("--baseline-chains", sb_cfg.baseline_chains)->capture_default_str();
  blowup->add_option("--seed", sb_cfg.seed)->capture_default_str();
  blowup->callback([&] {
    action = [&] {
      auto rows = attack::salt_blowup_experiment(sb_bits, sb_cfg);
      std::vector<std::string> csv;
      for (const auto& r : rows) {
        out << "salt_bits=" << r.salt_bits << " salts=" << r.salts
            << " chains_needed=" << r.chains_needed << " coverage=" << fmt(r.coverage)
            << " factor=" << fmt(r.factor) << "\n";
        csv.push_back(std::to_string(r.salt_bits) + "," + std::to_string(r.salts) + "," +
                      std::to_string(r.chains_needed) + "," + fmt(r.coverage) + "," + fmt(r.factor));
      }
      if (!exp_csv.empty()) write_csv(exp_csv, "salt_bits,salts,chains_needed,coverage,factor", csv);
    };
  });

  int cs_lo = 8, cs_hi = 12, cs_reps = 5;
  auto* cost_scaling = experiment->add_subcommand("cost-scaling", "bcrypt time per cost step");
  cost_scaling->add_option("--from", cs_lo)->capture_default_str();
  cost_scaling->add_option("--to", cs_hi)->capture_default_str();
  cost_scaling->add_option("--repetitions", cs_reps)->capture_default_str();
  cost_scaling->callback([&] {
    action = [&] {
      auto rows = attack::cost_scaling_experiment(cs_lo, cs_hi, cs_reps);
      std::vector<std::string> csv;
      for (const auto& r : rows) {
        out << "cost=" << r.cost << " expand_key_calls=" << r.expand_key_calls
            << " timing.median_seconds=" << fmt(r.median_seconds);
        if (r.ratio) out << " timing.ratio=" << fmt(*r.ratio);
        out << "\n";
        csv.push_back(std::to_string(r.cost) + "," + std::to_string(r.expand_key_calls) + "," +
                      fmt(r.median_seconds) + "," + (r.ratio ? fmt(*r.ratio) : ""));
      }
      if (!exp_csv.empty()) write_csv(exp_csv, "cost,expand_key_calls,median_seconds,ratio", csv);
    };
  });

  std::vector<std::uint32_t> ml_log2{10, 12, 14};
  auto* memory = experiment->add_subcommand("memory-law", "romix stored blocks and mix calls");
  memory->add_option("--log-n", ml_log2)->delimiter(',')->capture_default_str();
  memory->callback([&] {
    action = [&] {
      for (const auto& r : experiments::memory_law_experiment(ml_log2))
        out << "N=" << r.n << " stored_blocks=" << r.stats.stored_blocks
            << " peak_live_blocks=" << r.stats.peak_live_blocks
            << " phase1_mix_calls=" << r.stats.phase1_mix_calls
            << " phase2_mix_calls=" << r.stats.phase2_mix_calls << "\n";
    };
  });

  std::string pl_password = "pleaseletmein", pl_salt = "SodiumChloride";
  mfcrypt::MfParams pl_params{1, 2, 32};
  auto* pipeline = experiment->add_subcommand("pipeline", "mfcrypt vs. its four steps spelled out");
  pipeline->add_option("--password", pl_password)->capture_default_str();
  pipeline->add_option("--salt", pl_salt, "salt text")->capture_default_str();
  pipeline->add_option("--log-n", pl_params.log2_n)->capture_default_str();
  pipeline->add_option("--p", pl_params.p)->capture_default_str();
  pipeline->add_option("--dk-len", pl_params.dk_len)->capture_default_str();
  pipeline->callback([&] {
    action = [&] {
      auto r = experiments::pipeline_experiment(pl_password, pl_salt, pl_params);
      out << "mfcrypt=" << to_hex(r.mfcrypt_output) << "\n"
          << "composed=" << to_hex(r.composed_output) << "\n"
          << "equal=" << (r.mfcrypt_output == r.composed_output ? 1 : 0) << "\n";
    };
  });

  double tp_secs = 0;
  auto* throughput = experiment->add_subcommand("throughput", "hash rates across schemes");
  throughput->add_option("--seconds", tp_secs, "per scheme (default: $HASHVAULT_BENCH_SECONDS or 3)");
  throughput->callback([&] {
    action = [&] {
      auto rows = experiments::throughput_experiment(
          bench_seconds(tp_secs, throughput->count("--seconds") > 0));
      std::vector<std::string> csv;
      for (const auto& r : rows) {
        out << "scheme=" << r.scheme << " timing.rate=" << fmt(r.rate) << "\n";
        csv.push_back(r.scheme + "," + fmt(r.rate));
      }
      if (!exp_csv.empty()) write_csv(exp_csv, "scheme,rate", csv);
    };
  });

  experiments::DuplicateConfig dup_cfg;
  auto* duplicates = experiment->add_subcommand("duplicates", "verifier multiplicities, salted vs not");
  duplicates->add_option("--users", dup_cfg.users)->capture_default_str();
  duplicates->add_option("--vocab", dup_cfg.vocabulary)->capture_default_str();
  duplicates->add_option("--zipf", dup_cfg.exponent)->capture_default_str();
  duplicates->add_option("--seed", dup_cfg.seed)->capture_default_str();
  duplicates->callback([&] {
    action = [&] { out << experiments::duplicate_experiment(dup_cfg).to_kv(); };
  });

  experiments::BreachDrillConfig drill_cfg;
  auto* drill = experiment->add_subcommand("breach-drill", "crack, migrate to bcrypt, crack again");
  drill->add_option("--users", drill_cfg.users)->capture_default_str();
  drill->add_option("--vocab", drill_cfg.vocabulary)->capture_default_str();
  drill->add_option("--zipf", drill_cfg.exponent)->capture_default_str();
  drill->add_option("--seed", drill_cfg.seed)->capture_default_str();
  drill->add_option("--wordlist-size", drill_cfg.wordlist_size)->capture_default_str();
  drill->add_option("--cost", drill_cfg.bcrypt_cost)->capture_default_str();
  drill->add_option("--time-budget", drill_cfg.bcrypt_budget_seconds)->capture_default_str();
  drill->callback([&] {
    action = [&] {
      drill_cfg.jobs = jobs;
      out << experiments::breach_drill(drill_cfg).to_kv();
    };
  });

  attack::ZipfCorpusSpec corpus_spec;
  std::string corpus_out, corpus_wordlist, corpus_charset;
  std::size_t corpus_length = 0, corpus_wordlist_size = 100;
  auto* corpus = experiment->add_subcommand("corpus", "write a synthetic Zipf user file and wordlist");
  corpus->add_option("--users", corpus_spec.users)->capture_default_str();
  corpus->add_option("--vocab", corpus_spec.vocabulary)->capture_default_str();
  corpus->add_option("--zipf", corpus_spec.exponent)->capture_default_str();
  corpus->add_option("--seed", corpus_spec.seed)->capture_default_str();
  corpus->add_option("--charset", corpus_charset, "draw the vocabulary from this domain");
  corpus->add_option("--length", corpus_length, "plaintext length for --charset");
  corpus->add_option("--out", corpus_out, "username:password lines")->required();
  corpus->add_option("--wordlist-out", corpus_wordlist, "most popular words, one per line");
  corpus->add_option("--wordlist-size", corpus_wordlist_size)->capture_default_str();
  corpus->callback([&] {
    action = [&] {
      if (!corpus_charset.empty() != (corpus_length > 0))
        throw UsageError("--charset and --length go together");
      if (!corpus_charset.empty())
        corpus_spec.domain = rainbow::ReductionDomain(corpus_charset, corpus_length);
      auto c = attack::generate_corpus(corpus_spec);
      std::string users;
      for (const auto& u : c.users) users += u.username + ":" + u.password + "\n";
      vault::write_file(corpus_out, users);
      if (!corpus_wordlist.empty()) {
        std::string words;
        for (const auto& w : c.top_words(corpus_wordlist_size).entries) words += w + "\n";
        vault::write_file(corpus_wordlist, words);
      }
      out << "users=" << c.users.size() << "\n"
          << "distinct_passwords=" << c.distinct_passwords() << "\n"
          << "top_password=" << c.vocabulary.front() << "\n"
          << "top_password_users=" << c.frequency.front() << "\n";
    };
  });

  std::vector<const char*> argv{"hashvault"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hashvault: " << e.what() << "\n"
        << "run 'hashvault --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (action) action();
  } catch (const UsageError& e) {
    err << "hashvault: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    err << "hashvault: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "hashvault: " << e.what() << "\n";
    return kExitDomainError;
  }
  return verified ? kExitOk : kExitDomainError;
}

}  // namespace hashvault::cli
