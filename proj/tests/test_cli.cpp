#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "hashvault/attack.hpp"
#include "hashvault/rainbow.hpp"
#include "hashvault/vault.hpp"
#include "support.hpp"

using namespace hashvault;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  int code = cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

std::string without_timing(const std::string& text) {
  std::istringstream lines(text);
  std::string line, kept;
  while (std::getline(lines, line))
    if (line.find("timing.") == std::string::npos) kept += line + "\n";
  return kept;
}

std::string value_of(const std::string& kv, const std::string& key) {
  const std::string needle = key + "=";
  std::size_t pos = kv.starts_with(needle) ? 0 : kv.find("\n" + needle);
  if (pos == std::string::npos) return {};
  pos += needle.size() + (kv.starts_with(needle) ? 0 : 1);
  return kv.substr(pos, kv.find('\n', pos) - pos);
}

}  // namespace

TEST_CASE("hash prints the salted sha1 digest") {
  auto r = run({"hash", "--scheme", "sha1", "--salt", "3031", "123456"});
  CHECK(r.code == 0);
  CHECK(r.out == "5a44cf4f2b0f2bfc7da6f386481f6afbc8aff73f\n");
  CHECK(run({"hash", "--scheme", "sha1", "123456"}).out == "7c4a8d09ca3762af61e59520943dc26494f8941b\n");
  CHECK(run({"hash", "--scheme", "sha1", "0x313233343536"}).out ==
        "7c4a8d09ca3762af61e59520943dc26494f8941b\n");
  CHECK(run({"hash", "--scheme", "sha1", "--stdin"}, "123456\n").out ==
        "7c4a8d09ca3762af61e59520943dc26494f8941b\n");
}

TEST_CASE("hash under the other schemes") {
  auto b = run({"hash", "--scheme", "bcrypt", "--cost", "4", "--salt",
                "000102030405060708090a0b0c0d0e0f", "password"});
  CHECK(b.code == 0);
  CHECK(b.out == "$2x$04$000102030405060708090a0b0c0d0e0f272279d21f178e13f71a12461a991c7d7aeb6c69ae889a\n");

  auto m = run({"hash", "--scheme", "mfcrypt", "--log-n", "1", "--p", "2", "--dk-len", "32", "--salt",
                to_hex(as_bytes("SodiumChloride")), "pleaseletmein"});
  CHECK(m.out.find("6bcf9883e176c07c00139bb817cd043ed7674f3dbe0c51d43bc6d4169c82e880") != std::string::npos);

  auto s1 = run({"hash", "--scheme", "sha1-salted", "--seed", "5", "pw"});
  auto s2 = run({"hash", "--scheme", "sha1-salted", "--seed", "5", "pw"});
  CHECK(s1.out == s2.out);
  CHECK(s1.out.size() == 32 + 1 + 40 + 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"hash", "--scheme", "sha1", "--bogus", "x"}).code == 2);
  CHECK(run({"hash", "--scheme", "sha1"}).code == 2);
  CHECK(run({"hash", "--scheme", "sha1", "--stdin", "pw"}, "pw\n").code == 2);
  CHECK(run({"hash", "pw"}).code == 2);
  auto r = run({"experiment", "nope"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  CHECK(r.out.empty());
}

TEST_CASE("help exits 0") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("table-build") != std::string::npos);
}

TEST_CASE("domain errors exit 1") {
  CHECK(run({"hash", "--scheme", "md5", "pw"}).code == 1);
  CHECK(run({"hash", "--scheme", "bcrypt", "--cost", "40", "pw"}).code == 1);
  CHECK(run({"hash", "--scheme", "sha1", "--salt", "zz", "pw"}).code == 1);
  CHECK(run({"verify", "--vault", "/nonexistent/v.txt", "--user", "a", "pw"}).code == 1);
}

TEST_CASE("enroll, verify, migrate, dump") {
  testing::TempDir dir;
  auto vault_path = dir.file("v.txt");
  CHECK(run({"enroll", "--vault", vault_path, "--scheme", "sha1", "--user", "alice", "--seed", "1",
             "hunter2"}).code == 0);
  CHECK(run({"enroll", "--vault", vault_path, "--user", "bob", "--scheme", "sha1-salted", "--seed", "2",
             "letmein"}).code == 0);
  CHECK(run({"enroll", "--vault", vault_path, "--user", "alice", "again"}).code == 1);

  CHECK(run({"verify", "--vault", vault_path, "--user", "alice", "hunter2"}).code == 0);
  auto bad = run({"verify", "--vault", vault_path, "--user", "alice", "hunter3"});
  CHECK(bad.code == 1);
  CHECK(bad.out.empty());
  CHECK(run({"verify", "--vault", vault_path, "--user", "zed", "x"}).code == 1);

  CHECK(run({"migrate", "--vault", vault_path, "--user", "alice", "--scheme", "bcrypt", "--cost", "4",
             "wrong"}).code == 1);
  CHECK(run({"migrate", "--vault", vault_path, "--user", "alice", "--scheme", "bcrypt", "--cost", "4",
             "hunter2"}).code == 0);
  auto v = vault::Vault::load(vault_path);
  CHECK(v.find("alice")->scheme == vault::Scheme::with_bcrypt(4));
  CHECK(run({"verify", "--vault", vault_path, "--user", "alice", "hunter2"}).code == 0);

  auto dump = run({"dump", "--vault", vault_path, "--anonymize"});
  CHECK(dump.code == 0);
  CHECK(dump.out.starts_with("#hashvault-dump v1\n"));
  CHECK(dump.out.find("alice") == std::string::npos);
  CHECK(vault::parse_dump(dump.out).size() == 2);
}

TEST_CASE("bulk enroll and migrate from files") {
  testing::TempDir dir;
  auto users = dir.file("users.txt"), vault_path = dir.file("v.txt");
  vault::write_file(users, "a:one\nb:two\nc:three\n");
  auto e = run({"enroll", "--vault", vault_path, "--scheme", "sha1", "--from-file", users});
  CHECK(e.code == 0);
  CHECK(e.out == "enrolled=3\n");
  auto m = run({"migrate", "--vault", vault_path, "--scheme", "sha1-salted", "--from-file", users,
                "--seed", "4", "--jobs", "2"});
  CHECK(m.code == 0);
  CHECK(m.out == "migrated=3\n");
  for (const auto& r : vault::Vault::load(vault_path).records())
    CHECK(r.scheme == vault::Scheme::sha1_salted());
}

TEST_CASE("plaintext dump interlock") {
  testing::TempDir dir;
  auto vault_path = dir.file("v.txt");
  CHECK(run({"enroll", "--vault", vault_path, "--scheme", "plain", "--user", "a", "pw"}).code == 0);
  CHECK(run({"dump", "--vault", vault_path}).code == 1);
  CHECK(run({"dump", "--vault", vault_path, "--allow-plaintext", "--out", dir.file("d.txt")}).code == 0);
  CHECK(vault::load_dump(dir.file("d.txt")).size() == 1);
}

TEST_CASE("table-build and crack match the library report") {
  testing::TempDir dir;
  auto table = dir.file("t.rbt"), users = dir.file("users.txt"), vault_path = dir.file("v.txt"),
       dump = dir.file("d.txt");
  auto tb = run({"table-build", "--out", table, "--charset", "0123456789", "--length", "4",
                 "--chain-length", "100", "--chains", "200", "--seed", "2012"});
  CHECK(tb.code == 0);
  CHECK(value_of(tb.out, "chains") == "200");
  CHECK(value_of(tb.out, "chain_bytes") == "1600");

  auto tb_serial = dir.file("t1.rbt");
  run({"table-build", "--out", tb_serial, "--chains", "200", "--seed", "2012", "--jobs", "1"});
  CHECK(vault::read_file(tb_serial) == vault::read_file(table));

  CHECK(run({"experiment", "corpus", "--users", "300", "--vocab", "300", "--zipf", "0.5", "--seed", "3",
             "--charset", "0123456789", "--length", "4", "--out", users}).code == 0);
  CHECK(run({"enroll", "--vault", vault_path, "--scheme", "sha1", "--from-file", users}).code == 0);
  CHECK(run({"dump", "--vault", vault_path, "--out", dump}).code == 0);

  auto csv = dir.file("report.csv");
  auto c = run({"crack", "--table", table, "--dump", dump, "--report-csv", csv});
  CHECK(c.code == 0);
  auto lib = attack::rainbow_attack(vault::load_dump(dump), rainbow::load_table(table));
  CHECK(value_of(c.out, "cracked_count") == std::to_string(lib.cracked.size()));
  CHECK(without_timing(c.out) == without_timing(lib.to_kv()));
  CHECK(vault::read_file(csv).starts_with(attack::AttackReport::csv_header() + "\n"));

  CHECK(run({"crack", "--table", table, "--wordlist", users, "--dump", dump}).code == 2);
  CHECK(run({"crack", "--dump", dump}).code == 2);
}

TEST_CASE("crack with a wordlist") {
  testing::TempDir dir;
  auto vault_path = dir.file("v.txt"), dump = dir.file("d.txt"), words = dir.file("w.txt");
  run({"enroll", "--vault", vault_path, "--scheme", "sha1-salted", "--user", "a", "--seed", "1", "dragon"});
  run({"dump", "--vault", vault_path, "--out", dump});
  vault::write_file(words, "123456\ndragon\n");
  auto r = run({"crack", "--wordlist", words, "--dump", dump});
  CHECK(r.code == 0);
  CHECK(r.out.find("crack=a:dragon") != std::string::npos);
  CHECK(run({"crack", "--wordlist", words, "--dump", dump, "--quiet"}).out.find("crack=") == std::string::npos);

  rainbow::save_table(dir.file("t.rbt"),
                      rainbow::build_table({rainbow::ReductionDomain("01", 3), 2, {}}, 2, 1));
  CHECK(run({"crack", "--table", dir.file("t.rbt"), "--dump", dump}).code == 1);
}

TEST_CASE("experiments through the CLI") {
  auto g = run({"experiment", "golden"});
  CHECK(g.code == 0);
  CHECK(g.out.find("sha1(01123456)=5a44cf4f2b0f2bfc7da6f386481f6afbc8aff73f") != std::string::npos);

  auto p = run({"experiment", "pipeline"});
  CHECK(value_of(p.out, "equal") == "1");

  auto m = run({"experiment", "memory-law", "--log-n", "3,4"});
  CHECK(m.out == "N=8 stored_blocks=8 peak_live_blocks=10 phase1_mix_calls=8 phase2_mix_calls=8\n"
                 "N=16 stored_blocks=16 peak_live_blocks=18 phase1_mix_calls=16 phase2_mix_calls=16\n");

  auto o1 = run({"experiment", "--jobs", "1", "rainbow-oracle", "--length", "3", "--chains", "20",
                 "--chain-length", "30"});
  auto o2 = run({"experiment", "--jobs", "3", "rainbow-oracle", "--length", "3", "--chains", "20",
                 "--chain-length", "30"});
  CHECK(o1.code == 0);
  CHECK(o1.out == o2.out);
  CHECK(value_of(o1.out, "sets_equal") == "1");

  testing::TempDir dir;
  auto e = run({"experiment", "--csv", dir.file("e.csv"), "endpoint-law", "--chain-lengths", "5,50",
                "--chains", "40"});
  CHECK(e.code == 0);
  CHECK(vault::read_file(dir.file("e.csv")).starts_with("chain_length,file_bytes"));

  auto d = run({"experiment", "duplicates", "--users", "500", "--vocab", "50"});
  CHECK(value_of(d.out, "salted_distinct_verifiers") == "500");
  CHECK(value_of(d.out, "top_password_hash_operations") == "1");
}

TEST_CASE("bench honours the environment") {
  setenv("HASHVAULT_BENCH_SECONDS", "1", 1);
  auto r = run({"bench", "--scheme", "sha1"});
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "timing.seconds") == "1");
  CHECK(value_of(r.out, "runs") == "3");
  setenv("HASHVAULT_BENCH_SECONDS", "0.5", 1);
  CHECK(run({"bench", "--scheme", "sha1"}).code == 1);
  setenv("HASHVAULT_BENCH_SECONDS", "fast", 1);
  CHECK(run({"bench", "--scheme", "sha1"}).code == 2);
  unsetenv("HASHVAULT_BENCH_SECONDS");
}
