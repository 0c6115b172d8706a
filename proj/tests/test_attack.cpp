#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hashvault/attack.hpp"
#include "hashvault/corpus.hpp"
#include "hashvault/errors.hpp"
#include "support.hpp"

using namespace hashvault;
using namespace hashvault::attack;

namespace {

vault::Vault make_vault(vault::Scheme s) {
  return vault::Vault(s, vault::SaltSource(3), [] { return std::int64_t{0}; });
}

std::vector<vault::CredentialRecord> dump_of(const vault::Vault& v) {
  return vault::parse_dump(vault::export_breach_dump(v, {.allow_plaintext = true}));
}

// Every reported crack must verify against its dump record.
void check_closure(const AttackReport& r, std::span<const vault::CredentialRecord> dump) {
  for (const auto& c : r.cracked) {
    auto it = std::find_if(dump.begin(), dump.end(), [&](const auto& rec) { return rec.username == c.username; });
    REQUIRE(it != dump.end());
    CHECK(vault::verify_record(*it, as_bytes(c.plaintext)));
  }
}

}  // namespace

TEST_CASE("wordlists") {
  CHECK_THROWS_AS(Wordlist::from_entries({}), InvalidParameter);
  testing::TempDir dir;
  vault::write_file(dir.file("w.txt"), "alpha\r\n\nbeta\ngamma");
  auto w = Wordlist::from_file(dir.file("w.txt"));
  CHECK(w.entries == std::vector<std::string>{"alpha", "beta", "gamma"});
  CHECK(w.source == dir.file("w.txt"));
  vault::write_file(dir.file("empty.txt"), "\n\n");
  CHECK_THROWS_AS(Wordlist::from_file(dir.file("empty.txt")), InvalidParameter);
}

TEST_CASE("corpus generation") {
  ZipfCorpusSpec spec{2000, 300, 1.0, 42, std::nullopt};
  auto a = generate_corpus(spec);
  auto b = generate_corpus(spec);
  CHECK(a.vocabulary == b.vocabulary);
  CHECK(a.frequency == b.frequency);
  REQUIRE(a.users.size() == 2000);
  CHECK(a.users[0].username == "user000001");
  CHECK(a.vocabulary[0] == "123456");
  CHECK(std::set<std::string>(a.vocabulary.begin(), a.vocabulary.end()).size() == 300);
  for (const auto& w : a.vocabulary) {
    CHECK(w.size() >= 6);
    CHECK(w.size() <= 10);
  }
  std::uint64_t sum = 0;
  for (auto f : a.frequency) sum += f;
  CHECK(sum == 2000);
  CHECK(a.frequency[0] > a.frequency[1]);
  CHECK(a.frequency[0] > a.frequency[50]);
  CHECK(a.top_words(5).entries == std::vector<std::string>(a.vocabulary.begin(), a.vocabulary.begin() + 5));

  spec.seed = 43;
  CHECK(generate_corpus(spec).frequency != a.frequency);

  ZipfCorpusSpec digits{500, 50, 1.0, 1, rainbow::ReductionDomain("0123456789", 4)};
  for (const auto& w : generate_corpus(digits).vocabulary) CHECK(digits.domain->contains(w));

  CHECK_THROWS_AS(generate_corpus({0, 10, 1.0, 1, std::nullopt}), InvalidParameter);
  CHECK_THROWS_AS(generate_corpus({10, 0, 1.0, 1, std::nullopt}), InvalidParameter);
}

TEST_CASE("dictionary attack on one sha1 record") {
  auto v = make_vault(vault::Scheme::sha1());
  v.enroll("alice", as_bytes("123456"));
  auto dump = dump_of(v);
  auto r = dictionary_attack(dump, Wordlist::from_entries({"password", "123456", "qwerty"}));
  REQUIRE(r.cracked.size() == 1);
  CHECK(r.cracked[0] == CrackedEntry{"alice", "123456"});
  CHECK(r.candidates_tried == 3);
  CHECK(r.hash_operations == 3);
  CHECK(r.scheme == "sha1");
}

TEST_CASE("work accounting: unsalted reuse vs salted rework") {
  const std::size_t k = 25;
  auto unsalted = make_vault(vault::Scheme::sha1());
  auto salted = make_vault(vault::Scheme::sha1_salted());
  for (std::size_t i = 0; i < k; ++i) {
    unsalted.enroll("u" + std::to_string(i), as_bytes("123456"));
    salted.enroll("u" + std::to_string(i), as_bytes("123456"));
  }
  auto words = Wordlist::from_entries({"123456"});
  auto du = dump_of(unsalted), ds = dump_of(salted);
  auto ru = dictionary_attack(du, words);
  auto rs = dictionary_attack(ds, words);
  CHECK(ru.cracked.size() == k);
  CHECK(rs.cracked.size() == k);
  CHECK(ru.hash_operations == 1);
  CHECK(rs.hash_operations == k);
  check_closure(ru, du);
  check_closure(rs, ds);

  auto more = Wordlist::from_entries({"a", "b", "123456", "c"});
  CHECK(dictionary_attack(ds, more).hash_operations == 4 * k);
}

TEST_CASE("mixed dump") {
  auto v = make_vault(vault::Scheme::sha1());
  v.enroll("p", as_bytes("letmein"), vault::Scheme::plain());
  v.enroll("s", as_bytes("letmein"));
  v.enroll("ss", as_bytes("dragon"), vault::Scheme::sha1_salted());
  v.enroll("b", as_bytes("dragon"), vault::Scheme::with_bcrypt(4));
  v.enroll("m", as_bytes("monkey"), vault::Scheme::with_mfcrypt({4, 1, 16}));
  v.enroll("x", as_bytes("unguessable"), vault::Scheme::sha1_salted());
  auto dump = dump_of(v);
  auto r = dictionary_attack(dump, Wordlist::from_entries({"letmein", "dragon", "monkey"}));
  CHECK(r.scheme == "mixed");
  CHECK(r.cracked.size() == 5);
  CHECK(r.peak_memory_blocks == 16);
  check_closure(r, dump);
  CHECK(dictionary_attack(dump, Wordlist::from_entries({"dragon"}), {.jobs = 1}).cracked ==
        dictionary_attack(dump, Wordlist::from_entries({"dragon"}), {.jobs = 3}).cracked);
}

TEST_CASE("time budget stops the attack") {
  auto v = make_vault(vault::Scheme::with_bcrypt(8));
  for (int i = 0; i < 5; ++i) v.enroll("u" + std::to_string(i), as_bytes("pw"));
  std::vector<std::string> words(200, "nope");
  auto r = dictionary_attack(dump_of(v), Wordlist::from_entries(words), {.time_budget_seconds = 0.05});
  CHECK(r.stopped_early);
  CHECK(r.hash_operations < 5 * 200);
}

TEST_CASE("report formats") {
  auto v = make_vault(vault::Scheme::sha1());
  v.enroll("alice", as_bytes("123456"));
  auto r = dictionary_attack(dump_of(v), Wordlist::from_entries({"123456"}));
  auto kv = r.to_kv();
  CHECK(kv.find("cracked_count=1\n") != std::string::npos);
  CHECK(kv.find("crack=alice:123456\n") != std::string::npos);
  CHECK(r.to_kv(false).find("crack=") == std::string::npos);
  CHECK(kv.find("timing.hash_rate=") != std::string::npos);
  auto header = AttackReport::csv_header();
  auto row = r.to_csv_row();
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  CHECK(r.cracked_fraction() == 1.0);
}

TEST_CASE("rainbow attack") {
  rainbow::ChainParams params{rainbow::ReductionDomain("0123456789", 4), 100, {}};
  auto table = rainbow::build_table(params, 200, 2012);
  const double c = rainbow::coverage(table);

  auto corpus = generate_corpus({1000, 1000, 0.0, 5, params.domain});
  auto v = make_vault(vault::Scheme::sha1());
  for (const auto& u : corpus.users) v.enroll(u.username, as_bytes(u.password));
  auto dump = dump_of(v);
  auto r = rainbow_attack(dump, table);
  CHECK(std::abs(r.cracked_fraction() - c) <= 0.10);
  CHECK(r.candidates_tried <= corpus.distinct_passwords());
  check_closure(r, dump);
  auto covered = rainbow::covered_indices(table);
  for (const auto& cr : r.cracked)
    CHECK(std::binary_search(covered.begin(), covered.end(), *params.domain.index_of(cr.plaintext)));
  CHECK(rainbow_attack(dump, table, {.jobs = 1}).cracked == rainbow_attack(dump, table, {.jobs = 4}).cracked);

  CHECK(rainbow_attack({}, table).cracked.empty());

  auto salted = make_vault(vault::Scheme::sha1_salted());
  salted.enroll("alice", as_bytes("1234"));
  CHECK_THROWS_AS(rainbow_attack(dump_of(salted), table), SchemeMismatch);
  auto bcrypted = make_vault(vault::Scheme::with_bcrypt(4));
  bcrypted.enroll("alice", as_bytes("1234"));
  CHECK_THROWS_AS(rainbow_attack(dump_of(bcrypted), table), SchemeMismatch);
}

TEST_CASE("rainbow attack with a matching salt") {
  auto salt = to_bytes("0123456789abcdef");
  rainbow::ChainParams params{rainbow::ReductionDomain("0123456789", 3), 20, salt};
  auto table = rainbow::build_table(params, 60, 1);
  auto covered = rainbow::covered_indices(table);
  REQUIRE(covered.size() > 2);

  vault::CredentialRecord rec{"alice", vault::Scheme::sha1_salted(), salt, {}, 0};
  rec.verifier = vault::compute_verifier(rec.scheme, salt, as_bytes(params.domain.plaintext(covered[1])));
  std::vector<vault::CredentialRecord> dump{rec};
  auto r = rainbow_attack(dump, table);
  REQUIRE(r.cracked.size() == 1);
  CHECK(r.cracked[0].plaintext == params.domain.plaintext(covered[1]));

  dump[0].salt[0] ^= 1;
  CHECK_THROWS_AS(rainbow_attack(dump, table), SchemeMismatch);
}

TEST_CASE("duplicate analysis") {
  CHECK(duplicate_analysis({}).distinct_verifiers == 0);
  CHECK(duplicate_analysis({}).top_multiplicity() == 0);

  auto corpus = generate_corpus({800, 100, 1.0, 9, std::nullopt});
  auto unsalted = make_vault(vault::Scheme::sha1());
  auto salted = make_vault(vault::Scheme::sha1_salted());
  for (const auto& u : corpus.users) {
    unsalted.enroll(u.username, as_bytes(u.password));
    salted.enroll(u.username, as_bytes(u.password));
  }
  auto hu = duplicate_analysis(dump_of(unsalted));
  auto hs = duplicate_analysis(dump_of(salted));
  CHECK(hu.records == 800);
  CHECK(hu.distinct_verifiers == corpus.distinct_passwords());
  CHECK(hu.top_multiplicity() == *std::max_element(corpus.frequency.begin(), corpus.frequency.end()));
  CHECK(hs.distinct_verifiers == 800);
  CHECK(hs.multiplicity_counts == std::map<std::uint64_t, std::uint64_t>{{1, 800}});

  std::map<std::uint64_t, std::uint64_t> expected;
  for (auto f : corpus.frequency)
    if (f) ++expected[f];
  CHECK(hu.multiplicity_counts == expected);
}

TEST_CASE("salt strings") {
  CHECK(salt_strings(0) == std::vector<std::string>{""});
  CHECK(salt_strings(2) == std::vector<std::string>{"00", "01", "10", "11"});
  CHECK(salt_strings(4).size() == 16);
  CHECK_THROWS_AS(salt_strings(5), InvalidParameter);
}

TEST_CASE("salt blowup on a small domain") {
  SaltBlowupConfig cfg{rainbow::ReductionDomain("0123456789", 3), 20, 10, 7};
  std::vector<int> bits{0, 1};
  auto rows = salt_blowup_experiment(bits, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].factor == 1.0);
  CHECK(rows[1].salts == 2);
  CHECK(rows[1].factor > 1.0);
  CHECK(rows[1].factor < 3.0);
}

TEST_CASE("bench and cost scaling arguments") {
  CHECK_THROWS_AS(throughput_bench(vault::Scheme::sha1(), std::chrono::milliseconds(500)), InvalidParameter);
  CHECK_THROWS_AS(throughput_bench(vault::Scheme::sha1(), std::chrono::seconds(1), 2), InvalidParameter);
  auto b = throughput_bench(vault::Scheme::sha1(), std::chrono::seconds(1), 3);
  CHECK(b.run_rates.size() == 3);
  CHECK(b.median_rate > 0);

  auto one = cost_scaling_experiment(5, 5, 1);
  REQUIRE(one.size() == 1);
  CHECK_FALSE(one[0].ratio.has_value());
  CHECK(one[0].expand_key_calls == 65);
  CHECK_THROWS_AS(cost_scaling_experiment(3, 5), InvalidParameter);

  auto rows = cost_scaling_experiment(4, 8, 3);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].median_seconds > rows[i - 1].median_seconds);
    CHECK(rows[i].ratio.has_value());
  }
}
