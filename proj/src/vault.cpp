#include "hashvault/vault.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <mutex>
#include <sstream>

#include "hashvault/bcrypt.hpp"
#include "hashvault/errors.hpp"
#include "hashvault/parallel.hpp"
#include "hashvault/sha1.hpp"

namespace hashvault::vault {

namespace {

constexpr std::string_view kVaultHeader = "#hashvault v1 default=";
constexpr std::string_view kDumpHeader = "#hashvault-dump v1";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

long long parse_int(std::string_view text, std::string_view what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  return v;
}

void check_username(std::string_view username) {
  if (username.empty()) throw InvalidParameter("username must not be empty");
  for (char c : username)
    if (c == ':' || c == '\n' || c == '\r')
      throw InvalidParameter("username must not contain ':' or line breaks");
}

bcrypt::Salt to_bcrypt_salt(ByteView salt) {
  if (salt.size() != 16) throw InvalidParameter("bcrypt salt must be 16 octets");
  bcrypt::Salt s;
  std::copy(salt.begin(), salt.end(), s.begin());
  return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

// ---------------------------------------------------------------- Scheme --

SchemeTag parse_tag(std::string_view tag) {
  if (tag == "plain") return SchemeTag::plain;
  if (tag == "sha1") return SchemeTag::sha1;
  if (tag == "sha1-salted") return SchemeTag::sha1_salted;
  if (tag == "bcrypt") return SchemeTag::bcrypt;
  if (tag == "mfcrypt") return SchemeTag::mfcrypt;
  throw ParseError("unknown scheme tag '" + std::string(tag) + "'");
}

std::string_view Scheme::tag_name() const {
  switch (tag) {
    case SchemeTag::plain: return "plain";
    case SchemeTag::sha1: return "sha1";
    case SchemeTag::sha1_salted: return "sha1-salted";
    case SchemeTag::bcrypt: return "bcrypt";
    case SchemeTag::mfcrypt: return "mfcrypt";
  }
  return "?";
}

std::string Scheme::params_text() const {
  switch (tag) {
    case SchemeTag::bcrypt: return "cost=" + std::to_string(bcrypt_cost);
    case SchemeTag::mfcrypt:
      return "N=" + std::to_string(mf.log2_n) + ",p=" + std::to_string(mf.p) +
             ",dk=" + std::to_string(mf.dk_len);
    default: return "";
  }
}

std::string Scheme::to_string() const {
  auto params = params_text();
  return params.empty() ? std::string(tag_name()) : std::string(tag_name()) + "$" + params;
}

Scheme Scheme::from_parts(std::string_view tag_text, std::string_view params) {
  Scheme scheme;
  scheme.tag = parse_tag(tag_text);
  if (!params.empty()) {
    if (scheme.tag != SchemeTag::bcrypt && scheme.tag != SchemeTag::mfcrypt)
      throw ParseError("scheme '" + std::string(tag_text) + "' takes no parameters");
    for (auto kv : split(params, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string_view::npos) throw ParseError("malformed scheme parameter");
      auto key = kv.substr(0, eq);
      auto value = parse_int(kv.substr(eq + 1), "scheme parameter");
      if (scheme.tag == SchemeTag::bcrypt && key == "cost") {
        scheme.bcrypt_cost = static_cast<int>(value);
      } else if (scheme.tag == SchemeTag::mfcrypt && key == "N") {
        scheme.mf.log2_n = static_cast<std::uint32_t>(value);
      } else if (scheme.tag == SchemeTag::mfcrypt && key == "p") {
        scheme.mf.p = static_cast<std::uint32_t>(value);
      } else if (scheme.tag == SchemeTag::mfcrypt && key == "dk") {
        scheme.mf.dk_len = static_cast<std::size_t>(value);
      } else {
        throw ParseError("unknown scheme parameter '" + std::string(key) + "'");
      }
      if (value < 0) throw ParseError("negative scheme parameter");
    }
  }
  try {
    scheme.validate();
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
  return scheme;
}

Scheme Scheme::parse(std::string_view text) {
  auto dollar = text.find('$');
  if (dollar == std::string_view::npos) return from_parts(text, {});
  return from_parts(text.substr(0, dollar), text.substr(dollar + 1));
}

void Scheme::validate() const {
  if (tag == SchemeTag::bcrypt) bcrypt::CostParameter{bcrypt_cost};
  if (tag == SchemeTag::mfcrypt) mf.validate();
}

std::size_t Scheme::verifier_length(std::size_t password_length) const {
  switch (tag) {
    case SchemeTag::plain: return password_length;
    case SchemeTag::sha1:
    case SchemeTag::sha1_salted: return Digest::kSize;
    case SchemeTag::bcrypt: return std::tuple_size_v<bcrypt::Verifier>;
    case SchemeTag::mfcrypt: return mf.dk_len;
  }
  return 0;
}

bool Scheme::operator==(const Scheme& other) const {
  if (tag != other.tag) return false;
  if (tag == SchemeTag::bcrypt) return bcrypt_cost == other.bcrypt_cost;
  if (tag == SchemeTag::mfcrypt) return mf == other.mf;
  return true;
}

Bytes compute_verifier(const Scheme& scheme, ByteView salt, ByteView password) {
  if (salt.size() != scheme.salt_length())
    throw InvalidParameter("salt length does not match scheme " + scheme.to_string());
  switch (scheme.tag) {
    case SchemeTag::plain: return Bytes(password.begin(), password.end());
    case SchemeTag::sha1: {
      auto d = sha1_digest(password);
      return Bytes(d.bytes.begin(), d.bytes.end());
    }
    case SchemeTag::sha1_salted: {
      auto d = sha1_digest(salt, password);
      return Bytes(d.bytes.begin(), d.bytes.end());
    }
    case SchemeTag::bcrypt: {
      auto rec = bcrypt::bcrypt_hash(password, to_bcrypt_salt(salt),
                                     bcrypt::CostParameter(scheme.bcrypt_cost));
      return Bytes(rec.verifier.begin(), rec.verifier.end());
    }
    case SchemeTag::mfcrypt: return mfcrypt::mfcrypt(password, salt, scheme.mf);
  }
  throw InvalidParameter("unknown scheme");
}

// -------------------------------------------------------------- records --

std::string CredentialRecord::to_line() const {
  return username + ":" + std::string(scheme.tag_name()) + "$" + scheme.params_text() + "$" +
         to_hex(salt) + "$" + to_hex(verifier) + ":" + std::to_string(created_at);
}

CredentialRecord CredentialRecord::parse_line(std::string_view line) {
  auto first = line.find(':');
  auto last = line.rfind(':');
  if (first == std::string_view::npos || first == last) throw ParseError("malformed record line");

  CredentialRecord rec;
  rec.username = std::string(line.substr(0, first));
  if (rec.username.empty()) throw ParseError("record has an empty username");
  rec.created_at = parse_int(line.substr(last + 1), "timestamp");

  auto fields = split(line.substr(first + 1, last - first - 1), '$');
  if (fields.size() != 4) throw ParseError("record must have tag$params$salt$verifier");
  rec.scheme = Scheme::from_parts(fields[0], fields[1]);
  rec.salt = from_hex(fields[2]);
  rec.verifier = from_hex(fields[3]);

  if (rec.salt.size() != rec.scheme.salt_length())
    throw ParseError("salt length inconsistent with scheme in record for " + rec.username);
  if (rec.scheme.tag != SchemeTag::plain &&
      rec.verifier.size() != rec.scheme.verifier_length(0))
    throw ParseError("verifier length inconsistent with scheme in record for " + rec.username);
  return rec;
}

bool verify_record(const CredentialRecord& record, ByteView password) {
  try {
    return constant_time_equal(compute_verifier(record.scheme, record.salt, password),
                               record.verifier);
  } catch (const InvalidParameter&) {
    return false;
  }
}

// ----------------------------------------------------------- SaltSource --

SaltSource SaltSource::from_entropy() {
  std::random_device rd;
  return SaltSource((std::uint64_t{rd()} << 32) ^ rd());
}

Bytes SaltSource::draw(std::size_t length) {
  Bytes out;
  out.reserve(length);
  while (out.size() < length) {
    std::uint64_t w = engine_();
    for (int i = 0; i < 8 && out.size() < length; ++i) out.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
  }
  return out;
}

std::int64_t system_clock_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// ---------------------------------------------------------------- Vault --

Vault::Vault(Scheme default_scheme, SaltSource salts, Clock clock)
    : default_scheme_(default_scheme),
      salts_(std::move(salts)),
      clock_(std::move(clock)),
      mutex_(std::make_unique<std::shared_mutex>()) {
  default_scheme_.validate();
  dummy_salt_.assign(default_scheme_.salt_length(), 0);
  dummy_verifier_.assign(default_scheme_.verifier_length(1), 0);
}

Vault::Vault(Vault&&) noexcept = default;
Vault& Vault::operator=(Vault&&) noexcept = default;
Vault::~Vault() = default;

CredentialRecord Vault::make_record(std::string_view username, ByteView password,
                                    const Scheme& scheme) {
  if (password.empty()) throw InvalidParameter("password must not be empty");
  scheme.validate();
  CredentialRecord rec;
  rec.username = std::string(username);
  rec.scheme = scheme;
  rec.salt = salts_.draw(scheme.salt_length());
  rec.verifier = compute_verifier(scheme, rec.salt, password);
  rec.created_at = clock_();
  return rec;
}

void Vault::insert(CredentialRecord record) {
  by_name_.emplace(record.username, records_.size());
  records_.push_back(std::move(record));
}

CredentialRecord Vault::enroll(std::string_view username, ByteView password,
                               std::optional<Scheme> scheme) {
  check_username(username);
  std::unique_lock lock(*mutex_);
  if (by_name_.contains(std::string(username)))
    throw DuplicateUser("user '" + std::string(username) + "' already enrolled");
  auto rec = make_record(username, password, scheme.value_or(default_scheme_));
  insert(rec);
  return rec;
}

bool Vault::verify(std::string_view username, ByteView password) const {
  std::shared_lock lock(*mutex_);
  auto it = by_name_.find(std::string(username));
  if (it == by_name_.end()) {
    Bytes dummy;
    try {
      dummy = compute_verifier(default_scheme_, dummy_salt_, password);
    } catch (const InvalidParameter&) {
    }
    (void)constant_time_equal(dummy, dummy_verifier_);
    return false;
  }
  return verify_record(records_[it->second], password);
}

CredentialRecord Vault::migrate(std::string_view username, ByteView password,
                                const Scheme& scheme) {
  std::unique_lock lock(*mutex_);
  auto it = by_name_.find(std::string(username));
  if (it == by_name_.end()) throw UnknownUser("unknown user '" + std::string(username) + "'");
  auto& current = records_[it->second];
  if (!verify_record(current, password))
    throw VerificationFailed("password does not verify for '" + std::string(username) + "'");
  auto fresh = make_record(username, password, scheme);
  current = fresh;
  return fresh;
}

std::size_t Vault::migrate_batch(std::span<const Credential> credentials, const Scheme& scheme,
                                 int jobs) {
  scheme.validate();
  std::unique_lock lock(*mutex_);

  struct Job {
    std::size_t record = 0;
    bool known = false;
    Bytes salt;
    Bytes verifier;
    bool ok = false;
  };
  std::vector<Job> work(credentials.size());
  for (std::size_t i = 0; i < credentials.size(); ++i) {
    auto it = by_name_.find(credentials[i].username);
    if (it == by_name_.end() || credentials[i].password.empty()) continue;
    work[i].record = it->second;
    work[i].known = true;
    work[i].salt = salts_.draw(scheme.salt_length());
  }

  const auto count = static_cast<std::int64_t>(work.size());
  const int threads = effective_jobs(jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
  for (std::int64_t i = 0; i < count; ++i) {
    auto& job = work[static_cast<std::size_t>(i)];
    if (!job.known) continue;
    auto password = as_bytes(credentials[static_cast<std::size_t>(i)].password);
    if (!verify_record(records_[job.record], password)) continue;
    try {
      job.verifier = compute_verifier(scheme, job.salt, password);
      job.ok = true;
    } catch (const InvalidParameter&) {
    }
  }

  std::size_t migrated = 0;
  const auto now = clock_();
  for (auto& job : work) {
    if (!job.ok) continue;
    auto& rec = records_[job.record];
    rec.scheme = scheme;
    rec.salt = std::move(job.salt);
    rec.verifier = std::move(job.verifier);
    rec.created_at = now;
    ++migrated;
  }
  return migrated;
}

std::optional<CredentialRecord> Vault::find(std::string_view username) const {
  std::shared_lock lock(*mutex_);
  auto it = by_name_.find(std::string(username));
  if (it == by_name_.end()) return std::nullopt;
  return records_[it->second];
}

std::vector<CredentialRecord> Vault::records() const {
  std::shared_lock lock(*mutex_);
  return records_;
}

std::size_t Vault::size() const {
  std::shared_lock lock(*mutex_);
  return records_.size();
}

std::string Vault::serialize() const {
  std::shared_lock lock(*mutex_);
  std::string out = std::string(kVaultHeader) + default_scheme_.to_string() + "\n";
  for (const auto& rec : records_) out += rec.to_line() + "\n";
  return out;
}

Vault Vault::parse(std::string_view text, SaltSource salts, Clock clock) {
  auto lines = lines_of(text);
  if (lines.empty() || !lines[0].starts_with(kVaultHeader))
    throw ParseError("missing '#hashvault v1' header");
  Vault vault(Scheme::parse(lines[0].substr(kVaultHeader.size())), std::move(salts),
              std::move(clock));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto rec = CredentialRecord::parse_line(lines[i]);
    if (vault.by_name_.contains(rec.username))
      throw ParseError("duplicate username '" + rec.username + "' in vault file");
    vault.insert(std::move(rec));
  }
  return vault;
}

void Vault::save(const std::string& path) const { write_file(path, serialize()); }

Vault Vault::load(const std::string& path, SaltSource salts, Clock clock) {
  return parse(read_file(path), std::move(salts), std::move(clock));
}

// ----------------------------------------------------------------- dump --

std::string export_breach_dump(std::span<const CredentialRecord> records,
                               const DumpOptions& options) {
  if (!options.allow_plaintext) {
    for (const auto& rec : records)
      if (rec.scheme.tag == SchemeTag::plain)
        throw ExportRefused("vault holds plaintext records; pass --allow-plaintext to export");
  }
  std::string out = std::string(kDumpHeader) + "\n";
  std::size_t n = 0;
  for (const auto& rec : records) {
    if (options.anonymize) {
      char name[32];
      std::snprintf(name, sizeof name, "anon%06zu", ++n);
      CredentialRecord copy = rec;
      copy.username = name;
      out += copy.to_line() + "\n";
    } else {
      out += rec.to_line() + "\n";
    }
  }
  return out;
}

std::string export_breach_dump(const Vault& vault, const DumpOptions& options) {
  return export_breach_dump(vault.records(), options);
}

std::vector<CredentialRecord> parse_dump(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty() || !(lines[0] == kDumpHeader || lines[0].starts_with(kVaultHeader)))
    throw ParseError("missing '#hashvault-dump v1' header");
  std::vector<CredentialRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    records.push_back(CredentialRecord::parse_line(lines[i]));
  }
  return records;
}

std::vector<CredentialRecord> load_dump(const std::string& path) {
  return parse_dump(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing " + path);
}

}  // namespace hashvault::vault
