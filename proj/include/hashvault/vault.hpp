#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hashvault/bytes.hpp"
#include "hashvault/mfcrypt.hpp"

namespace hashvault::vault {

enum class SchemeTag { plain, sha1, sha1_salted, bcrypt, mfcrypt };

/// A storage scheme and its cost parameters. Text form is `<tag>` or
/// `<tag>$<params>`, e.g. `sha1`, `bcrypt$cost=10`, `mfcrypt$N=14,p=1,dk=32`.
struct Scheme {
  SchemeTag tag = SchemeTag::bcrypt;
  int bcrypt_cost = 10;
  mfcrypt::MfParams mf{};

  static Scheme plain() { return {SchemeTag::plain}; }
  static Scheme sha1() { return {SchemeTag::sha1}; }
  static Scheme sha1_salted() { return {SchemeTag::sha1_salted}; }
  static Scheme with_bcrypt(int cost) { return {SchemeTag::bcrypt, cost}; }
  static Scheme with_mfcrypt(mfcrypt::MfParams params) { return {SchemeTag::mfcrypt, 10, params}; }

  std::string_view tag_name() const;
  std::string params_text() const;
  std::string to_string() const;

  /// Parses `<tag>` (default parameters) or `<tag>$<params>`.
  static Scheme parse(std::string_view text);
  static Scheme from_parts(std::string_view tag, std::string_view params);

  void validate() const;
  bool salted() const { return tag != SchemeTag::plain && tag != SchemeTag::sha1; }
  std::size_t salt_length() const { return salted() ? 16 : 0; }
  std::size_t verifier_length(std::size_t password_length) const;

  bool operator==(const Scheme& other) const;
};

SchemeTag parse_tag(std::string_view tag);

/// Verifier bytes for `password` under `scheme` and `salt`: the password
/// itself (plain), sha1(password), sha1(salt || password), the 23-octet
/// bcrypt verifier, or the mfcrypt derived key.
Bytes compute_verifier(const Scheme& scheme, ByteView salt, ByteView password);

struct CredentialRecord {
  std::string username;
  Scheme scheme;
  Bytes salt;
  Bytes verifier;
  std::int64_t created_at = 0;  // unix seconds

  /// `username:tag$params$salthex$verifierhex:created_at`
  std::string to_line() const;
  static CredentialRecord parse_line(std::string_view line);

  bool operator==(const CredentialRecord&) const = default;
};

/// Recomputes the verifier and compares. False on any password the
/// scheme cannot accept.
bool verify_record(const CredentialRecord& record, ByteView password);

struct Credential {
  std::string username;
  std::string password;
};

/// Seedable randomness for salts (mt19937_64, little-endian output words).
class SaltSource {
 public:
  explicit SaltSource(std::uint64_t seed) : engine_(seed) {}
  static SaltSource from_entropy();

  Bytes draw(std::size_t length);

 private:
  std::mt19937_64 engine_;
};

using Clock = std::function<std::int64_t()>;
std::int64_t system_clock_seconds();

/// Credential store. Enroll and migrate serialize through one writer lock;
/// verify takes a shared lock and may run concurrently.
class Vault {
 public:
  explicit Vault(Scheme default_scheme, SaltSource salts = SaltSource::from_entropy(),
                 Clock clock = system_clock_seconds);
  Vault(Vault&&) noexcept;
  Vault& operator=(Vault&&) noexcept;
  ~Vault();

  const Scheme& default_scheme() const { return default_scheme_; }

  /// Throws DuplicateUser, InvalidParameter (empty password, bad username,
  /// bad scheme parameters).
  CredentialRecord enroll(std::string_view username, ByteView password,
                          std::optional<Scheme> scheme = std::nullopt);

  /// Unknown users are rejected after a dummy computation under the
  /// default scheme so the rejection costs about as much as a real one.
  bool verify(std::string_view username, ByteView password) const;

  /// Re-enrolls under `scheme` with a fresh salt. Throws UnknownUser or
  /// VerificationFailed without touching the record.
  CredentialRecord migrate(std::string_view username, ByteView password, const Scheme& scheme);

  /// Migrates every credential that verifies; the others are left as they
  /// were. Salts are drawn in input order, so the result does not depend on
  /// `jobs`. Returns the number migrated.
  std::size_t migrate_batch(std::span<const Credential> credentials, const Scheme& scheme,
                            int jobs = 0);

  std::optional<CredentialRecord> find(std::string_view username) const;
  std::vector<CredentialRecord> records() const;
  std::size_t size() const;

  /// `#hashvault v1 default=<scheme>` then one record per line, LF endings.
  std::string serialize() const;
  static Vault parse(std::string_view text, SaltSource salts = SaltSource::from_entropy(),
                     Clock clock = system_clock_seconds);
  void save(const std::string& path) const;
  static Vault load(const std::string& path, SaltSource salts = SaltSource::from_entropy(),
                    Clock clock = system_clock_seconds);

 private:
  CredentialRecord make_record(std::string_view username, ByteView password,
                               const Scheme& scheme);
  void insert(CredentialRecord record);

  Scheme default_scheme_;
  SaltSource salts_;
  Clock clock_;
  std::vector<CredentialRecord> records_;
  std::unordered_map<std::string, std::size_t> by_name_;
  Bytes dummy_salt_;
  Bytes dummy_verifier_;
  std::unique_ptr<std::shared_mutex> mutex_;
};

struct DumpOptions {
  bool allow_plaintext = false;
  bool anonymize = false;  // usernames become anon000001, anon000002, ...
};

/// What a server breach exposes: `#hashvault-dump v1` then the record lines.
/// Throws ExportRefused when a plain record is present and not allowed.
std::string export_breach_dump(const Vault& vault, const DumpOptions& options = {});
std::string export_breach_dump(std::span<const CredentialRecord> records,
                               const DumpOptions& options = {});

/// Accepts dump files and vault files. Throws ParseError, including for an
/// unknown scheme tag.
std::vector<CredentialRecord> parse_dump(std::string_view text);
std::vector<CredentialRecord> load_dump(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace hashvault::vault
