#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "hashvault/errors.hpp"
#include "hashvault/rainbow.hpp"

namespace hashvault::rainbow {

namespace {

constexpr std::string_view kMagic = "RBT1";
constexpr std::uint16_t kVersion = 1;

std::uint32_t crc32_of(ByteView data) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, data.data(), static_cast<uInt>(data.size())));
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
  Bytes take() { return std::move(out_); }
  ByteView view() const { return out_; }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  ByteView take(std::size_t n) {
    if (data_.size() - pos_ < n) throw ParseError("rainbow table file is truncated");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint64_t le(int width) {
    auto b = take(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = width; i-- > 0;) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes serialize_table(const RainbowTable& table) {
  const auto& domain = table.domain();
  Writer w;
  w.raw(as_bytes(kMagic));
  w.le(kVersion, 2);
  w.u8(static_cast<std::uint8_t>(domain.charset().size()));
  w.raw(as_bytes(domain.charset()));
  w.u8(static_cast<std::uint8_t>(domain.length()));
  w.le(table.chain_length(), 4);
  w.le(table.chain_count(), 8);
  w.u8(static_cast<std::uint8_t>(table.salt().size()));
  w.raw(table.salt());
  for (const auto& record : table.chains()) {
    w.raw(as_bytes(record.start));
    w.raw(as_bytes(record.end));
  }
  w.le(crc32_of(w.view()), 4);
  return w.take();
}

RainbowTable deserialize_table(ByteView data) {
  if (data.size() < 4) throw ParseError("rainbow table file is truncated");
  const auto body = data.first(data.size() - 4);
  Reader trailer(data.subspan(data.size() - 4));
  if (crc32_of(body) != trailer.le(4)) throw ParseError("rainbow table CRC mismatch");

  Reader r(body);
  if (to_string(r.take(4)) != kMagic) throw ParseError("not a rainbow table file (bad magic)");
  if (r.le(2) != kVersion) throw ParseError("unsupported rainbow table version");

  std::string charset = to_string(r.take(r.u8()));
  std::size_t length = r.u8();
  auto chain_length = static_cast<std::uint32_t>(r.le(4));
  std::uint64_t count = r.le(8);
  auto salt_view = r.take(r.u8());

  ChainParams params{[&] {
                       try {
                         return ReductionDomain(charset, length);
                       } catch (const InvalidParameter& e) {
                         throw ParseError(std::string("bad domain in table file: ") + e.what());
                       }
                     }(),
                     chain_length, Bytes(salt_view.begin(), salt_view.end())};
  if (chain_length == 0) throw ParseError("table file has zero chain length");

  if (count > body.size() / (2 * length)) throw ParseError("rainbow table file is truncated");
  std::vector<ChainRecord> records;
  records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ChainRecord rec{to_string(r.take(length)), to_string(r.take(length))};
    if (!records.empty() && rec.end < records.back().end)
      throw ParseError("rainbow table records are not sorted by endpoint");
    records.push_back(std::move(rec));
  }
  if (r.remaining() != 0) throw ParseError("trailing bytes in table file");

  try {
    return RainbowTable(std::move(params), std::move(records));
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("bad record in table file: ") + e.what());
  }
}

void save_table(const std::string& path, const RainbowTable& table) {
  auto bytes = serialize_table(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path);
}

RainbowTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_table(bytes);
}

}  // namespace hashvault::rainbow
