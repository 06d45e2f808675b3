#include "smpred/io/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "smpred/common/error.hpp"

namespace smpred {

namespace {

static_assert(sizeof(double) == 8, "requires 64-bit IEEE doubles");

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void write_container(const std::filesystem::path& path, const nlohmann::json& header,
                     std::span<const double> payload) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(kContainerMagic, sizeof(kContainerMagic));
  const std::string header_text = header.dump();
  put_u64(out, header_text.size());
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  put_u64(out, payload.size());
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(double)));
  } else {
    for (double d : payload) put_u64(out, std::bit_cast<std::uint64_t>(d));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Container read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kContainerMagic, 8) != 0)
    throw IoError("not a smpred container: " + path.string());
  const std::uint64_t header_len = get_u64(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  const std::uint64_t count = get_u64(in);
  Container c;
  c.payload.resize(count);
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(c.payload.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    for (std::uint64_t i = 0; i < count; ++i)
      c.payload[i] = std::bit_cast<double>(get_u64(in));
  }
  if (!in) throw IoError("truncated container: " + path.string());
  try {
    c.header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("corrupt container header in " + path.string() + ": " + e.what());
  }
  return c;
}

}  // namespace smpred
