#include "multcount/io.hpp"

#include <charconv>
#include <cstdio>

#include "multcount/version.hpp"

#ifndef MULTCOUNT_BUILD_ID
#define MULTCOUNT_BUILD_ID "unknown"
#endif

namespace multcount {

const char* build_id() { return MULTCOUNT_BUILD_ID; }

std::string csv_field(const std::string& s) {
  bool needs_quotes = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_long_double(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

std::string to_hex(std::uint64_t raw) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(raw));
  return buf;
}

void write_metadata_comments(std::ostream& os, const RunMetadata& meta) {
  os << "# multcount " << meta.version << " build=" << meta.build << "\n";
  os << "# prng=" << meta.prng << " seed=" << meta.seed << "\n";
  for (const auto& [key, value] : meta.extra) {
    os << "# " << key << "=" << value << "\n";
  }
}

}  // namespace multcount
