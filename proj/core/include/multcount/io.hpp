#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace multcount {

// RFC 4180 quoting: quote only when the field contains a comma, quote or
// newline; embedded quotes doubled.
std::string csv_field(const std::string& s);

// Shortest round-trip decimal form (std::to_chars); deterministic across
// runs and thread counts, parses back to the identical double.
std::string format_double(double v);
std::string format_long_double(long double v);

std::string to_hex(std::uint64_t raw);  // 0x%016x

struct RunMetadata {
  std::string version;
  std::string build;
  std::string prng;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> extra;
};

// "# key=value" comment lines, stable order.
void write_metadata_comments(std::ostream& os, const RunMetadata& meta);

}  // namespace multcount
