#pragma once

// Line-oriented "key = value" reader shared by the config, cube header and
// scenario parsers.  Blank lines and lines starting with '#' are skipped.

#include <string>
#include <utility>
#include <vector>

namespace radseg::kv {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

// Throws FormatError on a non-empty line without '='.
std::vector<Entry> parse(const std::string& text, const std::string& source_name);

std::string trim(const std::string& s);

// Strict numeric conversions; throw FormatError naming the source and key.
double to_double(const Entry& entry, const std::string& source_name);
long long to_int(const Entry& entry, const std::string& source_name);

}  // namespace radseg::kv
