#include "kv.hpp"

#include <cstdlib>
#include <sstream>

#include "radseg/errors.hpp"

namespace radseg::kv {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

std::vector<Entry> parse(const std::string& text, const std::string& source_name) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw FormatError(source_name + ":" + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    Entry entry;
    entry.key = trim(stripped.substr(0, eq));
    entry.value = trim(stripped.substr(eq + 1));
    entry.line = line_no;
    if (entry.key.empty())
      throw FormatError(source_name + ":" + std::to_string(line_no) + ": empty key");
    entries.push_back(std::move(entry));
  }
  return entries;
}

double to_double(const Entry& entry, const std::string& source_name) {
  const char* begin = entry.value.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw FormatError(source_name + ":" + std::to_string(entry.line) + ": key '" +
                      entry.key + "' has non-numeric value '" + entry.value + "'");
  return value;
}

long long to_int(const Entry& entry, const std::string& source_name) {
  const char* begin = entry.value.c_str();
  char* end = nullptr;
  const long long value = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw FormatError(source_name + ":" + std::to_string(entry.line) + ": key '" +
                      entry.key + "' has non-integer value '" + entry.value + "'");
  return value;
}

}  // namespace radseg::kv
