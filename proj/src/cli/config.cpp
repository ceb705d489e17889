#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "tmef/cli.hpp"
#include "tmef/error.hpp"

namespace tmef::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

ConfigEntries parse_config(std::istream& in) {
  ConfigEntries entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidInput,
                  "config line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(std::string_view(content).substr(0, eq));
    std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::InvalidInput, "config line " + std::to_string(lineno) + ": empty key");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file " + path.string());
  return parse_config(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open input file " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "y") {
    throw std::ios_base::failure(path.string() + ": expected header line \"y\"");
  }
  std::vector<double> values;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string field = trim(line);
    if (field.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      throw std::ios_base::failure(path.string() + ": line " + std::to_string(lineno) +
                                   " is not a number");
    }
    values.push_back(v);
  }
  return TimeSeries(std::move(values));
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
  out << "y\n";
  for (double v : series.values()) out << format_double(v) << '\n';
}

}  // namespace tmef::cli
