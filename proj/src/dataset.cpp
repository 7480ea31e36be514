#include "leakaudit/dataset.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "leakaudit/numformat.hpp"

namespace leakaudit {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  Dataset ds;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  bool all_symbols = true;
  double max_symbol = 0.0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "s,t") parse_fail(path, lineno, "expected header 's,t'");
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) parse_fail(path, lineno, "expected two comma-separated fields");
    const std::string s_field = line.substr(0, comma);
    const std::string t_field = line.substr(comma + 1);

    int s_val = 0;
    if (s_field == "1" || s_field == "+1") {
      s_val = 1;
    } else if (s_field == "-1") {
      s_val = -1;
    } else {
      parse_fail(path, lineno, "s value must be +1 or -1, got '" + s_field + "'");
    }

    double t_val = 0.0;
    auto res = std::from_chars(t_field.data(), t_field.data() + t_field.size(), t_val);
    if (res.ec != std::errc{} || res.ptr != t_field.data() + t_field.size()) {
      parse_fail(path, lineno, "malformed t value '" + t_field + "'");
    }

    ds.s.push_back(static_cast<std::int8_t>(s_val));
    ds.t.push_back(t_val);
    if (t_val < 1 || t_val != static_cast<std::int64_t>(t_val)) all_symbols = false;
    if (t_val > max_symbol) max_symbol = t_val;
  }

  if (ds.s.empty()) throw std::runtime_error(path + ": empty dataset");

  if (all_symbols) {
    ds.setting = Setting::classification;
    ds.d = static_cast<int>(max_symbol);
  }
  return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
  ds.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path);
  out << "s,t\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << static_cast<int>(ds.s[i]) << ',';
    if (ds.setting == Setting::classification) {
      out << static_cast<std::int64_t>(ds.t[i]);
    } else {
      out << format_double(ds.t[i]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace leakaudit
