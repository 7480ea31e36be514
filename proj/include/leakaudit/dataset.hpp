#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace leakaudit {

enum class Setting { representation, classification };
enum class Loss { squared, log_loss };

inline const char* to_string(Setting s) {
  return s == Setting::representation ? "representation" : "classification";
}
inline const char* to_string(Loss l) { return l == Loss::squared ? "squared" : "log"; }

// Ordered labeled pairs (s, t).  In the representation setting t is a real
// scalar; in the classification setting t holds a symbol in 1..d.
struct Dataset {
  Setting setting = Setting::representation;
  int d = 0;  // alphabet size, classification only
  std::vector<std::int8_t> s;
  std::vector<double> t;
  std::string tag;  // scenario annotation carried into audit reports

  std::size_t size() const { return s.size(); }

  void validate() const {
    if (s.empty()) throw std::invalid_argument("Dataset: empty dataset");
    if (s.size() != t.size()) throw std::invalid_argument("Dataset: s/t length mismatch");
    for (std::int8_t v : s) {
      if (v != 1 && v != -1) throw std::invalid_argument("Dataset: s values must be +1 or -1");
    }
    if (setting == Setting::classification) {
      if (d < 1) throw std::invalid_argument("Dataset: classification dataset needs d >= 1");
      for (double v : t) {
        if (v < 1 || v > d || v != static_cast<std::int64_t>(v)) {
          throw std::invalid_argument("Dataset: classification symbols must lie in 1..d");
        }
      }
    }
  }
};

// CSV I/O: header `s,t`, one pair per row, LF line endings.
Dataset read_dataset(const std::string& path);
void write_dataset(const Dataset& ds, const std::string& path);

}  // namespace leakaudit
