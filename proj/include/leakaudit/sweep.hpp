#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leakaudit/adversary.hpp"

namespace leakaudit::cli {

struct SweepConfig {
  std::vector<double> mu_grid = {0.01, 0.02, 0.04, 0.06, 0.08, 0.1};
  std::int64_t n = 100000;
  std::int64_t k = 1000;
  double delta = 0.01;
  adversary::TrainConfig train;
  std::string output_dir = ".";
  std::uint64_t seed = 0;

  void validate() const;
};

struct SweepRow {
  double mu = 0.0;
  std::int64_t n = 0;
  std::int64_t k = 0;
  double delta = 0.0;
  double empirical_loss = 0.0;
  double true_loss = 0.0;
  double lower_bound = 0.0;
  double ratio = 0.0;
  double wall_seconds = 0.0;
};

// One row per grid mu; each grid point derives its seeds from
// (cfg.seed, mu index), so rows do not depend on evaluation order.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
void write_sweep_json(const SweepConfig& cfg, const std::vector<SweepRow>& rows, const std::string& path);
// Three-series line chart (true loss, empirical loss, certified bound) vs mu.
void write_sweep_svg(const std::vector<SweepRow>& rows, const std::string& path);

// Runs the gradient-check, quadrature-oracle and Monte-Carlo coverage
// suites; prints one line per check and returns true iff all pass.
bool selftest(std::ostream& out);

}  // namespace leakaudit::cli
