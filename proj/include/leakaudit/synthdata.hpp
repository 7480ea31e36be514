#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leakaudit/dataset.hpp"

namespace leakaudit::synthdata {

// Generative description of the audited system: a symmetric Gaussian mixture
// along v0 observed through the linear classifier v, truncated to [-r, r].
struct Scenario {
  int p = 2;
  std::vector<double> v0;
  std::vector<double> v;
  double r = 3.0;
  std::uint64_t seed = 0;

  // Effective mean separation <v, v0>.
  double mu() const;
  void validate() const;

  // Convenience constructor: places v0 on the first axis and v in the
  // first-coordinate plane so that <v, v0> equals the requested mu.
  static Scenario with_mu(double mu, std::uint64_t seed, double r = 3.0);
};

// Population table for the membership-inference adapter.
struct Population {
  std::size_t n_rows = 0;
  int p = 0;
  std::vector<double> x;               // n_rows * p, row-major
  std::vector<std::int8_t> y;          // labels, +1/-1
  std::vector<std::int8_t> membership; // +1 = used to train the target

  void validate() const;
};

// n i.i.d. draws of (S, T): S Rademacher, T a rejection-sampled truncation
// of N(S mu, 1) to [-r, r].  Deterministic in scn.seed.
Dataset sample_dataset(const Scenario& scn, std::int64_t n);

// Adds N(0, gamma^2) noise to each value, rejection-resampled until the
// result lands in [-r, r].
std::vector<double> smooth_and_truncate(std::span<const double> values, double gamma,
                                        double r, std::uint64_t seed);

// Trains a logistic-regression target on the member rows only, then emits
// the supervised attack sample {(membership_i, g(x_i))} over all rows.
Dataset build_membership_scenario(const Population& pop, int train_steps,
                                  double learn_rate, std::uint64_t seed);

// Feature-leakage adapter: identical draw to sample_dataset, tagged so the
// report records the S = Z, T = g(X) identification.
Dataset build_feature_leakage_scenario(const Scenario& scn, std::int64_t n);

}  // namespace leakaudit::synthdata
