#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "leakaudit/dataset.hpp"

namespace leakaudit::finitealpha {

// Joint counts over {-1,+1} x [d]; row 0 holds s = -1, row 1 holds s = +1.
struct JointHistogram {
  int d = 0;
  std::array<std::vector<std::int64_t>, 2> counts;
  std::int64_t n = 0;

  std::int64_t count(int sign, int symbol) const {
    return counts[sign > 0 ? 1 : 0][static_cast<std::size_t>(symbol - 1)];
  }

  void validate() const;

  void save_json(const std::string& path) const;
  static JointHistogram load_json(const std::string& path);
};

// Joint probabilities with the same layout.
struct JointPMF {
  int d = 0;
  std::array<std::vector<double>, 2> probs;

  double prob(int sign, int symbol) const {
    return probs[sign > 0 ? 1 : 0][static_cast<std::size_t>(symbol - 1)];
  }

  void validate() const;
};

JointHistogram histogram(const Dataset& ds);

JointPMF normalize(const JointHistogram& h);

// H(S|T) in nats on the (empirical) joint distribution; zero-marginal
// symbols contribute nothing.
double plugin_conditional_entropy(const JointPMF& pmf);
double plugin_conditional_entropy(const JointHistogram& h);

double tv_distance(const JointPMF& p, const JointPMF& q);

struct ClassificationErm {
  double value = 0.0;
  std::vector<double> argmin;  // optimal h(t) per symbol, in [-1,1]
};

// Exact minimizer over all h:[d] -> [-1,1].  Squared loss: h*(t) is the
// empirical conditional mean of S; log loss: the value is the plug-in
// conditional entropy.  Zero-count symbols get the neutral argmin.
ClassificationErm min_empirical_loss_classification(const JointHistogram& h, Loss loss);

}  // namespace leakaudit::finitealpha
