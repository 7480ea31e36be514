#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "leakaudit/analytic.hpp"
#include "leakaudit/finitealpha.hpp"
#include "leakaudit/rng.hpp"

using namespace leakaudit;
using namespace leakaudit::finitealpha;

namespace {

JointHistogram make_hist(std::vector<std::int64_t> minus, std::vector<std::int64_t> plus) {
  JointHistogram h;
  h.d = static_cast<int>(minus.size());
  h.counts[0] = std::move(minus);
  h.counts[1] = std::move(plus);
  h.n = 0;
  for (const auto& row : h.counts) {
    for (std::int64_t c : row) h.n += c;
  }
  return h;
}

JointPMF make_pmf(std::vector<double> minus, std::vector<double> plus) {
  JointPMF pmf;
  pmf.d = static_cast<int>(minus.size());
  pmf.probs[0] = std::move(minus);
  pmf.probs[1] = std::move(plus);
  return pmf;
}

// Objective minimized by min_empirical_loss_classification, evaluated at an
// arbitrary candidate (h-values for squared loss, probabilities for log loss).
double objective(const JointHistogram& h, const std::vector<double>& cand, Loss loss) {
  double total = 0.0;
  for (int j = 0; j < h.d; ++j) {
    const double c_minus = static_cast<double>(h.counts[0][j]);
    const double c_plus = static_cast<double>(h.counts[1][j]);
    if (loss == Loss::squared) {
      total += c_plus * (1.0 - cand[j]) * (1.0 - cand[j]) +
               c_minus * (-1.0 - cand[j]) * (-1.0 - cand[j]);
    } else {
      total += -c_plus * std::log(cand[j]) - c_minus * std::log(1.0 - cand[j]);
    }
  }
  return total / static_cast<double>(h.n);
}

}  // namespace

TEST_CASE("histogram counts pairs and is permutation-invariant") {
  Dataset ds;
  ds.setting = Setting::classification;
  ds.d = 3;
  ds.s = {1, 1, -1, 1, -1};
  ds.t = {1, 2, 2, 2, 3};
  const JointHistogram h = histogram(ds);
  CHECK(h.n == 5);
  CHECK(h.count(+1, 1) == 1);
  CHECK(h.count(+1, 2) == 2);
  CHECK(h.count(-1, 2) == 1);
  CHECK(h.count(-1, 3) == 1);
  CHECK(h.count(+1, 3) == 0);

  Dataset shuffled = ds;
  std::reverse(shuffled.s.begin(), shuffled.s.end());
  std::reverse(shuffled.t.begin(), shuffled.t.end());
  const JointHistogram h2 = histogram(shuffled);
  CHECK(h2.counts == h.counts);

  Dataset rep;
  rep.s = {1};
  rep.t = {0.5};
  CHECK_THROWS(histogram(rep));  // representation setting rejected
}

TEST_CASE("plugin conditional entropy on hand-checked distributions") {
  // S independent of T, both fair: H(S|T) = log 2.
  CHECK(plugin_conditional_entropy(make_pmf({0.25, 0.25}, {0.25, 0.25})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // S a deterministic function of T: zero residual entropy.
  CHECK(plugin_conditional_entropy(make_pmf({0.5, 0.0}, {0.0, 0.5})) == 0.0);
  // Mixed case: each symbol leaves a Bernoulli(0.2) residual.
  CHECK(plugin_conditional_entropy(make_pmf({0.4, 0.1}, {0.1, 0.4})) ==
        doctest::Approx(0.50040242353837476).epsilon(1e-12));
  // Zero-probability symbols contribute nothing.
  CHECK(plugin_conditional_entropy(make_pmf({0.5, 0.0}, {0.5, 0.0})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("conditional entropy stays within [0, log 2]") {
  StreamRng rng(31, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 4);
    JointPMF pmf;
    pmf.d = d;
    double total = 0.0;
    for (int row = 0; row < 2; ++row) {
      pmf.probs[row].resize(d);
      for (double& p : pmf.probs[row]) {
        p = rng.next_double();
        total += p;
      }
    }
    for (int row = 0; row < 2; ++row) {
      for (double& p : pmf.probs[row]) p /= total;
    }
    const double entropy = plugin_conditional_entropy(pmf);
    CHECK(entropy >= 0.0);
    CHECK(entropy <= std::log(2.0) + 1e-12);
  }
}

TEST_CASE("tv_distance identities and metric properties") {
  const JointPMF uniform = make_pmf({0.25, 0.25}, {0.25, 0.25});
  const JointPMF skew = make_pmf({0.5, 0.0}, {0.25, 0.25});
  CHECK(tv_distance(uniform, uniform) == 0.0);
  CHECK(tv_distance(uniform, skew) == doctest::Approx(0.25).epsilon(1e-15));
  // Disjoint supports are at maximal distance.
  CHECK(tv_distance(make_pmf({0.5, 0.0}, {0.5, 0.0}), make_pmf({0.0, 0.5}, {0.0, 0.5})) ==
        doctest::Approx(1.0).epsilon(1e-15));

  StreamRng rng(32, 0);
  for (int trial = 0; trial < 100; ++trial) {
    auto random_pmf = [&rng] {
      JointPMF pmf;
      pmf.d = 3;
      double total = 0.0;
      for (int row = 0; row < 2; ++row) {
        pmf.probs[row].resize(3);
        for (double& p : pmf.probs[row]) {
          p = rng.next_double();
          total += p;
        }
      }
      for (int row = 0; row < 2; ++row) {
        for (double& p : pmf.probs[row]) p /= total;
      }
      return pmf;
    };
    const JointPMF p = random_pmf(), q = random_pmf(), r = random_pmf();
    CHECK(tv_distance(p, q) == doctest::Approx(tv_distance(q, p)).epsilon(1e-14));
    CHECK(tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-14);
    CHECK(tv_distance(p, q) <= 1.0 + 1e-14);
  }
}

TEST_CASE("min_empirical_loss_classification on hand-checked histograms") {
  // Perfectly predictable: every symbol determines the sign.
  const JointHistogram determined = make_hist({10, 0}, {0, 10});
  const ClassificationErm sq = min_empirical_loss_classification(determined, Loss::squared);
  CHECK(sq.value == 0.0);
  CHECK(sq.argmin == std::vector<double>{-1.0, 1.0});
  const ClassificationErm lg = min_empirical_loss_classification(determined, Loss::log_loss);
  CHECK(lg.value == 0.0);
  CHECK(lg.argmin == std::vector<double>{0.0, 1.0});

  // Completely uninformative: the best constant is 0, with loss 1 (squared)
  // and log 2 (log loss).
  const JointHistogram balanced = make_hist({25, 25}, {25, 25});
  CHECK(min_empirical_loss_classification(balanced, Loss::squared).value ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(min_empirical_loss_classification(balanced, Loss::log_loss).value ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));

  // Zero-count symbols get the neutral argmin and no loss contribution.
  const JointHistogram sparse = make_hist({5, 0}, {5, 0});
  const ClassificationErm sparse_sq = min_empirical_loss_classification(sparse, Loss::squared);
  CHECK(sparse_sq.argmin[1] == 0.0);
  CHECK(sparse_sq.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(min_empirical_loss_classification(sparse, Loss::log_loss).argmin[1] == 0.5);
}

TEST_CASE("closed-form minimizer beats a dense grid search") {
  StreamRng rng(33, 0);
  for (int trial = 0; trial < 3; ++trial) {
    // Counts bounded away from zero keep the log-loss optimum interior.
    std::vector<std::int64_t> minus(3), plus(3);
    for (auto& c : minus) c = 10 + static_cast<std::int64_t>(rng.next_u64() % 51);
    for (auto& c : plus) c = 10 + static_cast<std::int64_t>(rng.next_u64() % 51);
    const JointHistogram h = make_hist(minus, plus);

    for (Loss loss : {Loss::squared, Loss::log_loss}) {
      const ClassificationErm erm = min_empirical_loss_classification(h, loss);

      // Independent oracle: exhaustive search over a 201-point grid per
      // symbol (grid range [-1,1] for squared, (0,1) for log).
      double grid_best = std::numeric_limits<double>::infinity();
      std::vector<double> cand(3);
      for (int i0 = 0; i0 <= 200; ++i0) {
        cand[0] = loss == Loss::squared ? -1.0 + i0 * 0.01 : (i0 + 0.5) / 201.0;
        for (int i1 = 0; i1 <= 200; ++i1) {
          cand[1] = loss == Loss::squared ? -1.0 + i1 * 0.01 : (i1 + 0.5) / 201.0;
          for (int i2 = 0; i2 <= 200; ++i2) {
            cand[2] = loss == Loss::squared ? -1.0 + i2 * 0.01 : (i2 + 0.5) / 201.0;
            grid_best = std::min(grid_best, objective(h, cand, loss));
          }
        }
      }
      CHECK(erm.value <= grid_best + 1e-12);
      CHECK(std::fabs(erm.value - grid_best) < 1e-4);
    }
  }
}

TEST_CASE("closed-form value lower-bounds random candidates") {
  StreamRng rng(34, 0);
  const JointHistogram h = make_hist({7, 19, 3}, {12, 4, 25});
  const double sq_min = min_empirical_loss_classification(h, Loss::squared).value;
  const double lg_min = min_empirical_loss_classification(h, Loss::log_loss).value;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> hs(3), ps(3);
    for (int j = 0; j < 3; ++j) {
      hs[j] = 2.0 * rng.next_double() - 1.0;
      ps[j] = 0.001 + 0.998 * rng.next_double();
    }
    CHECK(sq_min <= objective(h, hs, Loss::squared) + 1e-12);
    CHECK(lg_min <= objective(h, ps, Loss::log_loss) + 1e-12);
  }
}

TEST_CASE("entropy continuity obeys the Alhejji-Smith gap") {
  // Sample from a fixed joint law and compare the plug-in conditional
  // entropy against the population one; the gap bound with the actual TV
  // distance must cover the discrepancy whenever the TV radius admits it.
  const JointPMF truth = make_pmf({0.30, 0.10, 0.05}, {0.20, 0.25, 0.10});
  const double true_entropy = plugin_conditional_entropy(truth);

  StreamRng rng(35, 0);
  for (int trial = 0; trial < 50; ++trial) {
    JointHistogram h;
    h.d = 3;
    h.counts[0].assign(3, 0);
    h.counts[1].assign(3, 0);
    h.n = 400;
    for (int i = 0; i < 400; ++i) {
      double u = rng.next_double();
      for (int row = 0; row < 2 && u >= 0.0; ++row) {
        for (int j = 0; j < 3; ++j) {
          u -= truth.probs[row][j];
          if (u < 0.0) {
            ++h.counts[row][j];
            break;
          }
        }
      }
    }
    const JointPMF empirical = normalize(h);
    const double theta = tv_distance(empirical, truth);
    if (theta > 0.5) continue;
    // Binary S: the continuity gap reduces to the binary entropy of theta.
    const double gap = analytic::alhejji_smith_gap(theta, 2);
    CHECK(std::fabs(plugin_conditional_entropy(empirical) - true_entropy) <= gap + 1e-12);
  }
}

TEST_CASE("histogram JSON round-trip and validation") {
  const JointHistogram h = make_hist({3, 0, 8}, {1, 5, 2});
  const auto path = std::filesystem::temp_directory_path() / "leakaudit_hist.json";
  h.save_json(path.string());
  const JointHistogram back = JointHistogram::load_json(path.string());
  CHECK(back.d == h.d);
  CHECK(back.counts == h.counts);
  CHECK(back.n == h.n);
  std::filesystem::remove(path);

  JointHistogram bad = h;
  bad.counts[0][0] = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = h;
  bad.n += 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
