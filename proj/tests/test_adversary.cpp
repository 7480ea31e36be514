#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <vector>

#include "leakaudit/adversary.hpp"
#include "leakaudit/analytic.hpp"
#include "leakaudit/rng.hpp"
#include "leakaudit/synthdata.hpp"

using namespace leakaudit;
using namespace leakaudit::adversary;

namespace {

TwoLayerNet random_net(int k, StreamRng& rng) {
  TwoLayerNet net = TwoLayerNet::zeros(k);
  for (double& v : net.a) v = rng.next_gaussian();
  for (double& v : net.b) v = rng.next_gaussian();
  for (double& v : net.c) v = 0.3 * rng.next_gaussian();
  net.c0 = 0.3 * rng.next_gaussian();
  return net;
}

Dataset random_dataset(std::size_t n, StreamRng& rng) {
  Dataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    ds.s.push_back((rng.next_u64() & 1) ? 1 : -1);
    ds.t.push_back(2.0 * rng.next_double() - 1.0);
  }
  return ds;
}

// Flattened view of a gradient for finite-difference comparison.
std::vector<double*> parameters(TwoLayerNet& net) {
  std::vector<double*> out;
  for (double& v : net.a) out.push_back(&v);
  for (double& v : net.b) out.push_back(&v);
  for (double& v : net.c) out.push_back(&v);
  out.push_back(&net.c0);
  return out;
}

std::vector<double> flatten(const NetGradient& g) {
  std::vector<double> out;
  out.insert(out.end(), g.a.begin(), g.a.end());
  out.insert(out.end(), g.b.begin(), g.b.end());
  out.insert(out.end(), g.c.begin(), g.c.end());
  out.push_back(g.c0);
  return out;
}

}  // namespace

TEST_CASE("activation is the scaled logistic sigmoid") {
  CHECK(activation(0.0) == 0.0);
  CHECK(activation(2.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
  // Same function written via exponentials.
  for (double t : {-5.0, -0.7, 0.3, 4.0}) {
    const double via_exp = (1.0 - std::exp(-t)) / (1.0 + std::exp(-t));
    CHECK(activation(t) == doctest::Approx(via_exp).epsilon(1e-14));
  }
}

TEST_CASE("forward evaluates the two-layer formula") {
  TwoLayerNet net = TwoLayerNet::zeros(2);
  CHECK(net.forward_scalar(1.5) == 0.0);

  net.a = {2.0, 0.0};
  net.b = {0.0, 2.0};
  net.c = {1.0, -0.5};
  net.c0 = 0.25;
  // h(1) = 0.25 + 1 * sigma(2) - 0.5 * sigma(2).
  const double expected = 0.25 + 0.5 * std::tanh(1.0);
  CHECK(net.forward_scalar(1.0) == doctest::Approx(expected).epsilon(1e-15));
  const double x[1] = {1.0};
  CHECK(net.forward(x) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("empirical_loss on hand-checked datasets") {
  Dataset ds;
  ds.s = {1, -1, 1};
  ds.t = {0.0, 0.5, -0.5};

  const TwoLayerNet zero = TwoLayerNet::zeros(4);
  // Zero net predicts 0, so squared loss is mean of s^2 = 1 exactly.
  CHECK(empirical_loss(zero, ds, Loss::squared) == 1.0);
  // Log loss of the uninformative predictor is log 2.
  CHECK(empirical_loss(zero, ds, Loss::log_loss) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  TwoLayerNet biased = TwoLayerNet::zeros(4);
  biased.c0 = 0.5;
  // Residuals: (1-0.5)^2, (-1-0.5)^2, (1-0.5)^2 -> mean (0.25+2.25+0.25)/3.
  CHECK(empirical_loss(biased, ds, Loss::squared) == doctest::Approx(2.75 / 3.0).epsilon(1e-15));
}

TEST_CASE("perfect memorizer reaches zero squared loss") {
  Dataset ds;
  ds.s = {1};
  ds.t = {0.3};
  TwoLayerNet net = TwoLayerNet::zeros(1);
  net.c0 = 1.0;
  CHECK(empirical_loss(net, ds, Loss::squared) == 0.0);
}

TEST_CASE("gradient of the zero net") {
  Dataset ds;
  ds.s = {1};
  ds.t = {0.0};
  const TwoLayerNet zero = TwoLayerNet::zeros(3);
  std::vector<std::size_t> batch = {0};
  const NetGradient g = gradient(zero, ds, batch, Loss::squared);
  // d/dc0 of (s - h)^2 at h = 0 is -2s.
  CHECK(g.c0 == doctest::Approx(-2.0).epsilon(1e-15));
  // With c = 0 the hidden layer does not influence the output.
  for (double v : g.a) CHECK(v == 0.0);
  for (double v : g.b) CHECK(v == 0.0);
}

TEST_CASE("backprop matches central finite differences") {
  StreamRng rng(17, 0);
  const double step = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Loss loss = (trial % 2) ? Loss::log_loss : Loss::squared;
    TwoLayerNet net = random_net(2 + trial % 4, rng);
    Dataset ds = random_dataset(8, rng);
    std::vector<std::size_t> batch(ds.size());
    std::iota(batch.begin(), batch.end(), std::size_t{0});

    const std::vector<double> analytic_grad = flatten(gradient(net, ds, batch, loss));
    const auto params = parameters(net);
    REQUIRE(params.size() == analytic_grad.size());
    for (std::size_t j = 0; j < params.size(); ++j) {
      const double saved = *params[j];
      *params[j] = saved + step;
      const double up = empirical_loss(net, ds, loss);
      *params[j] = saved - step;
      const double down = empirical_loss(net, ds, loss);
      *params[j] = saved;
      const double fd = (up - down) / (2.0 * step);
      const double denom = std::max({std::fabs(fd), std::fabs(analytic_grad[j]), 1e-4});
      worst = std::max(worst, std::fabs(fd - analytic_grad[j]) / denom);
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("train_erm approaches the optimal predictor's sample loss") {
  const auto scn = synthdata::Scenario::with_mu(0.1, 5);
  const Dataset ds = synthdata::sample_dataset(scn, 5000);

  TrainConfig cfg;
  cfg.restarts = 4;
  cfg.epochs = 20;
  cfg.seed = 1;
  const ErmResult result = train_erm(ds, 64, cfg);

  // Sample loss of the population-optimal predictor tanh(mu t).
  double eta_loss = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double r = ds.s[i] - analytic::eta(ds.t[i], 0.1);
    eta_loss += r * r;
  }
  eta_loss /= static_cast<double>(ds.size());

  CHECK(result.best_empirical_loss <= eta_loss + 0.005);
  CHECK(result.best_empirical_loss > 0.9);  // near-uninformative regime

  // Book-keeping invariants.
  CHECK(empirical_loss(result.best_net, ds, Loss::squared) ==
        doctest::Approx(result.best_empirical_loss).epsilon(1e-15));
  REQUIRE(result.per_restart_losses.size() == 4);
  double best_seen = result.per_restart_losses[result.best_restart_index];
  for (double l : result.per_restart_losses) {
    if (!std::isnan(l)) CHECK(best_seen <= l);
  }
}

TEST_CASE("restart streams are schedule-independent") {
  const auto scn = synthdata::Scenario::with_mu(0.05, 9);
  const Dataset ds = synthdata::sample_dataset(scn, 1000);

  TrainConfig one;
  one.restarts = 1;
  one.epochs = 5;
  one.seed = 77;
  TrainConfig three = one;
  three.restarts = 3;

  const ErmResult r1 = train_erm(ds, 16, one);
  const ErmResult r3 = train_erm(ds, 16, three);
  // Restart 0 is a pure function of (seed, 0), so it must agree bitwise.
  CHECK(r1.per_restart_losses[0] == r3.per_restart_losses[0]);
  CHECK(r3.best_empirical_loss <= r1.best_empirical_loss);
}

TEST_CASE("train_erm reports when every restart diverges") {
  const auto scn = synthdata::Scenario::with_mu(0.05, 2);
  const Dataset ds = synthdata::sample_dataset(scn, 200);
  TrainConfig cfg;
  cfg.restarts = 2;
  cfg.epochs = 3;
  cfg.optimizer = Optimizer::sgd;
  // An infinite step turns every parameter non-finite on the first batch.
  cfg.learn_rate = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH(train_erm(ds, 8, cfg), doctest::Contains("diverged"));
}

TEST_CASE("net JSON round-trip preserves the function exactly") {
  StreamRng rng(123, 0);
  TwoLayerNet net = random_net(6, rng);
  const auto path = std::filesystem::temp_directory_path() / "leakaudit_net.json";
  net.save_json(path.string());
  const TwoLayerNet back = TwoLayerNet::load_json(path.string());
  for (double t : {-2.0, -0.5, 0.0, 0.8, 2.5}) {
    CHECK(back.forward_scalar(t) == net.forward_scalar(t));
  }
  std::filesystem::remove(path);
}

TEST_CASE("config validation rejects nonsense") {
  TrainConfig cfg;
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.learn_rate = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  CHECK_NOTHROW(cfg.validate());
}
