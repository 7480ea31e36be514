#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leakaudit/dataset.hpp"

namespace leakaudit::adversary {

// Two-layer network h(x) = c0 + sum_i c_i * sigma(a_i . x + b_i) with
// sigma(t) = (1 - e^{-t}) / (1 + e^{-t}) = tanh(t/2).
struct TwoLayerNet {
  int k = 0;
  int q = 1;
  std::vector<double> a;  // k * q, row-major
  std::vector<double> b;  // k
  std::vector<double> c;  // k
  double c0 = 0.0;

  static TwoLayerNet zeros(int k, int q = 1);

  double forward(std::span<const double> x) const;
  double forward_scalar(double t) const;  // q == 1 shortcut

  void validate() const;

  void save_json(const std::string& path) const;
  static TwoLayerNet load_json(const std::string& path);
};

// sigma of the network definition.
double activation(double t);

enum class Optimizer { sgd, adam };

struct TrainConfig {
  int restarts = 10;
  int epochs = 30;
  int batch_size = 256;
  Optimizer optimizer = Optimizer::adam;
  double learn_rate = 1e-3;
  std::pair<double, double> adam_betas = {0.9, 0.999};
  double init_scale = 0.0;  // 0 -> 0.5 / sqrt(k)
  std::uint64_t seed = 0;
  Loss loss = Loss::squared;

  void validate() const;
};

struct ErmResult {
  TwoLayerNet best_net;
  double best_empirical_loss = 0.0;
  std::vector<double> per_restart_losses;  // NaN marks a diverged restart
  int best_restart_index = -1;
};

// Mean per-sample loss over the dataset, pairwise-compensated accumulation.
// For log loss, outputs are squashed to (0,1) via p = (1 + clamp(h)) / 2.
double empirical_loss(const TwoLayerNet& net, const Dataset& ds, Loss loss);

struct NetGradient {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  double c0 = 0.0;
};

// Exact gradient of the batch-mean loss; `batch` holds dataset indices.
NetGradient gradient(const TwoLayerNet& net, const Dataset& ds,
                     std::span<const std::size_t> batch, Loss loss);

// Multi-restart first-order search for the minimal empirical loss.  Each
// restart runs on its own RNG stream derived from (cfg.seed, restart index),
// so the result is independent of evaluation order.
ErmResult train_erm(const Dataset& ds, int k, const TrainConfig& cfg);

}  // namespace leakaudit::adversary
