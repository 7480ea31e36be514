#include "leakaudit/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include <nlohmann/json.hpp>

#include "train_kernel.hpp"

namespace leakaudit::adversary {

namespace {

constexpr double kLogClamp = 1.0 - 1e-6;

double per_sample_loss(double h, double s, Loss loss) {
  if (loss == Loss::squared) {
    const double dlt = h - s;
    return dlt * dlt;
  }
  const double hc = std::clamp(h, -kLogClamp, kLogClamp);
  const double p = 0.5 * (1.0 + hc);
  return -0.5 * (1.0 + s) * std::log(p) - 0.5 * (1.0 - s) * std::log(1.0 - p);
}

// d loss / d h
double per_sample_loss_grad(double h, double s, Loss loss) {
  if (loss == Loss::squared) return 2.0 * (h - s);
  if (h <= -kLogClamp || h >= kLogClamp) return 0.0;
  const double p = 0.5 * (1.0 + h);
  return 0.25 * (-(1.0 + s) / p + (1.0 - s) / (1.0 - p));
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace

double activation(double t) { return std::tanh(0.5 * t); }

TwoLayerNet TwoLayerNet::zeros(int k, int q) {
  if (k < 1 || q < 1) throw std::invalid_argument("TwoLayerNet: k and q must be positive");
  TwoLayerNet net;
  net.k = k;
  net.q = q;
  net.a.assign(static_cast<std::size_t>(k) * q, 0.0);
  net.b.assign(k, 0.0);
  net.c.assign(k, 0.0);
  return net;
}

void TwoLayerNet::validate() const {
  if (k < 1 || q < 1) throw std::invalid_argument("TwoLayerNet: k and q must be positive");
  if (a.size() != static_cast<std::size_t>(k) * q || b.size() != static_cast<std::size_t>(k) ||
      c.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument("TwoLayerNet: parameter shape mismatch");
  }
  auto finite = [](const std::vector<double>& xs) {
    for (double x : xs) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  };
  if (!finite(a) || !finite(b) || !finite(c) || !std::isfinite(c0)) {
    throw std::invalid_argument("TwoLayerNet: parameters must be finite");
  }
}

double TwoLayerNet::forward(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(q)) {
    throw std::invalid_argument("TwoLayerNet::forward: input dimension mismatch");
  }
  double h = c0;
  for (int i = 0; i < k; ++i) {
    double z = b[i];
    const double* row = a.data() + static_cast<std::size_t>(i) * q;
    for (int j = 0; j < q; ++j) z += row[j] * x[j];
    h += c[i] * activation(z);
  }
  return h;
}

double TwoLayerNet::forward_scalar(double t) const {
  if (q != 1) throw std::invalid_argument("TwoLayerNet::forward_scalar: network input is not scalar");
  double h = c0;
  for (int i = 0; i < k; ++i) h += c[i] * activation(a[i] * t + b[i]);
  return h;
}

void TwoLayerNet::save_json(const std::string& path) const {
  validate();
  nlohmann::json doc{{"k", k}, {"q", q}, {"a", a}, {"b", b}, {"c", c}, {"c0", c0}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open network file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failure: " + path);
}

TwoLayerNet TwoLayerNet::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  TwoLayerNet net;
  net.k = doc.at("k").get<int>();
  net.q = doc.at("q").get<int>();
  net.a = doc.at("a").get<std::vector<double>>();
  net.b = doc.at("b").get<std::vector<double>>();
  net.c = doc.at("c").get<std::vector<double>>();
  net.c0 = doc.at("c0").get<double>();
  net.validate();
  return net;
}

void TrainConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("TrainConfig: restarts must be positive");
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be positive");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be positive");
  if (!(learn_rate > 0.0)) throw std::invalid_argument("TrainConfig: learn_rate must be positive");
  if (!(adam_betas.first > 0.0 && adam_betas.first < 1.0) ||
      !(adam_betas.second > 0.0 && adam_betas.second < 1.0)) {
    throw std::invalid_argument("TrainConfig: adam betas must lie in (0,1)");
  }
  if (init_scale < 0.0) throw std::invalid_argument("TrainConfig: init_scale must be non-negative");
}

double empirical_loss(const TwoLayerNet& net, const Dataset& ds, Loss loss) {
  net.validate();
  ds.validate();
  if (ds.setting != Setting::representation) {
    throw std::invalid_argument("empirical_loss: representation-setting dataset required");
  }
  if (net.q != 1) throw std::invalid_argument("empirical_loss: dataset inputs are scalar, need q == 1");

  std::vector<double> losses(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    losses[i] = per_sample_loss(net.forward_scalar(ds.t[i]), ds.s[i], loss);
  }
  return pairwise_sum(losses.data(), losses.size()) / static_cast<double>(losses.size());
}

NetGradient gradient(const TwoLayerNet& net, const Dataset& ds,
                     std::span<const std::size_t> batch, Loss loss) {
  net.validate();
  if (batch.empty()) throw std::invalid_argument("gradient: empty batch");
  if (net.q != 1) throw std::invalid_argument("gradient: dataset inputs are scalar, need q == 1");

  NetGradient g;
  g.a.assign(net.k, 0.0);
  g.b.assign(net.k, 0.0);
  g.c.assign(net.k, 0.0);

  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t idx : batch) {
    if (idx >= ds.size()) throw std::out_of_range("gradient: batch index out of range");
    const double t = ds.t[idx];
    const double s = ds.s[idx];
    const double h = net.forward_scalar(t);
    const double gh = per_sample_loss_grad(h, s, loss) * inv;
    g.c0 += gh;
    for (int i = 0; i < net.k; ++i) {
      const double sg = activation(net.a[i] * t + net.b[i]);
      g.c[i] += gh * sg;
      const double dz = gh * net.c[i] * 0.5 * (1.0 - sg * sg);
      g.b[i] += dz;
      g.a[i] += dz * t;
    }
  }
  return g;
}

ErmResult train_erm(const Dataset& ds, int k, const TrainConfig& cfg) {
  ds.validate();
  cfg.validate();
  if (ds.setting != Setting::representation) {
    throw std::invalid_argument("train_erm: representation-setting dataset required");
  }
  if (k < 1) throw std::invalid_argument("train_erm: k must be positive");
  if (static_cast<std::size_t>(k) >= 2 * ds.size()) {
    std::cerr << "warning: k >= 2n, the network can memorize the sample and the certificate is vacuous\n";
  }

  std::vector<float> t(ds.t.begin(), ds.t.end());
  std::vector<float> s(ds.s.begin(), ds.s.end());

  ErmResult result;
  result.per_restart_losses.assign(cfg.restarts, std::numeric_limits<double>::quiet_NaN());
  double best = std::numeric_limits<double>::infinity();

  for (int r = 0; r < cfg.restarts; ++r) {
    detail::RestartOutcome outcome = detail::run_restart(t, s, k, cfg, static_cast<std::uint64_t>(r));
    if (!outcome.has_snapshot || !std::isfinite(outcome.tracked_loss)) continue;  // diverged

    TwoLayerNet net;
    net.k = k;
    net.q = 1;
    net.a.assign(outcome.a.begin(), outcome.a.end());
    net.b.assign(outcome.b.begin(), outcome.b.end());
    net.c.assign(outcome.c.begin(), outcome.c.end());
    net.c0 = outcome.c0;

    const double loss = empirical_loss(net, ds, cfg.loss);
    if (!std::isfinite(loss)) continue;
    result.per_restart_losses[r] = loss;
    if (loss < best) {
      best = loss;
      result.best_net = std::move(net);
      result.best_restart_index = r;
    }
  }

  if (result.best_restart_index < 0) {
    throw std::runtime_error("train_erm: every restart diverged");
  }
  result.best_empirical_loss = best;
  return result;
}

}  // namespace leakaudit::adversary
