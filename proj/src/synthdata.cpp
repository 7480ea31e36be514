#include "leakaudit/synthdata.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "leakaudit/rng.hpp"

namespace leakaudit::synthdata {

namespace {

constexpr int kMaxConsecutiveRejections = 1000000;

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// One truncated draw of N(mean, 1) restricted to [-r, r].
double truncated_gaussian(StreamRng& rng, double mean, double r) {
  for (int attempt = 0; attempt < kMaxConsecutiveRejections; ++attempt) {
    const double v = mean + rng.next_gaussian();
    if (v >= -r && v <= r) return v;
  }
  throw std::runtime_error("truncated_gaussian: rejection sampler exceeded retry budget");
}

// sigma(t) = (1 - e^{-t}) / (1 + e^{-t})
double sigma(double t) { return std::tanh(0.5 * t); }

}  // namespace

double Scenario::mu() const { return dot(v, v0); }

void Scenario::validate() const {
  if (p < 1) throw std::invalid_argument("Scenario: p must be positive");
  if (v0.size() != static_cast<std::size_t>(p) || v.size() != static_cast<std::size_t>(p)) {
    throw std::invalid_argument("Scenario: v0 and v must have dimension p");
  }
  if (std::fabs(norm(v0) - 1.0) > 1e-9 || std::fabs(norm(v) - 1.0) > 1e-9) {
    throw std::invalid_argument("Scenario: v0 and v must be unit vectors");
  }
  if (!(r > 0.0)) throw std::invalid_argument("Scenario: r must be positive");
}

Scenario Scenario::with_mu(double mu, std::uint64_t seed, double r) {
  if (!(mu >= -1.0 && mu <= 1.0)) throw std::invalid_argument("Scenario: mu must lie in [-1,1]");
  Scenario scn;
  scn.p = 2;
  scn.v0 = {1.0, 0.0};
  scn.v = {mu, std::sqrt(1.0 - mu * mu)};
  scn.r = r;
  scn.seed = seed;
  return scn;
}

Dataset sample_dataset(const Scenario& scn, std::int64_t n) {
  scn.validate();
  if (n < 1) throw std::invalid_argument("sample_dataset: n must be positive");

  // Only the 1-D projection <U, v> ~ N(S mu, 1) is materialized.
  const double mu = scn.mu();
  StreamRng rng(scn.seed, 0);

  Dataset ds;
  ds.setting = Setting::representation;
  ds.tag = "gaussian-mixture";
  ds.s.reserve(static_cast<std::size_t>(n));
  ds.t.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int8_t s = (rng.next_u64() & 1) ? std::int8_t{1} : std::int8_t{-1};
    ds.s.push_back(s);
    ds.t.push_back(truncated_gaussian(rng, s * mu, scn.r));
  }
  return ds;
}

std::vector<double> smooth_and_truncate(std::span<const double> values, double gamma,
                                        double r, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw std::invalid_argument("smooth_and_truncate: gamma must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("smooth_and_truncate: r must be positive");

  std::vector<double> out;
  out.reserve(values.size());
  StreamRng rng(seed, 1);
  for (double v : values) {
    double noisy;
    int attempt = 0;
    do {
      if (++attempt > kMaxConsecutiveRejections) {
        throw std::runtime_error("smooth_and_truncate: rejection sampler exceeded retry budget");
      }
      noisy = v + gamma * rng.next_gaussian();
    } while (noisy < -r || noisy > r);
    out.push_back(noisy);
  }
  return out;
}

void Population::validate() const {
  if (n_rows == 0 || p < 1) throw std::invalid_argument("Population: empty population");
  if (x.size() != n_rows * static_cast<std::size_t>(p)) throw std::invalid_argument("Population: x shape mismatch");
  if (y.size() != n_rows || membership.size() != n_rows) {
    throw std::invalid_argument("Population: membership length must equal the number of rows");
  }
  bool has_member = false, has_non_member = false;
  for (std::int8_t m : membership) {
    if (m == 1) has_member = true;
    else if (m == -1) has_non_member = true;
    else throw std::invalid_argument("Population: membership values must be +1 or -1");
  }
  if (!has_member || !has_non_member) {
    throw std::invalid_argument("Population: need at least one member and one non-member");
  }
}

Dataset build_membership_scenario(const Population& pop, int train_steps,
                                  double learn_rate, std::uint64_t seed) {
  pop.validate();
  if (train_steps < 1) throw std::invalid_argument("build_membership_scenario: train_steps must be positive");
  if (!(learn_rate > 0.0)) throw std::invalid_argument("build_membership_scenario: learn_rate must be positive");

  std::vector<std::size_t> members;
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < pop.n_rows; ++i) {
    if (pop.membership[i] == 1) {
      members.push_back(i);
      if (pop.y[i] == 1) has_pos = true;
      else has_neg = true;
    }
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("build_membership_scenario: member rows carry a single label, target is degenerate");
  }

  // Full-batch gradient descent on the logistic negative log-likelihood.
  StreamRng rng(seed, 2);
  std::vector<double> w(pop.p);
  for (double& wi : w) wi = 0.01 * rng.next_gaussian();

  std::vector<double> grad(pop.p);
  for (int step = 0; step < train_steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i : members) {
      const double* row = pop.x.data() + i * pop.p;
      const double z = dot({row, static_cast<std::size_t>(pop.p)}, w);
      const double prob = 1.0 / (1.0 + std::exp(-z));
      const double target = pop.y[i] == 1 ? 1.0 : 0.0;
      const double coeff = (prob - target) / static_cast<double>(members.size());
      for (int j = 0; j < pop.p; ++j) grad[j] += coeff * row[j];
    }
    for (int j = 0; j < pop.p; ++j) w[j] -= learn_rate * grad[j];
  }

  Dataset ds;
  ds.setting = Setting::representation;
  ds.tag = "membership-inference";
  ds.s.reserve(pop.n_rows);
  ds.t.reserve(pop.n_rows);
  for (std::size_t i = 0; i < pop.n_rows; ++i) {
    const double* row = pop.x.data() + i * pop.p;
    ds.s.push_back(pop.membership[i]);
    ds.t.push_back(sigma(dot({row, static_cast<std::size_t>(pop.p)}, w)));
  }
  return ds;
}

Dataset build_feature_leakage_scenario(const Scenario& scn, std::int64_t n) {
  Dataset ds = sample_dataset(scn, n);
  ds.tag = "feature-leakage";
  if (scn.mu() == 0.0) ds.tag += ";demographic-parity";
  return ds;
}

}  // namespace leakaudit::synthdata
