#include "leakaudit/analytic.hpp"

#include <cmath>
#include <string>

#include "leakaudit/rng.hpp"

namespace leakaudit::analytic {

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

double truncation_mass(const MixtureParams& p) {
  return std_normal_cdf(p.r + p.mu) - std_normal_cdf(-p.r + p.mu);
}
}  // namespace

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("std_normal_cdf: non-finite input");
  return 0.5 * std::erfc(-x / kSqrt2);
}

double truncated_density(double t, int sign, const MixtureParams& params) {
  params.validate();
  if (sign != 1 && sign != -1) throw std::invalid_argument("truncated_density: sign must be +1 or -1");
  if (!std::isfinite(t)) throw std::domain_error("truncated_density: non-finite input");
  if (t < -params.r || t > params.r) return 0.0;
  const double dev = t - sign * params.mu;
  return std::exp(-0.5 * dev * dev) / (kSqrt2Pi * truncation_mass(params));
}

double eta(double t, double mu) {
  if (!std::isfinite(t) || !std::isfinite(mu)) throw std::domain_error("eta: non-finite input");
  return std::tanh(mu * t);
}

double barron_constant_tanh(double mu) {
  if (!std::isfinite(mu)) throw std::domain_error("barron_constant_tanh: non-finite input");
  return std::fabs(mu);
}

double barron_constant_numeric(double mu, const QuadratureSpec& spec) {
  if (!std::isfinite(mu)) throw std::domain_error("barron_constant_numeric: non-finite input");
  if (mu == 0.0) throw std::domain_error("barron_constant_numeric: mu = 0 is degenerate, use the closed form");
  spec.validate();
  const double amu = std::fabs(mu);
  // |F(sech(mu .)^2)(w)| = sqrt(pi/2) * |w/mu| * csch(pi w / (2 mu)) / |mu|,
  // with removable singularity 2/pi at w = 0.
  auto integrand = [amu](double w) {
    const double u = w / amu;
    const double arg = 0.5 * kPi * u;
    double shape;
    if (std::fabs(arg) < 1e-8) {
      shape = 2.0 / kPi;
    } else {
      shape = u / std::sinh(arg);
    }
    return std::sqrt(kPi / 2.0) * std::fabs(shape) / amu;
  };
  // The integrand decays like exp(-pi w / (2|mu|)); 40|mu| covers the mass.
  const double upper = 40.0 * amu;
  const double integral = 2.0 * integrate(integrand, 0.0, upper, spec);
  return amu / kSqrt2Pi * integral;
}

double minimal_true_loss(const MixtureParams& params, const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  const double mu = params.mu;
  auto integrand = [mu](double t) {
    const double dev = t + mu;
    return std::exp(-0.5 * dev * dev) / (1.0 + std::exp(-2.0 * mu * t));
  };
  const double integral = integrate(integrand, -params.r, params.r, spec);
  return kSqrt2 / (std::sqrt(kPi) * truncation_mass(params)) * integral;
}

double representation_bound(const BoundIngredients& b) {
  b.validate();
  const double dc = b.diam * b.c_eta;
  const double gen = (2.0 + dc) * (2.0 + dc) * std::sqrt(std::log(1.0 / b.delta) / (2.0 * static_cast<double>(b.n)));
  const double approx_k = dc * dc / static_cast<double>(b.k);
  const double approx_sqrt_k = 4.0 * dc / std::sqrt(static_cast<double>(b.k));
  return gen + approx_k + approx_sqrt_k;
}

double classification_sq_bound(double delta, std::int64_t n) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("classification_sq_bound: delta must be in (0,1)");
  if (n < 1) throw std::invalid_argument("classification_sq_bound: n must be positive");
  return 2.0 * std::sqrt(2.0 * std::log(1.0 / delta) / static_cast<double>(n));
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary_entropy: argument outside [0,1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log(1.0 - x);
  return h;
}

double weissman_radius(double delta, std::int64_t n, int d) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("weissman_radius: delta must be in (0,1)");
  if (n < 1) throw std::invalid_argument("weissman_radius: n must be positive");
  if (d < 1) throw std::invalid_argument("weissman_radius: d must be positive");
  return std::sqrt((2.0 * d + std::log(1.0 / delta)) / static_cast<double>(n));
}

double alhejji_smith_gap(double theta, int alphabet_size) {
  if (alphabet_size < 2) throw std::invalid_argument("alhejji_smith_gap: alphabet size must be at least 2");
  const double upper = 1.0 - 1.0 / alphabet_size;
  if (!(theta >= 0.0 && theta <= upper)) {
    throw std::domain_error("alhejji_smith_gap: theta outside [0, 1 - 1/|U|]");
  }
  return theta * std::log(static_cast<double>(alphabet_size - 1)) + binary_entropy(theta);
}

std::int64_t min_admissible_n(double delta, int d) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("min_admissible_n: delta must be in (0,1)");
  if (d < 1) throw std::invalid_argument("min_admissible_n: d must be positive");
  return static_cast<std::int64_t>(std::ceil(4.0 * (2.0 * d + std::log(1.0 / delta))));
}

double classification_log_bound(double delta, std::int64_t n, int d) {
  const std::int64_t min_n = min_admissible_n(delta, d);
  if (n < min_n) {
    throw std::domain_error("classification_log_bound: sample too small, minimal admissible n is " +
                            std::to_string(min_n));
  }
  return binary_entropy(weissman_radius(delta, n, d));
}

}  // namespace leakaudit::analytic
