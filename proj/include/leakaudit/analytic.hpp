#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "leakaudit/quadrature.hpp"

namespace leakaudit::analytic {

// Effective mean separation and truncation radius of the Gaussian-mixture
// scenario.  mu is the inner product of the classifier and mixture
// directions, so |mu| <= 1 when both are unit vectors.
struct MixtureParams {
  double mu = 0.0;
  double r = 3.0;

  void validate() const {
    if (!(r > 0.0)) throw std::invalid_argument("MixtureParams: r must be positive");
    if (!std::isfinite(mu)) throw std::invalid_argument("MixtureParams: mu must be finite");
  }
};

// Everything the lower-bound formulas consume.
struct BoundIngredients {
  double delta = 0.01;
  std::int64_t n = 1;
  std::int64_t k = 1;
  double c_eta = 0.0;   // Barron constant of the regression function
  double diam = 0.0;    // diameter of the support
  int d = 2;            // alphabet size (classification setting only)

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("BoundIngredients: delta must be in (0,1)");
    if (n < 1) throw std::invalid_argument("BoundIngredients: n must be positive");
    if (k < 1) throw std::invalid_argument("BoundIngredients: k must be positive");
    if (!(c_eta >= 0.0)) throw std::invalid_argument("BoundIngredients: c_eta must be non-negative");
    if (!(diam >= 0.0)) throw std::invalid_argument("BoundIngredients: diam must be non-negative");
  }
};

// Standard Gaussian CDF, absolute error below 1e-12.
double std_normal_cdf(double x);

// Conditional density of the truncated mixture output given the sign of the
// sensitive bit.  Zero outside [-r, r].
double truncated_density(double t, int sign, const MixtureParams& params);

// Optimal squared-loss predictor for the mixture scenario: tanh(mu * t).
double eta(double t, double mu);

// Closed-form Barron constant of t -> tanh(mu * t); equals |mu|.
double barron_constant_tanh(double mu);

// Numeric cross-check of barron_constant_tanh via the Fourier-side integral
// of the derivative's transform.  Rejects mu == 0 (the closed form covers it).
double barron_constant_numeric(double mu, const QuadratureSpec& spec = {});

// Minimal achievable true squared loss for the truncated mixture, by
// adaptive quadrature.  Equals 1 exactly when mu == 0.
double minimal_true_loss(const MixtureParams& params, const QuadratureSpec& spec = {});

// Representation-setting epsilon: generalization + two approximation terms.
double representation_bound(const BoundIngredients& b);

// Classification-setting epsilon under squared loss.
double classification_sq_bound(double delta, std::int64_t n);

// Binary entropy in nats, with 0 log 0 := 0.
double binary_entropy(double x);

// Total-variation radius of the large-deviation bound for an empirical
// joint distribution over 2*d cells.
double weissman_radius(double delta, std::int64_t n, int d);

// Conditional-entropy continuity gap: theta*log(|U|-1) + h_b(theta).
double alhejji_smith_gap(double theta, int alphabet_size);

// Classification-setting epsilon under log loss.  Requires
// n >= 4*(2d + log(1/delta)).
double classification_log_bound(double delta, std::int64_t n, int d);

// Smallest n admissible for classification_log_bound.
std::int64_t min_admissible_n(double delta, int d);

}  // namespace leakaudit::analytic
