#pragma once

#include <functional>
#include <stdexcept>

namespace leakaudit::analytic {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: abs_tol must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be positive");
  }
};

// Thrown when the adaptive refinement cannot reach abs_tol within
// max_subdivisions; carries the best estimate obtained so far.
class QuadratureNonConvergence : public std::runtime_error {
 public:
  QuadratureNonConvergence(double partial, double err_estimate)
      : std::runtime_error("adaptive quadrature did not converge"),
        partial_estimate(partial),
        error_estimate(err_estimate) {}

  double partial_estimate;
  double error_estimate;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

}  // namespace leakaudit::analytic
