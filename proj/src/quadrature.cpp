#include "leakaudit/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace leakaudit::analytic {

namespace {

// G7/K15 nodes and weights on [-1, 1].  Column 0: abscissa, column 1:
// Gauss-7 weight (zero on Kronrod-only nodes), column 2: Kronrod-15 weight.
constexpr double kNodes[8][3] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978553},
    {0.207784955007898468, 0.0,                  0.204432940075298892},
    {0.586087235467691130, 0.0,                  0.169004726639267903},
    {0.864864423359769073, 0.0,                  0.104790010322250184},
    {0.991455371120812639, 0.0,                  0.022935322010529225},
};

struct Panel {
  double a, b;
  double value;
  double err;

  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double g7 = kNodes[0][1] * f0;
  double k15 = kNodes[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kNodes[i][0];
    const double fi = f(mid + dx) + f(mid - dx);
    g7 += kNodes[i][1] * fi;
    k15 += kNodes[i][2] * fi;
  }
  g7 *= half;
  k15 *= half;
  return Panel{a, b, k15, std::fabs(k15 - g7)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return 0.0;

  std::priority_queue<Panel> panels;
  panels.push(evaluate_panel(f, a, b));
  double total_err = panels.top().err;

  int subdivisions = 0;
  while (total_err > spec.abs_tol) {
    if (subdivisions >= spec.max_subdivisions) {
      double value = 0.0;
      std::priority_queue<Panel> copy = panels;
      while (!copy.empty()) {
        value += copy.top().value;
        copy.pop();
      }
      throw QuadratureNonConvergence(value, total_err);
    }
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total_err += left.err + right.err - worst.err;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }

  // Sum smallest panels first to limit rounding noise.
  std::vector<double> values;
  values.reserve(panels.size());
  while (!panels.empty()) {
    values.push_back(panels.top().value);
    panels.pop();
  }
  double sum = 0.0;
  for (auto it = values.rbegin(); it != values.rend(); ++it) sum += *it;
  return sum;
}

}  // namespace leakaudit::analytic
