#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qimage::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (31 points) on [a, b]; a or b may be infinite.
// Throws QuadratureError if the error estimate exceeds rel_tol * |value|
// (or abs_floor when the integral is tiny).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-10, double abs_floor = 0.0);

// Same, split at the supplied interior breakpoints (sorted or not).
QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  std::span<const double> points, double rel_tol = 1e-10,
                                  double abs_floor = 0.0);

// Bracketed root of a continuous function with f(lo) f(hi) <= 0 (TOMS 748).
// `index` is carried into the BracketError for diagnostics.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-15, int index = 0);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of the given order on [-1, 1].
const GaussRule& gauss_legendre(int order);

// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace qimage::numerics
