#include "qimage/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "qimage/errors.hpp"

namespace qimage::numerics {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_floor) {
  if (!(rel_tol > 0.0)) throw InvalidParameter("quadrature tolerance must be positive");
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 25, 0.1 * rel_tol, &error, &l1);
  if (!std::isfinite(value)) {
    throw QuadratureError("quadrature produced a non-finite value", value, error);
  }
  if (error > std::max(rel_tol * std::abs(value), abs_floor)) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] did not reach relative tolerance "
        << rel_tol << " (estimate " << value << ", residual " << error << ")";
    throw QuadratureError(msg.str(), value, error);
  }
  return {value, error};
}

QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  std::span<const double> points, double rel_tol,
                                  double abs_floor) {
  std::vector<double> p(points.begin(), points.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 2) throw InvalidParameter("integration needs at least two points");
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    // Per-piece tolerance is relative to the piece; the sum inherits it.
    double error = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, p[i], p[i + 1], 25, 0.1 * rel_tol, &error, &l1);
    total.value += v;
    total.error += error;
  }
  if (!std::isfinite(total.value)) {
    throw QuadratureError("quadrature produced a non-finite value", total.value, total.error);
  }
  if (total.error > std::max(rel_tol * std::abs(total.value), abs_floor)) {
    std::ostringstream msg;
    msg << "piecewise quadrature did not reach relative tolerance " << rel_tol
        << " (estimate " << total.value << ", residual " << total.error << ")";
    throw QuadratureError(msg.str(), total.value, total.error);
  }
  return total;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol, int index) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) {
    std::ostringstream msg;
    msg << "root " << index << " not bracketed by [" << lo << ", " << hi << "]";
    throw BracketError(msg.str(), index, lo, hi);
  }
  std::uintmax_t max_iter = 200;
  auto tol = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (a + b);
}

namespace {

GaussRule golub_welsch(int order) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * v0 * v0;
  }
  // Enforce exact reflection symmetry of nodes and weights.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

constexpr int kMaxOrder = 64;

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw InvalidParameter("Gauss-Legendre order must be in [1, 64]");
  }
  static const std::array<GaussRule, kMaxOrder> rules = [] {
    std::array<GaussRule, kMaxOrder> r;
    for (int o = 1; o <= kMaxOrder; ++o) r[o - 1] = golub_welsch(o);
    return r;
  }();
  return rules[order - 1];
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidParameter("line fit needs two or more matched points");
  }
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidParameter("line fit needs distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace qimage::numerics
