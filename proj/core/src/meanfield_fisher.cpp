#include "qimage/meanfield_fisher.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "qimage/errors.hpp"
#include "qimage/numerics.hpp"
#include "qimage/units.hpp"

namespace qimage {

namespace {

constexpr double kPi = std::numbers::pi;

struct Window {
  double lo;
  double hi;
};

// Profile width scale used for window sizing and the healing-length check.
double tail_length(const OrderParameter& profile) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DarkSolitonParams>) {
          return std::max(10.0, 10.0 / p.kappa());
        } else if constexpr (std::is_same_v<T, QuinticSolitonParams>) {
          return std::max(10.0, 30.0 / p.kappa_prime());
        } else if constexpr (std::is_same_v<T, TrappedSolitonParams>) {
          return 10.0 * p.xi0;
        } else {
          return 10.0;
        }
      },
      profile);
}

double healing_scale(const OrderParameter& profile) {
  if (const auto* t = std::get_if<TrappedSolitonParams>(&profile)) return t->xi0;
  return 1.0;
}

FisherReport line_integral(const OrderParameter& profile, Window w, double quad_tol,
                           nlohmann::json prov) {
  const double q = position(profile);
  auto integrand = [&](double x) {
    const double d = density_dq(profile, x).dmod_dq;
    return 4.0 * d * d;
  };
  std::vector<double> pts{w.lo, w.hi};
  if (q > w.lo && q < w.hi) pts.push_back(q);
  const auto res = numerics::integrate_pieces(integrand, pts, quad_tol);
  prov["window"] = {w.lo, w.hi};
  prov["quad_error"] = res.error;
  return FisherReport::make(res.value, StatModel::PoissonContinuum, std::move(prov));
}

FisherReport planar_integral(const VortexParams& p, double radius, double quad_tol,
                             nlohmann::json prov) {
  // Angular integral of cos^2 over the circle, evaluated by quadrature as a
  // genuine double integral around the core.
  auto radial = [&](double r) {
    auto angular = [&](double phi) {
      const double d = vortex_density_dq(p, p.q + r * std::cos(phi), r * std::sin(phi)).dmod_dq;
      return d * d;
    };
    const double a = numerics::integrate(angular, 0.0, 2.0 * kPi, 0.01 * quad_tol, 1e-300).value;
    return 4.0 * p.L * a * r;
  };
  std::vector<double> pts{0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
  std::erase_if(pts, [radius](double v) { return v >= radius; });
  pts.push_back(radius);
  const auto res = numerics::integrate_pieces(radial, pts, quad_tol);
  prov["radial_cutoff"] = radius;
  prov["quad_error"] = res.error;
  return FisherReport::make(res.value, StatModel::PoissonContinuum, std::move(prov));
}

// Radius beyond which 4 r f'(r)^2 falls below 1e-12.
double vortex_cutoff() {
  double r = 1.0;
  while (4.0 * r * 4.0 / std::pow(2.0 + r * r, 3.0) >= 1e-12) r *= 1.05;
  return r;
}

}  // namespace

FisherReport fisher_poisson_continuum(const OrderParameter& profile, double quad_tol) {
  validate(profile);
  nlohmann::json prov = profile_json(profile);
  prov["quad_tol"] = quad_tol;
  if (const auto* v = std::get_if<VortexParams>(&profile)) {
    return planar_integral(*v, vortex_cutoff(), quad_tol, std::move(prov));
  }
  if (const auto* t = std::get_if<TrappedSolitonParams>(&profile)) {
    return line_integral(profile, {-t->R_TF, t->R_TF}, quad_tol, std::move(prov));
  }
  const double q = position(profile);
  const double half = std::abs(q) + tail_length(profile);
  return line_integral(profile, {-half, half}, quad_tol, std::move(prov));
}

FisherReport fisher_poisson_continuum(const OrderParameter& profile, const PixelGrid& window,
                                      double quad_tol) {
  validate(profile);
  nlohmann::json prov = profile_json(profile);
  prov["quad_tol"] = quad_tol;
  const double ell = window.half_length();
  const double q = position(profile);
  const double reach = 10.0 * healing_scale(profile);
  FisherReport r;
  if (const auto* v = std::get_if<VortexParams>(&profile)) {
    const double radius = std::min(vortex_cutoff(), ell - std::abs(q));
    if (!(radius > 0.0)) throw InvalidParameter("vortex core lies outside the window");
    r = planar_integral(*v, radius, quad_tol, std::move(prov));
  } else {
    r = line_integral(profile, {-ell, ell}, quad_tol, std::move(prov));
  }
  if (q - reach < -ell || q + reach > ell) {
    r.warnings.push_back("window_shorter_than_10_healing_lengths");
  }
  return r;
}

FisherReport fisher_dark_soliton_closed(const DarkSolitonParams& params) {
  params.validate();
  const double n = params.n;
  const double nu = params.v_over_c;
  const double kappa = params.kappa();
  double F = (8.0 * n / 3.0) * (2.0 + nu * nu) * kappa;
  if (nu > 0.0) {
    const double root = std::sqrt(1.0 - nu * nu);
    F += 4.0 * std::numbers::sqrt2 * n * nu *
         (std::atan((nu - 0.5 / nu) / root) - std::atan(nu / root));
  }
  nlohmann::json prov;
  to_json(prov, params);
  prov["profile"] = "dark-soliton";
  return FisherReport::make(F, StatModel::ClosedForm, std::move(prov));
}

PixelMeans dark_soliton_pixel_means(const DarkSolitonParams& params, const PixelGrid& grid,
                                    double q) {
  params.validate();
  const double n = params.n;
  const double depth = 1.0 - params.v_over_c * params.v_over_c;
  const double k = params.kappa();
  const int m = grid.count();
  PixelMeans out{Eigen::VectorXd(m), Eigen::VectorXd(m)};
  for (int i = 0; i < m; ++i) {
    const double a = grid.left_edge(i) - q;
    const double b = a + grid.dx();
    out.rho_bar(i) = n * grid.dx() - n * depth / k * (std::tanh(k * b) - std::tanh(k * a));
    out.drho_dq(i) = n * depth * (units::sech2(k * b) - units::sech2(k * a));
  }
  return out;
}

FisherReport fisher_pixelized_poisson(const DarkSolitonParams& params, const PixelGrid& grid,
                                      double q) {
  const PixelMeans pm = dark_soliton_pixel_means(params, grid, q);
  double first = 0.0;
  double second = 0.0;
  int sparse = 0;
  for (int i = 0; i < grid.count(); ++i) {
    const double rho = pm.rho_bar(i);
    if (!(rho > 0.0)) {
      std::ostringstream msg;
      msg << "pixel " << i << " has non-positive mean count " << rho;
      throw Error("unphysical_pixel", msg.str());
    }
    if (rho < 1.0) ++sparse;
    const double d2 = pm.drho_dq(i) * pm.drho_dq(i);
    first += d2 / rho;
    second += 0.5 * d2 / (rho * rho);
  }
  nlohmann::json prov;
  to_json(prov, params);
  prov["q"] = q;
  prov["profile"] = "dark-soliton";
  prov["grid"] = grid;
  FisherReport r = FisherReport::make(first + second, StatModel::GaussianPixel, std::move(prov));
  r.components["poisson_sum"] = first;
  r.components["gaussian_correction"] = second;
  if (sparse > 0) {
    r.warnings.push_back("pixels_with_mean_count_below_one:" + std::to_string(sparse));
  }
  return r;
}

FisherReport poisson_part(const FisherReport& pixelized) {
  const auto it = pixelized.components.find("poisson_sum");
  if (it == pixelized.components.end()) {
    throw InvalidParameter("report carries no poisson_sum component");
  }
  FisherReport r = FisherReport::make(it->second, StatModel::PoissonPixel, pixelized.provenance);
  r.warnings = pixelized.warnings;
  return r;
}

BoxBackground box_background(const DarkSolitonParams& params, double box_half_length) {
  params.validate();
  const double ell = box_half_length;
  if (!(ell > 0.0)) throw InvalidParameter("box half-length must be positive");
  const double depth = 1.0 - params.v_over_c * params.v_over_c;
  const double k = params.kappa();
  // n_b (2 ell - 2 depth / kappa_b) = 2 ell n with kappa_b = kappa sqrt(n_b / n);
  // a quadratic in y = sqrt(n_b / n).
  const double b = depth / k;
  const double y = (b + std::sqrt(b * b + 4.0 * ell * ell)) / (2.0 * ell);
  return {y * y, k * y};
}

FisherReport fisher_box(const DarkSolitonParams& params, const PixelGrid& grid,
                        double box_half_length) {
  const BoxBackground bg = box_background(params, box_half_length);
  const double ell = box_half_length;
  const double nb = params.n * bg.density_ratio;
  const double depth = 1.0 - params.v_over_c * params.v_over_c;
  const double k = bg.kappa;
  const double q = params.q;
  double F = 0.0;
  int used = 0;
  for (int i = 0; i < grid.count(); ++i) {
    const double lo = grid.left_edge(i);
    const double hi = grid.right_edge(i);
    if (lo < -ell || hi > ell) continue;
    ++used;
    const double a = lo - q;
    const double bb = a + grid.dx();
    const double rho = nb * grid.dx() - nb * depth / k * (std::tanh(k * bb) - std::tanh(k * a));
    if (!(rho > 0.0)) throw Error("unphysical_pixel", "box pixel has non-positive mean count");
    const double d = nb * depth * (units::sech2(k * bb) - units::sech2(k * a));
    F += d * d / rho;
  }
  nlohmann::json prov;
  to_json(prov, params);
  prov["profile"] = "dark-soliton";
  prov["grid"] = grid;
  prov["box_half_length"] = ell;
  FisherReport r = FisherReport::make(F, StatModel::PoissonPixel, std::move(prov));
  r.components["background_density"] = nb;
  r.components["kappa"] = k;
  r.components["pixels_used"] = used;
  if (std::abs(q) + 5.0 >= ell) r.warnings.push_back("soliton_near_box_wall");
  return r;
}

namespace {

void check_trapped(const TrappedSolitonParams& p) {
  p.validate();
  if (p.R_TF < 10.0 * p.xi0) {
    throw InvalidParameter("trapped soliton: R_TF below 10 xi0 invalidates the TF profile");
  }
}

nlohmann::json trapped_provenance(const TrappedSolitonParams& p) {
  nlohmann::json prov;
  to_json(prov, p);
  prov["profile"] = "trapped-soliton";
  prov["scale_length"] = "xi0";
  prov["documented_constants"] = {
      {"F_trap_ax2_over_N0", 14.1},
      {"F_hom_over_F_trap", 0.11},
      {"assumptions",
       "quoted values, not computed: harmonic trap, soliton at the centre, corrections of "
       "order xi/R_TF neglected, homogeneous comparison at equal size and atom number"}};
  return prov;
}

}  // namespace

FisherReport fisher_trapped(const TrappedSolitonParams& params) {
  check_trapped(params);
  const double F = 16.0 / (3.0 * std::numbers::sqrt2) * params.n0 / params.xi0;
  FisherReport r = FisherReport::make(F, StatModel::ClosedForm, trapped_provenance(params),
                                      params.xi0);
  if (std::abs(params.q) > 0.1 * params.R_TF) r.warnings.push_back("soliton_off_centre");
  return r;
}

FisherReport fisher_trapped_quadrature(const TrappedSolitonParams& params, double quad_tol) {
  check_trapped(params);
  auto integrand = [&](double x) {
    const double d = trapped_soliton_density_dq(params, x).dmod_dq;
    return 4.0 * d * d;
  };
  const std::vector<double> pts{-params.R_TF, params.q, params.R_TF};
  const auto res = numerics::integrate_pieces(integrand, pts, quad_tol);
  nlohmann::json prov = trapped_provenance(params);
  prov["quad_tol"] = quad_tol;
  prov["quad_error"] = res.error;
  return FisherReport::make(res.value, StatModel::PoissonContinuum, std::move(prov), params.xi0);
}

}  // namespace qimage
