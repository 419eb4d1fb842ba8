#include "qimage/profiles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qimage/errors.hpp"
#include "qimage/units.hpp"

namespace qimage {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidParameter(message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void DarkSolitonParams::validate() const {
  require(finite(n) && n > 0.0, "dark soliton: density n must be positive");
  require(finite(v_over_c) && v_over_c >= 0.0 && v_over_c < 1.0,
          "dark soliton: v/c must lie in [0, 1)");
  require(finite(q), "dark soliton: position must be finite");
}

double DarkSolitonParams::kappa() const { return units::kappa(v_over_c); }

void QuinticSolitonParams::validate() const {
  require(finite(n) && n > 0.0, "quintic soliton: density n must be positive");
  require(finite(v_over_c) && v_over_c >= 0.0 && v_over_c <= 1.0,
          "quintic soliton: v/c must lie in [0, 1]");
  require(finite(q), "quintic soliton: position must be finite");
}

double QuinticSolitonParams::kappa_prime() const {
  return 2.0 * std::numbers::pi * n * std::sqrt(1.0 - v_over_c * v_over_c);
}

void VortexParams::validate() const {
  require(finite(n) && n > 0.0, "vortex: areal density must be positive");
  require(finite(L) && L > 0.0, "vortex: axial length must be positive");
  require(finite(q), "vortex: position must be finite");
  require(winding == 1 || winding == -1, "vortex: only winding +1 or -1 is supported");
}

void TrappedSolitonParams::validate() const {
  require(finite(n0) && n0 > 0.0, "trapped soliton: n0 must be positive");
  require(finite(xi0) && xi0 > 0.0, "trapped soliton: xi0 must be positive");
  require(finite(R_TF) && R_TF > 0.0, "trapped soliton: R_TF must be positive");
  if (!(finite(q) && std::abs(q) <= R_TF)) {
    std::ostringstream msg;
    msg << "trapped soliton: position " << q << " lies outside the Thomas-Fermi radius "
        << R_TF;
    throw InvalidParameter(msg.str());
  }
}

double TrappedSolitonParams::healing_length(double n0, double n_ref) {
  require(n0 > 0.0 && n_ref > 0.0, "healing length needs positive densities");
  // g = 1 / (2 n_ref) in internal units.
  return 1.0 / std::sqrt(2.0 * (0.5 / n_ref) * n0);
}

std::complex<double> soliton_amplitude(const DarkSolitonParams& p, double x) {
  const double nu = p.v_over_c;
  const double t = std::tanh(p.kappa() * (x - p.q));
  return std::sqrt(p.n) * std::complex<double>(std::sqrt(1.0 - nu * nu) * t, nu);
}

DensityDerivative soliton_density_dq(const DarkSolitonParams& p, double x) {
  const double nu2 = p.v_over_c * p.v_over_c;
  const double k = p.kappa();
  const double u = k * (x - p.q);
  const double t = std::tanh(u);
  const double s = units::sech2(u);
  DensityDerivative r;
  r.density = p.n * (nu2 + (1.0 - nu2) * t * t);
  if (nu2 == 0.0) {
    // |Phi| = sqrt(n) |tanh|; at the node take the right-hand limit.
    r.dmod_dq = -std::sqrt(p.n) * k * s * (t < 0.0 ? -1.0 : 1.0);
  } else {
    r.dmod_dq = -p.n * k * (1.0 - nu2) * s * t / std::sqrt(r.density);
  }
  return r;
}

namespace {

struct QuinticParts {
  double f2;
  double df2_dq;
};

QuinticParts quintic_parts(const QuinticSolitonParams& p, double x) {
  const double nu2 = p.v_over_c * p.v_over_c;
  const double kp = p.kappa_prime();
  const double u = kp * (x - p.q);
  const double root = std::sqrt(1.0 + 3.0 * nu2);
  if (std::abs(u) > 700.0) return {1.0, 0.0};
  const double ch = std::cosh(u);
  const double denom = 2.0 + root * ch;
  // Numerator of f^2 written to avoid cancellation at the node.
  const double sh_half = std::sinh(0.5 * u);
  const double num = root * 2.0 * sh_half * sh_half + (root - 1.0 + 3.0 * nu2);
  QuinticParts parts;
  parts.f2 = num / denom;
  parts.df2_dq = -3.0 * (1.0 - nu2) * root * kp * std::sinh(u) / (denom * denom);
  return parts;
}

}  // namespace

double quintic_density(const QuinticSolitonParams& p, double x) {
  return p.n * quintic_parts(p, x).f2;
}

DensityDerivative quintic_density_dq(const QuinticSolitonParams& p, double x) {
  const auto parts = quintic_parts(p, x);
  DensityDerivative r;
  r.density = p.n * parts.f2;
  if (parts.f2 > 0.0) {
    r.dmod_dq = std::sqrt(p.n) * parts.df2_dq / (2.0 * std::sqrt(parts.f2));
  } else {
    // f ~ |u| / sqrt(6) near the node; right-hand limit.
    r.dmod_dq = -std::sqrt(p.n) * p.kappa_prime() / std::sqrt(6.0);
  }
  return r;
}

double vortex_density(const VortexParams& p, double x, double y) {
  const double r2 = (x - p.q) * (x - p.q) + y * y;
  return (p.n / p.L) * r2 / (2.0 + r2);
}

DensityDerivative vortex_density_dq(const VortexParams& p, double x, double y) {
  const double dx = x - p.q;
  const double r2 = dx * dx + y * y;
  const double r = std::sqrt(r2);
  const double amp = std::sqrt(p.n / p.L);
  DensityDerivative out;
  out.density = (p.n / p.L) * r2 / (2.0 + r2);
  const double fprime = 2.0 / std::pow(2.0 + r2, 1.5);
  const double cos_phi = r > 0.0 ? dx / r : 1.0;
  out.dmod_dq = -amp * cos_phi * fprime;
  return out;
}

double trapped_soliton_density(const TrappedSolitonParams& p, double x) {
  p.validate();
  const double bg = std::max(0.0, p.n0 * (1.0 - x * x / (p.R_TF * p.R_TF)));
  const double t = std::tanh((x - p.q) / (std::numbers::sqrt2 * p.xi0));
  return bg * t * t;
}

DensityDerivative trapped_soliton_density_dq(const TrappedSolitonParams& p, double x) {
  p.validate();
  const double bg = std::max(0.0, p.n0 * (1.0 - x * x / (p.R_TF * p.R_TF)));
  const double k = 1.0 / (std::numbers::sqrt2 * p.xi0);
  const double u = k * (x - p.q);
  const double t = std::tanh(u);
  DensityDerivative r;
  r.density = bg * t * t;
  r.dmod_dq = -std::sqrt(bg) * k * units::sech2(u) * (t < 0.0 ? -1.0 : 1.0);
  return r;
}

DensityDerivative density_dq(const OrderParameter& profile, double x, double y) {
  return std::visit(
      [&](const auto& p) -> DensityDerivative {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DarkSolitonParams>) {
          return soliton_density_dq(p, x);
        } else if constexpr (std::is_same_v<T, QuinticSolitonParams>) {
          return quintic_density_dq(p, x);
        } else if constexpr (std::is_same_v<T, VortexParams>) {
          return vortex_density_dq(p, x, y);
        } else {
          return trapped_soliton_density_dq(p, x);
        }
      },
      profile);
}

double position(const OrderParameter& profile) {
  return std::visit([](const auto& p) { return p.q; }, profile);
}

OrderParameter with_position(OrderParameter profile, double q) {
  std::visit([q](auto& p) { p.q = q; }, profile);
  return profile;
}

bool is_planar(const OrderParameter& profile) {
  return std::holds_alternative<VortexParams>(profile);
}

std::string profile_name(const OrderParameter& profile) {
  switch (profile.index()) {
    case 0: return "dark-soliton";
    case 1: return "quintic-soliton";
    case 2: return "vortex";
    default: return "trapped-soliton";
  }
}

void validate(const OrderParameter& profile) {
  std::visit([](const auto& p) { p.validate(); }, profile);
}

void to_json(nlohmann::json& j, const DarkSolitonParams& p) {
  j = {{"n", p.n}, {"v_over_c", p.v_over_c}, {"q", p.q}};
}

void to_json(nlohmann::json& j, const QuinticSolitonParams& p) {
  j = {{"n", p.n}, {"v_over_c", p.v_over_c}, {"q", p.q}};
}

void to_json(nlohmann::json& j, const VortexParams& p) {
  j = {{"n", p.n}, {"L", p.L}, {"q", p.q}, {"winding", p.winding}};
}

void to_json(nlohmann::json& j, const TrappedSolitonParams& p) {
  j = {{"n0", p.n0}, {"xi0", p.xi0}, {"R_TF", p.R_TF}, {"q", p.q}};
}

nlohmann::json profile_json(const OrderParameter& profile) {
  nlohmann::json j;
  std::visit([&j](const auto& p) { to_json(j, p); }, profile);
  j["profile"] = profile_name(profile);
  return j;
}

}  // namespace qimage
