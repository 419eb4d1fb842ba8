#include "qimage/bdg.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qimage/errors.hpp"
#include "qimage/numerics.hpp"
#include "qimage/units.hpp"

namespace qimage {

namespace {

constexpr double kPi = std::numbers::pi;

double quantization(double k, double ell, double kappa, int j) {
  return 2.0 * k * ell + 2.0 * std::atan(2.0 * kappa / k) - 2.0 * kPi * j;
}

// Exact finite-box factor 1/2 [tanh kappa(ell - q) + tanh kappa(ell + q)].
double box_factor(double kappa, double ell, double q) {
  return 0.5 * (std::tanh(kappa * (ell - q)) + std::tanh(kappa * (ell + q)));
}

}  // namespace

double bogoliubov_energy(double k) {
  return units::kSoundSpeed * std::abs(k) *
         std::sqrt(1.0 + k * k / (4.0 * units::kKappa0 * units::kKappa0));
}

PhononModeSet::PhononModeSet(double half_length, int pair_count, double q)
    : ell_(half_length), pairs_(pair_count), q_(q), kappa_(units::kKappa0) {
  if (!(std::isfinite(half_length) && half_length >= 5.0)) {
    throw InvalidParameter("box half-length must be at least 5 healing lengths");
  }
  if (pair_count < 1) throw InvalidParameter("at least one phonon pair is required");
  if (!(std::isfinite(q) && std::abs(q) < half_length)) {
    throw InvalidParameter("soliton position must lie inside the box");
  }
  const int m = 2 * pairs_;
  k_.resize(m);
  E_.resize(m);
  M_.resize(m);
  beta_plus_.resize(m);
  beta_minus_.resize(m);
  const double kap = kappa_;
  const double cq = box_factor(kap, ell_, q_);
  double previous = 0.0;
  for (int j = 1; j <= pairs_; ++j) {
    const double lo = j == 1 ? std::numeric_limits<double>::min() : (j - 1) * kPi / ell_;
    const double hi = j * kPi / ell_;
    auto f = [&](double k) { return quantization(k, ell_, kap, j); };
    const double k = numerics::find_root(f, lo, hi, 1e-15, j);
    if (!(k > previous)) {
      std::ostringstream msg;
      msg << "wavenumber " << j << " is not increasing";
      throw BracketError(msg.str(), j, lo, hi);
    }
    previous = k;
    const double E = bogoliubov_energy(k);
    const double b = 2.0 * E / units::kMcSquared;
    const double a = (k / kap) * (k / kap);
    const double bracket = ell_ * kap * (k * k / (2.0 * kap * kap) + 2.0) - cq;
    const double M = std::sqrt(kap * kap * kap / (4.0 * k * k * b * bracket));
    for (int sign : {1, -1}) {
      const int s = sign > 0 ? j - 1 : pairs_ + j - 1;
      k_[s] = sign * k;
      E_[s] = E;
      M_[s] = M;
      beta_plus_[s] = a + b;
      beta_minus_[s] = a - b;
    }
  }
}

int PhononModeSet::slot(int j) const {
  if (j == 0 || std::abs(j) > pairs_) {
    std::ostringstream msg;
    msg << "mode index " << j << " outside +-1 ... +-" << pairs_;
    throw InvalidParameter(msg.str());
  }
  return j > 0 ? j - 1 : pairs_ - j - 1;
}

double PhononModeSet::quantization_residual(int j) const {
  const double k = std::abs(wavenumber(j));
  return quantization(k, ell_, kappa_, std::abs(j));
}

ModeValue PhononModeSet::eval(int j, double x) const {
  const int m = slot(j);
  const double z = kappa_ * (x - q_);
  const double s = units::sech2(z);
  const double t = std::tanh(z);
  const double k = k_[m];
  const cplx phase = M_[m] * std::polar(1.0, k * x);
  const double a = (k / kappa_) * s;
  const double c = k / (2.0 * kappa_);
  return {phase * cplx(a + beta_plus_[m] * c, beta_plus_[m] * t),
          phase * cplx(a + beta_minus_[m] * c, beta_minus_[m] * t)};
}

void PhononModeSet::eval_all(double x, std::span<cplx> u, std::span<cplx> v) const {
  const int m = mode_count();
  if (static_cast<int>(u.size()) < m || static_cast<int>(v.size()) < m) {
    throw InvalidParameter("mode buffers are too small");
  }
  const double z = kappa_ * (x - q_);
  const double s = units::sech2(z);
  const double t = std::tanh(z);
  for (int i = 0; i < m; ++i) {
    const double k = k_[i];
    const cplx phase = M_[i] * std::polar(1.0, k * x);
    const double a = (k / kappa_) * s;
    const double c = k / (2.0 * kappa_);
    u[i] = phase * cplx(a + beta_plus_[i] * c, beta_plus_[i] * t);
    v[i] = phase * cplx(a + beta_minus_[i] * c, beta_minus_[i] * t);
  }
}

PhononModeSet PhononModeSet::truncated(int pair_count) const {
  if (pair_count < 1 || pair_count > pairs_) {
    throw InvalidParameter("truncation must keep between 1 and all pairs");
  }
  PhononModeSet out = *this;
  out.pairs_ = pair_count;
  auto cut = [&](std::vector<double>& v) {
    std::vector<double> w;
    w.reserve(2 * pair_count);
    w.insert(w.end(), v.begin(), v.begin() + pair_count);
    w.insert(w.end(), v.begin() + pairs_, v.begin() + pairs_ + pair_count);
    v = std::move(w);
  };
  cut(out.k_);
  cut(out.E_);
  cut(out.M_);
  cut(out.beta_plus_);
  cut(out.beta_minus_);
  return out;
}

PhononModeSet solve_wavenumbers(double half_length, int pair_count, double q) {
  return PhononModeSet(half_length, pair_count, q);
}

ModeValue eval_phonon(const PhononModeSet& modes, int j, double x) { return modes.eval(j, x); }

void ZeroModeFamily::validate() const {
  if (!(std::isfinite(n) && n > 0.0)) throw InvalidParameter("zero modes: n must be positive");
  if (!(std::isfinite(half_length) && half_length >= 5.0)) {
    throw InvalidParameter("zero modes: box half-length must be at least 5 healing lengths");
  }
  if (!(std::isfinite(q) && std::abs(q) < half_length)) {
    throw InvalidParameter("zero modes: soliton must lie inside the box");
  }
  if (!(condensate_number() > 0.0)) throw InvalidParameter("zero modes: N0 must be positive");
}

double ZeroModeFamily::kappa() const { return units::kKappa0; }

double ZeroModeFamily::condensate_number() const {
  return 2.0 * half_length * n - 2.0 * n / kappa();
}

double ZeroModeFamily::effective_mass() const { return -4.0 * n / kappa(); }

double ZeroModeFamily::phase_adjoint_scale() const {
  // 1 / (2 I) with I = integral over the box of Phi [Phi + (x - q) kappa sqrt(n) sech^2].
  const double k = kappa();
  const double lp = half_length - q;
  const double lm = half_length + q;
  const double tp = std::tanh(k * lp), tm = std::tanh(k * lm);
  const double sp = units::sech2(k * lp), sm = units::sech2(k * lm);
  const double density_part = n * (2.0 * half_length - (tp + tm) / k);
  const double dilation_part =
      n * k * (-(lp * sp + lm * sm) / (2.0 * k) + (tp + tm) / (2.0 * k * k));
  return 1.0 / (2.0 * (density_part + dilation_part));
}

double ZeroModeFamily::displacement_box_factor() const {
  return box_factor(kappa(), half_length, q);
}

ZeroModeValues zero_modes(const ZeroModeFamily& family, ZeroMode which, double x) {
  const double k = family.kappa();
  const double rn = std::sqrt(family.n);
  const double z = k * (x - family.q);
  const double phi = rn * std::tanh(z);
  const double s = units::sech2(z);
  ZeroModeValues out;
  if (which == ZeroMode::Phase) {
    out.u = phi;
    out.v = -phi;
    out.u_ad = family.phase_adjoint_scale() * (phi + (x - family.q) * k * rn * s);
  } else {
    out.u = cplx(0.0, -k * rn * s);
    out.v = -std::conj(out.u);
    out.u_ad = cplx(0.0, -1.0 / (4.0 * rn * family.displacement_box_factor()));
  }
  out.v_ad = std::conj(out.u_ad);
  return out;
}

std::string ZeroModeState::label() const {
  std::ostringstream os;
  os << (kind == Kind::Squeezed ? "squeezed(zeta=" : "thermal(tau=") << parameter << ")";
  return os.str();
}

ZeroModeState zero_mode_state(ZeroModeState::Kind kind, double parameter, double n) {
  if (!(std::isfinite(parameter) && parameter > 0.0)) {
    throw InvalidParameter("zero-mode state parameter must be positive");
  }
  if (!(std::isfinite(n) && n > 0.0)) throw InvalidParameter("zero-mode state: n must be positive");
  const double k = units::kKappa0;
  ZeroModeState st;
  st.kind = kind;
  st.parameter = parameter;
  st.n = n;
  if (kind == ZeroModeState::Kind::Squeezed) {
    st.P2 = 2.0 * n * k / parameter;
    st.Q2 = parameter / (8.0 * n * k);
    st.h_mean = (k / 8.0) * (1.0 / parameter + parameter - 2.0);
  } else {
    const double x = k / (4.0 * parameter);
    const double coth = 1.0 / std::tanh(x);
    st.P2 = 2.0 * n * k * coth;
    st.Q2 = coth / (8.0 * n * k);
    st.h_mean = 0.5 * k / std::expm1(2.0 * x);
  }
  return st;
}

ZeroModeState squeezed_state(double zeta, double n) {
  return zero_mode_state(ZeroModeState::Kind::Squeezed, zeta, n);
}

ZeroModeState thermal_state(double tau, double n) {
  return zero_mode_state(ZeroModeState::Kind::Thermal, tau, n);
}

cplx completeness_residual(const PhononModeSet& modes, const ZeroModeFamily& family, double x,
                           double y, bool include_zero_modes) {
  const int m = modes.mode_count();
  std::vector<cplx> ux(m), vx(m), uy(m), vy(m);
  modes.eval_all(x, ux, vx);
  modes.eval_all(y, uy, vy);
  cplx sum = 0.0;
  for (int i = 0; i < m; ++i) sum += ux[i] * std::conj(uy[i]) - std::conj(vx[i]) * vy[i];
  if (include_zero_modes) {
    for (ZeroMode a : {ZeroMode::Phase, ZeroMode::Displacement}) {
      const auto zx = zero_modes(family, a, x);
      const auto zy = zero_modes(family, a, y);
      sum += zx.u * std::conj(zy.u_ad) - zx.v_ad * std::conj(zy.v);
    }
  }
  return sum;
}

void to_json(nlohmann::json& j, const ZeroModeState& s) {
  j = {{"kind", s.kind == ZeroModeState::Kind::Squeezed ? "squeezed" : "thermal"},
       {"parameter", s.parameter},
       {"n", s.n},
       {"P_q2", s.P2},
       {"Q_q2", s.Q2},
       {"PQ_anticommutator", s.PQ},
       {"h_mean", s.h_mean}};
}

void to_json(nlohmann::json& j, const ZeroModeFamily& f) {
  j = {{"n", f.n},
       {"half_length", f.half_length},
       {"q", f.q},
       {"N0", f.condensate_number()},
       {"effective_mass_q", f.effective_mass()}};
}

}  // namespace qimage
