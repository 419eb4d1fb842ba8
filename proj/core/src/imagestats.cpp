#include "qimage/imagestats.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qimage/errors.hpp"
#include "qimage/meanfield_fisher.hpp"
#include "qimage/numerics.hpp"
#include "qimage/units.hpp"

namespace qimage {

ThermalOccupation ThermalOccupation::at_temperature(double temperature) {
  if (!(temperature >= 0.0)) throw InvalidParameter("temperature must be non-negative");
  ThermalOccupation t;
  t.beta = temperature == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / temperature;
  return t;
}

double ThermalOccupation::occupation(double energy) const {
  if (is_zero_temperature()) return 0.0;
  return 1.0 / std::expm1(beta * energy);
}

namespace {

void check_consistent(const PhononModeSet& modes, const ZeroModeFamily& family,
                      const ZeroModeState& state, const ThermalOccupation& temp) {
  family.validate();
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  if (!close(modes.half_length(), family.half_length) || !close(modes.q(), family.q)) {
    throw InvalidParameter("phonon modes and zero-mode family describe different boxes");
  }
  if (!close(state.n, family.n)) {
    throw InvalidParameter("zero-mode state and zero-mode family have different densities");
  }
  if (!(temp.beta > 0.0)) throw InvalidParameter("inverse temperature must be positive");
}

struct Local {
  double phi = 0.0;
  double s = 0.0;
  double uth_ad = 0.0;
  cplx uq, uq_ad;
  std::vector<cplx> u, v;
};

Local local_fields(const PhononModeSet& modes, const ZeroModeFamily& family, double x) {
  Local L;
  const double z = family.kappa() * (x - family.q);
  L.phi = std::sqrt(family.n) * std::tanh(z);
  L.s = units::sech2(z);
  L.uth_ad = zero_modes(family, ZeroMode::Phase, x).u_ad.real();
  const auto zq = zero_modes(family, ZeroMode::Displacement, x);
  L.uq = zq.u;
  L.uq_ad = zq.u_ad;
  L.u.resize(modes.mode_count());
  L.v.resize(modes.mode_count());
  modes.eval_all(x, L.u, L.v);
  return L;
}

std::vector<double> occupations(const BogoliubovModel& m) {
  std::vector<double> occ(m.modes().mode_count());
  for (std::size_t i = 0; i < occ.size(); ++i) {
    occ[i] = m.temperature().occupation(m.modes().energies()[i]);
  }
  return occ;
}

double z_term(const Local& L, const ZeroModeFamily& family, const ZeroModeState& st) {
  const double N0 = family.condensate_number();
  // Phase mode: <P^2> = N0, <Q^2> = 1/(4 N0), <{P,Q}> = 0.
  const double theta =
      L.uth_ad * L.uth_ad * N0 + L.phi * L.phi / (4.0 * N0) - L.phi * L.uth_ad;
  const cplx cross = std::conj(L.uq) * L.uq_ad;
  const double disp = std::norm(L.uq_ad) * st.P2 + std::norm(L.uq) * st.Q2 - cross.real() -
                      cross.imag() * st.PQ;
  return theta + disp;
}

}  // namespace

BogoliubovModel::BogoliubovModel(double n, double half_length, int pair_count,
                                 ZeroModeState state, ThermalOccupation temp, double q)
    : BogoliubovModel(PhononModeSet(half_length, pair_count, q),
                      ZeroModeFamily{n, half_length, q}, std::move(state), temp) {}

BogoliubovModel::BogoliubovModel(PhononModeSet modes, ZeroModeFamily family,
                                 ZeroModeState state, ThermalOccupation temp)
    : modes_(std::move(modes)), family_(family), state_(std::move(state)), temp_(temp) {
  check_consistent(modes_, family_, state_, temp_);
}

BogoliubovModel BogoliubovModel::at(double q) const {
  ZeroModeFamily f = family_;
  f.q = q;
  return BogoliubovModel(PhononModeSet(modes_.half_length(), modes_.pair_count(), q), f, state_,
                         temp_);
}

BogoliubovModel BogoliubovModel::with_pairs(int pair_count) const {
  return BogoliubovModel(modes_.truncated(pair_count), family_, state_, temp_);
}

nlohmann::json BogoliubovModel::describe() const {
  return {{"model", "bogoliubov"},
          {"zero_mode_state", state_},
          {"zero_mode_family", family_},
          {"pairs", modes_.pair_count()},
          {"beta", temp_.is_zero_temperature() ? nlohmann::json("inf") : nlohmann::json(temp_.beta)}};
}

double mean_density_bogoliubov(const PhononModeSet& modes, const ZeroModeFamily& family,
                               const ZeroModeState& state, const ThermalOccupation& temp,
                               double x) {
  return mean_density_bogoliubov(BogoliubovModel(modes, family, state, temp), x);
}

double zero_mode_density(const BogoliubovModel& model, double x) {
  const Local L = local_fields(model.modes(), model.family(), x);
  return z_term(L, model.family(), model.state());
}

double mean_density_bogoliubov(const BogoliubovModel& model, double x) {
  const Local L = local_fields(model.modes(), model.family(), x);
  const auto occ = occupations(model);
  double rho = L.phi * L.phi;
  for (std::size_t i = 0; i < L.u.size(); ++i) {
    rho += (1.0 + occ[i]) * std::norm(L.v[i]) + occ[i] * std::norm(L.u[i]);
  }
  return rho + z_term(L, model.family(), model.state());
}

double correlation_general(const BogoliubovModel& model, double x, double y) {
  const Local X = local_fields(model.modes(), model.family(), x);
  const Local Y = local_fields(model.modes(), model.family(), y);
  const auto occ = occupations(model);
  cplx ph = 0.0;
  for (std::size_t i = 0; i < X.u.size(); ++i) {
    const cplx fx = X.phi * X.u[i] + X.v[i] * X.phi;
    const cplx fpx = X.phi * std::conj(X.v[i]) + std::conj(X.u[i]) * X.phi;
    const cplx fy = Y.phi * Y.u[i] + Y.v[i] * Y.phi;
    const cplx fpy = Y.phi * std::conj(Y.v[i]) + std::conj(Y.u[i]) * Y.phi;
    ph += (1.0 + occ[i]) * fx * fpy + occ[i] * fy * fpx;
  }
  const double N0 = model.family().condensate_number();
  const auto& st = model.state();
  // eta_theta = 2 Phi u_theta^ad, phi_theta = 0; eta_q = 0, phi_q = i Phi (u_q - u_q^*).
  const double eta_x = 2.0 * X.phi * X.uth_ad, eta_y = 2.0 * Y.phi * Y.uth_ad;
  const cplx vphi_x = cplx(0, 1) * X.phi * (X.uq - std::conj(X.uq));
  const cplx vphi_y = cplx(0, 1) * Y.phi * (Y.uq - std::conj(Y.uq));
  const cplx eta_qx = X.phi * X.uq_ad + std::conj(X.uq_ad) * X.phi;
  const cplx eta_qy = Y.phi * Y.uq_ad + std::conj(Y.uq_ad) * Y.phi;
  const cplx zm = N0 * eta_x * eta_y + st.P2 * eta_qx * std::conj(eta_qy) +
                  st.Q2 * vphi_x * std::conj(vphi_y);
  return (ph + zm).real();
}

double correlation_J(const BogoliubovModel& model, double x, double y) {
  const Local X = local_fields(model.modes(), model.family(), x);
  const Local Y = local_fields(model.modes(), model.family(), y);
  cplx ph = 0.0;
  for (std::size_t i = 0; i < X.u.size(); ++i) {
    ph += 2.0 * X.v[i] * std::conj(Y.v[i]) + X.u[i] * std::conj(Y.v[i]) +
          X.v[i] * std::conj(Y.u[i]);
  }
  const double N0 = model.family().condensate_number();
  const cplx zm = 4.0 * (N0 * X.uth_ad * Y.uth_ad + model.state().Q2 * X.uq * std::conj(Y.uq));
  const cplx adj = X.phi * Y.uth_ad + X.uth_ad * Y.phi + X.uq * std::conj(Y.uq_ad) +
                   X.uq_ad * std::conj(Y.uq);
  return ph.real() + (zm - adj).real();
}

double correlation_connected(const BogoliubovModel& model, double x, double y) {
  const cplx c = completeness_residual(model.modes(), model.family(), x, y, true);
  return correlation_general(model, x, y) -
         std::sqrt(model.n()) * std::tanh(model.family().kappa() * (x - model.q())) *
             std::sqrt(model.n()) * std::tanh(model.family().kappa() * (y - model.q())) *
             c.real();
}

bool ImageStatistics::is_poisson() const {
  return model.contains("model") && model["model"] == "meanfield-poisson";
}

ImageStatistics build_image_statistics(const BogoliubovModel& base, const PixelGrid& grid,
                                       double q, const StatsOptions& options) {
  if (grid.half_length() > base.modes().half_length() + 1e-12) {
    throw InvalidParameter("pixel window extends beyond the box");
  }
  const BogoliubovModel model = std::abs(q - base.q()) == 0.0 ? base : base.at(q);
  const auto& rule = numerics::gauss_legendre(options.gauss_order);
  const int M = grid.count();
  const int K = model.modes().mode_count();
  const int G = static_cast<int>(rule.nodes.size());
  const auto occ = occupations(model);

  using CMat = Eigen::MatrixXcd;
  CMat a = CMat::Zero(M, K), b = CMat::Zero(M, K), c = CMat::Zero(M, K);
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(M);
  Eigen::VectorXd phi2 = Eigen::VectorXd::Zero(M), one = Eigen::VectorXd::Zero(M);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(M);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(M);
  cplx uq_ad = 0.0;

  for (int s = 0; s < M; ++s) {
    const double mid = grid.center(s);
    const double half = 0.5 * grid.dx();
    for (int g = 0; g < G; ++g) {
      const double x = mid + half * rule.nodes[g];
      const double w = half * rule.weights[g];
      const Local L = local_fields(model.modes(), model.family(), x);
      double dens = L.phi * L.phi + z_term(L, model.family(), model.state());
      for (int k = 0; k < K; ++k) {
        dens += (1.0 + occ[k]) * std::norm(L.v[k]) + occ[k] * std::norm(L.u[k]);
        a(s, k) += w * L.phi * (L.u[k] + L.v[k]);
        b(s, k) += w * L.phi * L.u[k];
        c(s, k) += w * L.phi * L.v[k];
      }
      rho(s) += w * dens;
      phi2(s) += w * L.phi * L.phi;
      one(s) += w * L.phi;
      alpha(s) += w * L.phi * L.uth_ad;
      e(s) += w * L.phi * L.uq;
      uq_ad = L.uq_ad;
    }
  }

  CovarianceParts parts;
  parts.meanfield = phi2.asDiagonal();
  Eigen::VectorXd thermal_weight(K);
  for (int k = 0; k < K; ++k) thermal_weight(k) = 2.0 * occ[k];
  parts.phonon = (a * a.adjoint() - b * b.adjoint() + c * c.adjoint()).real() +
                 (a * thermal_weight.asDiagonal() * a.adjoint()).real();
  const double N0 = model.family().condensate_number();
  const double Q2 = model.state().Q2;
  const Eigen::MatrixXcd ec = e * std::conj(uq_ad) * one.transpose().cast<cplx>();
  Eigen::MatrixXd zero = 4.0 * N0 * alpha * alpha.transpose() +
                         4.0 * Q2 * (e * e.adjoint()).real() -
                         (phi2 * alpha.transpose() + alpha * phi2.transpose()) -
                         (ec + ec.adjoint()).real();
  parts.goldstone = -zero;
  parts.phonon = 0.5 * (parts.phonon + parts.phonon.transpose());
  parts.goldstone = 0.5 * (parts.goldstone + parts.goldstone.transpose());

  ImageStatistics st;
  st.grid = grid;
  st.q = q;
  st.rho_bar = rho;
  st.cov = parts.meanfield + parts.phonon - parts.goldstone;
  st.parts = std::move(parts);
  st.model = model.describe();
  st.model["gauss_order"] = options.gauss_order;
  if (rho.minCoeff() < 1.0) st.warnings.push_back("pixels_with_mean_count_below_one");

  if (options.check_positive) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(st.cov, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmin < -1e-9 * st.cov.trace()) {
      std::ostringstream msg;
      msg << "covariance is not positive semidefinite (smallest eigenvalue " << lmin << ")";
      throw NotPositiveDefinite(msg.str(), lmin);
    }
  }
  return st;
}

ImageStatistics build_meanfield_statistics(const DarkSolitonParams& params,
                                           const PixelGrid& grid, double q) {
  const PixelMeans pm = dark_soliton_pixel_means(params, grid, q);
  ImageStatistics st;
  st.grid = grid;
  st.q = q;
  st.rho_bar = pm.rho_bar;
  st.cov = pm.rho_bar.asDiagonal();
  nlohmann::json p;
  to_json(p, params);
  st.model = {{"model", "meanfield-poisson"}, {"profile", p}};
  if (pm.rho_bar.minCoeff() <= 0.0) {
    throw Error("unphysical_pixel", "mean-field pixel count is not positive");
  }
  if (pm.rho_bar.minCoeff() < 1.0) st.warnings.push_back("pixels_with_mean_count_below_one");
  return st;
}

void to_json(nlohmann::json& j, const ImageStatistics& s) {
  const int M = s.grid.count();
  std::vector<double> rho(s.rho_bar.data(), s.rho_bar.data() + M);
  std::vector<double> cov;
  cov.reserve(static_cast<std::size_t>(M) * M);
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < M; ++c) cov.push_back(s.cov(r, c));
  j = {{"grid", s.grid}, {"q", s.q},         {"rho_bar", rho},
       {"cov", cov},     {"model", s.model}, {"warnings", s.warnings}};
}

}  // namespace qimage
