#include "qimage/inference.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "qimage/errors.hpp"
#include "qimage/meanfield_fisher.hpp"
#include "qimage/numerics.hpp"

namespace qimage {

GainFunction GainFunction::normalized(const PixelGrid& grid, const Eigen::VectorXd& raw) {
  if (raw.size() != grid.count()) throw InvalidParameter("gain length does not match the grid");
  if (!raw.allFinite()) throw InvalidParameter("gain has non-finite entries");
  const double peak = raw.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw InvalidParameter("gain must have at least one nonzero entry");
  GainFunction g;
  g.grid = grid;
  g.values = raw / peak;
  g.scale = peak;
  return g;
}

Eigen::VectorXd mean_derivative(const StatsFamily& family, double q, double fd_step) {
  if (!(fd_step > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  return (family(q + fd_step).rho_bar - family(q - fd_step).rho_bar) / (2.0 * fd_step);
}

namespace {

struct Prepared {
  Eigen::MatrixXd P;
  Eigen::LLT<Eigen::MatrixXd> llt;
  double logdet = 0.0;
};

Prepared prepare(const ImageStatistics& st, double max_condition) {
  Prepared p;
  p.P = 0.5 * (st.cov + st.cov.transpose());
  const double floor = 1e-12 * std::max(1e-300, st.rho_bar.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < p.P.rows(); ++i) p.P(i, i) = std::max(p.P(i, i), floor);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.P, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0)) {
    std::ostringstream msg;
    msg << "covariance is not positive definite (smallest eigenvalue " << lmin << ")";
    throw NotPositiveDefinite(msg.str(), lmin);
  }
  if (lmax / lmin > max_condition) {
    std::ostringstream msg;
    msg << "covariance condition number " << lmax / lmin << " exceeds " << max_condition;
    throw IllConditioned(msg.str(), lmax / lmin);
  }
  p.llt.compute(p.P);
  if (p.llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization failed", lmin);
  const Eigen::MatrixXd L = p.llt.matrixL();
  p.logdet = 2.0 * L.diagonal().array().log().sum();
  return p;
}

struct FisherTerms {
  double F = 0.0;
  double standard = 0.0;
  double quadratic = 0.0;
  double logdet_curvature = 0.0;
  double trace_term = 0.0;
  double condition = 0.0;
};

FisherTerms fisher_terms(const StatsFamily& family, double q, double h, double max_condition) {
  const ImageStatistics sm = family(q - h);
  const ImageStatistics s0 = family(q);
  const ImageStatistics sp = family(q + h);
  const Prepared pm = prepare(sm, max_condition);
  const Prepared p0 = prepare(s0, max_condition);
  const Prepared pp = prepare(sp, max_condition);
  const Eigen::VectorXd drho = (sp.rho_bar - sm.rho_bar) / (2.0 * h);
  const Eigen::MatrixXd dP = (pp.P - pm.P) / (2.0 * h);
  const Eigen::MatrixXd d2P = (pp.P - 2.0 * p0.P + pm.P) / (h * h);
  const Eigen::MatrixXd A = p0.llt.solve(dP);     // P^-1 dP
  const Eigen::MatrixXd B = p0.llt.solve(d2P);    // P^-1 d2P
  const double trAA = (A * A).trace();
  FisherTerms t;
  t.quadratic = drho.dot(p0.llt.solve(drho));
  t.logdet_curvature = (pp.logdet - 2.0 * p0.logdet + pm.logdet) / (h * h);
  // Sum_sj d2(P^-1)_sj P_sj with d2(P^-1) = 2 P^-1 dP P^-1 dP P^-1 - P^-1 d2P P^-1.
  t.trace_term = 2.0 * trAA - B.trace();
  t.F = 0.5 * (t.logdet_curvature + t.trace_term + 2.0 * t.quadratic);
  t.standard = t.quadratic + 0.5 * trAA;
  return t;
}

}  // namespace

FisherReport gaussian_fisher(const StatsFamily& family, double q,
                             const GaussianFisherOptions& options) {
  if (!(options.fd_step > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  const FisherTerms t = fisher_terms(family, q, options.fd_step, options.max_condition);
  const ImageStatistics s0 = family(q);
  nlohmann::json prov = {{"q", q}, {"fd_step", options.fd_step}, {"stats", s0.model},
                         {"grid", s0.grid}};
  FisherReport r = FisherReport::make(t.F, StatModel::GaussianPixel, std::move(prov));
  r.components["mean_term"] = t.quadratic;
  r.components["logdet_curvature"] = t.logdet_curvature;
  r.components["inverse_trace_term"] = t.trace_term;
  r.components["standard_form"] = t.standard;
  r.warnings = s0.warnings;
  if (options.check_step_halving) {
    const FisherTerms half = fisher_terms(family, q, 0.5 * options.fd_step, options.max_condition);
    r.components["F_half_step"] = half.F;
    if (std::abs(half.F - t.F) > 0.01 * std::abs(t.F)) {
      r.warnings.push_back("fd_step_inconsistent");
    }
  }
  return r;
}

GainFunction optimal_gain_meanfield(const OrderParameter& profile, const PixelGrid& grid) {
  validate(profile);
  if (is_planar(profile)) throw InvalidParameter("pixel gains are defined for line profiles only");
  Eigen::VectorXd raw(grid.count());
  if (const auto* d = std::get_if<DarkSolitonParams>(&profile)) {
    const PixelMeans pm = dark_soliton_pixel_means(*d, grid, d->q);
    raw = pm.drho_dq.cwiseQuotient(pm.rho_bar);
  } else {
    const auto& rule = numerics::gauss_legendre(16);
    const double q = position(profile);
    for (int s = 0; s < grid.count(); ++s) {
      std::vector<double> cuts{grid.left_edge(s), grid.right_edge(s)};
      if (q > cuts[0] && q < cuts[1]) cuts.insert(cuts.begin() + 1, q);
      double num = 0.0, den = 0.0;
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
        const double half = 0.5 * (cuts[c + 1] - cuts[c]);
        for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
          const double x = mid + half * rule.nodes[g];
          const auto dd = density_dq(profile, x);
          num += half * rule.weights[g] * 2.0 * std::sqrt(dd.density) * dd.dmod_dq;
          den += half * rule.weights[g] * dd.density;
        }
      }
      if (!(den > 0.0)) throw Error("unphysical_pixel", "pixel with zero mean density");
      raw(s) = num / den;
    }
  }
  return GainFunction::normalized(grid, raw);
}

GainFunction almost_optimal_gain(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq) {
  const Eigen::MatrixXd P = 0.5 * (stats.cov + stats.cov.transpose());
  if (drho_dq.size() != P.rows()) throw InvalidParameter("derivative length does not match covariance");
  const double target = 1e-10 * drho_dq.norm();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(P);
  Eigen::VectorXd g;
  double ridge = 0.0;
  if (ldlt.info() == Eigen::Success) {
    g = ldlt.solve(drho_dq);
    // One step of iterative refinement.
    g += ldlt.solve(drho_dq - P * g);
  }
  if (g.size() == 0 || !g.allFinite() || (P * g - drho_dq).norm() > target) {
    const double base = P.trace() / P.rows();
    for (ridge = 1e-12 * base; ridge < base; ridge *= 10.0) {
      const Eigen::MatrixXd R = P + ridge * Eigen::MatrixXd::Identity(P.rows(), P.cols());
      Eigen::LLT<Eigen::MatrixXd> llt(R);
      if (llt.info() != Eigen::Success) continue;
      g = llt.solve(drho_dq);
      if (g.allFinite()) break;
    }
    if (g.size() == 0 || !g.allFinite()) {
      throw IllConditioned("regularized gain solve failed", std::numeric_limits<double>::infinity());
    }
  }
  GainFunction out = GainFunction::normalized(stats.grid, g);
  out.ridge = ridge;
  out.normalization = "max-abs";
  return out;
}

SnrResult snr_and_split(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq,
                        const Eigen::VectorXd& g) {
  if (g.size() != stats.rho_bar.size() || drho_dq.size() != stats.rho_bar.size()) {
    throw InvalidParameter("gain, derivative and statistics have different lengths");
  }
  const double dx = stats.grid.dx();
  SnrResult r;
  r.slope = dx * g.dot(drho_dq);
  r.noise = dx * dx * g.dot(stats.cov * g);
  if (stats.parts) {
    r.split.meanfield = dx * dx * g.dot(stats.parts->meanfield * g);
    r.split.phonon = dx * dx * g.dot(stats.parts->phonon * g);
    r.split.goldstone = dx * dx * g.dot(stats.parts->goldstone * g);
  } else {
    r.split.meanfield = r.noise;
  }
  r.split.total = r.noise;
  r.information = r.noise > 0.0 ? r.slope * r.slope / r.noise : 0.0;
  return r;
}

SnrResult snr_and_split(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq,
                        const GainFunction& gain) {
  return snr_and_split(stats, drho_dq, gain.values);
}

void to_json(nlohmann::json& j, const NoiseSplit& s) {
  j = {{"total", s.total},
       {"meanfield", s.meanfield},
       {"phonon", s.phonon},
       {"goldstone", s.goldstone}};
}

void to_json(nlohmann::json& j, const SnrResult& s) {
  j = {{"slope", s.slope}, {"noise", s.noise}, {"information", s.information}, {"split", s.split}};
}

void to_json(nlohmann::json& j, const GainFunction& g) {
  j = {{"grid", g.grid},
       {"values", std::vector<double>(g.values.data(), g.values.data() + g.values.size())},
       {"scale", g.scale},
       {"ridge", g.ridge},
       {"normalization", g.normalization}};
}

}  // namespace qimage
