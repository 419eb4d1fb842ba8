#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"
#include "qimage/errors.hpp"
#include "qimage/imagestats.hpp"

using namespace qimage;
using doctest::Approx;

namespace {

const double kKappa = 1.0 / std::sqrt(2.0);

double phi(double n, double x, double q = 0.0) { return std::sqrt(n) * std::tanh(kKappa * (x - q)); }

// Pixel covariance from point evaluations: Simpson in each pixel, applied to
// Phi(x) Phi(y) J(x, y) plus the delta term on the diagonal.
Eigen::MatrixXd literal_cov(const BogoliubovModel& m, const PixelGrid& grid, int panels) {
  const int M = grid.count();
  std::vector<double> xs, ws;
  std::vector<int> owner;
  for (int s = 0; s < M; ++s) {
    const double h = grid.dx() / panels;
    for (int i = 0; i <= panels; ++i) {
      xs.push_back(grid.left_edge(s) + i * h);
      ws.push_back((i == 0 || i == panels ? 1.0 : (i % 2 ? 4.0 : 2.0)) * h / 3.0);
      owner.push_back(s);
    }
  }
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(M, M);
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const double pa = phi(m.n(), xs[a], m.q());
    P(owner[a], owner[a]) += ws[a] * pa * pa;
    for (std::size_t b = 0; b < xs.size(); ++b) {
      P(owner[a], owner[b]) +=
          ws[a] * ws[b] * pa * phi(m.n(), xs[b], m.q()) * correlation_J(m, xs[a], xs[b]);
    }
  }
  return P;
}

}  // namespace

TEST_CASE("thermal occupation") {
  const auto zero = ThermalOccupation::zero_temperature();
  CHECK(zero.is_zero_temperature());
  CHECK(zero.occupation(0.1) == 0.0);
  const auto t = ThermalOccupation::at_temperature(0.5);
  CHECK(t.occupation(0.3) == Approx(1.0 / (std::exp(0.6) - 1.0)).epsilon(1e-14));
  CHECK(t.occupation(1e-9) == Approx(0.5e9).epsilon(1e-6));
  CHECK(ThermalOccupation::at_temperature(1e-3).occupation(1.0) < 1e-300);
  CHECK_THROWS_AS(ThermalOccupation::at_temperature(-1.0), InvalidParameter);
}

TEST_CASE("notch filling") {
  const double n = 100.0;
  const BogoliubovModel g(n, 10.0, 70, squeezed_state(1.0, n));
  const BogoliubovModel s(n, 10.0, 70, squeezed_state(100.0, n));
  const BogoliubovModel t(n, 10.0, 70, thermal_state(5.0, n));
  const double g0 = mean_density_bogoliubov(g, 0.0);
  CHECK(g0 < 1e-3 * n);
  CHECK(g0 == Approx(0.0390050121).epsilon(1e-8));
  CHECK(mean_density_bogoliubov(s, 0.0) > g0);
  CHECK(mean_density_bogoliubov(s, 0.0) == Approx(8.70195).epsilon(1e-5));
  for (double x : {1.5, 2.0, 3.0, 5.0, 8.0}) {
    for (double sx : {x, -x}) {
      const double th = mean_density_bogoliubov(t, sx);
      CHECK(th > mean_density_bogoliubov(g, sx));
      CHECK(th > mean_density_bogoliubov(s, sx));
    }
  }
  // Far from the soliton the density exceeds n by the depletion.
  CHECK(mean_density_bogoliubov(g, 8.0) > n);
}

TEST_CASE("mean density from its parts") {
  const double n = 40.0;
  const BogoliubovModel m(n, 8.0, 12, squeezed_state(3.0, n), ThermalOccupation::at_temperature(0.3), 0.6);
  const auto& modes = m.modes();
  std::vector<cplx> u(modes.mode_count()), v(modes.mode_count());
  for (double x : {-5.0, 0.6, 1.0, 4.0}) {
    modes.eval_all(x, u, v);
    double rho = phi(n, x, 0.6) * phi(n, x, 0.6) + zero_mode_density(m, x);
    for (int k = 0; k < modes.mode_count(); ++k) {
      const double occ = 1.0 / std::expm1(modes.energies()[k] / 0.3);
      rho += (1.0 + occ) * std::norm(v[k]) + occ * std::norm(u[k]);
    }
    CHECK(mean_density_bogoliubov(m, x) == Approx(rho).epsilon(1e-13));
    CHECK(mean_density_bogoliubov(modes, m.family(), m.state(), m.temperature(), x) ==
          mean_density_bogoliubov(m, x));
  }
}

TEST_CASE("mismatched records are rejected") {
  const PhononModeSet modes(10.0, 4);
  CHECK_THROWS_AS(BogoliubovModel(modes, ZeroModeFamily{100.0, 12.0, 0.0}, squeezed_state(1.0, 100.0)),
                  InvalidParameter);
  CHECK_THROWS_AS(BogoliubovModel(modes, ZeroModeFamily{100.0, 10.0, 0.0}, squeezed_state(1.0, 50.0)),
                  InvalidParameter);
  CHECK_THROWS_AS(BogoliubovModel(modes, ZeroModeFamily{100.0, 10.0, 0.5}, squeezed_state(1.0, 100.0)),
                  InvalidParameter);
}

TEST_CASE("zero-mode identities in the general correlation") {
  const ZeroModeFamily fam{100.0, 10.0, 0.0};
  for (double x : {-3.0, 0.2, 1.7}) {
    const double p = phi(100.0, x);
    const auto th = zero_modes(fam, ZeroMode::Phase, x);
    const auto dq = zero_modes(fam, ZeroMode::Displacement, x);
    // phi_theta = i Phi (u_theta - u_theta^*) and eta_q = Phi (u_q^ad + u_q^ad^*)
    CHECK(std::abs(cplx(0, 1) * p * (th.u - std::conj(th.u))) == 0.0);
    CHECK(std::abs(p * (dq.u_ad + std::conj(dq.u_ad))) == 0.0);
  }
}

TEST_CASE("correlation symmetry and the dual form") {
  const double n = 100.0;
  const BogoliubovModel m(n, 10.0, 70, squeezed_state(1.0, n));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double x = -9.5 + i, y = -9.3 + j;
      const double gen = correlation_general(m, x, y);
      CHECK(gen == Approx(correlation_general(m, y, x)).epsilon(1e-10).scale(1.0));
      const double dual = phi(n, x) * phi(n, y) * correlation_J(m, x, y);
      const double conn = correlation_connected(m, x, y);
      worst = std::max(worst, std::abs(conn - dual) / std::max(std::abs(dual), 1e-300));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("J kernel shape") {
  const double n = 100.0;
  const BogoliubovModel g(n, 10.0, 70, squeezed_state(1.0, n));
  for (double x : {3.0, 5.0, 8.0, -4.0}) CHECK(correlation_J(g, x, x) < 0.0);
  const BogoliubovModel s(n, 10.0, 70, squeezed_state(100.0, n));
  // Positive and peaked in the core; the uniform anticorrelated background
  // of the squeezed ground state survives far from the soliton.
  double best = -1e300, bx = 99, by = 99;
  for (int i = -18; i <= 18; ++i) {
    for (int j = -18; j <= 18; ++j) {
      const double x = 0.5 * i, y = 0.5 * j;
      const double v = correlation_J(s, x, y);
      if (std::abs(x) <= 2.0 && std::abs(y) <= 2.0) CHECK(v > 0.0);
      if (v > best) { best = v; bx = x; by = y; }
    }
  }
  CHECK(bx == 0.0);
  CHECK(by == 0.0);
  CHECK(best > 50.0 * std::abs(correlation_J(s, 8.0, 8.0)));
  CHECK(correlation_J(s, 8.0, 8.0) == Approx(correlation_J(g, 8.0, 8.0)).epsilon(1e-3));
}

TEST_CASE("pixel statistics match literal double quadrature") {
  const double n = 60.0;
  const BogoliubovModel m(n, 8.0, 10, squeezed_state(1.5, n), {}, 0.3);
  const PixelGrid grid = PixelGrid::from_half_length(1.0, 6.0);
  const auto st = build_image_statistics(m, grid, 0.3);
  // Simpson at two resolutions with one Richardson step.
  const Eigen::MatrixXd P = (16.0 * literal_cov(m, grid, 64) - literal_cov(m, grid, 32)) / 15.0;
  CHECK((st.cov - P).cwiseAbs().maxCoeff() < 1e-9 * P.cwiseAbs().maxCoeff());
  auto dens = [&](double x) { return mean_density_bogoliubov(m, x); };
  for (int s = 0; s < grid.count(); ++s) {
    const double a = grid.left_edge(s), b = grid.right_edge(s);
    const double r = (16.0 * oracle::simpson(dens, a, b, 64) - oracle::simpson(dens, a, b, 32)) / 15.0;
    CHECK(st.rho_bar(s) == Approx(r).epsilon(1e-11));
  }
  REQUIRE(st.parts.has_value());
  const auto& parts = *st.parts;
  CHECK((parts.meanfield + parts.phonon - parts.goldstone - st.cov).cwiseAbs().maxCoeff() == 0.0);
  CHECK(!st.is_poisson());
  CHECK(st.model.at("model") == "bogoliubov");
}

TEST_CASE("covariance invariants") {
  const double n = 100.0;
  const BogoliubovModel m(n, 10.0, 70, squeezed_state(1.0, n));
  const auto st = build_image_statistics(m, PixelGrid::fitting(0.7, 10.0), 0.0);
  CHECK((st.cov - st.cov.transpose()).cwiseAbs().maxCoeff() < 1e-14 * st.cov.cwiseAbs().maxCoeff());
  CHECK(st.cov.diagonal().minCoeff() > 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(st.cov);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * st.cov.trace());
  CHECK(st.parts->goldstone.trace() > 0.0);
  CHECK_THROWS_AS(build_image_statistics(m, PixelGrid::from_half_length(0.5, 11.0), 0.0),
                  InvalidParameter);
}

TEST_CASE("atom bookkeeping over the whole box") {
  const double n = 100.0, ell = 10.0;
  const BogoliubovModel m(n, ell, 70, squeezed_state(1.0, n));
  const auto st = build_image_statistics(m, PixelGrid::from_half_length(0.5, ell), 0.0,
                                         StatsOptions{12, true});
  const auto& modes = m.modes();
  std::vector<cplx> u(modes.mode_count()), v(modes.mode_count());
  auto depletion = [&](double x) {
    modes.eval_all(x, u, v);
    double d = 0.0;
    for (const auto& vk : v) d += std::norm(vk);
    return d;
  };
  const double cond = oracle::simpson([&](double x) { return phi(n, x) * phi(n, x); }, -ell, ell, 4000);
  const double dep = oracle::simpson(depletion, -ell, ell, 20000);
  const double z = oracle::simpson([&](double x) { return zero_mode_density(m, x); }, -ell, ell, 4000);
  CHECK(st.rho_bar.sum() == Approx(cond + dep + z).epsilon(1e-9));
  // The condensate part is N0 up to the exponentially small box term.
  CHECK(cond == Approx(m.family().condensate_number()).epsilon(1e-6));
}

TEST_CASE("convergence with the number of modes") {
  const double n = 100.0;
  const BogoliubovModel full(n, 10.0, 70, squeezed_state(1.0, n));
  const PixelGrid grid = PixelGrid::fitting(0.7, 10.0);
  std::vector<ImageStatistics> st;
  for (int pairs : {20, 40, 70}) st.push_back(build_image_statistics(full.with_pairs(pairs), grid, 0.0));
  const double r1 = (st[1].rho_bar - st[0].rho_bar).cwiseAbs().maxCoeff();
  const double r2 = (st[2].rho_bar - st[1].rho_bar).cwiseAbs().maxCoeff();
  const double c1 = (st[1].cov - st[0].cov).cwiseAbs().maxCoeff();
  const double c2 = (st[2].cov - st[1].cov).cwiseAbs().maxCoeff();
  CHECK(r2 < r1);
  CHECK(c2 < c1);
}

TEST_CASE("finite temperature tends to zero temperature") {
  const double n = 100.0;
  const BogoliubovModel cold(n, 10.0, 30, squeezed_state(1.0, n));
  const double E1 = cold.modes().energy(1);
  const PixelGrid grid = PixelGrid::fitting(0.7, 10.0);
  const auto ref = build_image_statistics(cold, grid, 0.0);
  double previous = 1e300;
  for (double beta_e1 : {5.0, 20.0, 41.0}) {
    const BogoliubovModel warm(cold.modes(), cold.family(), cold.state(),
                               ThermalOccupation::at_temperature(E1 / beta_e1));
    const auto st = build_image_statistics(warm, grid, 0.0);
    const double diff = (st.cov - ref.cov).cwiseAbs().maxCoeff();
    CHECK(diff < previous);
    previous = diff;
    for (double x : {0.3, 2.0}) {
      const double dc = correlation_general(warm, x, 1.1) - correlation_general(cold, x, 1.1);
      if (beta_e1 > 40.0) CHECK(std::abs(dc) < 1e-6 * n * n);
    }
  }
  CHECK(previous < 1e-6 * n * n);
}

TEST_CASE("mean-field statistics") {
  const auto st = build_meanfield_statistics({100.0, 0.2, 0.0}, PixelGrid::from_half_length(0.5, 10.0), 0.1);
  CHECK(st.is_poisson());
  CHECK((st.cov - Eigen::MatrixXd(st.rho_bar.asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  nlohmann::json j = st;
  CHECK(j.at("cov").size() == 40u * 40u);
  CHECK(j.at("cov")[41] == st.cov(1, 1));
}
