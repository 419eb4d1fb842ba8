#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "oracles.hpp"
#include "qimage/bdg.hpp"
#include "qimage/errors.hpp"

using namespace qimage;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const double kKappa = 1.0 / std::sqrt(2.0);

// Simpson on [-ell, ell] of f(x) returning a complex value.
template <class F>
cd simpson_c(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  cd s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Bogoliubov inner products of the first `pairs` pairs, by Simpson.
Eigen::MatrixXcd gram(const PhononModeSet& modes, int panels) {
  const int m = modes.mode_count();
  const double ell = modes.half_length();
  const double h = 2.0 * ell / panels;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(m, m);
  std::vector<cd> u(m), v(m);
  for (int i = 0; i <= panels; ++i) {
    const double x = -ell + i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    modes.eval_all(x, u, v);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) G(a, b) += w * (u[a] * std::conj(u[b]) - v[a] * std::conj(v[b]));
  }
  return G * (h / 3.0);
}

}  // namespace

TEST_CASE("wavenumbers of the l = 10 box") {
  const PhononModeSet modes = solve_wavenumbers(10.0, 3);
  const double unit = kPi / 10.0;
  CHECK(modes.wavenumber(1) / unit == Approx(0.5379).epsilon(5e-4));
  CHECK(modes.wavenumber(2) / unit == Approx(1.6093).epsilon(5e-4));
  CHECK(modes.wavenumber(3) / unit == Approx(2.6704).epsilon(5e-4));
  // Frozen solver output.
  CHECK(modes.wavenumber(1) / unit == Approx(0.5378524706).epsilon(1e-9));
  CHECK(modes.wavenumber(2) / unit == Approx(1.609286937).epsilon(1e-9));
  CHECK(modes.wavenumber(3) / unit == Approx(2.67042931).epsilon(1e-9));
}

TEST_CASE("quantization condition, ordering and symmetry") {
  const PhononModeSet modes(10.0, 70);
  double prev = 0.0;
  for (int j = 1; j <= 70; ++j) {
    const double k = modes.wavenumber(j);
    const double lhs = 2.0 * k * 10.0 + 2.0 * std::atan(2.0 * kKappa / k) - 2.0 * kPi * j;
    CHECK(std::abs(lhs) <= 1e-10);
    CHECK(std::abs(modes.quantization_residual(j)) <= 1e-10);
    CHECK(k > prev);
    CHECK(k > (j - 1) * kPi / 10.0);
    CHECK(k < j * kPi / 10.0);
    prev = k;
    CHECK(modes.wavenumber(-j) == -k);
    CHECK(modes.energy(-j) == modes.energy(j));
    CHECK(modes.energy(j) == Approx(oracle::bogoliubov_energy(k)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(modes.wavenumber(0), InvalidParameter);
  CHECK_THROWS_AS(modes.wavenumber(71), InvalidParameter);
  CHECK_THROWS_AS(PhononModeSet(4.9, 3), InvalidParameter);
  CHECK_THROWS_AS(PhononModeSet(10.0, 0), InvalidParameter);
}

TEST_CASE("large boxes approach the free-particle spacing") {
  for (double ell : {100.0, 1000.0}) {
    const PhononModeSet modes(ell, 2);
    for (int j : {1, 2}) {
      const double k = modes.wavenumber(j);
      const double shift = 2.0 * std::atan(2.0 * kKappa / k);
      CHECK(k == Approx((2.0 * kPi * j - shift) / (2.0 * ell)).epsilon(1e-12));
    }
  }
  // The phase shift tends to pi for k -> 0.
  CHECK(PhononModeSet(1e5, 1).wavenumber(1) / (kPi / 1e5) == Approx(0.5).epsilon(1e-4));
}

TEST_CASE("energy at k = kappa") {
  CHECK(bogoliubov_energy(kKappa) == Approx(std::sqrt(1.25) / 2.0).epsilon(1e-15));
  CHECK(bogoliubov_energy(kKappa) == Approx(0.559017).epsilon(1e-6));
}

TEST_CASE("phonon modes solve the BdG equations") {
  const double n = 50.0, g = 0.5 / n, mu = 0.5, q = 0.4;
  const PhononModeSet modes(12.0, 5, q);
  auto phi = [&](double x) { return std::sqrt(n) * std::tanh(kKappa * (x - q)); };
  const double h = 1e-3;
  for (int j : {1, -2, 3, 5, -5}) {
    const double E = modes.energy(j);
    for (double x : {-3.0, -0.7, 0.4, 0.55, 2.0, 6.0}) {
      const auto c = modes.eval(j, x);
      const auto l = modes.eval(j, x - h), r = modes.eval(j, x + h);
      const cd uxx = (l.u - 2.0 * c.u + r.u) / (h * h);
      const cd vxx = (l.v - 2.0 * c.v + r.v) / (h * h);
      const double p2 = phi(x) * phi(x);
      const cd Hu = -0.5 * uxx + (g * p2 - mu) * c.u;
      const cd Hv = -0.5 * vxx + (g * p2 - mu) * c.v;
      const cd row1 = Hu + g * p2 * c.u + g * p2 * c.v - E * c.u;
      const cd row2 = -g * p2 * c.u - Hv - g * p2 * c.v - E * c.v;
      const double scale = std::abs(c.u) + std::abs(c.v) + 1.0;
      CHECK(std::abs(row1) < 2e-6 * scale);
      CHECK(std::abs(row2) < 2e-6 * scale);
    }
  }
}

TEST_CASE("mode-function conventions") {
  const PhononModeSet modes(10.0, 3);
  for (int j = 1; j <= 3; ++j) {
    CHECK(std::abs(modes.eval(j, 0.0).v.imag()) < 1e-15);
    CHECK(eval_phonon(modes, j, 1.3).u == modes.eval(j, 1.3).u);
    // u_{-k} = -conj(u_k) at q = 0
    CHECK(std::abs(modes.eval(-j, 1.7).u + std::conj(modes.eval(j, 1.7).u)) < 1e-13);
  }
}

TEST_CASE("phonon Gram matrix") {
  const PhononModeSet modes(12.0, 10);
  const Eigen::MatrixXcd G = gram(modes, 40000);
  const double err = (G - Eigen::MatrixXcd::Identity(20, 20)).cwiseAbs().maxCoeff();
  CHECK(err < 1e-7);
  // In the l = 10 box the closed-form modes carry an exponentially small
  // overlap just above 1e-7.
  const Eigen::MatrixXcd G10 = gram(PhononModeSet(10.0, 10), 40000);
  const double err10 = (G10 - Eigen::MatrixXcd::Identity(20, 20)).cwiseAbs().maxCoeff();
  CHECK(err10 == Approx(1.19e-7).epsilon(0.02));
  const Eigen::MatrixXcd G10f = gram(PhononModeSet(10.0, 10), 80000);
  CHECK(std::abs((G10f - G10).cwiseAbs().maxCoeff()) < 1e-11);
}

TEST_CASE("zero modes") {
  const ZeroModeFamily fam{100.0, 10.0, 0.0};
  CHECK(fam.condensate_number() == Approx(2000.0 - 200.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(fam.effective_mass() == Approx(-400.0 * std::sqrt(2.0)).epsilon(1e-14));
  for (double x : {-9.0, -1.0, 0.0, 0.3, 4.0}) {
    for (ZeroMode a : {ZeroMode::Phase, ZeroMode::Displacement}) {
      const auto z = zero_modes(fam, a, x);
      CHECK(z.v == -std::conj(z.u));
      CHECK(z.v_ad == std::conj(z.u_ad));
      CHECK(std::abs(z.u) == Approx(std::abs(z.v)));
    }
    CHECK(zero_modes(fam, ZeroMode::Phase, x).u_ad.imag() == 0.0);
    CHECK(zero_modes(fam, ZeroMode::Displacement, x).u.real() == 0.0);
    CHECK(zero_modes(fam, ZeroMode::Displacement, x).u_ad.real() == 0.0);
  }
}

TEST_CASE("zero-mode duality") {
  for (double q : {0.0, 1.5}) {
    for (double ell : {6.0, 10.0}) {
      const ZeroModeFamily fam{30.0, ell, q};
      const ZeroMode kinds[] = {ZeroMode::Phase, ZeroMode::Displacement};
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const cd d = simpson_c(
              [&](double x) {
                const auto za = zero_modes(fam, kinds[a], x);
                const auto zb = zero_modes(fam, kinds[b], x);
                return std::conj(za.u_ad) * zb.u - std::conj(za.v_ad) * zb.v;
              },
              -ell, ell, 20000);
          CHECK(std::abs(d - (a == b ? 1.0 : 0.0)) < 1e-10);
        }
        const cd norm = simpson_c(
            [&](double x) {
              const auto z = zero_modes(fam, kinds[a], x);
              return cd(std::norm(z.u) - std::norm(z.v));
            },
            -ell, ell, 2000);
        CHECK(std::abs(norm) == 0.0);
      }
    }
  }
}

TEST_CASE("phonon overlap with the zero modes") {
  // Displacement: the overlap is exponentially small in the box size.
  // Phase: the order parameter is antiperiodic in the periodic box, so the
  // overlap stays of order one.
  auto overlap = [](double ell, ZeroMode which, int j) {
    const PhononModeSet modes(ell, j);
    const ZeroModeFamily fam{1.0, ell, 0.0};
    return std::abs(simpson_c(
        [&](double x) {
          const auto m = modes.eval(j, x);
          const auto z = zero_modes(fam, which, x);
          return std::conj(m.u) * z.u - std::conj(m.v) * z.v;
        },
        -ell, ell, 40000));
  };
  const double q10 = overlap(10.0, ZeroMode::Displacement, 1);
  const double q14 = overlap(14.0, ZeroMode::Displacement, 1);
  CHECK(q10 < 5e-5);
  CHECK(q14 < 0.1 * q10);
  CHECK(overlap(10.0, ZeroMode::Phase, 1) > 0.1);
}

TEST_CASE("zero-mode states") {
  const double n = 100.0;
  const auto g = squeezed_state(1.0, n);
  CHECK(g.h_mean == 0.0);
  CHECK(g.P2 * g.Q2 == Approx(0.25).epsilon(1e-15));
  CHECK(g.P2 == Approx(2.0 * n * kKappa).epsilon(1e-15));
  const auto s = squeezed_state(100.0, n);
  CHECK(s.h_mean == Approx(98.01 / 8.0 * kKappa).epsilon(1e-14));
  CHECK(s.h_mean / kKappa == Approx(12.25).epsilon(2e-4));
  CHECK(s.P2 * s.Q2 == Approx(0.25));
  CHECK(s.PQ == 0.0);
  const auto cold = thermal_state(1e-4, n);
  CHECK(cold.P2 == Approx(g.P2).epsilon(1e-14));
  CHECK(cold.Q2 == Approx(g.Q2).epsilon(1e-14));
  for (double tau : {0.05, 0.2, 1.0, 5.0}) {
    const auto t = thermal_state(tau, n);
    const double coth = 1.0 / std::tanh(kKappa / (4.0 * tau));
    CHECK(t.P2 * t.Q2 == Approx(coth * coth / 4.0).epsilon(1e-13));
    CHECK(t.P2 * t.Q2 > 0.25);
    CHECK(t.h_mean == Approx(0.5 * kKappa / (std::exp(kKappa / (2.0 * tau)) - 1.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(squeezed_state(0.0, n), InvalidParameter);
  CHECK_THROWS_AS(thermal_state(-1.0, n), InvalidParameter);
  CHECK(s.label() == "squeezed(zeta=100)");
}

TEST_CASE("completeness") {
  const double n = 100.0;
  const ZeroModeFamily fam{n, 10.0, 0.0};
  const PhononModeSet full(10.0, 70);
  for (double x : {-2.5, 0.0, 2.5}) {
    const cd r = completeness_residual(full, fam, x + 2.5, x - 2.5);
    CHECK(std::abs(r) < 0.05 * n);
    const cd a = completeness_residual(full, fam, 0.7, -1.9);
    const cd b = completeness_residual(full, fam, -1.9, 0.7);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
  }

  // Weak form against a Gaussian centred on the soliton: the truncated sum
  // reproduces the overlap integral, and only with the zero modes included.
  const double sigma = 1.0;
  auto gauss = [&](double x) { return std::exp(-x * x / (2.0 * sigma * sigma)); };
  const double target = std::sqrt(kPi) * sigma;  // integral of gauss^2
  auto weak = [&](int pairs, bool zero) {
    const PhononModeSet modes = full.truncated(pairs);
    const int m = modes.mode_count();
    std::vector<cd> A(m), B(m), u(m), v(m);
    cd Au[2] = {}, Aad[2] = {}, Bad[2] = {}, Bv[2] = {};
    const int panels = 20000;
    const double a = -10.0, h = 20.0 / panels;
    for (int i = 0; i <= panels; ++i) {
      const double x = a + i * h;
      const double w = (i == 0 || i == panels ? 1.0 : (i % 2 ? 4.0 : 2.0)) * h / 3.0 * gauss(x);
      modes.eval_all(x, u, v);
      for (int k = 0; k < m; ++k) {
        A[k] += w * u[k];
        B[k] += w * v[k];
      }
      for (int z = 0; z < 2; ++z) {
        const auto zm = zero_modes(fam, z ? ZeroMode::Displacement : ZeroMode::Phase, x);
        Au[z] += w * zm.u;
        Aad[z] += w * zm.u_ad;
        Bad[z] += w * zm.v_ad;
        Bv[z] += w * zm.v;
      }
    }
    cd s = 0.0;
    for (int k = 0; k < m; ++k) s += std::norm(A[k]) - std::norm(B[k]);
    if (zero)
      for (int z = 0; z < 2; ++z) s += Au[z] * std::conj(Aad[z]) - Bad[z] * std::conj(Bv[z]);
    return std::abs(s - target);
  };
  const double w20 = weak(20, true), w40 = weak(40, true), w70 = weak(70, true);
  CHECK(w40 <= w20 * 1.0001);
  CHECK(w70 <= w40 * 1.0001);
  CHECK(w70 < 1e-3 * target);
  CHECK(weak(70, false) > 0.1 * target);
}
