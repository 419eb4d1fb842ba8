#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qimage/errors.hpp"
#include "qimage/profiles.hpp"
#include "qimage/units.hpp"

using namespace qimage;
using doctest::Approx;

namespace {

// Relative agreement of the analytic derivative with a central difference in q.
template <class Modulus>
void check_fd(Modulus&& modulus, double analytic, double q, double floor = 1e-2) {
  const double fd = oracle::central(modulus, q, 1e-5);
  CHECK(std::abs(fd - analytic) <= 1e-8 * std::max(std::abs(analytic), floor));
}

}  // namespace

TEST_CASE("internal units") {
  CHECK(units::kSoundSpeed == Approx(1.0 / std::sqrt(2.0)));
  CHECK(units::kGn == 0.5);
  CHECK(units::kappa(0.0) == Approx(units::kKappa0));
  CHECK(units::kappa(0.6) == Approx(0.8 / std::sqrt(2.0)));
  CHECK(units::sech2(800.0) == 0.0);
  CHECK(units::sech2(0.3) == Approx(1.0 / std::pow(std::cosh(0.3), 2)).epsilon(1e-14));
}

TEST_CASE("dark soliton amplitude examples") {
  const DarkSolitonParams p{1.0, 0.0, 0.0};
  CHECK(std::abs(soliton_amplitude(p, 0.0)) == 0.0);
  CHECK(std::norm(soliton_amplitude(p, 40.0)) == Approx(1.0).epsilon(1e-14));
  const DarkSolitonParams m{1.0, 0.5, 0.0};
  CHECK(std::norm(soliton_amplitude(m, 0.0)) == Approx(0.25).epsilon(1e-14));
  CHECK(soliton_amplitude(m, 0.0).imag() > 0.0);
  CHECK_THROWS_AS(DarkSolitonParams({1.0, 1.0, 0.0}).validate(), InvalidParameter);
  CHECK_THROWS_AS(DarkSolitonParams({-1.0, 0.0, 0.0}).validate(), InvalidParameter);
}

TEST_CASE("dark soliton derivative matches finite differences") {
  for (double v : {0.0, 0.3, 0.8}) {
    for (double n : {1.0, 100.0}) {
      const double q = 0.37;
      for (double x : {-6.0, -2.2, -0.9, -0.15, 0.52, 1.3, 3.7, 9.0}) {
        const DarkSolitonParams p{n, v, q};
        const auto d = soliton_density_dq(p, x);
        CHECK(d.density == Approx(std::pow(oracle::dark_modulus(n, v, q, x), 2)).epsilon(1e-13));
        check_fd([&](double qq) { return oracle::dark_modulus(n, v, qq, x); }, d.dmod_dq, q,
                 1e-2 * std::sqrt(n));
      }
    }
  }
}

TEST_CASE("dark soliton derivative at and far from the notch") {
  const double n = 100.0;
  const DarkSolitonParams p{n, 0.0, 0.0};
  const auto at = soliton_density_dq(p, 0.0);
  CHECK(at.density == 0.0);
  // |Phi| has a kink at the node; the right limit is reported.
  CHECK(at.dmod_dq == Approx(-std::sqrt(n) * units::kKappa0).epsilon(1e-14));
  // Flat background: sqrt(n) kappa sech^2(10 kappa) = 2.04e-6 sqrt(n).
  const double tail = std::sqrt(n) * units::kKappa0 * units::sech2(10.0 * units::kKappa0);
  CHECK(std::abs(soliton_density_dq(p, 10.0).dmod_dq) == Approx(tail).epsilon(1e-12));
  CHECK(std::abs(soliton_density_dq(p, -10.0).dmod_dq) < 2.1e-6 * std::sqrt(n));
}

TEST_CASE("dark soliton derivative is odd about q at rest") {
  // Realized symmetry: |tanh| is even about q, so its q-derivative is odd.
  const DarkSolitonParams p{4.0, 0.0, 1.5};
  for (double a : {0.1, 0.7, 2.0, 5.0}) {
    const double plus = soliton_density_dq(p, 1.5 + a).dmod_dq;
    const double minus = soliton_density_dq(p, 1.5 - a).dmod_dq;
    CHECK(plus == Approx(-minus).epsilon(1e-12));
    CHECK(std::abs(plus) == Approx(std::abs(minus)).epsilon(1e-12));
  }
}

TEST_CASE("missing atoms in the notch") {
  for (double v : {0.0, 0.5}) {
    const double n = 3.0, ell = 30.0;
    const DarkSolitonParams p{n, v, 0.0};
    const double missing = oracle::simpson(
        [&](double x) { return n - soliton_density_dq(p, x).density; }, -ell, ell, 20000);
    CHECK(missing == Approx(2.0 * n * (1.0 - v * v) / p.kappa()).epsilon(1e-6));
  }
}

TEST_CASE("phase jump across the notch") {
  const DarkSolitonParams p{1.0, 0.0, 0.0};
  const double jump = std::arg(soliton_amplitude(p, 30.0)) - std::arg(soliton_amplitude(p, -30.0));
  CHECK(std::abs(jump) == Approx(std::numbers::pi).epsilon(1e-12));
  // The jump 2 arccos(v/c) of a moving soliton tends to pi as v -> 0.
  const DarkSolitonParams m{1.0, 1e-6, 0.0};
  const double jm = std::arg(soliton_amplitude(m, -30.0)) - std::arg(soliton_amplitude(m, 30.0));
  CHECK(jm == Approx(2.0 * std::acos(1e-6)).epsilon(1e-10));
}

TEST_CASE("quintic soliton") {
  const QuinticSolitonParams rest{2.0, 0.0, 0.0};
  CHECK(quintic_density(rest, 0.0) == Approx(0.0).scale(1.0));
  CHECK(quintic_density(rest, 50.0) == Approx(2.0).epsilon(1e-12));
  const QuinticSolitonParams sound{2.0, 1.0, 0.0};
  for (double x : {-1.0, 0.0, 0.3}) CHECK(quintic_density(sound, x) == Approx(2.0).epsilon(1e-14));
  CHECK(rest.kappa_prime() == Approx(4.0 * std::numbers::pi));

  for (double v : {0.0, 0.4, 0.9}) {
    const double n = 0.5, q = -0.2;
    auto f2 = [&](double qq, double x) {
      const double kp = 2.0 * std::numbers::pi * n * std::sqrt(1.0 - v * v);
      return 1.0 - 3.0 * (1.0 - v * v) / (2.0 + std::sqrt(1.0 + 3.0 * v * v) * std::cosh(kp * (x - qq)));
    };
    for (double x : {-1.1, -0.5, -0.05, 0.07, 0.3, 0.9}) {
      const QuinticSolitonParams p{n, v, q};
      const auto d = quintic_density_dq(p, x);
      CHECK(d.density == Approx(n * f2(q, x)).epsilon(1e-12));
      check_fd([&](double qq) { return std::sqrt(n * f2(qq, x)); }, d.dmod_dq, q);
    }
  }
}

TEST_CASE("vortex") {
  const VortexParams p{3.0, 2.0, 0.5, 1};
  CHECK(vortex_density(p, 0.5, 0.0) == 0.0);
  CHECK(vortex_density(p, 0.5 + 1.0, 1.0) == Approx(0.5 * 3.0 / 2.0).epsilon(1e-14));
  CHECK(vortex_density(p, 500.0, 100.0) == Approx(1.5).epsilon(1e-5));
  for (double x : {-2.0, 0.0, 0.9, 3.0}) {
    for (double y : {-1.0, 0.25, 2.0}) {
      auto mod = [&](double q) {
        const double r2 = (x - q) * (x - q) + y * y;
        return std::sqrt(3.0 / 2.0 * r2 / (2.0 + r2));
      };
      check_fd(mod, vortex_density_dq(p, x, y).dmod_dq, 0.5);
    }
  }
  CHECK_THROWS_AS(VortexParams({1.0, 1.0, 0.0, 2}).validate(), InvalidParameter);
}

TEST_CASE("trapped soliton") {
  const TrappedSolitonParams p{10.0, 1.0, 40.0, 0.0};
  CHECK(trapped_soliton_density(p, 0.0) == 0.0);
  CHECK(trapped_soliton_density(p, 40.0) == 0.0);
  CHECK(trapped_soliton_density(p, -40.0) == 0.0);
  CHECK(trapped_soliton_density(p, 55.0) == 0.0);
  CHECK(trapped_soliton_density(p, 20.0) ==
        Approx(10.0 * 0.75 * std::pow(std::tanh(20.0 / std::sqrt(2.0)), 2)).epsilon(1e-14));
  const TrappedSolitonParams off{10.0, 1.0, 40.0, 1.2};
  for (double x : {-30.0, -1.0, 0.8, 1.6, 3.0, 25.0}) {
    auto mod = [&](double q) {
      const double bg = std::max(0.0, 10.0 * (1.0 - x * x / 1600.0));
      return std::sqrt(bg) * std::abs(std::tanh((x - q) / std::sqrt(2.0)));
    };
    check_fd(mod, trapped_soliton_density_dq(off, x).dmod_dq, 1.2);
  }
  CHECK_THROWS_AS(TrappedSolitonParams({10.0, 1.0, 40.0, 41.0}).validate(), InvalidParameter);
  CHECK(TrappedSolitonParams::healing_length(2.0, 1.0) == Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("densities are non-negative") {
  const OrderParameter profiles[] = {DarkSolitonParams{2.0, 0.7, 0.1},
                                     QuinticSolitonParams{0.3, 0.2, -0.4},
                                     VortexParams{1.0, 1.0, 0.2, -1},
                                     TrappedSolitonParams{5.0, 1.0, 30.0, 0.5}};
  for (const auto& prof : profiles) {
    for (int i = -400; i <= 400; ++i) {
      const double x = 0.1 * i + 0.013;
      CHECK(density_dq(prof, x, 0.3).density >= 0.0);
    }
  }
}

TEST_CASE("generic profile helpers") {
  OrderParameter p = DarkSolitonParams{1.0, 0.0, 0.0};
  CHECK(position(with_position(p, 2.5)) == 2.5);
  CHECK(!is_planar(p));
  CHECK(is_planar(VortexParams{}));
  CHECK(profile_name(QuinticSolitonParams{}) == "quintic-soliton");
  CHECK(profile_json(p).at("profile") == "dark-soliton");
}
