#pragma once

#include <complex>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

namespace qimage {

struct DarkSolitonParams {
  double n = 1.0;         // linear density, 1/xi
  double v_over_c = 0.0;  // in [0, 1)
  double q = 0.0;         // position, xi

  void validate() const;
  double kappa() const;
};

struct QuinticSolitonParams {
  double n = 1.0;
  double v_over_c = 0.0;  // in [0, 1]; v/c = 1 is the vanishing soliton
  double q = 0.0;

  void validate() const;
  double kappa_prime() const;  // 2 pi n sqrt(1 - (v/c)^2)
};

struct VortexParams {
  double n = 1.0;  // areal density
  double L = 1.0;  // axial length
  double q = 0.0;  // core x-position
  int winding = 1;

  void validate() const;
};

struct TrappedSolitonParams {
  double n0 = 1.0;    // background density at the soliton
  double xi0 = 1.0;   // local healing length
  double R_TF = 50.0;  // Thomas-Fermi radius
  double q = 0.0;

  void validate() const;
  // Local healing length implied by n0: 1 / sqrt(2 g n0) with g n = 1/2 at
  // the reference density n_ref.
  static double healing_length(double n0, double n_ref);
};

using OrderParameter =
    std::variant<DarkSolitonParams, QuinticSolitonParams, VortexParams, TrappedSolitonParams>;

// Density together with the position derivative of the modulus.
struct DensityDerivative {
  double density = 0.0;
  double dmod_dq = 0.0;  // d|Phi|/dq
};

std::complex<double> soliton_amplitude(const DarkSolitonParams& p, double x);
DensityDerivative soliton_density_dq(const DarkSolitonParams& p, double x);

double quintic_density(const QuinticSolitonParams& p, double x);
DensityDerivative quintic_density_dq(const QuinticSolitonParams& p, double x);

double vortex_density(const VortexParams& p, double x, double y);
DensityDerivative vortex_density_dq(const VortexParams& p, double x, double y);

double trapped_soliton_density(const TrappedSolitonParams& p, double x);
DensityDerivative trapped_soliton_density_dq(const TrappedSolitonParams& p, double x);

// Generic access. For the vortex, y is the transverse coordinate; the other
// profiles ignore it.
DensityDerivative density_dq(const OrderParameter& profile, double x, double y = 0.0);
double position(const OrderParameter& profile);
OrderParameter with_position(OrderParameter profile, double q);
bool is_planar(const OrderParameter& profile);
std::string profile_name(const OrderParameter& profile);
void validate(const OrderParameter& profile);

void to_json(nlohmann::json& j, const DarkSolitonParams& p);
void to_json(nlohmann::json& j, const QuinticSolitonParams& p);
void to_json(nlohmann::json& j, const VortexParams& p);
void to_json(nlohmann::json& j, const TrappedSolitonParams& p);
nlohmann::json profile_json(const OrderParameter& profile);

}  // namespace qimage
