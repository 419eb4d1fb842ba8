#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qimage {

using cplx = std::complex<double>;

struct ModeValue {
  cplx u;
  cplx v;
};

// Phonon modes of a dark soliton at rest at q in a periodic box [-ell, ell].
// Modes are indexed by j = +-1 ... +-pair_count. Internally slot m holds
// j = m + 1 for m < pair_count and j = -(m - pair_count + 1) otherwise.
class PhononModeSet {
 public:
  PhononModeSet(double half_length, int pair_count, double q = 0.0);

  double half_length() const { return ell_; }
  double q() const { return q_; }
  double kappa() const { return kappa_; }
  int pair_count() const { return pairs_; }
  int mode_count() const { return 2 * pairs_; }

  int slot(int j) const;
  int index_of_slot(int m) const { return m < pairs_ ? m + 1 : -(m - pairs_ + 1); }

  double wavenumber(int j) const { return k_[slot(j)]; }
  double energy(int j) const { return E_[slot(j)]; }
  double normalization(int j) const { return M_[slot(j)]; }
  double quantization_residual(int j) const;

  const std::vector<double>& wavenumbers() const { return k_; }
  const std::vector<double>& energies() const { return E_; }

  ModeValue eval(int j, double x) const;
  // Fills u[m], v[m] for every slot m at position x.
  void eval_all(double x, std::span<cplx> u, std::span<cplx> v) const;

  // Prefix of the spectrum keeping the lowest `pair_count` pairs.
  PhononModeSet truncated(int pair_count) const;

 private:
  double ell_;
  int pairs_;
  double q_;
  double kappa_;
  std::vector<double> k_, E_, M_, beta_plus_, beta_minus_;
};

// Roots of 2 k ell + 2 atan(2 kappa / k) = 2 pi j for j = 1 ... pair_count.
PhononModeSet solve_wavenumbers(double half_length, int pair_count, double q = 0.0);
ModeValue eval_phonon(const PhononModeSet& modes, int j, double x);

// Homogeneous Bogoliubov dispersion in internal units.
double bogoliubov_energy(double k);

enum class ZeroMode { Phase, Displacement };

struct ZeroModeValues {
  cplx u, v, u_ad, v_ad;
};

// Context shared by the two Goldstone modes.
struct ZeroModeFamily {
  double n = 1.0;
  double half_length = 10.0;
  double q = 0.0;

  void validate() const;
  double kappa() const;
  double condensate_number() const;  // N0 = 2 ell n - 2 n / kappa
  double effective_mass() const;     // m_q = -4 n / kappa
  // Normalizations of the adjoint modes including the finite-box terms.
  double phase_adjoint_scale() const;
  double displacement_box_factor() const;
};

ZeroModeValues zero_modes(const ZeroModeFamily& family, ZeroMode which, double x);

struct ZeroModeState {
  enum class Kind { Squeezed, Thermal };
  Kind kind = Kind::Squeezed;
  double parameter = 1.0;  // zeta or tau
  double n = 1.0;
  double P2 = 0.0;         // <P_q^2>
  double Q2 = 0.0;         // <Q_q^2>
  double PQ = 0.0;         // <{P_q, Q_q}>
  double h_mean = 0.0;     // <h>

  std::string label() const;
};

ZeroModeState zero_mode_state(ZeroModeState::Kind kind, double parameter, double n);
ZeroModeState squeezed_state(double zeta, double n);
ZeroModeState thermal_state(double tau, double n);

// Truncated completeness sum at x != y; the exact sum is delta(x - y).
cplx completeness_residual(const PhononModeSet& modes, const ZeroModeFamily& family, double x,
                           double y, bool include_zero_modes = true);

void to_json(nlohmann::json& j, const ZeroModeState& s);
void to_json(nlohmann::json& j, const ZeroModeFamily& f);

}  // namespace qimage
