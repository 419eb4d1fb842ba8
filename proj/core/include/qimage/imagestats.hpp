#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "qimage/bdg.hpp"
#include "qimage/pixel_grid.hpp"
#include "qimage/profiles.hpp"

namespace qimage {

struct ThermalOccupation {
  double beta = std::numeric_limits<double>::infinity();  // 1 / energy

  static ThermalOccupation zero_temperature() { return {}; }
  static ThermalOccupation at_temperature(double temperature);
  bool is_zero_temperature() const { return std::isinf(beta); }
  double occupation(double energy) const;
};

// Phonons, Goldstone context and quantum state of a soliton in a box.
class BogoliubovModel {
 public:
  BogoliubovModel(double n, double half_length, int pair_count, ZeroModeState state,
                  ThermalOccupation temp = {}, double q = 0.0);
  BogoliubovModel(PhononModeSet modes, ZeroModeFamily family, ZeroModeState state,
                  ThermalOccupation temp = {});

  const PhononModeSet& modes() const { return modes_; }
  const ZeroModeFamily& family() const { return family_; }
  const ZeroModeState& state() const { return state_; }
  const ThermalOccupation& temperature() const { return temp_; }
  double n() const { return family_.n; }
  double q() const { return family_.q; }

  // Same physical model with the soliton displaced to q.
  BogoliubovModel at(double q) const;
  BogoliubovModel with_pairs(int pair_count) const;

  nlohmann::json describe() const;

 private:
  PhononModeSet modes_;
  ZeroModeFamily family_;
  ZeroModeState state_;
  ThermalOccupation temp_;
};

double mean_density_bogoliubov(const PhononModeSet& modes, const ZeroModeFamily& family,
                               const ZeroModeState& state, const ThermalOccupation& temp,
                               double x);
double mean_density_bogoliubov(const BogoliubovModel& model, double x);
// Zero-mode contribution Z(x) to the mean density.
double zero_mode_density(const BogoliubovModel& model, double x);

// Literal second-order mode sum for the density correlation.
double correlation_general(const BogoliubovModel& model, double x, double y);
// J(x, y) at zero temperature.
double correlation_J(const BogoliubovModel& model, double x, double y);
// correlation_general minus Phi(x) Phi(y) times the truncated completeness
// sum; equals Phi(x) Phi(y) J(x, y) plus the thermal phonon term.
double correlation_connected(const BogoliubovModel& model, double x, double y);

struct CovarianceParts {
  Eigen::MatrixXd meanfield;  // delta term
  Eigen::MatrixXd phonon;     // phonon part of Phi Phi J plus thermal phonons
  Eigen::MatrixXd goldstone;  // minus the zero-mode part of Phi Phi J
};

struct ImageStatistics {
  PixelGrid grid{1.0, 2};
  double q = 0.0;
  Eigen::VectorXd rho_bar;
  Eigen::MatrixXd cov;
  nlohmann::json model = nlohmann::json::object();
  std::optional<CovarianceParts> parts;
  std::vector<std::string> warnings;

  bool is_poisson() const;
};

struct StatsOptions {
  int gauss_order = 8;
  bool check_positive = true;
};

ImageStatistics build_image_statistics(const BogoliubovModel& model, const PixelGrid& grid,
                                       double q, const StatsOptions& options = {});
// Mean-field Poisson statistics of a dark soliton: cov = diag(rho_bar).
ImageStatistics build_meanfield_statistics(const DarkSolitonParams& params,
                                           const PixelGrid& grid, double q);

void to_json(nlohmann::json& j, const ImageStatistics& s);

}  // namespace qimage
