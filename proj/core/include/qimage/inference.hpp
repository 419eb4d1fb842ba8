#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "qimage/fisher_report.hpp"
#include "qimage/imagestats.hpp"
#include "qimage/pixel_grid.hpp"
#include "qimage/profiles.hpp"

namespace qimage {

struct GainFunction {
  PixelGrid grid{1.0, 2};
  Eigen::VectorXd values;       // normalized to max |g| = 1
  double scale = 1.0;           // raw solution = scale * values
  double ridge = 0.0;           // regularization used, 0 if none
  std::string normalization = "max-abs";

  static GainFunction normalized(const PixelGrid& grid, const Eigen::VectorXd& raw);
  Eigen::VectorXd raw() const { return scale * values; }
};

using StatsFamily = std::function<ImageStatistics(double q)>;

struct GaussianFisherOptions {
  double fd_step = 1e-3;
  bool check_step_halving = true;
  double max_condition = 1e12;
};

// Central-difference derivative of the mean pixel counts.
Eigen::VectorXd mean_derivative(const StatsFamily& family, double q, double fd_step = 1e-3);

FisherReport gaussian_fisher(const StatsFamily& family, double q,
                             const GaussianFisherOptions& options = {});

// Per-pixel ratio of the integrated q-derivative of the density to the
// integrated density (saturates the pixel Poisson bound).
GainFunction optimal_gain_meanfield(const OrderParameter& profile, const PixelGrid& grid);

// Solves P g = d rho / dq.
GainFunction almost_optimal_gain(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq);

struct NoiseSplit {
  double total = 0.0;
  double meanfield = 0.0;
  double phonon = 0.0;
  double goldstone = 0.0;
};

struct SnrResult {
  double slope = 0.0;        // dS/dq = dx g . d rho / dq
  double noise = 0.0;        // Delta S^2 = dx^2 g^T P g
  double information = 0.0;  // slope^2 / noise (0 when the noise vanishes)
  NoiseSplit split;
};

SnrResult snr_and_split(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq,
                        const Eigen::VectorXd& gain);
SnrResult snr_and_split(const ImageStatistics& stats, const Eigen::VectorXd& drho_dq,
                        const GainFunction& gain);

void to_json(nlohmann::json& j, const NoiseSplit& s);
void to_json(nlohmann::json& j, const SnrResult& s);
void to_json(nlohmann::json& j, const GainFunction& g);

}  // namespace qimage
