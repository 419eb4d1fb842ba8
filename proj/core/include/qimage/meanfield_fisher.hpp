#pragma once

#include <Eigen/Core>

#include "qimage/fisher_report.hpp"
#include "qimage/pixel_grid.hpp"
#include "qimage/profiles.hpp"

namespace qimage {

inline constexpr double kDefaultQuadTol = 1e-8;

// 4 * integral of (d|Phi|/dq)^2 over a default window that resolves the
// profile tails (planar profiles integrate over the plane in polar
// coordinates).
FisherReport fisher_poisson_continuum(const OrderParameter& profile,
                                      double quad_tol = kDefaultQuadTol);
// Same over the detection window of `window`; flags windows reaching less
// than 10 healing lengths beyond q on either side.
FisherReport fisher_poisson_continuum(const OrderParameter& profile, const PixelGrid& window,
                                      double quad_tol = kDefaultQuadTol);

FisherReport fisher_dark_soliton_closed(const DarkSolitonParams& params);

// Mean pixel counts and their q-derivatives for a dark soliton at q.
struct PixelMeans {
  Eigen::VectorXd rho_bar;
  Eigen::VectorXd drho_dq;
};
PixelMeans dark_soliton_pixel_means(const DarkSolitonParams& params, const PixelGrid& grid,
                                    double q);

// Gaussian pixel Fisher information of the diagonal (Poisson-variance)
// model at position q (params.q is ignored). F holds the full value;
// components "poisson_sum" and "gaussian_correction" hold the two sums.
FisherReport fisher_pixelized_poisson(const DarkSolitonParams& params, const PixelGrid& grid,
                                      double q);
// Report built from the pure Poisson sum of a pixelized report.
FisherReport poisson_part(const FisherReport& pixelized);

// Poisson pixel sum for a soliton in a box of half-length ell holding the
// same number of atoms as the homogeneous gas of density params.n. Only
// pixels lying entirely inside the box contribute.
FisherReport fisher_box(const DarkSolitonParams& params, const PixelGrid& grid, double box_half_length);

// Background density ratio n_b / n and kappa_b for the atom-conserving box.
struct BoxBackground {
  double density_ratio = 1.0;
  double kappa = 0.0;
};
BoxBackground box_background(const DarkSolitonParams& params, double box_half_length);

// Local-density closed form; F_scaled is in units of xi0.
FisherReport fisher_trapped(const TrappedSolitonParams& params);
// Quadrature over the trapped profile, for cross-checking.
FisherReport fisher_trapped_quadrature(const TrappedSolitonParams& params,
                                       double quad_tol = kDefaultQuadTol);

}  // namespace qimage
