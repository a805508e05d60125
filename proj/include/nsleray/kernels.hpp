#pragma once

#include "nsleray/field.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>

namespace nsleray {

using Point = Eigen::Vector3d;
/// Derivative counts per axis; order = sum.
using MultiIndex = std::array<int, kDim>;

/// Newtonian kernel K(x) = -1 / (4 pi |x|) and its derivatives up to order 2.
/// Order 1: x_i / (4 pi |x|^3). Order 2: (|x|^2 delta_ij - 3 x_i x_j) / (4 pi |x|^5).
double poisson_kernel(const Point& x, const MultiIndex& alpha = {0, 0, 0});

enum class CutoffStyle {
  /// 1 on |y| <= eps, exp(-1 / (2 eps^2 - |y|^2)) on eps < |y| < sqrt(2) eps.
  /// Jumps at |y| = eps.
  paper_annulus,
  /// C-infinity partition of unity, 1 on |y| <= eps, 0 on |y| >= 2 eps.
  smooth_bump,
  /// Indicator of |y| <= eps.
  sharp,
};

struct CutoffSpec {
  double epsilon;
  CutoffStyle style = CutoffStyle::smooth_bump;

  double support_radius() const;
  /// Default epsilon = box_length / 16, raised to 4 spacings on coarse grids.
  static CutoffSpec for_grid(const Grid& grid, CutoffStyle style = CutoffStyle::smooth_bump) {
    return {std::max(grid.length() / 16.0, 4.0 * grid.spacing()), style};
  }
};

double cutoff(const Point& y, const CutoffSpec& spec);

/// Samples of phi * K_{,axis} (near, L1) and (1 - phi) * K_{,axis} (far, L2)
/// at wrapped displacements of the sampling grid. The origin cell is zero in
/// both parts.
struct KernelSplit {
  int axis;
  CutoffSpec cutoff;
  ScalarField near;
  ScalarField far;
  /// Unnormalized spectrum of near + far, for repeated convolutions.
  Spectrum spectrum;
};

/// The grid is the sampling grid; pass grid.padded(p) to sample for padded
/// convolutions. Requires epsilon >= 4 * spacing and epsilon < length / 4.
KernelSplit build_kernel_split(const Grid& grid, int axis, const CutoffSpec& spec);
std::array<KernelSplit, kDim> build_kernel_splits(const Grid& grid, const CutoffSpec& spec);

/// C * dt^{-(3 + order)/2} * exp(-lambda |x|^2 / (4 dt)).
struct GaussianMajorant {
  double C = 1.0;
  double lambda = 1.0;
  int order = 0;
  /// Local singularity exponent in (0.5, 1).
  double mu = 0.75;
};

double gaussian_bound(double dt, const Point& x, const GaussianMajorant& m);

/// |gaussian_bound(dt, ., m)|_{L1(R^3)} = C (4 pi / lambda)^{3/2} dt^{-order/2}.
double gaussian_l1(double dt, const GaussianMajorant& m);

/// Integral over dt in (0, horizon] of gaussian_l1; finite for order <= 1.
double gaussian_time_integrated_l1(const GaussianMajorant& m, double horizon = 1.0);

}  // namespace nsleray
