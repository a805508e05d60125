#pragma once

#include "nsleray/field.hpp"
#include "nsleray/kernels.hpp"

#include <array>
#include <memory>
#include <utility>

namespace nsleray {

/// sum_{j,k} (d f_j / d x_k) (d g_k / d x_j). With f = g = v this is the
/// right side of -Laplace p = ... for incompressible flow.
ScalarField nonlinear_source(const VectorField& f, const VectorField& g);
ScalarField nonlinear_source(const Jacobian& df, const Jacobian& dg);

/// Diagnostics of a kernel-route evaluation.
struct KernelRouteDiagnostics {
  /// L2 norm of the source in the outer shell (outer eighth of each axis)
  /// relative to the total.
  double boundary_fraction = 0.0;
  bool decay_ok = true;
};

inline constexpr double kBoundaryDecayThreshold = 1e-3;

double boundary_shell_fraction(const ScalarField& f);

/// -grad p as the free-space convolution grad K * source, evaluated with the
/// split kernels sampled on a padded grid (splits[i].near.grid() must be
/// source.grid().padded(p) for some p >= 1). Insufficient decay of the source
/// near the box boundary is reported, not fatal.
VectorField pressure_gradient_kernel(const ScalarField& source,
                                     const std::array<KernelSplit, kDim>& splits,
                                     KernelRouteDiagnostics* diagnostics = nullptr);

/// -grad p for the periodic Poisson problem -Laplace p = source; the mean
/// mode of p is zero.
VectorField pressure_gradient_spectral(const ScalarField& source);

/// Cross source sum v_{k,j} r_{j,k} and pure control source sum r_{k,j} r_{j,k}.
std::pair<ScalarField, ScalarField> mixed_sources(const VectorField& v, const VectorField& r);

/// Selects how -grad p is evaluated inside the schemes.
class LerayOperator {
 public:
  /// Periodic spectral route.
  LerayOperator() = default;
  /// Free-space kernel route on a grid padded by padding_factor.
  LerayOperator(const Grid& grid, const CutoffSpec& spec, int padding_factor = 2);

  bool uses_kernel() const { return splits_ != nullptr; }
  const std::array<KernelSplit, kDim>* splits() const { return splits_.get(); }

  VectorField operator()(const ScalarField& source) const;

 private:
  std::shared_ptr<const std::array<KernelSplit, kDim>> splits_;
};

}  // namespace nsleray
