#pragma once

#include "nsleray/field.hpp"
#include "nsleray/kernels.hpp"

#include <span>
#include <vector>

namespace nsleray {

/// Samples at tau_m = (l - 1) + m / M, m = 0..M.
using Trajectory = std::vector<ScalarField>;
using VectorTrajectory = std::vector<VectorField>;

inline constexpr int kDefaultSubsteps = 32;

/// dw/dtau = rho nu Laplace w - rho (b . grad) w + f on one unit of tau.
///
/// coeff and source are sampled per substep and used at the left endpoint
/// (explicit): a span of size 1 is held constant, otherwise it needs at least
/// `substeps` entries. An empty source means f = 0. The spans are views; the
/// caller keeps the data alive for the duration of solve().
struct AdvectionDiffusionProblem {
  double rho = 1.0;
  double nu = 1.0;
  std::span<const VectorField> coeff;
  std::span<const ScalarField> source;
  ScalarField initial;
  int substeps = kDefaultSubsteps;
};

/// Componentwise version sharing one coefficient field.
struct VectorAdvectionDiffusionProblem {
  double rho = 1.0;
  double nu = 1.0;
  std::span<const VectorField> coeff;
  std::span<const VectorField> source;
  VectorField initial;
  int substeps = kDefaultSubsteps;
};

/// Fourier multiplier exp(-nu_eff |k|^2 t).
ScalarField propagate_heat(const ScalarField& f, double t, double nu_eff);
VectorField propagate_heat(const VectorField& v, double t, double nu_eff);

/// IMEX stepping: diffusion by the exact multiplier, advection and source by
/// forward Euler, first order in the substep. Throws NumericalError if
/// rho * max|b| * dtau / spacing > 0.5 or a non-finite value appears.
Trajectory solve(const AdvectionDiffusionProblem& problem);
VectorTrajectory solve(const VectorAdvectionDiffusionProblem& problem);

inline constexpr double kCflLimit = 0.5;

/// rho * max|b| * dtau / spacing over the coefficient samples.
double cfl_number(double rho, std::span<const VectorField> coeff, int substeps);

struct GaussianMajorantReport {
  GaussianMajorant fitted;
  /// Largest |column(x -> y) - column(y -> x)| over substeps for two impulses.
  double asymmetry = 0.0;
  int samples = 0;
};

/// Propagates grid impulses through solve() and fits the Gaussian majorant
/// C dt^{-(3+order)/2} exp(-lambda |x|^2 / (4 dt)) in tau units: lambda by
/// least squares on the logarithm, C as the smallest constant for which the
/// bound holds on every retained sample. problem.initial only supplies the
/// grid; problem.source is ignored.
GaussianMajorantReport check_gaussian_majorant(const AdvectionDiffusionProblem& problem,
                                               int order = 0);

}  // namespace nsleray
