#pragma once

#include "nsleray/field.hpp"

#include <utility>

namespace nsleray {

/// Exact viscous Burgers solution for gradient data u(0) = grad phi0:
/// theta = heat flow of exp(-phi0 / (2 nu)), u = -2 nu grad log theta.
/// Throws NumericalError if theta is not strictly positive.
VectorField cole_hopf(const ScalarField& phi0, double nu, double t);

/// a (cos x + sin y cos z), the standard gradient datum.
ScalarField cole_hopf_potential(const Grid& grid, double amplitude);

struct BeltramiAmplitudes {
  double A = 1.0;
  double B = 1.0;
  double C = 1.0;
};

/// ABC flow e^{-nu t} (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)
/// with pressure -|v|^2 / 2. Periodic on boxes of side 2 pi.
std::pair<VectorField, ScalarField> beltrami(const Grid& grid, double t, double nu,
                                             const BeltramiAmplitudes& amps = {});

/// Pseudo-spectral Navier-Stokes integrator: classical RK4 with an integrating
/// factor for viscosity, spectral Leray projector, 2/3 dealiasing of the
/// advective term. dt is shortened so that it divides t_final.
VectorField reference_projection_solver(const VectorField& v0, double nu, double t_final,
                                        double dt);

/// Literal periodic sum (f * g)(x) = sum_y f(x - y) g(y) spacing^3; N <= 16.
ScalarField direct_convolution(const ScalarField& f, const ScalarField& g);

}  // namespace nsleray
