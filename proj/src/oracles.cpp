#include "nsleray/oracles.hpp"

#include "nsleray/errors.hpp"
#include "nsleray/parabolic.hpp"

#include <array>
#include <cmath>

namespace nsleray {

VectorField cole_hopf(const ScalarField& phi0, double nu, double t) {
  if (t < 0.0) throw std::invalid_argument("cole_hopf: negative time");
  if (!(nu > 0.0)) throw std::invalid_argument("cole_hopf: nu must be positive");
  const Grid& g = phi0.grid();
  const ScalarField theta0(g, (-phi0.values() / (2.0 * nu)).exp());
  const ScalarField theta = propagate_heat(theta0, t, nu);
  if (!(theta.values().minCoeff() > 0.0) || !theta.all_finite())
    throw NumericalError("cole_hopf: heat solution is not positive");
  VectorField u = gradient(theta);
  for (int i = 0; i < kDim; ++i) u[i].values() *= -2.0 * nu / theta.values();
  return u;
}

ScalarField cole_hopf_potential(const Grid& grid, double amplitude) {
  return ScalarField::sample(grid, [amplitude](double x, double y, double z) {
    return amplitude * (std::cos(x) + std::sin(y) * std::cos(z));
  });
}

std::pair<VectorField, ScalarField> beltrami(const Grid& grid, double t, double nu,
                                             const BeltramiAmplitudes& a) {
  const double d = std::exp(-nu * t);
  VectorField v(
      ScalarField::sample(grid, [&](double, double y, double z) {
        return d * (a.A * std::sin(z) + a.C * std::cos(y));
      }),
      ScalarField::sample(grid, [&](double x, double, double z) {
        return d * (a.B * std::sin(x) + a.A * std::cos(z));
      }),
      ScalarField::sample(grid, [&](double x, double y, double) {
        return d * (a.C * std::sin(y) + a.B * std::cos(x));
      }));
  ScalarField p(grid, -0.5 * (v[0].values().square() + v[1].values().square() +
                              v[2].values().square()));
  return {std::move(v), std::move(p)};
}

namespace {

using SpectralVector = std::array<Spectrum, kDim>;

// Time derivative of the projected, dealiased advective term -(u . grad) u.
class ProjectedAdvection {
 public:
  explicit ProjectedAdvection(const Grid& g) : g_(g) {}

  SpectralVector operator()(const SpectralVector& uh) const {
    VectorField u(g_);
    for (int i = 0; i < kDim; ++i) u[i] = inverse(uh[static_cast<std::size_t>(i)], g_);
    SpectralVector nh;
    for (int i = 0; i < kDim; ++i) {
      const VectorField du = gradient(uh[static_cast<std::size_t>(i)], g_);
      Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(u[0].values().size());
      for (int j = 0; j < kDim; ++j) acc -= u[j].values() * du[j].values();
      nh[static_cast<std::size_t>(i)] = forward(ScalarField(g_, std::move(acc)));
    }
    const int n = g_.points();
    const double kcut = (n / 3) * (2.0 * kPi / g_.length());
    for_each_mode(g_, [&](const Mode& m) {
      const auto idx = static_cast<Eigen::Index>(m.index);
      if (std::abs(m.k[0]) > kcut || std::abs(m.k[1]) > kcut || std::abs(m.k[2]) > kcut) {
        for (auto& c : nh) c[idx] = 0.0;
        return;
      }
      const double k2 = m.k2();
      if (k2 == 0.0) return;
      std::complex<double> kn = 0.0;
      for (int j = 0; j < kDim; ++j) kn += m.k[static_cast<std::size_t>(j)] * nh[static_cast<std::size_t>(j)][idx];
      for (int j = 0; j < kDim; ++j)
        nh[static_cast<std::size_t>(j)][idx] -= m.k[static_cast<std::size_t>(j)] * kn / k2;
    });
    return nh;
  }

 private:
  Grid g_;
};

SpectralVector axpy(const SpectralVector& x, double a, const SpectralVector& y) {
  SpectralVector out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

SpectralVector scaled(const Eigen::ArrayXd& e, const SpectralVector& x) {
  SpectralVector out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = e * x[i];
  return out;
}

}  // namespace

VectorField reference_projection_solver(const VectorField& v0, double nu, double t_final,
                                        double dt) {
  if (!(dt > 0.0) || t_final < 0.0)
    throw std::invalid_argument("reference_projection_solver: bad time parameters");
  const Grid& g = v0.grid();
  if (divergence(v0).max_abs() > 1e-8 * (1.0 + v0.max_abs()))
    throw std::invalid_argument("reference_projection_solver: initial field is not solenoidal");
  if (v0.max_abs() == 0.0 || t_final == 0.0) return v0;

  const int steps = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-12)));
  const double tau = t_final / steps;
  if (v0.max_abs() * tau / g.spacing() > 1.0)
    throw NumericalError("reference_projection_solver: cfl");

  Eigen::ArrayXd e_half(static_cast<Eigen::Index>(g.spectral_size()));
  for_each_mode(g, [&](const Mode& m) {
    e_half[static_cast<Eigen::Index>(m.index)] = std::exp(-0.5 * nu * m.k2() * tau);
  });
  const Eigen::ArrayXd e_full = e_half.square();
  const ProjectedAdvection rate(g);

  SpectralVector uh;
  for (int i = 0; i < kDim; ++i) uh[static_cast<std::size_t>(i)] = forward(v0[i]);
  const double bound = 1e6 * (1.0 + v0.max_abs());
  for (int s = 0; s < steps; ++s) {
    const SpectralVector k1 = rate(uh);
    const SpectralVector k2 = rate(scaled(e_half, axpy(uh, 0.5 * tau, k1)));
    const SpectralVector k3 = rate(axpy(scaled(e_half, uh), 0.5 * tau, k2));
    const SpectralVector k4 = rate(axpy(scaled(e_full, uh), tau, scaled(e_half, k3)));
    for (std::size_t i = 0; i < uh.size(); ++i)
      uh[i] = e_full * uh[i] +
              (tau / 6.0) * (e_full * k1[i] + 2.0 * e_half * (k2[i] + k3[i]) + k4[i]);
    if (!uh[0].allFinite() || !uh[1].allFinite() || !uh[2].allFinite())
      throw NumericalError("reference_projection_solver: non-finite state");
    const double peak = std::max({uh[0].abs().maxCoeff(), uh[1].abs().maxCoeff(),
                                  uh[2].abs().maxCoeff()}) /
                        static_cast<double>(g.size());
    if (peak > bound) throw NumericalError("reference_projection_solver: blow-up");
  }
  VectorField out(g);
  for (int i = 0; i < kDim; ++i) out[i] = inverse(uh[static_cast<std::size_t>(i)], g);
  return out;
}

ScalarField direct_convolution(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid());
  const Grid& grid = f.grid();
  const int n = grid.points();
  if (n > 16) throw std::invalid_argument("direct_convolution: N must be <= 16");
  const double h3 = std::pow(grid.spacing(), 3);
  ScalarField out(grid);
  for (int xz = 0; xz < n; ++xz)
    for (int xy = 0; xy < n; ++xy)
      for (int xx = 0; xx < n; ++xx) {
        double acc = 0.0;
        for (int yz = 0; yz < n; ++yz)
          for (int yy = 0; yy < n; ++yy)
            for (int yx = 0; yx < n; ++yx)
              acc += f((xx - yx + n) % n, (xy - yy + n) % n, (xz - yz + n) % n) * g(yx, yy, yz);
        out(xx, xy, xz) = acc * h3;
      }
  return out;
}

}  // namespace nsleray
