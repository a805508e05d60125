#include "nsleray/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace nsleray {

double poisson_kernel(const Point& x, const MultiIndex& alpha) {
  const double r = x.norm();
  if (r == 0.0) throw std::domain_error("poisson_kernel: evaluation at the origin");
  for (int a : alpha)
    if (a < 0) throw std::invalid_argument("poisson_kernel: negative multi-index");
  const int order = alpha[0] + alpha[1] + alpha[2];
  const double c = 1.0 / (4.0 * kPi);
  if (order == 0) return -c / r;
  if (order == 1) {
    const int i = alpha[0] ? 0 : alpha[1] ? 1 : 2;
    return c * x[i] / (r * r * r);
  }
  if (order == 2) {
    int i = -1, j = -1;
    for (int a = 0; a < kDim; ++a)
      for (int k = 0; k < alpha[static_cast<std::size_t>(a)]; ++k) (i < 0 ? i : j) = a;
    const double r5 = std::pow(r, 5);
    if (i == j) return c * (r * r - 3.0 * x[i] * x[i]) / r5;
    return -3.0 * c * x[i] * x[j] / r5;
  }
  throw std::invalid_argument("poisson_kernel: order > 2 not supported");
}

double CutoffSpec::support_radius() const {
  switch (style) {
    case CutoffStyle::paper_annulus:
      return std::sqrt(2.0) * epsilon;
    case CutoffStyle::smooth_bump:
      return 2.0 * epsilon;
    case CutoffStyle::sharp:
      return epsilon;
  }
  return epsilon;
}

namespace {

double bump_tail(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double cutoff(const Point& y, const CutoffSpec& spec) {
  const double r = y.norm();
  const double eps = spec.epsilon;
  if (r <= eps) return 1.0;
  switch (spec.style) {
    case CutoffStyle::paper_annulus: {
      const double gap = 2.0 * eps * eps - r * r;
      return gap > 0.0 ? std::exp(-1.0 / gap) : 0.0;
    }
    case CutoffStyle::smooth_bump: {
      const double t = (r - eps) / eps;
      if (t >= 1.0) return 0.0;
      const double a = bump_tail(1.0 - t);
      return a / (a + bump_tail(t));
    }
    case CutoffStyle::sharp:
      return 0.0;
  }
  return 0.0;
}

KernelSplit build_kernel_split(const Grid& grid, int axis, const CutoffSpec& spec) {
  if (axis < 0 || axis >= kDim) throw std::out_of_range("build_kernel_split: axis out of range");
  if (spec.epsilon < 4.0 * grid.spacing())
    throw std::invalid_argument("build_kernel_split: cutoff radius under-resolved (< 4 spacings)");
  if (spec.epsilon >= grid.length() / 4.0)
    throw std::invalid_argument("build_kernel_split: cutoff radius must be < box_length / 4");

  KernelSplit split{axis, spec, ScalarField(grid), ScalarField(grid), Spectrum()};
  MultiIndex alpha{0, 0, 0};
  alpha[static_cast<std::size_t>(axis)] = 1;
  const int n = grid.points();
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        if (ix == 0 && iy == 0 && iz == 0) continue;
        const Point y(grid.displacement(ix), grid.displacement(iy), grid.displacement(iz));
        const double k = poisson_kernel(y, alpha);
        const double phi = cutoff(y, spec);
        split.near(ix, iy, iz) = phi * k;
        split.far(ix, iy, iz) = (1.0 - phi) * k;
      }
  split.spectrum = forward(split.near + split.far);
  return split;
}

std::array<KernelSplit, kDim> build_kernel_splits(const Grid& grid, const CutoffSpec& spec) {
  return {build_kernel_split(grid, 0, spec), build_kernel_split(grid, 1, spec),
          build_kernel_split(grid, 2, spec)};
}

double gaussian_bound(double dt, const Point& x, const GaussianMajorant& m) {
  if (!(dt > 0.0)) throw std::domain_error("gaussian_bound: dt must be positive");
  return m.C * std::pow(dt, -(kDim + m.order) / 2.0) *
         std::exp(-m.lambda * x.squaredNorm() / (4.0 * dt));
}

double gaussian_l1(double dt, const GaussianMajorant& m) {
  if (!(dt > 0.0)) throw std::domain_error("gaussian_l1: dt must be positive");
  return m.C * std::pow(4.0 * kPi / m.lambda, 1.5) * std::pow(dt, -m.order / 2.0);
}

double gaussian_time_integrated_l1(const GaussianMajorant& m, double horizon) {
  if (m.order > 1) throw std::invalid_argument("time integral diverges for order > 1");
  const double base = m.C * std::pow(4.0 * kPi / m.lambda, 1.5);
  return m.order == 0 ? base * horizon : base * 2.0 * std::sqrt(horizon);
}

}  // namespace nsleray
