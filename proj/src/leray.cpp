#include "nsleray/leray.hpp"

#include <cmath>

namespace nsleray {

ScalarField nonlinear_source(const Jacobian& df, const Jacobian& dg) {
  ScalarField out(df[0][0].grid());
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k)
      out.values() += df[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].values() *
                      dg[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].values();
  return out;
}

ScalarField nonlinear_source(const VectorField& f, const VectorField& g) {
  require_same_grid(f.grid(), g.grid());
  const Jacobian df = jacobian(f);
  if (&f == &g) return nonlinear_source(df, df);
  return nonlinear_source(df, jacobian(g));
}

double boundary_shell_fraction(const ScalarField& f) {
  const int n = f.grid().points();
  const int w = std::max(1, n / 8);
  auto in_shell = [&](int i) { return i < w || i >= n - w; };
  double shell = 0.0;
  double total = 0.0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double v2 = f(ix, iy, iz) * f(ix, iy, iz);
        total += v2;
        if (in_shell(ix) || in_shell(iy) || in_shell(iz)) shell += v2;
      }
  return total > 0.0 ? std::sqrt(shell / total) : 0.0;
}

VectorField pressure_gradient_kernel(const ScalarField& source,
                                     const std::array<KernelSplit, kDim>& splits,
                                     KernelRouteDiagnostics* diagnostics) {
  const Grid& g = source.grid();
  const Grid& big = splits[0].near.grid();
  if (big.spacing() != g.spacing() || big.points() % g.points() != 0)
    throw std::invalid_argument("pressure_gradient_kernel: kernel grid is not a padding of the source grid");
  for (int i = 0; i < kDim; ++i)
    if (splits[static_cast<std::size_t>(i)].axis != i)
      throw std::invalid_argument("pressure_gradient_kernel: splits out of axis order");

  if (diagnostics) {
    diagnostics->boundary_fraction = boundary_shell_fraction(source);
    diagnostics->decay_ok = diagnostics->boundary_fraction <= kBoundaryDecayThreshold;
  }

  const Spectrum s = forward(embed(source, big));
  const double h3 = std::pow(g.spacing(), 3);
  VectorField out(g);
  for (int i = 0; i < kDim; ++i)
    out[i] = crop(inverse(s * splits[static_cast<std::size_t>(i)].spectrum * h3, big), g);
  return out;
}

VectorField pressure_gradient_spectral(const ScalarField& source) {
  const Grid& g = source.grid();
  const Spectrum s = forward(source);
  VectorField out(g);
  for (int i = 0; i < kDim; ++i) {
    Spectrum c(s.size());
    for_each_mode(g, [&](const Mode& m) {
      const auto idx = static_cast<Eigen::Index>(m.index);
      const double k2 = m.k2();
      if (k2 == 0.0 || m.nyquist[static_cast<std::size_t>(i)]) {
        c[idx] = 0.0;
        return;
      }
      c[idx] = std::complex<double>(0.0, -m.k[static_cast<std::size_t>(i)] / k2) * s[idx];
    });
    out[i] = inverse(c, g);
  }
  return out;
}

std::pair<ScalarField, ScalarField> mixed_sources(const VectorField& v, const VectorField& r) {
  require_same_grid(v.grid(), r.grid());
  const Jacobian dv = jacobian(v);
  const Jacobian dr = jacobian(r);
  return {nonlinear_source(dv, dr), nonlinear_source(dr, dr)};
}

LerayOperator::LerayOperator(const Grid& grid, const CutoffSpec& spec, int padding_factor)
    : splits_(std::make_shared<const std::array<KernelSplit, kDim>>(
          build_kernel_splits(grid.padded(padding_factor), spec))) {}

VectorField LerayOperator::operator()(const ScalarField& source) const {
  if (splits_) return pressure_gradient_kernel(source, *splits_);
  return pressure_gradient_spectral(source);
}

}  // namespace nsleray
