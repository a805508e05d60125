#include "nsleray/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace nsleray {

namespace {


// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  std::pair<fftw_plan, fftw_plan> plans(int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const std::size_t real = static_cast<std::size_t>(n) * n * n;
    const std::size_t cplx = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    double* in = fftw_alloc_real(real);
    fftw_complex* out = fftw_alloc_complex(cplx);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan fwd = fftw_plan_dft_r2c_3d(n, n, n, in, out, flags);
    fftw_plan bwd = fftw_plan_dft_c2r_3d(n, n, n, out, in, flags);
    fftw_free(in);
    fftw_free(out);
    return plans_[n] = {fwd, bwd};
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.first);
      fftw_destroy_plan(p.second);
    }
  }

 private:
  std::mutex mutex_;
  std::map<int, std::pair<fftw_plan, fftw_plan>> plans_;
};

}  // namespace

Grid::Grid(int points_per_axis, double box_length)
    : n_(points_per_axis), length_(box_length) {
  if (n_ < 8 || n_ % 2 != 0)
    throw std::invalid_argument("grid: points_per_axis must be even and >= 8");
  if (!(length_ > 0.0) || !std::isfinite(length_))
    throw std::invalid_argument("grid: box_length must be positive");
}

Grid Grid::padded(int factor) const {
  if (factor < 1) throw std::invalid_argument("grid: padding factor must be >= 1");
  return Grid(n_ * factor, length_ * factor);
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

ScalarField::ScalarField(const Grid& grid)
    : grid_(grid), values_(Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(grid.size()))) {}

ScalarField::ScalarField(const Grid& grid, Eigen::ArrayXd values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size())
    throw std::invalid_argument("field: value count does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  values_ += o.values_;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  values_ -= o.values_;
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  values_ *= o.values_;
  return *this;
}

VectorField::VectorField(const Grid& grid)
    : c_{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z)
    : c_{std::move(x), std::move(y), std::move(z)} {
  require_same_grid(c_[0].grid(), c_[1].grid());
  require_same_grid(c_[0].grid(), c_[2].grid());
}

double VectorField::max_abs() const {
  return std::max({c_[0].max_abs(), c_[1].max_abs(), c_[2].max_abs()});
}

bool VectorField::all_finite() const {
  return c_[0].all_finite() && c_[1].all_finite() && c_[2].all_finite();
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < kDim; ++i) (*this)[i] += o[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < kDim; ++i) (*this)[i] -= o[i];
  return *this;
}

VectorField& VectorField::operator*=(double a) {
  for (auto& c : c_) c *= a;
  return *this;
}

Spectrum forward(const ScalarField& f) {
  const Grid& g = f.grid();
  auto [fwd, bwd] = PlanCache::instance().plans(g.points());
  Spectrum s(static_cast<Eigen::Index>(g.spectral_size()));
  // r2c does not modify its input.
  fftw_execute_dft_r2c(fwd, const_cast<double*>(f.values().data()),
                       reinterpret_cast<fftw_complex*>(s.data()));
  return s;
}

ScalarField inverse(const Spectrum& s, const Grid& grid) {
  if (static_cast<std::size_t>(s.size()) != grid.spectral_size())
    throw std::invalid_argument("spectrum size does not match grid");
  auto [fwd, bwd] = PlanCache::instance().plans(grid.points());
  Spectrum work = s;  // c2r destroys its input
  Eigen::ArrayXd out(static_cast<Eigen::Index>(grid.size()));
  fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(work.data()), out.data());
  out /= static_cast<double>(grid.size());
  return ScalarField(grid, std::move(out));
}

namespace {

std::complex<double> ik(const Mode& m, int axis) {
  if (m.nyquist[static_cast<std::size_t>(axis)]) return 0.0;
  return {0.0, m.k[static_cast<std::size_t>(axis)]};
}

void check_axis(int axis) {
  if (axis < 0 || axis >= kDim) throw std::out_of_range("axis out of range");
}

ScalarField derivative_from(const Spectrum& s, const Grid& g, int a) {
  Spectrum d = s;
  for_each_mode(g, [&](const Mode& m) { d[static_cast<Eigen::Index>(m.index)] *= ik(m, a); });
  return inverse(d, g);
}

ScalarField second_derivative_from(const Spectrum& s, const Grid& g, int a, int b) {
  Spectrum d = s;
  for_each_mode(g, [&](const Mode& m) {
    const std::complex<double> sym =
        a == b ? std::complex<double>(-m.k[static_cast<std::size_t>(a)] *
                                      m.k[static_cast<std::size_t>(a)])
               : ik(m, a) * ik(m, b);
    d[static_cast<Eigen::Index>(m.index)] *= sym;
  });
  return inverse(d, g);
}

}  // namespace

ScalarField derivative(const ScalarField& f, int axis) {
  check_axis(axis);
  return derivative_from(forward(f), f.grid(), axis);
}

ScalarField derivative(const ScalarField& f, int axis_a, int axis_b) {
  check_axis(axis_a);
  check_axis(axis_b);
  return second_derivative_from(forward(f), f.grid(), axis_a, axis_b);
}

VectorField gradient(const Spectrum& s, const Grid& grid) {
  return VectorField(derivative_from(s, grid, 0), derivative_from(s, grid, 1),
                     derivative_from(s, grid, 2));
}

VectorField gradient(const ScalarField& f) { return gradient(forward(f), f.grid()); }

ScalarField laplacian(const ScalarField& f) {
  return apply_symbol(f, [](const Mode& m) { return std::complex<double>(-m.k2()); });
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  Spectrum acc = Spectrum::Zero(static_cast<Eigen::Index>(g.spectral_size()));
  for (int j = 0; j < kDim; ++j) {
    const Spectrum s = forward(v[j]);
    for_each_mode(g, [&](const Mode& m) {
      acc[static_cast<Eigen::Index>(m.index)] += ik(m, j) * s[static_cast<Eigen::Index>(m.index)];
    });
  }
  return inverse(acc, g);
}

VectorField curl(const VectorField& v) {
  const Jacobian d = jacobian(v);
  return VectorField(d[2][1] - d[1][2], d[0][2] - d[2][0], d[1][0] - d[0][1]);
}

Jacobian jacobian(const VectorField& v) {
  const Grid& g = v.grid();
  auto row = [&](int j) {
    const Spectrum s = forward(v[j]);
    return std::array<ScalarField, kDim>{derivative_from(s, g, 0), derivative_from(s, g, 1),
                                         derivative_from(s, g, 2)};
  };
  return Jacobian{row(0), row(1), row(2)};
}

ScalarField advect(const VectorField& b, const ScalarField& f) {
  require_same_grid(b.grid(), f.grid());
  const VectorField grad = gradient(f);
  ScalarField out(f.grid());
  for (int j = 0; j < kDim; ++j) out.values() += b[j].values() * grad[j].values();
  return out;
}

double norm(const ScalarField& f, NormSpec space) {
  const double h3 = std::pow(f.grid().spacing(), 3);
  switch (space.kind) {
    case NormSpec::Kind::L1:
      return f.values().abs().sum() * h3;
    case NormSpec::Kind::L2:
      return std::sqrt(f.values().square().sum() * h3);
    case NormSpec::Kind::Linf:
      return f.max_abs();
    case NormSpec::Kind::Hs: {
      if (space.s < 0 || space.s > 4)
        throw std::invalid_argument("norm: unsupported Sobolev index " + std::to_string(space.s));
      const Spectrum s = forward(f);
      double acc = 0.0;
      for_each_mode(f.grid(), [&](const Mode& m) {
        acc += m.weight * std::pow(1.0 + m.k2(), space.s) *
               std::norm(s[static_cast<Eigen::Index>(m.index)]);
      });
      return std::sqrt(acc * h3 / static_cast<double>(f.grid().size()));
    }
    case NormSpec::Kind::H2inf: {
      const Spectrum s = forward(f);
      const Grid& g = f.grid();
      double m = f.max_abs();
      for (int a = 0; a < kDim; ++a) {
        m = std::max(m, derivative_from(s, g, a).max_abs());
        for (int b = a; b < kDim; ++b) m = std::max(m, second_derivative_from(s, g, a, b).max_abs());
      }
      return m;
    }
  }
  throw std::invalid_argument("norm: unknown space");
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p)) return f.max_abs();
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double h3 = std::pow(f.grid().spacing(), 3);
  return std::pow(f.values().abs().pow(p).sum() * h3, 1.0 / p);
}

double h2_classical(const ScalarField& f) {
  const Spectrum s = forward(f);
  const Grid& g = f.grid();
  auto sq = [](const ScalarField& x) { return norm(x, NormSpec::l2()) * norm(x, NormSpec::l2()); };
  double acc = sq(f);
  for (int a = 0; a < kDim; ++a) {
    acc += sq(derivative_from(s, g, a));
    for (int b = a; b < kDim; ++b) acc += sq(second_derivative_from(s, g, a, b));
  }
  return std::sqrt(acc);
}

double max_norm(const VectorField& v, NormSpec space) {
  return std::max({norm(v[0], space), norm(v[1], space), norm(v[2], space)});
}

double l2_norm(const VectorField& v) {
  double acc = 0.0;
  for (int i = 0; i < kDim; ++i) acc += std::pow(norm(v[i], NormSpec::l2()), 2);
  return std::sqrt(acc);
}

ScalarField embed(const ScalarField& f, const Grid& larger) {
  const Grid& g = f.grid();
  if (larger.spacing() != g.spacing() || larger.points() < g.points())
    throw std::invalid_argument("embed: incompatible grids");
  ScalarField out(larger);
  const int n = g.points();
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) out(ix, iy, iz) = f(ix, iy, iz);
  return out;
}

ScalarField crop(const ScalarField& f, const Grid& smaller) {
  if (smaller.spacing() != f.grid().spacing() || smaller.points() > f.grid().points())
    throw std::invalid_argument("crop: incompatible grids");
  ScalarField out(smaller);
  const int n = smaller.points();
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) out(ix, iy, iz) = f(ix, iy, iz);
  return out;
}

namespace {

ScalarField embed_wrapped(const ScalarField& g, const Grid& larger) {
  const Grid& src = g.grid();
  const int n = src.points();
  const int m = larger.points();
  auto map = [&](int i) { return i < n / 2 ? i : i - n + m; };
  ScalarField out(larger);
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) out(map(ix), map(iy), map(iz)) = g(ix, iy, iz);
  return out;
}

ScalarField periodic_convolution(const ScalarField& f, const ScalarField& g) {
  const Spectrum a = forward(f);
  const Spectrum b = forward(g);
  const double h3 = std::pow(f.grid().spacing(), 3);
  return inverse(a * b * h3, f.grid());
}

}  // namespace

ScalarField convolve(const ScalarField& f, const ScalarField& g, bool padded) {
  require_same_grid(f.grid(), g.grid());
  if (!padded) return periodic_convolution(f, g);
  const Grid big = f.grid().padded(2);
  return crop(periodic_convolution(embed(f, big), embed_wrapped(g, big)), f.grid());
}

}  // namespace nsleray
