#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace nsleray {

inline constexpr int kDim = 3;
inline constexpr double kPi = 3.14159265358979323846;

/// Uniform periodic grid on the cube [0, length)^3 with n points per axis.
class Grid {
 public:
  Grid(int points_per_axis, double box_length);

  int points() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  /// Number of complex coefficients of the real-to-complex half spectrum.
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(n_) * n_ * (n_ / 2 + 1);
  }

  std::size_t index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(n_) * (static_cast<std::size_t>(iy) +
                                           static_cast<std::size_t>(n_) * iz);
  }
  double coordinate(int i) const { return i * spacing(); }
  /// Signed minimal-image index: i for i < n/2, i - n otherwise.
  int wrapped(int i) const { return i < n_ / 2 ? i : i - n_; }
  double displacement(int i) const { return wrapped(i) * spacing(); }
  double wavenumber(int i) const { return wrapped(i) * (2.0 * kPi / length_); }

  /// Grid with factor times the points and factor times the box, same spacing.
  Grid padded(int factor) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int n_;
  double length_;
};

class ScalarField {
 public:
  explicit ScalarField(const Grid& grid);
  ScalarField(const Grid& grid, Eigen::ArrayXd values);

  /// Samples fn(x, y, z) at the grid nodes.
  template <class Fn>
  static ScalarField sample(const Grid& grid, Fn&& fn) {
    ScalarField f(grid);
    const int n = grid.points();
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          f.values_[static_cast<Eigen::Index>(grid.index(ix, iy, iz))] =
              fn(grid.coordinate(ix), grid.coordinate(iy), grid.coordinate(iz));
    return f;
  }

  const Grid& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::ArrayXd& values() { return values_; }

  double operator()(int ix, int iy, int iz) const {
    return values_[static_cast<Eigen::Index>(grid_.index(ix, iy, iz))];
  }
  double& operator()(int ix, int iy, int iz) {
    return values_[static_cast<Eigen::Index>(grid_.index(ix, iy, iz))];
  }

  bool all_finite() const { return values_.isFinite().all(); }
  double max_abs() const { return values_.abs().maxCoeff(); }
  double mean() const { return values_.mean(); }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double a) {
    values_ *= a;
    return *this;
  }

 private:
  Grid grid_;
  Eigen::ArrayXd values_;
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
inline ScalarField operator*(double s, ScalarField a) { return a *= s; }
inline ScalarField operator*(ScalarField a, double s) { return a *= s; }
inline ScalarField operator-(ScalarField a) { return a *= -1.0; }

class VectorField {
 public:
  explicit VectorField(const Grid& grid);
  VectorField(ScalarField x, ScalarField y, ScalarField z);

  const Grid& grid() const { return c_[0].grid(); }
  ScalarField& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const ScalarField& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  double max_abs() const;
  bool all_finite() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);

 private:
  std::array<ScalarField, kDim> c_;
};

inline VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
inline VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
inline VectorField operator*(double s, VectorField a) { return a *= s; }

void require_same_grid(const Grid& a, const Grid& b);

// ---------------------------------------------------------------------------
// Spectral access. Half spectrum layout: index ix + (n/2+1) * (iy + n * iz),
// ix in [0, n/2]. Forward transform is unnormalized.

using Spectrum = Eigen::ArrayXcd;

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s, const Grid& grid);

/// One retained Fourier mode of the half spectrum.
struct Mode {
  std::size_t index;
  std::array<double, kDim> k;
  std::array<bool, kDim> nyquist;
  /// Multiplicity in Parseval sums (2 for modes whose conjugate is implicit).
  double weight;
  double k2() const { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }
};

template <class Fn>
void for_each_mode(const Grid& grid, Fn&& fn) {
  const int n = grid.points();
  const int nh = n / 2 + 1;
  const double dk = 2.0 * kPi / grid.length();
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < nh; ++ix, ++idx) {
        Mode m;
        m.index = idx;
        m.k = {ix * dk, grid.wrapped(iy) * dk, grid.wrapped(iz) * dk};
        m.nyquist = {ix == n / 2, iy == n / 2, iz == n / 2};
        m.weight = (ix == 0 || ix == n / 2) ? 1.0 : 2.0;
        fn(m);
      }
}

/// Applies the Fourier multiplier symbol(mode) -> complex to f.
template <class Symbol>
ScalarField apply_symbol(const ScalarField& f, Symbol&& symbol) {
  Spectrum s = forward(f);
  for_each_mode(f.grid(), [&](const Mode& m) {
    s[static_cast<Eigen::Index>(m.index)] *= symbol(m);
  });
  return inverse(s, f.grid());
}

// ---------------------------------------------------------------------------
// Derivatives. Odd derivative factors vanish on the Nyquist plane.

ScalarField derivative(const ScalarField& f, int axis);
ScalarField derivative(const ScalarField& f, int axis_a, int axis_b);
VectorField gradient(const ScalarField& f);
/// Gradient from an already transformed field.
VectorField gradient(const Spectrum& s, const Grid& grid);
ScalarField laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);

/// d[j][k] = dv_j / dx_k.
using Jacobian = std::array<std::array<ScalarField, kDim>, kDim>;
Jacobian jacobian(const VectorField& v);

/// (b . grad) f, pointwise product of spectral derivatives.
ScalarField advect(const VectorField& b, const ScalarField& f);

// ---------------------------------------------------------------------------
// Norms.

struct NormSpec {
  enum class Kind { L1, L2, Linf, Hs, H2inf };
  Kind kind;
  int s = 0;

  static NormSpec l1() { return {Kind::L1, 0}; }
  static NormSpec l2() { return {Kind::L2, 0}; }
  static NormSpec linf() { return {Kind::Linf, 0}; }
  static NormSpec hs(int s) { return {Kind::Hs, s}; }
  static NormSpec h2inf() { return {Kind::H2inf, 0}; }
};

/// L^p by the midpoint sum (p = 1, 2), max for L^inf, H^s via the multiplier
/// (1 + |k|^2)^s for integer 0 <= s <= 4, H^{2,inf} as the largest sup-norm
/// over all derivatives of order <= 2.
double norm(const ScalarField& f, NormSpec space);

/// General L^p quadrature norm, p >= 1 (p = inf allowed).
double lp_norm(const ScalarField& f, double p);

/// sqrt(sum_{|alpha| <= 2} |d^alpha f|_{L2}^2), mixed partials counted once.
double h2_classical(const ScalarField& f);

/// Largest component norm.
double max_norm(const VectorField& v, NormSpec space);

/// sqrt(sum_i |v_i|_{L2}^2).
double l2_norm(const VectorField& v);

// ---------------------------------------------------------------------------
// Convolution approximating the integral of f(x - y) g(y) dy.
//
// Unpadded: periodic discrete convolution times spacing^3.
// Padded: f is data indexed by position, g a kernel indexed by wrapped
// displacement; both are embedded in a grid of twice the size, convolved
// periodically there, and the result is cropped back to f's grid.
ScalarField convolve(const ScalarField& f, const ScalarField& g, bool padded = false);

/// Embeds data (position convention) into the top-left corner of a larger grid.
ScalarField embed(const ScalarField& f, const Grid& larger);
/// Inverse of embed.
ScalarField crop(const ScalarField& f, const Grid& smaller);

}  // namespace nsleray
