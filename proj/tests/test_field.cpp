#include "nsleray/diagnostics.hpp"
#include "nsleray/field.hpp"
#include "nsleray/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nsleray;

namespace {

const Grid kBox(32, 2.0 * kPi);

ScalarField sin_x(const Grid& g) {
  return ScalarField::sample(g, [](double x, double, double) { return std::sin(x); });
}

ScalarField gaussian(const Grid& g, double sigma) {
  const double c = g.length() / 2.0;
  const double norm3 = std::pow(2.0 * kPi * sigma * sigma, -1.5);
  return ScalarField::sample(g, [&](double x, double y, double z) {
    const double r2 = (x - c) * (x - c) + (y - c) * (y - c) + (z - c) * (z - c);
    return norm3 * std::exp(-r2 / (2.0 * sigma * sigma));
  });
}

ScalarField centered_gaussian(const Grid& g, double sigma) {
  const double norm3 = std::pow(2.0 * kPi * sigma * sigma, -1.5);
  ScalarField f(g);
  const int n = g.points();
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double dx = g.displacement(ix), dy = g.displacement(iy), dz = g.displacement(iz);
        f(ix, iy, iz) = norm3 * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * sigma * sigma));
      }
  return f;
}

}  // namespace

TEST(Grid, Invariants) {
  const Grid g(16, 3.0);
  EXPECT_DOUBLE_EQ(g.spacing() * g.points(), 3.0);
  EXPECT_EQ(g.size(), 4096u);
  EXPECT_THROW(Grid(4, 1.0), std::invalid_argument);
  EXPECT_THROW(Grid(9, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(Grid(24, 1.0));
  EXPECT_THROW(Grid(16, -1.0), std::invalid_argument);
}

TEST(Derivative, SineGivesCosine) {
  const ScalarField d = derivative(sin_x(kBox), 0);
  const ScalarField c = ScalarField::sample(kBox, [](double x, double, double) { return std::cos(x); });
  EXPECT_LE((d - c).max_abs(), 1e-12);
}

TEST(Derivative, ConstantGivesZero) {
  ScalarField f(kBox);
  f.values().setConstant(3.5);
  for (int a = 0; a < kDim; ++a) EXPECT_LE(derivative(f, a).max_abs(), 1e-12);
}

namespace {

double centered_difference_error(int n, int axis) {
  const Grid g(n, 2.0 * kPi);
  const ScalarField f = random_field(g, std::uint64_t{3}, 1);
  const ScalarField d = derivative(f, axis);
  const double h = g.spacing();
  double err = 0.0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        int p[3] = {ix, iy, iz}, m[3] = {ix, iy, iz};
        p[axis] = (p[axis] + 1) % n;
        m[axis] = (m[axis] + n - 1) % n;
        const double fd = (f(p[0], p[1], p[2]) - f(m[0], m[1], m[2])) / (2.0 * h);
        err = std::max(err, std::abs(fd - d(ix, iy, iz)));
      }
  return err / d.max_abs();
}

}  // namespace

// Unit-wavenumber band: the centered-difference truncation is (kh)^2 / 6.
TEST(Derivative, MatchesCenteredDifferences) {
  for (int axis = 0; axis < kDim; ++axis) {
    const double coarse = centered_difference_error(32, axis);
    const double fine = centered_difference_error(64, axis);
    const double kh = 2.0 * kPi / 64.0;
    EXPECT_LE(fine, 2.0 * kh * kh / 6.0) << "axis " << axis;
    EXPECT_NEAR(coarse / fine, 4.0, 0.5) << "axis " << axis;
  }
}

TEST(Derivative, AxisOutOfRange) {
  EXPECT_THROW(derivative(sin_x(kBox), 3), std::out_of_range);
  EXPECT_THROW(derivative(sin_x(kBox), -1), std::out_of_range);
}

TEST(Norm, ZeroFieldIsZeroEverywhere) {
  const ScalarField z(kBox);
  for (NormSpec s : {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), NormSpec::hs(0),
                     NormSpec::hs(2), NormSpec::hs(4), NormSpec::h2inf()})
    EXPECT_EQ(norm(z, s), 0.0);
}

TEST(Norm, SingleModeSine) {
  const ScalarField f = sin_x(kBox);
  const double l2 = std::sqrt(std::pow(2.0 * kPi, 3) / 2.0);
  EXPECT_NEAR(norm(f, NormSpec::l2()), l2, 1e-10 * l2);
  EXPECT_NEAR(l2, 11.1366, 1e-4);
  EXPECT_NEAR(norm(f, NormSpec::hs(2)), 2.0 * l2, 1e-10 * l2);
  EXPECT_NEAR(norm(f, NormSpec::h2inf()), 1.0, 1e-12);
}

TEST(Norm, ParsevalOnRandomFields) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField f = random_field(kBox, seed);
    const double l2 = norm(f, NormSpec::l2());
    EXPECT_NEAR(norm(f, NormSpec::hs(0)), l2, 1e-10 * std::max(1.0, l2));
  }
}

TEST(Norm, UnsupportedSobolevIndex) {
  EXPECT_THROW(norm(sin_x(kBox), NormSpec::hs(5)), std::invalid_argument);
  EXPECT_THROW(norm(sin_x(kBox), NormSpec::hs(-1)), std::invalid_argument);
}

TEST(Norm, H2EquivalentToClassicalSum) {
  const Grid g(16, 2.0 * kPi);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const ScalarField f = random_field(g, rng);
    const double ratio = norm(f, NormSpec::hs(2)) / h2_classical(f);
    EXPECT_GE(ratio, 1.0 / std::sqrt(3.0) - 1e-12);
    EXPECT_LE(ratio, std::sqrt(3.0) + 1e-12);
  }
}

TEST(Convolve, ImpulseIsIdentity) {
  const ScalarField f = random_field(kBox, std::uint64_t{5});
  ScalarField delta(kBox);
  delta(0, 0, 0) = 1.0 / std::pow(kBox.spacing(), 3);
  EXPECT_LE((convolve(f, delta) - f).max_abs(), 1e-10);
  EXPECT_LE((convolve(f, delta, true) - f).max_abs(), 1e-10);
}

TEST(Convolve, GaussianVariancesAdd) {
  const Grid g(64, 20.0);
  const double s1 = 0.8, s2 = 0.6;
  const ScalarField out = convolve(gaussian(g, s1), centered_gaussian(g, s2), true);
  const ScalarField expect = gaussian(g, std::hypot(s1, s2));
  EXPECT_LE((out - expect).max_abs(), 1e-6 * expect.max_abs());
}

TEST(Convolve, MatchesDirectSummation) {
  const Grid g(8, 2.0 * kPi);
  const ScalarField f = random_field(g, std::uint64_t{1}, 4);
  const ScalarField h = random_field(g, std::uint64_t{2}, 4);
  EXPECT_LE((convolve(f, h) - direct_convolution(f, h)).max_abs(), 1e-10);
}

TEST(Convolve, GridMismatch) {
  EXPECT_THROW(convolve(ScalarField(Grid(8, 1.0)), ScalarField(Grid(16, 1.0))),
               std::invalid_argument);
}

TEST(Convolve, DerivativeCommutes) {
  const ScalarField f = random_field(kBox, std::uint64_t{8});
  const ScalarField g = random_field(kBox, std::uint64_t{9});
  for (int j = 0; j < kDim; ++j)
    EXPECT_LE((derivative(convolve(f, g), j) - convolve(derivative(f, j), g)).max_abs(), 1e-8);
}

TEST(Divergence, ShearIsFree) {
  const VectorField v(ScalarField::sample(kBox, [](double, double y, double) { return std::sin(y); }),
                      ScalarField(kBox), ScalarField(kBox));
  EXPECT_LE(divergence(v).max_abs(), 1e-12);
}

TEST(Divergence, SineAlongX) {
  const VectorField v(sin_x(kBox), ScalarField(kBox), ScalarField(kBox));
  const ScalarField c = ScalarField::sample(kBox, [](double x, double, double) { return std::cos(x); });
  EXPECT_LE((divergence(v) - c).max_abs(), 1e-12);
}

TEST(Divergence, BeltramiIsFree) {
  EXPECT_LE(divergence(beltrami(kBox, 0.0, 0.1).first).max_abs(), 1e-10);
}

TEST(Fields, CurlOfGradientVanishes) {
  const ScalarField f = random_field(kBox, std::uint64_t{4});
  EXPECT_LE(curl(gradient(f)).max_abs(), 1e-10);
}

TEST(Fields, EmbedCropRoundTrip) {
  const ScalarField f = random_field(Grid(8, 1.0), std::uint64_t{1});
  const ScalarField back = crop(embed(f, f.grid().padded(2)), f.grid());
  EXPECT_EQ((back - f).max_abs(), 0.0);
}
