#include "nsleray/parabolic.hpp"

#include "nsleray/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace nsleray {

namespace {

Eigen::ArrayXd heat_multiplier(const Grid& g, double exponent) {
  Eigen::ArrayXd d(static_cast<Eigen::Index>(g.spectral_size()));
  for_each_mode(g, [&](const Mode& m) {
    d[static_cast<Eigen::Index>(m.index)] = std::exp(-exponent * m.k2());
  });
  return d;
}

template <class T>
void check_samples(std::span<const T> s, int substeps, const Grid& g, const char* what) {
  if (s.size() > 1 && s.size() < static_cast<std::size_t>(substeps))
    throw std::invalid_argument(std::string("solve: too few ") + what + " samples");
  for (const T& f : s) require_same_grid(f.grid(), g);
}

template <class T>
const T* sample_at(std::span<const T> s, int m) {
  if (s.empty()) return nullptr;
  return s.size() == 1 ? &s[0] : &s[static_cast<std::size_t>(m)];
}

double pointwise_speed(const VectorField& b) {
  return (b[0].values().square() + b[1].values().square() + b[2].values().square())
      .sqrt()
      .maxCoeff();
}

struct Stepper {
  Grid grid;
  double rho;
  double dtau;
  Eigen::ArrayXd decay;

  Stepper(const Grid& g, double rho_, double nu, int substeps)
      : grid(g), rho(rho_), dtau(1.0 / substeps), decay(heat_multiplier(g, rho_ * nu / substeps)) {}

  ScalarField step(Spectrum& s, const VectorField* b, const ScalarField* f) const {
    bool forced = false;
    ScalarField rhs(grid);
    if (b && b->max_abs() > 0.0) {
      const VectorField dw = gradient(s, grid);
      for (int j = 0; j < kDim; ++j) rhs.values() -= rho * (*b)[j].values() * dw[j].values();
      forced = true;
    }
    if (f) {
      rhs += *f;
      forced = true;
    }
    if (forced) s += dtau * forward(rhs);
    s *= decay;
    ScalarField w = inverse(s, grid);
    if (!w.all_finite()) throw NumericalError("solve: non-finite value");
    return w;
  }
};

void validate(double rho, double nu, int substeps) {
  if (!(rho > 0.0)) throw std::invalid_argument("solve: rho must be positive");
  if (!(nu >= 0.0)) throw std::invalid_argument("solve: nu must be non-negative");
  if (substeps < 1) throw std::invalid_argument("solve: substeps must be >= 1");
}

void check_cfl(double rho, std::span<const VectorField> coeff, int substeps) {
  const double c = cfl_number(rho, coeff, substeps);
  if (c > kCflLimit)
    throw NumericalError("cfl: rho*max|b|*dtau/h = " + std::to_string(c) + " exceeds 0.5");
}

}  // namespace

ScalarField propagate_heat(const ScalarField& f, double t, double nu_eff) {
  if (t < 0.0) throw std::invalid_argument("propagate_heat: negative time");
  const double a = nu_eff * t;
  return apply_symbol(f, [a](const Mode& m) { return std::complex<double>(std::exp(-a * m.k2())); });
}

VectorField propagate_heat(const VectorField& v, double t, double nu_eff) {
  return VectorField(propagate_heat(v[0], t, nu_eff), propagate_heat(v[1], t, nu_eff),
                     propagate_heat(v[2], t, nu_eff));
}

double cfl_number(double rho, std::span<const VectorField> coeff, int substeps) {
  double speed = 0.0;
  for (const VectorField& b : coeff) speed = std::max(speed, pointwise_speed(b));
  if (coeff.empty()) return 0.0;
  return rho * speed / (substeps * coeff[0].grid().spacing());
}

Trajectory solve(const AdvectionDiffusionProblem& p) {
  validate(p.rho, p.nu, p.substeps);
  const Grid& g = p.initial.grid();
  check_samples(p.coeff, p.substeps, g, "coefficient");
  check_samples(p.source, p.substeps, g, "source");
  check_cfl(p.rho, p.coeff, p.substeps);

  const Stepper stepper(g, p.rho, p.nu, p.substeps);
  Trajectory out;
  out.reserve(static_cast<std::size_t>(p.substeps) + 1);
  out.push_back(p.initial);
  Spectrum s = forward(p.initial);
  for (int m = 0; m < p.substeps; ++m)
    out.push_back(stepper.step(s, sample_at(p.coeff, m), sample_at(p.source, m)));
  return out;
}

VectorTrajectory solve(const VectorAdvectionDiffusionProblem& p) {
  validate(p.rho, p.nu, p.substeps);
  const Grid& g = p.initial.grid();
  check_samples(p.coeff, p.substeps, g, "coefficient");
  check_samples(p.source, p.substeps, g, "source");
  check_cfl(p.rho, p.coeff, p.substeps);

  const Stepper stepper(g, p.rho, p.nu, p.substeps);
  VectorTrajectory out(static_cast<std::size_t>(p.substeps) + 1, VectorField(g));
  out[0] = p.initial;
  for (int i = 0; i < kDim; ++i) {
    Spectrum s = forward(p.initial[i]);
    for (int m = 0; m < p.substeps; ++m) {
      const VectorField* f = sample_at(p.source, m);
      out[static_cast<std::size_t>(m) + 1][i] =
          stepper.step(s, sample_at(p.coeff, m), f ? &(*f)[i] : nullptr);
    }
  }
  return out;
}

namespace {

struct Impulse {
  int ix, iy, iz;
};

ScalarField impulse(const Grid& g, const Impulse& at) {
  ScalarField f(g);
  f(at.ix, at.iy, at.iz) = 1.0 / std::pow(g.spacing(), 3);
  return f;
}

ScalarField gradient_magnitude(const ScalarField& f) {
  const VectorField d = gradient(f);
  return ScalarField(f.grid(), (d[0].values().square() + d[1].values().square() +
                                d[2].values().square())
                                   .sqrt());
}

struct Sample {
  double dt;
  double r2;
  double value;
};

}  // namespace

GaussianMajorantReport check_gaussian_majorant(const AdvectionDiffusionProblem& problem,
                                               int order) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("check_gaussian_majorant: order must be 0 or 1");
  const Grid& g = problem.initial.grid();
  const int n = g.points();
  const double h = g.spacing();
  const double L = g.length();
  const Impulse x{n / 2, n / 2, n / 2};
  const Impulse y{n / 2 + n / 8, n / 2 + n / 16, n / 2};

  auto run = [&](const Impulse& at) {
    AdvectionDiffusionProblem q = problem;
    q.source = {};
    q.initial = impulse(g, at);
    return solve(q);
  };
  const Trajectory from_x = run(x);
  const Trajectory from_y = run(y);

  GaussianMajorantReport report;
  report.fitted.order = order;
  for (std::size_t m = 0; m < from_x.size(); ++m)
    report.asymmetry = std::max(report.asymmetry,
                                std::abs(from_x[m](y.ix, y.iy, y.iz) - from_y[m](x.ix, x.iy, x.iz)));

  // Samples resolved by the grid (spread >= 2h) and free of periodic images
  // (spread <= L/8, |x| <= L/4 plus the distance the coefficient can carry
  // the impulse, at most 0.45 L, measured by minimal image).
  const double diffusivity = problem.rho * problem.nu;
  const double drift = problem.rho * cfl_number(1.0, problem.coeff, 1) * h;
  const double window = std::min(L / 4.0 + drift, 0.45 * L);
  std::vector<Sample> samples;
  double peak = 0.0;
  for (std::size_t m = 1; m < from_x.size(); ++m) {
    const double dt = static_cast<double>(m) / problem.substeps;
    const double spread = std::sqrt(2.0 * diffusivity * dt);
    if (spread < 2.0 * h || spread > L / 8.0) continue;
    const ScalarField col = order == 0 ? from_x[m] : gradient_magnitude(from_x[m]);
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
          const double dx = g.displacement((ix - x.ix + n) % n);
          const double dy = g.displacement((iy - x.iy + n) % n);
          const double dz = g.displacement((iz - x.iz + n) % n);
          const double r2 = dx * dx + dy * dy + dz * dz;
          if (r2 > window * window) continue;
          const double v = std::abs(col(ix, iy, iz));
          samples.push_back({dt, r2, v});
          peak = std::max(peak, v * std::pow(dt, 0.5 * (3 + order)));
        }
  }
  if (samples.empty() || !(peak > 0.0))
    throw NumericalError("check_gaussian_majorant: no resolved samples");

  // log(v * dt^{(3+order)/2}) = log C - lambda * r2 / (4 dt), fitted on the
  // well-resolved part, then C raised until every retained sample is dominated.
  const double a = 0.5 * (3 + order);
  std::vector<const Sample*> fit;
  for (const Sample& s : samples)
    if (s.value * std::pow(s.dt, a) >= 1e-6 * peak) fit.push_back(&s);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(fit.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(fit.size()));
  for (std::size_t i = 0; i < fit.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    A(r, 0) = 1.0;
    A(r, 1) = -fit[i]->r2 / (4.0 * fit[i]->dt);
    rhs[r] = std::log(fit[i]->value) + a * std::log(fit[i]->dt);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(rhs);
  report.fitted.lambda = coef[1];
  if (!(report.fitted.lambda > 0.0) || !std::isfinite(report.fitted.lambda))
    throw NumericalError("check_gaussian_majorant: no decaying fit");

  GaussianMajorant unit = report.fitted;
  unit.C = 1.0;
  double C = 0.0;
  for (const Sample& s : samples) {
    if (s.value * std::pow(s.dt, a) < 1e-10 * peak) continue;
    const double b = gaussian_bound(s.dt, Point(std::sqrt(s.r2), 0.0, 0.0), unit);
    C = std::max(C, s.value / b);
    ++report.samples;
  }
  report.fitted.C = C;
  return report;
}

}  // namespace nsleray
