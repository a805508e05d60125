#include "nsleray/diagnostics.hpp"

#include "nsleray/leray.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nsleray {

void NormLedger::append(const LedgerRow& row) {
  if (!rows_.empty() && row.l <= rows_.back().l)
    throw std::invalid_argument("ledger: l must be strictly increasing");
  rows_.push_back(row);
}

const char* NormLedger::csv_header() {
  return "l,rho_l,k_iters,h2_norm,h2inf_norm,contraction_ratio_max,leray_l2,div_max,runtime_ms";
}

void NormLedger::write_csv(std::ostream& os) const {
  os << csv_header() << '\n';
  char buf[512];
  for (const LedgerRow& r : rows_) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.l,
                  r.rho_l, r.k_iters, r.h2_norm, r.h2inf_norm, r.contraction_ratio_max,
                  r.leray_l2, r.div_max, r.runtime_ms);
    os << buf;
  }
}

GrowthAudit growth_audit(const NormLedger& ledger, double h_norm) {
  return growth_audit(ledger.rows(), h_norm);
}

GrowthAudit growth_audit(std::vector<LedgerRow> rows, double h_norm) {
  if (rows.empty()) throw std::invalid_argument("growth_audit: empty ledger");
  std::sort(rows.begin(), rows.end(),
            [](const LedgerRow& a, const LedgerRow& b) { return a.l < b.l; });
  GrowthAudit out;
  for (const LedgerRow& r : rows)
    out.C2_star = std::max(out.C2_star, (r.h2_norm - h_norm) / r.l);
  out.pass = std::isfinite(out.C2_star);
  double prev = h_norm;
  int prev_l = 0;
  for (const LedgerRow& r : rows) {
    const double per_step = (r.h2_norm - prev) / (r.l - prev_l);
    if (!(per_step <= out.C2_star + 1e-6)) out.pass = false;
    prev = r.h2_norm;
    prev_l = r.l;
  }
  return out;
}

ScalarField random_field(const Grid& grid, std::mt19937_64& rng, int max_mode, double decay) {
  const int n = grid.points();
  if (max_mode < 0) max_mode = n / 3;
  std::normal_distribution<double> normal;
  Spectrum s(static_cast<Eigen::Index>(grid.spectral_size()));
  const double dk = 2.0 * kPi / grid.length();
  for_each_mode(grid, [&](const Mode& m) {
    const double re = normal(rng);
    const double im = normal(rng);
    bool keep = true;
    for (double k : m.k) keep = keep && std::abs(k) <= max_mode * dk + 1e-9;
    s[static_cast<Eigen::Index>(m.index)] =
        keep ? std::complex<double>(re, im) * std::pow(1.0 + m.k2(), -decay) : 0.0;
  });
  ScalarField f = inverse(s, grid);
  const double peak = f.max_abs();
  if (peak > 0.0) f *= 1.0 / peak;
  return f;
}

ScalarField random_field(const Grid& grid, std::uint64_t seed, int max_mode, double decay) {
  std::mt19937_64 rng(seed);
  return random_field(grid, rng, max_mode, decay);
}

VectorField random_solenoidal(const Grid& grid, std::uint64_t seed, double amplitude,
                              int max_mode) {
  std::mt19937_64 rng(seed);
  VectorField a(grid);
  for (int i = 0; i < kDim; ++i) a[i] = random_field(grid, rng, max_mode);
  VectorField v = curl(a);
  const double peak = v.max_abs();
  if (peak > 0.0) v *= amplitude / peak;
  return v;
}

VectorField compact_solenoidal(const Grid& grid, std::uint64_t seed, double width) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double q[3][3];
  for (auto& row : q)
    for (double& c : row) c = normal(rng);
  const double c = grid.length() / 2.0;
  const double support = 3.0;
  auto envelope = [&](double x, double y, double z) {
    const double r2 = (x - c) * (x - c) + (y - c) * (y - c) + (z - c) * (z - c);
    const double t = r2 / (support * support);
    if (t >= 1.0) return 0.0;
    return std::exp(-r2 / (2.0 * width * width)) * std::exp(-1.0 / (1.0 - t) + 1.0);
  };
  VectorField a(grid);
  for (int i = 0; i < kDim; ++i) {
    const double* qi = q[i];
    a[i] = ScalarField::sample(grid, [&](double x, double y, double z) {
      const double p[3] = {x, y, z};
      return envelope(x, y, z) *
             (qi[0] + qi[1] * std::sin(p[(i + 1) % 3]) + qi[2] * std::cos(p[(i + 2) % 3]));
    });
  }
  return curl(a);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tally {
  InequalityCheck& c;
  void operator()(double lhs, double rhs) {
    ++c.evaluations;
    if (lhs > rhs * (1.0 + kInequalitySlack)) ++c.violations;
    if (rhs > 0.0) c.max_ratio = std::max(c.max_ratio, lhs / rhs);
    else if (lhs > 0.0) c.max_ratio = kInf;
  }
};

double product_ratio(const ScalarField& f, const ScalarField& g) {
  const double den = norm(f, NormSpec::hs(2)) * norm(g, NormSpec::hs(2));
  if (den == 0.0) return 0.0;
  return norm(f * g, NormSpec::hs(2)) / den;
}

std::pair<ScalarField, ScalarField> corpus_pair(const Grid& grid, std::uint64_t seed, int trial,
                                                double decay = 0.0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  ScalarField f = random_field(grid, rng, -1, decay);
  ScalarField g = random_field(grid, rng, -1, decay);
  return {std::move(f), std::move(g)};
}

}  // namespace

int InequalityReport::violations() const {
  int v = 0;
  for (const auto& c : checks) v += c.violations;
  return v;
}

const InequalityCheck& InequalityReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("inequality report: no check " + name);
}

void InequalityReport::merge(const InequalityReport& other) {
  for (const auto& o : other.checks) {
    auto it = std::find_if(checks.begin(), checks.end(),
                           [&](const InequalityCheck& c) { return c.name == o.name; });
    if (it == checks.end()) {
      checks.push_back(o);
      continue;
    }
    it->max_ratio = std::max(it->max_ratio, o.max_ratio);
    it->evaluations += o.evaluations;
    it->violations += o.violations;
  }
  product_constant = std::max(product_constant, other.product_constant);
}

InequalityReport evaluate_inequalities(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid());
  InequalityReport rep;
  rep.checks = {{"young"}, {"young_l2_l1"}, {"young_linf"}, {"source_pointwise"}};
  Tally young{rep.checks[0]}, y3{rep.checks[1]}, y4{rep.checks[2]}, src{rep.checks[3]};

  const ScalarField fg = convolve(f, g);
  const double pq[][2] = {{1, 1},   {2, 1},     {1, 2},   {4.0 / 3, 4.0 / 3},
                          {1.5, 1.5}, {1.2, 3}, {2, 2},   {kInf, 1},
                          {1, kInf}};
  for (const auto& e : pq) {
    const double inv_r = 1.0 / e[0] + 1.0 / e[1] - 1.0;
    const double r = inv_r <= 0.0 ? kInf : 1.0 / inv_r;
    young(lp_norm(fg, r), lp_norm(f, e[0]) * lp_norm(g, e[1]));
  }
  y3(norm(fg, NormSpec::l2()), norm(f, NormSpec::l2()) * norm(g, NormSpec::l1()));
  y4(norm(fg, NormSpec::linf()), norm(f, NormSpec::l2()) * norm(g, NormSpec::l2()));
  y4(norm(fg, NormSpec::linf()), norm(f, NormSpec::linf()) * norm(g, NormSpec::l1()));

  const VectorField v(f, g, f - g);
  const Jacobian d = jacobian(v);
  const ScalarField q = nonlinear_source(d, d);
  ScalarField bound(f.grid());
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k)
      bound.values() += 0.5 * (d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].values().square() +
                               d[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].values().square());
  const double scale = bound.max_abs();
  for (Eigen::Index i = 0; i < q.values().size(); ++i) {
    ++src.c.evaluations;
    const double lhs = std::abs(q.values()[i]);
    const double rhs = bound.values()[i];
    if (lhs > rhs + kInequalitySlack * scale) ++src.c.violations;
    if (rhs > 0.0) src.c.max_ratio = std::max(src.c.max_ratio, lhs / rhs);
  }
  return rep;
}

InequalityReport verify_inequality_suite(std::uint64_t seed, int trials, int points) {
  if (trials < 1) throw std::invalid_argument("verify_inequality_suite: trials must be >= 1");
  const Grid grid(points, 2.0 * kPi);
  InequalityReport total;
  for (int t = 0; t < trials; ++t) {
    const auto [f, g] = corpus_pair(grid, seed, t);
    total.merge(evaluate_inequalities(f, g));
  }
  total.product_constant = product_constant(seed, trials, points);
  return total;
}

double product_constant(std::uint64_t seed, int trials, int points) {
  if (trials < 1) throw std::invalid_argument("product_constant: trials must be >= 1");
  const Grid grid(points, 1.0);
  double c = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto [f, g] = corpus_pair(grid, seed, t, 2.0);
    c = std::max(c, product_ratio(f, g));
  }
  return c;
}

void write_summary(std::ostream& os, const InequalityReport& report) {
  char buf[256];
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, "%-18s evaluations=%d violations=%d max_ratio=%.6g\n",
                  c.name.c_str(), c.evaluations, c.violations, c.max_ratio);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%-18s %.6g\n", "product_constant", report.product_constant);
  os << buf;
}

}  // namespace nsleray
