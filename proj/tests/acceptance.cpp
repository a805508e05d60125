// Acceptance suite: one PASS/FAIL line per criterion. Runtime limits count
// towards the verdict. Criteria 4-8 record sup-norms of their runs for 10.

#include "nsleray/diagnostics.hpp"
#include "nsleray/kernels.hpp"
#include "nsleray/leray.hpp"
#include "nsleray/oracles.hpp"
#include "nsleray/parabolic.hpp"
#include "nsleray/scheme_burgers.hpp"
#include "nsleray/scheme_ns.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace nsleray;
namespace fs = std::filesystem;

namespace {

constexpr double kNu = 0.1;
const double kTwoPi = 2.0 * kPi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Sup-norm of the physical solution over a run against its initial value.
struct SupRecord {
  std::string run;
  double initial = 0.0;
  double peak = 0.0;
};

struct Context {
  fs::path records;
  std::map<int, std::vector<SupRecord>> sup;

  void save(int criterion, std::vector<SupRecord> rows) {
    if (!records.empty()) {
      fs::create_directories(records);
      std::ofstream f(records / ("c" + std::to_string(criterion) + ".txt"));
      char buf[256];
      for (const SupRecord& r : rows) {
        std::snprintf(buf, sizeof buf, "%s %.17g %.17g\n", r.run.c_str(), r.initial, r.peak);
        f << buf;
      }
    }
    sup[criterion] = std::move(rows);
  }

  bool load(int criterion) {
    if (sup.count(criterion)) return true;
    std::ifstream f(records / ("c" + std::to_string(criterion) + ".txt"));
    if (records.empty() || !f) return false;
    std::vector<SupRecord> rows;
    for (SupRecord r; f >> r.run >> r.initial >> r.peak;) rows.push_back(r);
    sup[criterion] = rows;
    return true;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

double relative_l2(const VectorField& a, const VectorField& b) {
  return l2_norm(a - b) / l2_norm(b);
}

NsParams fixed_params(double rho) {
  NsParams p;
  p.nu = kNu;
  p.rho_mode = RhoMode::fixed;
  p.c = rho;
  return p;
}

VectorField beltrami_datum(const Grid& g, double a) { return beltrami(g, 0.0, kNu, {a, a, a}).first; }

// --------------------------------------------------------------------------

Outcome young_suite(Context&) {
  const InequalityReport rep = verify_inequality_suite(7, 100, 32);
  Outcome o;
  std::ostringstream d;
  for (const char* name : {"young", "young_l2_l1", "young_linf"}) {
    const InequalityCheck& c = rep.check(name);
    o.pass = o.pass && c.violations == 0 && c.evaluations > 0;
    d << name << " " << c.violations << "/" << c.evaluations << " max_ratio " << fmt("%.6f", c.max_ratio)
      << "; ";
  }
  d << "source_pointwise violations " << rep.check("source_pointwise").violations;
  o.detail = d.str();
  return o;
}

Outcome kernel_split_norms(Context&) {
  const Grid base(128, kTwoPi);
  const Grid g = base.padded(2);
  const double h = g.spacing();
  const double r_near = 32.0 * h, r_far = 4.0 * h;
  Outcome o;
  std::ostringstream d;
  double worst_near = 0.0, far2 = 0.0;
  for (int axis = 0; axis < kDim; ++axis) {
    const KernelSplit near = build_kernel_split(g, axis, {r_near, CutoffStyle::sharp});
    worst_near = std::max(worst_near, std::abs(norm(near.near, NormSpec::l1()) / (r_near / 2.0) - 1.0));
  }
  for (int axis = 0; axis < kDim; ++axis) {
    const KernelSplit far = build_kernel_split(g, axis, {r_far, CutoffStyle::sharp});
    far2 += std::pow(norm(far.far, NormSpec::l2()), 2);
  }
  const double far_err = std::abs(far2 * 4.0 * kPi * r_far - 1.0);
  o.pass = worst_near <= 0.05 && far_err <= 0.05;
  d << "near L1 vs R/2 (R=32h) rel err " << fmt("%.4f", worst_near) << "; sum far L2^2 vs 1/(4 pi R) (R=4h) rel err "
    << fmt("%.4f", far_err);
  o.detail = d.str();
  return o;
}

Outcome leray_cross_validation(Context&) {
  const Grid g(64, kTwoPi);
  const CutoffSpec spec = CutoffSpec::for_grid(g);
  std::vector<ScalarField> sources;
  std::vector<VectorField> spectral;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const VectorField v = compact_solenoidal(g, seed);
    sources.push_back(nonlinear_source(v, v));
    spectral.push_back(pressure_gradient_spectral(sources.back()));
  }
  std::map<int, std::vector<double>> err;
  for (int pad : {1, 2, 4}) {
    const LerayOperator route(g, spec, pad);
    for (std::size_t i = 0; i < sources.size(); ++i)
      err[pad].push_back(relative_l2(route(sources[i]), spectral[i]));
  }
  Outcome o;
  std::ostringstream d;
  double worst2 = 0.0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    worst2 = std::max(worst2, err[2][i]);
    const bool monotone = err[1][i] > err[2][i] && err[4][i] <= err[2][i] * (1.0 + 1e-9);
    o.pass = o.pass && err[2][i] <= 0.02 && monotone;
    d << "seed " << i + 1 << " " << sci(err[1][i]) << ">" << sci(err[2][i]) << ">=" << sci(err[4][i])
      << (monotone ? "" : " (not monotone)") << "; ";
  }
  d << "max err(pad 2) " << fmt("%.4f", worst2);
  o.detail = d.str();
  return o;
}

Outcome burgers_cole_hopf(Context& ctx) {
  const Grid g(64, kTwoPi);
  const ScalarField phi = cole_hopf_potential(g, 0.1);
  const VectorField u0 = gradient(phi);
  BurgersParams p;
  p.nu = kNu;
  p.c = 0.1;
  const BurgersRun run = nsleray::run(u0, 10, p);
  double worst_ratio = 0.0, peak = u0.max_abs();
  bool converged = true;
  bool harmonic = true;
  for (const IterationReport& r : run.reports) {
    worst_ratio = std::max(worst_ratio, r.max_ratio());
    converged = converged && r.converged;
    peak = std::max(peak, r.sup_norm_max);
  }
  for (const LedgerRow& row : run.state.ledger.rows())
    harmonic = harmonic && std::abs(row.rho_l - 0.1 / row.l) <= 1e-15;
  const double err =
      max_norm(run.state.u_end - cole_hopf(phi, kNu, run.state.physical_time), NormSpec::linf());
  ctx.save(4, {{"burgers_colehopf", u0.max_abs(), peak}});
  Outcome o;
  o.pass = err <= 5e-3 && converged && harmonic && worst_ratio <= 0.5 + 1e-3;
  o.detail = "sup error " + sci(err) + " at t=" + fmt("%.4f", run.state.physical_time) +
             "; max ratio " + sci(worst_ratio) + (converged ? "; all converged" : "; NOT converged") +
             (harmonic ? "" : "; rho_l != 0.1/l");
  return o;
}

Outcome ns_beltrami(Context& ctx) {
  const Grid g(32, kTwoPi);
  const double rho = 0.05;
  const VectorField h = beltrami_datum(g, 1.0);
  const auto [next, rep] = run_time_step(NsState(h), fixed_params(rho));
  const VectorField v = recover_velocity(next);
  const double e_exact = relative_l2(v, beltrami(g, rho, kNu).first);
  const double e_ref = relative_l2(v, reference_projection_solver(h, kNu, rho, 1e-3));
  ctx.save(5, {{"ns_beltrami_one_step", h.max_abs(), std::max(h.max_abs(), rep.sup_norm_max)}});
  Outcome o;
  o.pass = rep.converged && e_exact <= 2e-3 && e_ref <= 2e-3;
  o.detail = "rel L2 vs exact " + sci(e_exact) + ", vs reference solver " + sci(e_ref) + "; " +
             std::to_string(rep.k_final) + " iterates";
  return o;
}

Outcome control_identity(Context& ctx) {
  const Grid g(32, kTwoPi);
  const double rho = 0.05;
  const NsParams p = fixed_params(rho);
  double worst = 0.0, worst_r = 0.0;
  std::vector<SupRecord> sup;
  for (int c = 0; c < 2; ++c) {
    const VectorField h = c == 0 ? beltrami_datum(g, 1.0) : random_solenoidal(g, 1, 1.0);
    // State after one macro step, r_end != 0.
    auto [state, rep] = run_time_step(NsState(h), p);
    sup.push_back({c == 0 ? "control_beltrami" : "control_random", h.max_abs(),
                   std::max(h.max_abs(), rep.sup_norm_max)});
    state.rho_l = rho;
    const VectorTrajectory vstar = uncontrolled_first(state, p);
    const NsState updated = control_update(state, vstar);
    for (const VectorField& w : controlled_first(updated, vstar))
      worst = std::max(worst, (w - state.v_end).max_abs());
    worst_r = std::max(worst_r, (updated.r_traj.front() - state.r_end).max_abs());
  }
  ctx.save(6, sup);
  Outcome o;
  o.pass = worst <= 1e-12 && worst_r == 0.0;
  o.detail = "max |controlled first - previous end| " + sci(worst) + "; |r(l-1) - r_end| " + sci(worst_r);
  return o;
}

Outcome controlled_contraction(Context& ctx) {
  const Grid g(32, kTwoPi);
  struct Case {
    std::string name;
    VectorField h;
  };
  std::vector<Case> corpus;
  for (double a : {0.5, 1.0, 2.0}) corpus.push_back({"beltrami_a" + fmt("%g", a), beltrami_datum(g, a)});
  for (std::uint64_t s : {1, 2, 3})
    corpus.push_back({"random_s" + std::to_string(s), random_solenoidal(g, s, 1.0)});

  // Successive-increment ratios are recorded only above the noise floor; at
  // the controlled step the first increment is already at rounding level, so
  // the map is also probed directly with an O(0.1) perturbation.
  const VectorField d = random_solenoidal(g, 101, 0.1);
  NsParams p;
  p.nu = kNu;
  p.rho_mode = RhoMode::controlled;
  double recorded = 0.0, probed = 0.0, inflated = 0.0, rho_min = 1.0, rho_max = 0.0;
  int ratios = 0;
  bool converged = true;
  std::vector<SupRecord> sup;
  for (const Case& c : corpus) {
    for (double scale : {1.0, 10.0}) {
      p.rho_scale = scale;
      const auto [next, rep] = run_time_step(NsState(c.h), p);
      sup.push_back({c.name + (scale > 1.0 ? "_x10" : ""), c.h.max_abs(),
                     std::max(c.h.max_abs(), rep.sup_norm_max)});

      NsState st(c.h);
      st.rho_l = ns_step_size(st, p);
      const VectorTrajectory vstar = uncontrolled_first(st, p);
      st = control_update(st, vstar);
      const LipschitzProbe lip = probe_lipschitz(st, controlled_first(st, vstar), d, p);
      const double worst = std::max({rep.max_ratio(), rep.max_ratio_h2inf(), lip.h2, lip.h2inf});
      if (scale == 1.0) {
        recorded = std::max({recorded, rep.max_ratio(), rep.max_ratio_h2inf()});
        probed = std::max({probed, lip.h2, lip.h2inf});
        ratios += static_cast<int>(rep.ratios.size() + rep.ratios_h2inf.size());
        converged = converged && rep.converged;
        rho_min = std::min(rho_min, next.rho_l);
        rho_max = std::max(rho_max, next.rho_l);
      } else {
        inflated = std::max(inflated, worst);
      }
    }
  }
  ctx.save(7, sup);
  const bool budget_ok = converged && recorded <= 0.5 + 1e-3 && probed <= 0.5 + 1e-3;
  const bool sensitive = inflated > 0.5;
  Outcome o;
  o.pass = budget_ok && sensitive;
  o.detail = "rho_l in [" + sci(rho_min) + ", " + sci(rho_max) + "]: " + std::to_string(ratios) +
             " recorded ratios, max " + sci(recorded) + ", probed Lipschitz ratio " + sci(probed) + " (" +
             (budget_ok ? "ok" : "FAIL") + "); 10x rho_l: max ratio " + sci(inflated) +
             (sensitive ? " > 0.5 (ok)" : " <= 0.5 (FAIL)");
  return o;
}

Outcome growth_ledger(Context& ctx) {
  const Grid g(32, kTwoPi);
  NsParams p;
  p.nu = kNu;
  p.rho_mode = RhoMode::harmonic;
  p.c = 0.05;
  Outcome o;
  std::ostringstream d;
  std::vector<SupRecord> sup;
  for (int c = 0; c < 2; ++c) {
    const std::string name = c == 0 ? "growth_beltrami" : "growth_random";
    const VectorField h = c == 0 ? beltrami_datum(g, 1.0) : random_solenoidal(g, 1, 1.0);
    const NsRun run = nsleray::run(h, 10, p);
    double peak = h.max_abs(), div = 0.0;
    bool converged = true;
    for (const IterationReport& r : run.reports) {
      peak = std::max(peak, r.sup_norm_max);
      converged = converged && r.converged;
    }
    sup.push_back({name, h.max_abs(), peak});
    const double h2 = max_norm(h, NormSpec::hs(2));
    const GrowthAudit audit = growth_audit(run.state.ledger, h2);
    bool bounded = true;
    double prev = h2, step = 0.0;
    for (const LedgerRow& row : run.state.ledger.rows()) {
      bounded = bounded && row.h2_norm <= h2 + row.l * audit.C2_star + 1e-12;
      div = std::max(div, row.div_max);
      step = std::max(step, row.h2_norm - prev);
      prev = row.h2_norm;
    }
    o.pass = o.pass && converged && audit.pass && audit.C2_star <= 1.0 && bounded;
    d << name << ": C2* " << sci(audit.C2_star) << (audit.pass ? " pass" : " FAIL") << ", largest step " << sci(step) << ", |h|_H2 "
      << fmt("%.4f", h2) << " -> " << fmt("%.4f", run.state.ledger.rows().back().h2_norm) << ", max div "
      << sci(div) << (converged ? "" : ", NOT converged") << "; ";
  }
  ctx.save(8, sup);
  o.detail = d.str();
  return o;
}

Outcome gaussian_majorant(Context&) {
  const Grid g(32, kTwoPi);
  const double rho = 1.0;
  AdvectionDiffusionProblem heat{rho, kNu, {}, {}, ScalarField(g), 32};
  const GaussianMajorantReport free = check_gaussian_majorant(heat);
  const double c_exact = std::pow(4.0 * kPi * rho * kNu, -1.5);
  const double lambda_exact = 1.0 / (rho * kNu);
  const double c_err = std::abs(free.fitted.C / c_exact - 1.0);
  const double l_err = std::abs(free.fitted.lambda / lambda_exact - 1.0);

  const VectorField b = random_solenoidal(g, 4, 0.5);
  AdvectionDiffusionProblem drift{rho, kNu, std::span<const VectorField>(&b, 1), {}, ScalarField(g), 64};
  const GaussianMajorantReport d0 = check_gaussian_majorant(drift, 0);
  const GaussianMajorantReport d1 = check_gaussian_majorant(drift, 1);
  const double c_prime = gaussian_time_integrated_l1(d1.fitted);
  const ConstantsRecord k = estimate_constants(NsState(beltrami_datum(g, 1.0)), fixed_params(0.05));

  auto finite = [](const GaussianMajorant& m) {
    return std::isfinite(m.C) && m.C > 0.0 && std::isfinite(m.lambda) && m.lambda > 0.0;
  };
  Outcome o;
  o.pass = c_err <= 0.1 && l_err <= 0.1 && free.asymmetry <= 1e-10 && finite(d0.fitted) &&
           finite(d1.fitted) && std::isfinite(c_prime) && std::isfinite(k.raw_C_prime) &&
           k.raw_C_prime > 0.0;
  o.detail = "heat: C rel err " + fmt("%.4f", c_err) + ", lambda rel err " + fmt("%.4f", l_err) +
             ", asymmetry " + sci(free.asymmetry) + "; drift: (C, lambda) = (" + sci(d0.fitted.C) + ", " +
             sci(d0.fitted.lambda) + ") order 0, (" + sci(d1.fitted.C) + ", " + sci(d1.fitted.lambda) +
             ") order 1; C' = " + sci(c_prime) + " (drift), " + sci(k.raw_C_prime) + " (Beltrami state)";
  return o;
}

Outcome maximum_principle(Context& ctx) {
  Outcome o;
  std::ostringstream d;
  int runs = 0;
  double worst = -1e300;
  std::string worst_run;
  for (int c = 4; c <= 8; ++c) {
    if (!ctx.load(c)) {
      o.pass = false;
      d << "no records from criterion " << c << "; ";
      continue;
    }
    for (const SupRecord& r : ctx.sup[c]) {
      ++runs;
      const double excess = r.peak - r.initial;
      if (excess > worst) {
        worst = excess;
        worst_run = r.run;
      }
      if (excess > 1e-6) {
        o.pass = false;
        d << r.run << " exceeds by " << sci(excess) << "; ";
      }
    }
  }
  d << runs << " runs, largest sup(v) - sup(h) " << sci(worst) << " (" << worst_run << ")";
  o.detail = d.str();
  return o;
}

struct Criterion {
  int id;
  double limit_s;
  std::function<Outcome(Context&)> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-10"};
  std::vector<int> only;
  std::string records;
  app.add_option("--criterion", only, "run only these criteria")->check(CLI::Range(1, 10));
  app.add_option("--records", records, "directory for the sup-norm records shared with criterion 10");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, 60, young_suite},          {2, 60, kernel_split_norms},
      {3, 120, leray_cross_validation}, {4, 600, burgers_cole_hopf},
      {5, 300, ns_beltrami},         {6, 60, control_identity},
      {7, 600, controlled_contraction}, {8, 900, growth_ledger},
      {9, 120, gaussian_majorant},   {10, 60, maximum_principle},
  };
  Context ctx{records, {}};
  int failures = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %2d: %s  %s [%.1f s of %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", TOO SLOW");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
