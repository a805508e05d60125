#include "nsleray/scheme_burgers.hpp"

#include "nsleray/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nsleray {

double IterationReport::max_ratio() const {
  return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
}

double IterationReport::max_ratio_h2inf() const {
  return ratios_h2inf.empty() ? 0.0 : *std::max_element(ratios_h2inf.begin(), ratios_h2inf.end());
}

double step_size(int l, double c) {
  if (l < 1) throw std::invalid_argument("step_size: l must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("step_size: c must be positive");
  return c / l;
}

double burgers_step_size(const BurgersState& state, const BurgersParams& params,
                         IterationReport* report) {
  const double harmonic = step_size(state.l, params.c);
  const double budget = 0.5 / (1.0 + state.u_end.max_abs());
  if (report) {
    report->rho_harmonic = harmonic;
    report->rho_budget = budget;
  }
  return params.contraction_budget ? std::min(harmonic, budget) : harmonic;
}

namespace {

VectorTrajectory solve_with(const std::span<const VectorField> coeff, const VectorField& initial,
                            double rho, const BurgersParams& params) {
  VectorAdvectionDiffusionProblem p{rho, params.nu, coeff, {}, initial, params.substeps};
  return solve(p);
}

double component_norm(const VectorField& v, NormSpec space) { return max_norm(v, space); }

}  // namespace

VectorTrajectory first_iterate(const BurgersState& state, const BurgersParams& params) {
  return solve_with(std::span<const VectorField>(&state.u_end, 1), state.u_end, state.rho_l,
                    params);
}

VectorTrajectory picard_step(const VectorTrajectory& prev, const BurgersState& state,
                             const BurgersParams& params) {
  if (prev.size() != static_cast<std::size_t>(params.substeps) + 1)
    throw std::invalid_argument("picard_step: trajectory length does not match substeps");
  return solve_with(prev, state.u_end, state.rho_l, params);
}

double sup_difference(const VectorTrajectory& a, const VectorTrajectory& b, NormSpec space) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_difference: length mismatch");
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) s = std::max(s, component_norm(a[m] - b[m], space));
  return s;
}

double sup_difference(const VectorTrajectory& a, const VectorField& b, NormSpec space) {
  double s = 0.0;
  for (const VectorField& v : a) s = std::max(s, component_norm(v - b, space));
  return s;
}

std::pair<BurgersState, IterationReport> run_time_step(const BurgersState& state,
                                                       const BurgersParams& params) {
  if (!(params.tol > 0.0)) throw std::invalid_argument("run_time_step: tol must be positive");
  if (params.kmax < 1) throw std::invalid_argument("run_time_step: kmax must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  BurgersState next = state;
  IterationReport report;
  next.rho_l = burgers_step_size(state, params, &report);

  const NormSpec h2 = NormSpec::hs(2);
  const double floor = 1e-12 * (1.0 + component_norm(state.u_end, h2));
  VectorTrajectory cur = first_iterate(next, params);
  report.increments.push_back(sup_difference(cur, state.u_end, h2));
  report.k_final = 1;
  report.converged = report.increments.back() <= params.tol;
  while (!report.converged && report.k_final < params.kmax) {
    VectorTrajectory nxt = picard_step(cur, next, params);
    const double inc = sup_difference(nxt, cur, h2);
    const double prev_inc = report.increments.back();
    if (prev_inc > floor) report.ratios.push_back(inc / prev_inc);
    report.increments.push_back(inc);
    cur = std::move(nxt);
    ++report.k_final;
    report.converged = inc <= params.tol;
  }
  for (const VectorField& v : cur) report.sup_norm_max = std::max(report.sup_norm_max, v.max_abs());

  next.u_end = cur.back();
  next.physical_time = state.physical_time + next.rho_l;
  LedgerRow row;
  row.l = state.l;
  row.rho_l = next.rho_l;
  row.k_iters = report.k_final;
  row.h2_norm = component_norm(next.u_end, h2);
  row.h2inf_norm = component_norm(next.u_end, NormSpec::h2inf());
  row.contraction_ratio_max = report.max_ratio();
  if (params.record_timing)
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  next.ledger.append(row);
  next.l = state.l + 1;
  return {std::move(next), std::move(report)};
}

BurgersRun run(const VectorField& initial, int steps, const BurgersParams& params) {
  if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");
  BurgersRun out{BurgersState(initial), {}};
  for (int s = 0; s < steps; ++s) {
    auto [st, rep] = run_time_step(out.state, params);
    out.state = std::move(st);
    out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace nsleray
