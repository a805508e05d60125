#include "nsleray/scheme_ns.hpp"

#include "nsleray/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nsleray {

StepSizes step_size_controlled(const ConstantsRecord& c, int n) {
  for (double v : {c.C_l, c.C_r, c.C_K, c.C_K2, c.C_s, c.C_prime})
    if (!(v >= 1.0)) throw std::invalid_argument("step_size_controlled: constants must be >= 1");
  if (n < 1) throw std::invalid_argument("step_size_controlled: n must be >= 1");
  const double n1 = n + 1.0;
  const double n2 = static_cast<double>(n) * n;
  StepSizes s;
  s.controlled = 1.0 / (2.0 * n1 * n1 * 4.0 * n2 * n2 * (c.C_l + c.C_r) * c.C_K2 * c.C_s * c.C_prime);
  s.uncontrolled = 1.0 / (4.0 * n1 * n1 * c.C_prime * 3.0 * n2 * c.C_s * c.C_K2 * c.C_l);
  return s;
}

NsState::NsState(VectorField initial) : v_end(std::move(initial)), r_end(v_end.grid()) {}

namespace {

VectorField scaled(VectorField v, double a) {
  v *= a;
  return v;
}

VectorTrajectory solve_ns(const NsState& state, const NsParams& params,
                          std::span<const VectorField> coeff, std::span<const VectorField> source) {
  VectorAdvectionDiffusionProblem p{state.rho_l, params.nu, coeff, source, state.v_end,
                                    params.substeps};
  return solve(p);
}

void require_trajectory(const VectorTrajectory& t, const NsParams& params, const char* what) {
  if (t.size() != static_cast<std::size_t>(params.substeps) + 1)
    throw std::invalid_argument(std::string(what) + ": trajectory length does not match substeps");
}

VectorField advect_vector(const VectorField& b, const Jacobian& d) {
  VectorField out(b.grid());
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      out[i].values() += b[j].values() * d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].values();
  return out;
}

}  // namespace

VectorTrajectory uncontrolled_first(const NsState& state, const NsParams& params) {
  const VectorField force =
      scaled(params.leray(nonlinear_source(state.v_end, state.v_end)), state.rho_l);
  return solve_ns(state, params, std::span<const VectorField>(&state.v_end, 1),
                  std::span<const VectorField>(&force, 1));
}

NsState control_update(const NsState& state, const VectorTrajectory& vstar) {
  NsState next = state;
  next.r_traj.clear();
  next.r_traj.reserve(vstar.size());
  for (const VectorField& v : vstar) next.r_traj.push_back(state.r_end - (v - state.v_end));
  return next;
}

VectorTrajectory controlled_first(const NsState& state, const VectorTrajectory& vstar) {
  if (state.r_traj.size() != vstar.size())
    throw std::invalid_argument("controlled_first: control not set for this trajectory");
  VectorTrajectory out;
  out.reserve(vstar.size());
  for (std::size_t m = 0; m < vstar.size(); ++m)
    out.push_back(vstar[m] + (state.r_traj[m] - state.r_end));
  return out;
}

VectorTrajectory controlled_iterate(const NsState& state, const VectorTrajectory& prev,
                                    const NsParams& params) {
  require_trajectory(prev, params, "controlled_iterate");
  require_trajectory(state.r_traj, params, "controlled_iterate");
  const double rho = state.rho_l;
  const double rate = params.substeps;
  std::vector<VectorField> coeff, source;
  coeff.reserve(static_cast<std::size_t>(params.substeps));
  source.reserve(static_cast<std::size_t>(params.substeps));
  for (std::size_t m = 0; m < static_cast<std::size_t>(params.substeps); ++m) {
    const VectorField& w = prev[m];
    const VectorField& r = state.r_traj[m];
    VectorField b = w - r;
    const Jacobian dw = jacobian(w);
    const Jacobian dr = jacobian(r);
    ScalarField q = nonlinear_source(dw, dw);
    q.values() += nonlinear_source(dr, dr).values() - 2.0 * nonlinear_source(dw, dr).values();
    VectorField f = scaled(params.leray(q), rho);
    f += scaled(advect_vector(b, dr), rho);
    // dr/dtau - rho nu Laplace r as (E^{-1} r(m+1) - r(m)) / dtau with E the
    // substep heat multiplier, so that v = w - r sees the same propagator.
    for (int i = 0; i < kDim; ++i) {
      const ScalarField ahead = apply_symbol(state.r_traj[m + 1][i], [&](const Mode& md) {
        return std::complex<double>(std::exp(rho * params.nu * md.k2() / rate));
      });
      f[i].values() += rate * (ahead.values() - r[i].values());
    }
    if (!f.all_finite()) throw NumericalError("controlled_iterate: non-finite source");
    coeff.push_back(std::move(b));
    source.push_back(std::move(f));
  }
  return solve_ns(state, params, coeff, source);
}

LipschitzProbe probe_lipschitz(const NsState& state, const VectorTrajectory& a,
                               const VectorField& perturbation, const NsParams& params) {
  require_trajectory(a, params, "probe_lipschitz");
  VectorTrajectory b = a;
  for (std::size_t m = 1; m < b.size(); ++m) b[m] += perturbation;
  const VectorTrajectory pa = controlled_iterate(state, a, params);
  const VectorTrajectory pb = controlled_iterate(state, b, params);
  auto ratio = [&](NormSpec s) {
    const double in = sup_difference(a, b, s);
    if (!(in > 0.0)) throw std::invalid_argument("probe_lipschitz: zero perturbation");
    return sup_difference(pa, pb, s) / in;
  };
  return {ratio(NormSpec::hs(2)), ratio(NormSpec::h2inf())};
}

VectorTrajectory uncontrolled_iterate(const NsState& state, const VectorTrajectory& prev,
                                      const NsParams& params) {
  require_trajectory(prev, params, "uncontrolled_iterate");
  std::vector<VectorField> source;
  source.reserve(static_cast<std::size_t>(params.substeps));
  for (std::size_t m = 0; m < static_cast<std::size_t>(params.substeps); ++m)
    source.push_back(scaled(params.leray(nonlinear_source(prev[m], prev[m])), state.rho_l));
  return solve_ns(state, params,
                  std::span<const VectorField>(prev.data(), static_cast<std::size_t>(params.substeps)),
                  source);
}

ConstantsRecord estimate_constants(const NsState& state, const NsParams& params) {
  const Grid& g = state.v_end.grid();
  ConstantsRecord c;
  c.raw_C_l = max_norm(state.v_end, NormSpec::h2inf());
  c.raw_C_r = max_norm(state.r_end, NormSpec::h2inf());

  const CutoffSpec spec = params.cutoff_epsilon > 0.0
                              ? CutoffSpec{params.cutoff_epsilon, params.cutoff_style}
                              : CutoffSpec::for_grid(g, params.cutoff_style);
  for (const KernelSplit& s : build_kernel_splits(g.padded(2), spec)) {
    c.raw_C_K = std::max(c.raw_C_K, norm(s.near, NormSpec::l1()));
    c.raw_C_K2 = std::max(c.raw_C_K2, norm(s.far, NormSpec::hs(2)));
  }
  c.raw_C_s = product_constant();

  const double speed = state.v_end.max_abs() * std::sqrt(3.0);
  const int substeps =
      std::max(64, static_cast<int>(std::ceil(2.0 * speed / (kCflLimit * g.spacing()))));
  AdvectionDiffusionProblem p{1.0, params.nu, std::span<const VectorField>(&state.v_end, 1), {},
                              ScalarField(g), substeps};
  try {
    c.raw_C_prime = gaussian_time_integrated_l1(check_gaussian_majorant(p, 1).fitted);
  } catch (const NumericalError&) {
    // Drift too strong for a centered fit on this box: heat propagator only.
    p.coeff = {};
    try {
      c.raw_C_prime = gaussian_time_integrated_l1(check_gaussian_majorant(p, 1).fitted);
    } catch (const NumericalError&) {
      c.raw_C_prime = 0.0;
    }
  }

  c.C_l = std::max(1.0, c.raw_C_l);
  c.C_r = std::max(1.0, c.raw_C_r);
  c.C_K = std::max(1.0, c.raw_C_K);
  c.C_K2 = std::max(1.0, c.raw_C_K2);
  c.C_s = std::max(1.0, c.raw_C_s);
  c.C_prime = std::max(1.0, c.raw_C_prime);
  return c;
}

double ns_step_size(NsState& state, const NsParams& params) {
  double rho = 0.0;
  switch (params.rho_mode) {
    case RhoMode::harmonic:
      rho = step_size(state.l, params.c);
      break;
    case RhoMode::controlled:
      state.constants = estimate_constants(state, params);
      rho = step_size_controlled(state.constants).controlled;
      break;
    case RhoMode::fixed:
      rho = params.c;
      break;
  }
  return rho * params.rho_scale;
}

VectorField recover_velocity(const NsState& state) { return state.v_end - state.r_end; }

std::pair<NsState, IterationReport> run_time_step(const NsState& state, const NsParams& params) {
  if (!(params.tol > 0.0)) throw std::invalid_argument("run_time_step: tol must be positive");
  if (params.kmax < 1) throw std::invalid_argument("run_time_step: kmax must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  NsState next = state;
  next.rho_l = ns_step_size(next, params);
  IterationReport report;
  report.rho_harmonic = next.rho_l;

  const VectorTrajectory vstar = uncontrolled_first(next, params);
  next = control_update(next, vstar);
  VectorTrajectory cur = controlled_first(next, vstar);

  const NormSpec h2 = NormSpec::hs(2);
  const NormSpec h2inf = NormSpec::h2inf();
  const double floor = 1e-12 * (1.0 + max_norm(state.v_end, h2));
  const double floor_inf = 1e-12 * (1.0 + max_norm(state.v_end, h2inf));
  report.k_final = 1;
  while (!report.converged && report.k_final < params.kmax) {
    VectorTrajectory nxt = controlled_iterate(next, cur, params);
    const double inc = sup_difference(nxt, cur, h2);
    const double inc_inf = sup_difference(nxt, cur, h2inf);
    if (!report.increments.empty() && report.increments.back() > floor)
      report.ratios.push_back(inc / report.increments.back());
    if (!report.increments_h2inf.empty() && report.increments_h2inf.back() > floor_inf)
      report.ratios_h2inf.push_back(inc_inf / report.increments_h2inf.back());
    report.increments.push_back(inc);
    report.increments_h2inf.push_back(inc_inf);
    cur = std::move(nxt);
    ++report.k_final;
    report.converged = inc <= params.tol;
  }
  for (std::size_t m = 0; m < cur.size(); ++m)
    report.sup_norm_max = std::max(report.sup_norm_max, (cur[m] - next.r_traj[m]).max_abs());

  next.v_end = cur.back();
  next.r_end = next.r_traj.back();
  next.physical_time = state.physical_time + next.rho_l;

  LedgerRow row;
  row.l = state.l;
  row.rho_l = next.rho_l;
  row.k_iters = report.k_final;
  row.h2_norm = max_norm(next.v_end, h2);
  row.h2inf_norm = max_norm(next.v_end, h2inf);
  row.contraction_ratio_max = std::max(report.max_ratio(), report.max_ratio_h2inf());
  row.leray_l2 = l2_norm(params.leray(nonlinear_source(next.v_end, next.v_end)));
  row.div_max = divergence(recover_velocity(next)).max_abs();
  if (params.record_timing)
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  next.ledger.append(row);
  next.l = state.l + 1;
  return {std::move(next), std::move(report)};
}

NsRun run(const VectorField& initial, int steps, const NsParams& params) {
  if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");
  NsRun out{NsState(initial), {}};
  for (int s = 0; s < steps; ++s) {
    auto [st, rep] = run_time_step(out.state, params);
    out.state = std::move(st);
    out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace nsleray
