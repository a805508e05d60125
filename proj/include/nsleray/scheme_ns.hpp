#pragma once

#include "nsleray/diagnostics.hpp"
#include "nsleray/field.hpp"
#include "nsleray/kernels.hpp"
#include "nsleray/leray.hpp"
#include "nsleray/parabolic.hpp"
#include "nsleray/scheme_burgers.hpp"

#include <utility>
#include <vector>

namespace nsleray {

/// Constants entering the controlled step size, floored at 1. The raw_*
/// members keep the measured values before flooring.
struct ConstantsRecord {
  double C_l = 1.0;
  double C_r = 1.0;
  double C_K = 1.0;
  double C_K2 = 1.0;
  double C_s = 1.0;
  double C_prime = 1.0;

  double raw_C_l = 0.0;
  double raw_C_r = 0.0;
  double raw_C_K = 0.0;
  double raw_C_K2 = 0.0;
  double raw_C_s = 0.0;
  double raw_C_prime = 0.0;
};

struct StepSizes {
  double controlled;
  double uncontrolled;
};

/// controlled = 1 / (2 (n+1)^2 4 n^4 (C_l + C_r) C_K2 C_s C_prime),
/// uncontrolled = 1 / (4 (n+1)^2 C_prime 3 n^2 C_s C_K2 C_l).
StepSizes step_size_controlled(const ConstantsRecord& c, int n = kDim);

enum class RhoMode {
  /// c / l
  harmonic,
  /// step_size_controlled with constants measured at the start of each step
  controlled,
  /// the value of c for every step
  fixed,
};

struct NsParams {
  double nu = 0.1;
  RhoMode rho_mode = RhoMode::harmonic;
  double c = 0.05;
  /// Multiplies whatever rho_mode produces.
  double rho_scale = 1.0;
  double tol = 1e-10;
  int kmax = 30;
  int substeps = kDefaultSubsteps;
  LerayOperator leray;
  /// Cutoff used for the kernel constants C_K, C_K2.
  CutoffStyle cutoff_style = CutoffStyle::smooth_bump;
  double cutoff_epsilon = 0.0;  // 0: CutoffSpec::for_grid
  bool record_timing = false;
};

/// v_end is the controlled velocity v + r at the start of macro step l.
struct NsState {
  int l = 1;
  double rho_l = 0.0;
  VectorField v_end;
  VectorField r_end;
  VectorTrajectory r_traj;
  ConstantsRecord constants;
  NormLedger ledger;
  double physical_time = 0.0;

  /// Zero initial control, so v_end = h.
  explicit NsState(VectorField initial);
};

/// Linear problem with coefficient v_end and Leray forcing rho * (-grad p)
/// of v_end held constant; the uncontrolled first iterate.
VectorTrajectory uncontrolled_first(const NsState& state, const NsParams& params);

/// r(tau) = r_end - (vstar(tau) - v_end) on every substep.
NsState control_update(const NsState& state, const VectorTrajectory& vstar);

/// vstar(tau) + r(tau) - r_end, which equals v_end up to rounding.
VectorTrajectory controlled_first(const NsState& state, const VectorTrajectory& vstar);

/// Next controlled iterate. With b = prev - r the equation for v + r reads
///   d/dtau w = rho nu Laplace w - rho (b . grad) w
///              + dr/dtau - rho nu Laplace r + rho (b . grad) r
///              + rho G[Q(w, w) - 2 Q(w, r) + Q(r, r)],
/// Q(f, g) = sum f_{k,j} g_{j,k} and G the Leray operator; all terms frozen at
/// the left end of each substep, dr/dtau - rho nu Laplace r as
/// (E^{-1} r(m+1) - r(m)) / dtau with E the substep heat multiplier.
VectorTrajectory controlled_iterate(const NsState& state, const VectorTrajectory& prev,
                                    const NsParams& params);

struct LipschitzProbe {
  double h2 = 0.0;
  double h2inf = 0.0;
};

/// Lipschitz ratio of the controlled Picard map at a:
/// sup|Phi(a) - Phi(a + d)| / sup|d| in H2 and in H2inf, with d the
/// perturbation added to every sample but the first. Needs state.rho_l and
/// state.r_traj set.
LipschitzProbe probe_lipschitz(const NsState& state, const VectorTrajectory& a,
                               const VectorField& perturbation, const NsParams& params);

/// Picard iterate of the plain Leray form (coefficient prev, forcing G[Q(prev, prev)]).
VectorTrajectory uncontrolled_iterate(const NsState& state, const VectorTrajectory& prev,
                                      const NsParams& params);

/// Constants from the state (C_l, C_r: largest sup-norm over derivatives of
/// order <= 2 of v_end and r_end), the kernel split sampled on the state grid
/// padded by 2 (C_K:
/// L1 of the near part, C_K2: H2 of the far part, largest over axes), the
/// shared product corpus (C_s) and the time-integrated order-1 Gaussian
/// majorant fitted for the propagator with coefficient v_end in physical time
/// (C_prime).
ConstantsRecord estimate_constants(const NsState& state, const NsParams& params);

double ns_step_size(NsState& state, const NsParams& params);

std::pair<NsState, IterationReport> run_time_step(const NsState& state, const NsParams& params);

/// v = v_end - r_end.
VectorField recover_velocity(const NsState& state);

struct NsRun {
  NsState state;
  std::vector<IterationReport> reports;
};

NsRun run(const VectorField& initial, int steps, const NsParams& params);

}  // namespace nsleray
