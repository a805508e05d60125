#pragma once

#include "nsleray/diagnostics.hpp"
#include "nsleray/field.hpp"
#include "nsleray/parabolic.hpp"

#include <utility>
#include <vector>

namespace nsleray {

/// Picard increments and their ratios over one macro step. increments[0] is
/// the first iterate minus the start value; ratios[j] compares increments[j+1]
/// with increments[j] and is skipped once the earlier one is at rounding level.
struct IterationReport {
  std::vector<double> increments;
  std::vector<double> ratios;
  /// Same in the H^{2,inf} norm (NS scheme only).
  std::vector<double> increments_h2inf;
  std::vector<double> ratios_h2inf;
  int k_final = 0;
  bool converged = false;
  /// Largest sup-norm of the (physical) solution over the substeps.
  double sup_norm_max = 0.0;
  double rho_harmonic = 0.0;
  double rho_budget = 0.0;

  double max_ratio() const;
  double max_ratio_h2inf() const;
};

struct BurgersParams {
  double nu = 0.1;
  double c = 0.1;
  double tol = 1e-10;
  int kmax = 30;
  int substeps = kDefaultSubsteps;
  /// Cap rho_l by 0.5 / (1 + sup|u_end|).
  bool contraction_budget = true;
  bool record_timing = false;
};

struct BurgersState {
  int l = 1;
  double rho_l = 0.0;
  /// u at the start of macro step l.
  VectorField u_end;
  double physical_time = 0.0;
  NormLedger ledger;

  explicit BurgersState(VectorField initial) : u_end(std::move(initial)) {}
};

double step_size(int l, double c);

/// rho_l for the state's next step; fills the two candidates into report.
double burgers_step_size(const BurgersState& state, const BurgersParams& params,
                         IterationReport* report = nullptr);

/// Linear problem with the coefficient frozen at u_end.
VectorTrajectory first_iterate(const BurgersState& state, const BurgersParams& params);

/// Next Picard iterate: coefficient taken from prev at each substep.
VectorTrajectory picard_step(const VectorTrajectory& prev, const BurgersState& state,
                             const BurgersParams& params);

/// sup over samples of the largest component norm of a - b.
double sup_difference(const VectorTrajectory& a, const VectorTrajectory& b, NormSpec space);
double sup_difference(const VectorTrajectory& a, const VectorField& b, NormSpec space);

/// Iterates to tolerance; the state's rho_l is recomputed for step state.l.
std::pair<BurgersState, IterationReport> run_time_step(const BurgersState& state,
                                                       const BurgersParams& params);

struct BurgersRun {
  BurgersState state;
  std::vector<IterationReport> reports;
};

BurgersRun run(const VectorField& initial, int steps, const BurgersParams& params);

}  // namespace nsleray
