#include "nsleray/diagnostics.hpp"
#include "nsleray/oracles.hpp"
#include "nsleray/scheme_ns.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nsleray;

namespace {

const Grid kBox(16, 2.0 * kPi);
constexpr double kNu = 0.1;

NsParams fixed_params(double rho) {
  NsParams p;
  p.nu = kNu;
  p.rho_mode = RhoMode::fixed;
  p.c = rho;
  return p;
}

VectorField shear() {
  return VectorField(ScalarField::sample(kBox, [](double, double y, double z) { return std::sin(y) + 0.5 * std::cos(z); }),
                     ScalarField(kBox), ScalarField(kBox));
}

NsState prepared(const VectorField& v, double rho) {
  NsState s(v);
  s.rho_l = rho;
  return s;
}

double relative_l2(const VectorField& a, const VectorField& b) {
  return l2_norm(a - b) / l2_norm(b);
}

}  // namespace

TEST(NsStepSize, AllOnes) {
  const StepSizes s = step_size_controlled(ConstantsRecord{});
  EXPECT_NEAR(s.controlled, 1.0 / 20736.0, 1e-18);
  EXPECT_NEAR(s.controlled, 4.823e-5, 1e-8);
  EXPECT_NEAR(s.uncontrolled, 1.0 / 1728.0, 1e-18);
}

TEST(NsStepSize, ReciprocalInControlBound) {
  ConstantsRecord c;
  c.C_l = 3.0;
  c.C_r = 1.0;
  const double base = step_size_controlled(c).controlled;
  c.C_l = 7.0;
  EXPECT_NEAR(step_size_controlled(c).controlled, base / 2.0, 1e-18);
}

TEST(NsStepSize, RejectsUnnormalizedConstants) {
  ConstantsRecord c;
  c.C_s = 0.5;
  EXPECT_THROW(step_size_controlled(c), std::invalid_argument);
  EXPECT_THROW(step_size_controlled(ConstantsRecord{}, 0), std::invalid_argument);
}

TEST(NsScheme, UncontrolledFirstOfZero) {
  for (const VectorField& v : uncontrolled_first(prepared(VectorField(kBox), 0.05), fixed_params(0.05)))
    EXPECT_EQ(v.max_abs(), 0.0);
}

TEST(NsScheme, UncontrolledFirstOfShearIsAdvectionDiffusion) {
  const VectorField v = shear();
  const VectorTrajectory t = uncontrolled_first(prepared(v, 0.05), fixed_params(0.05));
  VectorAdvectionDiffusionProblem p{0.05, kNu, std::span<const VectorField>(&v, 1), {}, v,
                                    kDefaultSubsteps};
  const VectorTrajectory ref = solve(p);
  for (std::size_t m = 0; m < t.size(); ++m) EXPECT_LE((t[m] - ref[m]).max_abs(), 1e-12);
}

TEST(NsScheme, UncontrolledFirstOfBeltrami) {
  const double rho = 0.05;
  const VectorField v = beltrami(kBox, 0.0, kNu).first;
  const VectorTrajectory t = uncontrolled_first(prepared(v, rho), fixed_params(rho));
  EXPECT_LE(relative_l2(t.back(), reference_projection_solver(v, kNu, rho, 1e-3)), 1e-3);
}

TEST(NsScheme, ControlUpdateIdentity) {
  const double rho = 0.05;
  const VectorField v = random_solenoidal(kBox, 1, 1.0);
  NsState s = prepared(v, rho);
  s.r_end = random_solenoidal(kBox, 2, 0.3);
  const VectorTrajectory vstar = uncontrolled_first(s, fixed_params(rho));
  const NsState c = control_update(s, vstar);
  EXPECT_EQ((c.r_traj.front() - s.r_end).max_abs(), 0.0);
  const VectorTrajectory first = controlled_first(c, vstar);
  for (const VectorField& w : first) EXPECT_LE((w - v).max_abs(), 1e-12);
  EXPECT_LE((first.front() - c.r_traj.front() - recover_velocity(s)).max_abs(), 1e-12);
}

TEST(NsScheme, ControlOfStationaryDataVanishes) {
  NsState s = prepared(VectorField(kBox), 0.05);
  const VectorTrajectory vstar(kDefaultSubsteps + 1, VectorField(kBox));
  for (const VectorField& r : control_update(s, vstar).r_traj) EXPECT_EQ(r.max_abs(), 0.0);
}

TEST(NsScheme, ControlledFirstNeedsControl) {
  const NsState s = prepared(shear(), 0.05);
  EXPECT_THROW(controlled_first(s, VectorTrajectory(kDefaultSubsteps + 1, VectorField(kBox))),
               std::invalid_argument);
}

TEST(NsScheme, ZeroControlReducesToUncontrolled) {
  const double rho = 0.05;
  const NsParams p = fixed_params(rho);
  NsState s = prepared(random_solenoidal(kBox, 3, 1.0), rho);
  s.r_traj.assign(kDefaultSubsteps + 1, VectorField(kBox));
  const VectorTrajectory prev = uncontrolled_first(s, p);
  const VectorTrajectory a = controlled_iterate(s, prev, p);
  const VectorTrajectory b = uncontrolled_iterate(s, prev, p);
  for (std::size_t m = 0; m < a.size(); ++m) EXPECT_LE((a[m] - b[m]).max_abs(), 1e-10);
}

TEST(NsScheme, LipschitzRatioScalesWithStep) {
  const VectorField v = random_solenoidal(kBox, 4, 1.0);
  const VectorField d = random_solenoidal(kBox, 5, 0.1);
  auto probe = [&](double rho) {
    const NsParams p = fixed_params(rho);
    NsState s = prepared(v, rho);
    const VectorTrajectory vstar = uncontrolled_first(s, p);
    s = control_update(s, vstar);
    return probe_lipschitz(s, controlled_first(s, vstar), d, p);
  };
  const LipschitzProbe a = probe(0.005), b = probe(0.01);
  EXPECT_LT(b.h2, 0.5);
  EXPECT_LT(b.h2inf, 0.5);
  EXPECT_NEAR(b.h2 / a.h2, 2.0, 0.2);
  EXPECT_NEAR(b.h2inf / a.h2inf, 2.0, 0.2);
}

TEST(NsScheme, LipschitzProbeRejectsZeroPerturbation) {
  const double rho = 0.01;
  const NsParams p = fixed_params(rho);
  NsState s = prepared(shear(), rho);
  const VectorTrajectory vstar = uncontrolled_first(s, p);
  s = control_update(s, vstar);
  EXPECT_THROW(probe_lipschitz(s, controlled_first(s, vstar), VectorField(kBox), p),
               std::invalid_argument);
}

TEST(NsScheme, ControlledFixedPoint) {
  const double rho = 0.05;
  const NsParams p = fixed_params(rho);
  NsState s = prepared(beltrami(kBox, 0.0, kNu).first, rho);
  const VectorTrajectory vstar = uncontrolled_first(s, p);
  s = control_update(s, vstar);
  VectorTrajectory cur = controlled_first(s, vstar);
  double inc = 1.0;
  for (int k = 0; k < 30 && inc > 1e-12; ++k) {
    VectorTrajectory nxt = controlled_iterate(s, cur, p);
    inc = sup_difference(nxt, cur, NormSpec::hs(2));
    cur = std::move(nxt);
  }
  EXPECT_LE(sup_difference(controlled_iterate(s, cur, p), cur, NormSpec::hs(2)), 1e-10);
}

TEST(NsScheme, ZeroData) {
  const auto [next, rep] = run_time_step(NsState(VectorField(kBox)), fixed_params(0.05));
  EXPECT_EQ(next.v_end.max_abs(), 0.0);
  EXPECT_EQ(next.r_end.max_abs(), 0.0);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(next.ledger.size(), 1u);
}

TEST(NsScheme, OneStepBeltrami) {
  const double rho = 0.05;
  const VectorField h = beltrami(kBox, 0.0, kNu).first;
  const auto [next, rep] = run_time_step(NsState(h), fixed_params(rho));
  ASSERT_TRUE(rep.converged);
  const VectorField v = recover_velocity(next);
  EXPECT_LE(relative_l2(v, beltrami(kBox, rho, kNu).first), 2e-3);
  EXPECT_LE(relative_l2(v, reference_projection_solver(h, kNu, rho, 1e-3)), 2e-3);
  EXPECT_LE(divergence(v).max_abs(), 1e-6);
  EXPECT_LE(max_norm(next.v_end, NormSpec::hs(2)), max_norm(h, NormSpec::hs(2)) + 1.0);
  for (double r : rep.ratios) EXPECT_LE(r, 0.5);
  const LedgerRow& row = next.ledger.rows().back();
  EXPECT_EQ(row.l, 1);
  EXPECT_EQ(row.rho_l, rho);
  EXPECT_EQ(row.k_iters, rep.k_final);
}

TEST(NsScheme, RecoverVelocityWithoutControl) {
  const VectorField h = random_solenoidal(kBox, 5, 1.0);
  EXPECT_EQ((recover_velocity(NsState(h)) - h).max_abs(), 0.0);
}

TEST(NsScheme, RunChainsSteps) {
  const NsRun r = run(beltrami(kBox, 0.0, kNu).first, 3, fixed_params(0.02));
  EXPECT_EQ(r.state.ledger.size(), 3u);
  EXPECT_EQ(r.state.l, 4);
  EXPECT_NEAR(r.state.physical_time, 0.06, 1e-15);
  for (const LedgerRow& row : r.state.ledger.rows()) EXPECT_LE(row.div_max, 1e-6);
  EXPECT_THROW(run(r.state.v_end, 0, fixed_params(0.02)), std::invalid_argument);
}

TEST(Constants, ZeroFieldsFloor) {
  const ConstantsRecord c = estimate_constants(NsState(VectorField(kBox)), fixed_params(0.05));
  EXPECT_EQ(c.C_l, 1.0);
  EXPECT_EQ(c.C_r, 1.0);
  EXPECT_EQ(c.raw_C_l, 0.0);
  for (double v : {c.C_l, c.C_r, c.C_K, c.C_K2, c.C_s, c.C_prime}) EXPECT_GE(v, 1.0);
  EXPECT_TRUE(std::isfinite(c.raw_C_prime));
  EXPECT_GE(c.raw_C_prime, 0.0);
}

TEST(Constants, SharpCutoffNearPart) {
  const Grid g(64, 2.0 * kPi);
  NsParams p = fixed_params(0.05);
  const double R = 28.0 * g.spacing();
  p.cutoff_style = CutoffStyle::sharp;
  p.cutoff_epsilon = R;
  const ConstantsRecord c = estimate_constants(NsState(VectorField(g)), p);
  EXPECT_NEAR(c.raw_C_K, R / 2.0, 0.05 * R / 2.0);
}

TEST(Constants, SharedProductCorpus) {
  const ConstantsRecord c = estimate_constants(NsState(beltrami(kBox, 0.0, kNu).first), fixed_params(0.05));
  EXPECT_NEAR(c.raw_C_s, product_constant(), 1e-12);
  EXPECT_GE(c.raw_C_s, 0.1);
  EXPECT_LE(c.raw_C_s, 10.0);
  EXPECT_GE(c.raw_C_l, 1.0);
}

TEST(Constants, ControlledModeUsesMeasuredConstants) {
  NsParams p = fixed_params(0.05);
  p.rho_mode = RhoMode::controlled;
  NsState s(beltrami(kBox, 0.0, kNu).first);
  const double rho = ns_step_size(s, p);
  EXPECT_DOUBLE_EQ(rho, step_size_controlled(s.constants).controlled);
  p.rho_scale = 10.0;
  EXPECT_DOUBLE_EQ(ns_step_size(s, p), 10.0 * rho);
}
