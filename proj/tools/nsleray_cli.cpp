#include "nsleray/config.hpp"
#include "nsleray/diagnostics.hpp"
#include "nsleray/errors.hpp"
#include "nsleray/kernels.hpp"
#include "nsleray/leray.hpp"
#include "nsleray/nsf1.hpp"
#include "nsleray/oracles.hpp"
#include "nsleray/scheme_burgers.hpp"
#include "nsleray/scheme_ns.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace nsleray;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<int> steps;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Config load(const Options& o) {
  Config c = load_config(o.config);
  if (o.steps) {
    if (*o.steps < 1) throw ConfigError("config: steps must be >= 1");
    c.steps = *o.steps;
  }
  fs::create_directories(o.out);
  return c;
}

std::ofstream open_out(const Options& o, const std::string& name) {
  std::ofstream f(fs::path(o.out) / name);
  if (!f) throw ConfigError("config: cannot write " + (fs::path(o.out) / name).string());
  return f;
}

void write_ledger(const Options& o, const NormLedger& ledger) {
  auto f = open_out(o, "ledger.csv");
  ledger.write_csv(f);
}

int run_burgers(const Options& o) {
  const Config c = load(o);
  const VectorField u0 = make_initial(c);
  const BurgersParams p = burgers_params(c);
  BurgersState state(u0);
  bool converged = true;
  double sup_max = u0.max_abs();
  for (int s = 0; s < c.steps; ++s) {
    auto [next, rep] = run_time_step(state, p);
    state = std::move(next);
    converged = converged && rep.converged;
    sup_max = std::max(sup_max, rep.sup_norm_max);
    if (c.dump_fields)
      write_nsf1(fs::path(o.out) / ("u_l" + std::to_string(state.l - 1)), state.u_end);
  }
  write_ledger(o, state.ledger);
  auto summary = open_out(o, "summary.txt");
  summary << "physical_time " << fmt(state.physical_time) << '\n';
  summary << "sup_norm_initial " << fmt(u0.max_abs()) << '\n';
  summary << "sup_norm_max " << fmt(sup_max) << '\n';
  if (c.initial_kind == "colehopf") {
    const VectorField exact =
        cole_hopf(cole_hopf_potential(c.grid(), c.initial_amplitude), c.nu, state.physical_time);
    summary << "colehopf_sup_error " << fmt(max_norm(state.u_end - exact, NormSpec::linf()))
            << '\n';
  }
  if (!converged) {
    std::cerr << "numerical: picard iteration did not converge\n";
    return 2;
  }
  return 0;
}

int run_ns(const Options& o) {
  const Config c = load(o);
  const NsParams p = ns_params(c);
  NsState state(make_initial(c));
  bool converged = true;
  for (int s = 0; s < c.steps; ++s) {
    auto [next, rep] = run_time_step(state, p);
    state = std::move(next);
    converged = converged && rep.converged;
    if (c.dump_fields) {
      const std::string tag = "_l" + std::to_string(state.l - 1);
      write_nsf1(fs::path(o.out) / ("v" + tag), recover_velocity(state));
      write_nsf1(fs::path(o.out) / ("r" + tag), state.r_end);
      write_nsf1(fs::path(o.out) / ("gradp" + tag),
                 p.leray(nonlinear_source(state.v_end, state.v_end)));
    }
  }
  write_ledger(o, state.ledger);
  if (!converged) {
    std::cerr << "numerical: picard iteration did not converge\n";
    return 2;
  }
  return 0;
}

int verify_kernels(const Options& o) {
  const Config c = load(o);
  const Grid g = c.grid().padded(c.padding);
  const CutoffSpec spec = c.cutoff();
  auto f = open_out(o, "kernels.csv");
  f << "axis,epsilon,near_l1,far_l2,far_h2,split_error\n";
  for (const KernelSplit& s : build_kernel_splits(g, spec)) {
    const int n = g.points();
    double err = 0.0;
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
          if (ix == 0 && iy == 0 && iz == 0) continue;
          MultiIndex alpha{0, 0, 0};
          alpha[static_cast<std::size_t>(s.axis)] = 1;
          const double k = poisson_kernel(
              Point(g.displacement(ix), g.displacement(iy), g.displacement(iz)), alpha);
          err = std::max(err, std::abs(s.near(ix, iy, iz) + s.far(ix, iy, iz) - k));
        }
    f << s.axis << ',' << fmt(spec.epsilon) << ',' << fmt(norm(s.near, NormSpec::l1())) << ','
      << fmt(norm(s.far, NormSpec::l2())) << ',' << fmt(norm(s.far, NormSpec::hs(2))) << ','
      << fmt(err) << '\n';
    if (c.dump_fields) {
      write_nsf1(fs::path(o.out) / ("near_" + std::to_string(s.axis) + ".nsf1"), s.near);
      write_nsf1(fs::path(o.out) / ("far_" + std::to_string(s.axis) + ".nsf1"), s.far);
    }
  }
  return 0;
}

int verify_inequalities(const Options& o) {
  const Config c = load(o);
  const InequalityReport rep = verify_inequality_suite(c.seed, c.trials, c.n_points);
  auto f = open_out(o, "inequalities.csv");
  f << "name,evaluations,violations,max_ratio\n";
  for (const auto& ch : rep.checks)
    f << ch.name << ',' << ch.evaluations << ',' << ch.violations << ',' << fmt(ch.max_ratio)
      << '\n';
  f << "product_constant,,," << fmt(rep.product_constant) << '\n';
  write_summary(std::cout, rep);
  if (rep.violations() > 0) {
    std::cerr << "numerical: " << rep.violations() << " inequality violations\n";
    return 2;
  }
  return 0;
}

int verify_contraction(const Options& o) {
  const Config c = load(o);
  const NsParams p = ns_params(c);
  const NsState state(make_initial(c));
  const auto [next, rep] = run_time_step(state, p);
  auto f = open_out(o, "contraction.csv");
  f << "k,increment_h2,ratio_h2,increment_h2inf,ratio_h2inf\n";
  for (std::size_t k = 0; k < rep.increments.size(); ++k) {
    f << k + 2 << ',' << fmt(rep.increments[k]) << ',';
    if (k >= 1 && k - 1 < rep.ratios.size()) f << fmt(rep.ratios[k - 1]);
    f << ',' << fmt(rep.increments_h2inf[k]) << ',';
    if (k >= 1 && k - 1 < rep.ratios_h2inf.size()) f << fmt(rep.ratios_h2inf[k - 1]);
    f << '\n';
  }
  const double worst = std::max(rep.max_ratio(), rep.max_ratio_h2inf());
  std::cout << "rho_l " << fmt(next.rho_l) << "\nmax_ratio " << fmt(worst) << '\n';
  if (worst > 0.5 + 1e-3) {
    std::cerr << "numerical: contraction ratio " << fmt(worst) << " exceeds 1/2\n";
    return 2;
  }
  if (!rep.converged) {
    std::cerr << "numerical: picard iteration did not converge\n";
    return 2;
  }
  return 0;
}

int estimate(const Options& o) {
  const Config c = load(o);
  const NsState state(make_initial(c));
  const ConstantsRecord k = estimate_constants(state, ns_params(c));
  const StepSizes rho = step_size_controlled(k);
  auto f = open_out(o, "constants.csv");
  f << "name,value,raw\n";
  f << "C_l," << fmt(k.C_l) << ',' << fmt(k.raw_C_l) << '\n';
  f << "C_r," << fmt(k.C_r) << ',' << fmt(k.raw_C_r) << '\n';
  f << "C_K," << fmt(k.C_K) << ',' << fmt(k.raw_C_K) << '\n';
  f << "C_K2," << fmt(k.C_K2) << ',' << fmt(k.raw_C_K2) << '\n';
  f << "C_s," << fmt(k.C_s) << ',' << fmt(k.raw_C_s) << '\n';
  f << "C_prime," << fmt(k.C_prime) << ',' << fmt(k.raw_C_prime) << '\n';
  f << "rho_controlled," << fmt(rho.controlled) << ",\n";
  f << "rho_uncontrolled," << fmt(rho.uncontrolled) << ",\n";
  return 0;
}

int dump_oracle(const Options& o) {
  const Config c = load(o);
  const Grid g = c.grid();
  const double a = c.initial_amplitude;
  if (c.initial_kind == "colehopf") {
    write_nsf1(fs::path(o.out) / "u", cole_hopf(cole_hopf_potential(g, a), c.nu, c.oracle_time));
    return 0;
  }
  if (c.initial_kind != "beltrami")
    throw ConfigError("config: dump-oracle needs initial.kind beltrami or colehopf");
  const auto [v, p] = beltrami(g, c.oracle_time, c.nu, {a, a, a});
  write_nsf1(fs::path(o.out) / "v", v);
  write_nsf1(fs::path(o.out) / "p.nsf1", p);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leray-form Burgers and Navier-Stokes scheme runner"};
  app.require_subcommand(1);
  Options opt;
  int (*action)(const Options&) = nullptr;

  auto add = [&](const char* name, const char* help, int (*fn)(const Options&), bool steps) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "key = value configuration file")->required();
    sub->add_option("--out", opt.out, "output directory");
    if (steps) sub->add_option("--steps", opt.steps, "number of macro steps");
    sub->callback([&action, fn] { action = fn; });
  };
  add("run-burgers", "Burgers scheme, ledger.csv", run_burgers, true);
  add("run-ns", "controlled Navier-Stokes scheme, ledger.csv", run_ns, true);
  add("verify-kernels", "kernel split norms, kernels.csv", verify_kernels, false);
  add("verify-inequalities", "Young/source/product suite, inequalities.csv", verify_inequalities,
      false);
  add("verify-contraction", "one NS macro step, contraction.csv", verify_contraction, false);
  add("estimate-constants", "step-size constants, constants.csv", estimate, false);
  add("dump-oracle", "exact solution as NSF1", dump_oracle, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return action(opt);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical: " << e.what() << '\n';
    return 2;
  }
}
