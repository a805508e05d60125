#include "nsleray/config.hpp"

#include "nsleray/diagnostics.hpp"
#include "nsleray/errors.hpp"
#include "nsleray/nsf1.hpp"
#include "nsleray/oracles.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nsleray {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  in.imbue(std::locale::classic());
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof())
    throw ConfigError("config: bad value for " + key + ": " + value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad value for " + key + ": " + value);
}

std::string one_of(const std::string& key, const std::string& value,
                   std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (value == a) return value;
  throw ConfigError("config: bad value for " + key + ": " + value);
}

CutoffStyle parse_style(const std::string& key, const std::string& value) {
  if (value == "smooth_bump") return CutoffStyle::smooth_bump;
  if (value == "paper_annulus") return CutoffStyle::paper_annulus;
  if (value == "sharp") return CutoffStyle::sharp;
  throw ConfigError("config: bad value for " + key + ": " + value);
}

using Setter = std::function<void(Config&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.n_points", [](Config& c, auto& k, auto& v) { c.n_points = parse_number<int>(k, v); }},
      {"grid.box_length",
       [](Config& c, auto& k, auto& v) { c.box_length = parse_number<double>(k, v); }},
      {"nu", [](Config& c, auto& k, auto& v) { c.nu = parse_number<double>(k, v); }},
      {"rho.c", [](Config& c, auto& k, auto& v) { c.rho_c = parse_number<double>(k, v); }},
      {"rho.mode", [](Config& c, auto& k, auto& v) {
         c.rho_mode = one_of(k, v, {"harmonic", "controlled", "fixed"});
       }},
      {"rho.scale", [](Config& c, auto& k, auto& v) { c.rho_scale = parse_number<double>(k, v); }},
      {"steps", [](Config& c, auto& k, auto& v) { c.steps = parse_number<int>(k, v); }},
      {"cutoff.epsilon",
       [](Config& c, auto& k, auto& v) { c.cutoff_epsilon = parse_number<double>(k, v); }},
      {"cutoff.style", [](Config& c, auto& k, auto& v) { c.cutoff_style = parse_style(k, v); }},
      {"picard.tol", [](Config& c, auto& k, auto& v) { c.picard_tol = parse_number<double>(k, v); }},
      {"picard.kmax", [](Config& c, auto& k, auto& v) { c.picard_kmax = parse_number<int>(k, v); }},
      {"substeps", [](Config& c, auto& k, auto& v) { c.substeps = parse_number<int>(k, v); }},
      {"padding", [](Config& c, auto& k, auto& v) { c.padding = parse_number<int>(k, v); }},
      {"leray", [](Config& c, auto& k, auto& v) { c.leray = one_of(k, v, {"spectral", "kernel"}); }},
      {"initial.kind", [](Config& c, auto& k, auto& v) {
         c.initial_kind = one_of(k, v, {"beltrami", "colehopf", "nsf1-file", "random-solenoidal"});
       }},
      {"initial.amplitude",
       [](Config& c, auto& k, auto& v) { c.initial_amplitude = parse_number<double>(k, v); }},
      {"initial.file", [](Config& c, auto&, auto& v) { c.initial_file = v; }},
      {"seed", [](Config& c, auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"trials", [](Config& c, auto& k, auto& v) { c.trials = parse_number<int>(k, v); }},
      {"oracle.time", [](Config& c, auto& k, auto& v) { c.oracle_time = parse_number<double>(k, v); }},
      {"output.dump_fields", [](Config& c, auto& k, auto& v) { c.dump_fields = parse_bool(k, v); }},
      {"output.timing", [](Config& c, auto& k, auto& v) { c.timing = parse_bool(k, v); }},
  };
  return table;
}

void validate(const Config& c) {
  try {
    (void)c.grid();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("config: ") + what);
  };
  require(c.nu > 0.0, "nu must be positive");
  require(c.rho_c > 0.0, "rho.c must be positive");
  require(c.rho_scale > 0.0, "rho.scale must be positive");
  require(c.steps >= 1, "steps must be >= 1");
  require(c.picard_tol > 0.0, "picard.tol must be positive");
  require(c.picard_kmax >= 1, "picard.kmax must be >= 1");
  require(c.substeps >= 1, "substeps must be >= 1");
  require(c.padding >= 1, "padding must be >= 1");
  require(c.trials >= 1, "trials must be >= 1");
  require(c.cutoff_epsilon >= 0.0, "cutoff.epsilon must be >= 0");
  require(c.initial_kind != "nsf1-file" || !c.initial_file.empty(),
          "initial.file required for nsf1-file");
}

}  // namespace

CutoffSpec Config::cutoff() const {
  return cutoff_epsilon > 0.0 ? CutoffSpec{cutoff_epsilon, cutoff_style}
                              : CutoffSpec::for_grid(grid(), cutoff_style);
}

Config parse_config(std::istream& in) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("config: unknown key " + key);
    it->second(c, key, value);
  }
  validate(c);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: not found: " + path.string());
  return parse_config(in);
}

VectorField make_initial(const Config& c) {
  const Grid g = c.grid();
  const double a = c.initial_amplitude;
  if (c.initial_kind == "beltrami") return beltrami(g, 0.0, c.nu, {a, a, a}).first;
  if (c.initial_kind == "colehopf") return gradient(cole_hopf_potential(g, a));
  if (c.initial_kind == "random-solenoidal") return random_solenoidal(g, c.seed, a);
  try {
    VectorField v = read_nsf1_vector(c.initial_file, c.box_length);
    require_same_grid(v.grid(), g);
    return v;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: initial.file: ") + e.what());
  }
}

BurgersParams burgers_params(const Config& c) {
  BurgersParams p;
  p.nu = c.nu;
  p.c = c.rho_c;
  p.tol = c.picard_tol;
  p.kmax = c.picard_kmax;
  p.substeps = c.substeps;
  p.record_timing = c.timing;
  return p;
}

NsParams ns_params(const Config& c) {
  NsParams p;
  p.nu = c.nu;
  p.c = c.rho_c;
  p.rho_mode = c.rho_mode == "controlled" ? RhoMode::controlled
               : c.rho_mode == "fixed"    ? RhoMode::fixed
                                          : RhoMode::harmonic;
  p.rho_scale = c.rho_scale;
  p.tol = c.picard_tol;
  p.kmax = c.picard_kmax;
  p.substeps = c.substeps;
  p.cutoff_style = c.cutoff_style;
  p.cutoff_epsilon = c.cutoff_epsilon;
  p.record_timing = c.timing;
  if (c.leray == "kernel") p.leray = LerayOperator(c.grid(), c.cutoff(), c.padding);
  return p;
}

}  // namespace nsleray
