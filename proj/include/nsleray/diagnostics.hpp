#pragma once

#include "nsleray/field.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace nsleray {

struct LedgerRow {
  int l = 0;
  double rho_l = 0.0;
  int k_iters = 0;
  double h2_norm = 0.0;
  double h2inf_norm = 0.0;
  double contraction_ratio_max = 0.0;
  double leray_l2 = 0.0;
  double div_max = 0.0;
  double runtime_ms = 0.0;
};

/// Per-macro-step norm records. Rows must arrive with strictly increasing l.
class NormLedger {
 public:
  void append(const LedgerRow& row);
  const std::vector<LedgerRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }

  static const char* csv_header();
  /// Header plus one line per row, 17 significant digits, C locale.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<LedgerRow> rows_;
};

struct GrowthAudit {
  double C2_star = 0.0;
  bool pass = false;
};

/// C2* = max(0, max_l (h2_norm(l) - h_norm) / l) over rows sorted by l; pass
/// iff C2* is finite and every per-step increment (with h2_norm(0) = h_norm)
/// is at most C2* + 1e-6.
GrowthAudit growth_audit(const NormLedger& ledger, double h_norm);
GrowthAudit growth_audit(std::vector<LedgerRow> rows, double h_norm);

// ---------------------------------------------------------------------------
// Random test fields. Gaussian spectra weighted by (1 + |k|^2)^{-decay},
// modes with any |index| > max_mode zeroed (default: the top third,
// max_mode = n / 3), scaled to sup-norm 1.

ScalarField random_field(const Grid& grid, std::mt19937_64& rng, int max_mode = -1,
                         double decay = 0.0);
ScalarField random_field(const Grid& grid, std::uint64_t seed, int max_mode = -1,
                         double decay = 0.0);

/// Curl of a random potential, scaled to sup-norm amplitude.
VectorField random_solenoidal(const Grid& grid, std::uint64_t seed, double amplitude,
                              int max_mode = 2);

/// Curl of a potential localized around the box center by a Gaussian of the
/// given width times a bump of radius 3 (the source of its nonlinear term
/// decays to zero well inside the box). Intended for boxes of side 2 pi.
VectorField compact_solenoidal(const Grid& grid, std::uint64_t seed, double width = 0.6);

// ---------------------------------------------------------------------------
// Inequality property suite.

struct InequalityCheck {
  std::string name;
  /// Largest lhs / rhs seen (0 when both sides vanish).
  double max_ratio = 0.0;
  int evaluations = 0;
  int violations = 0;
};

struct InequalityReport {
  std::vector<InequalityCheck> checks;
  /// Empirical product constant, see product_constant().
  double product_constant = 0.0;
  int violations() const;
  const InequalityCheck& check(const std::string& name) const;
  void merge(const InequalityReport& other);
};

inline constexpr double kInequalitySlack = 1e-8;
inline constexpr std::uint64_t kProductCorpusSeed = 7;
inline constexpr int kProductCorpusTrials = 100;
inline constexpr int kCorpusPoints = 32;

/// Young inequalities for (p, q, r) families with 1/p + 1/q = 1 + 1/r
/// ("young"), |f*g|_2 <= |f|_2 |g|_1 ("young_l2_l1"), |f*g|_inf <= |f|_2 |g|_2
/// and <= |f|_inf |g|_1 ("young_linf"), the pointwise source bound
/// ("source_pointwise", on the vector field (f, g, f - g)).
InequalityReport evaluate_inequalities(const ScalarField& f, const ScalarField& g);

/// Runs evaluate_inequalities on `trials` seeded random pairs on an n^3 grid
/// of side 2 pi and adds product_constant(seed, trials, points).
InequalityReport verify_inequality_suite(std::uint64_t seed, int trials,
                                         int points = kCorpusPoints);

/// max |fg|_{H2} / (|f|_{H2} |g|_{H2}) over `trials` seeded pairs of smooth
/// random fields (decay 2) on the unit cube, where constants give ratio 1.
double product_constant(std::uint64_t seed = kProductCorpusSeed,
                        int trials = kProductCorpusTrials, int points = kCorpusPoints);

/// Text summary, one line per check.
void write_summary(std::ostream& os, const InequalityReport& report);

}  // namespace nsleray
