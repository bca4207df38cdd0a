#pragma once

// End-to-end checks of the stability chain for the Pexider quadratic
// equation on orthogonal pairs: premise sup, the h and f - g bounds, the
// Jensen-type bound, the doubling bound via a Thalesian y0, the Hyers limit,
// its additive/quadratic split, and the uniqueness and degenerate cases.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthostab/exec.hpp"
#include "orthostab/function_models.hpp"
#include "orthostab/hyers.hpp"
#include "orthostab/orthogonality.hpp"

namespace orthostab {

inline constexpr const char* kReportSchema = "orthostab-report-v1";

/// A hypothesis of the theorem is not met by the input (f not odd, f not
/// even). `code()` is a stable token such as "ODD_VIOLATION".
class HypothesisViolation : public std::runtime_error {
 public:
  HypothesisViolation(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline double numerical_slack(double bound) { return 1e-9 * (1.0 + bound); }

struct CheckResult {
  std::string name;
  std::string bound_formula;       // e.g. "6*eps"
  std::optional<double> constant;  // multiplier of eps when the bound is c*eps
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;             // bound - measured
  bool pass = false;
  std::vector<Vector> witness;     // argmax point(s)
  std::size_t count = 0;           // items the max ran over
};

CheckResult make_check(std::string name, std::string formula, std::optional<double> constant,
                       double measured, double bound, std::vector<Vector> witness = {},
                       std::size_t count = 0);

enum class EpsilonMode { Design, Sampled };

std::string to_string(EpsilonMode m);

struct TheoremCheckConfig {
  std::size_t n_pairs = 10000;
  std::size_t n_probes = 1000;        // base points; the probe set adds their negatives
  std::size_t n_limit_pairs = 1000;   // fresh pairs for the limit's Jensen check
  std::size_t n_part_pairs = 200;     // pairs for T/Q residual diagnostics
  std::size_t symmetry_samples = 1000;
  int n_max = 40;
  double stop_tol = 1e-12;
  EpsilonMode epsilon_mode = EpsilonMode::Sampled;
  std::uint64_t seed = 0;
  double bound_scale = 1.0;           // < 1 shrinks every bound (harness self-test)
  double r_lo = 0.1;
  double r_hi = 10.0;
  Exec exec = Exec::Parallel;
  bool keep_traces = false;

  void validate() const;
};

struct PremiseSup {
  double epsilon_sampled = 0.0;
  double scale = 0.0;  // largest term magnitude seen, for rounding-level comparisons
  std::optional<VectorPair> argmax;
  std::size_t n_pairs = 0;
};

PremiseSup premise_sup(const PexiderTriple& triple, PairSampler& sampler, std::size_t n_pairs,
                       Exec exec = Exec::Parallel);
PremiseSup premise_sup(const PexiderTriple& triple, std::span<const VectorPair> pairs,
                       Exec exec = Exec::Parallel);

struct HyersSummary {
  std::size_t probes = 0;
  std::map<std::string, std::size_t> verdicts;
  int min_stop_n = 0;
  int max_stop_n = 0;
  double max_tail_bound = 0.0;
};

HyersSummary summarize(const std::vector<HyersTrace>& traces);

struct DecompositionDiagnostics {
  Matrix linear_fit;
  double linear_fit_residual = 0.0;
  double quadratic_fit_residual = 0.0;
  double additive_max_norm = 0.0;
  double quadratic_max_norm = 0.0;
  PartResiduals parts;
};

struct StabilityReport {
  std::string schema = kReportSchema;
  std::string relation;
  std::string status = "ok";  // "ok" or "diverged"
  std::string diagnostic;
  double epsilon_design = 0.0;
  double epsilon_sampled = 0.0;
  double epsilon_used = 0.0;
  double odd_residual = 0.0;
  std::optional<VectorPair> symmetry_witness;
  std::size_t thales_attempted = 0;
  std::size_t thales_skipped = 0;
  HyersSummary hyers;
  std::optional<DecompositionDiagnostics> decomposition;
  std::vector<CheckResult> checks;
  TheoremCheckConfig config;
  std::vector<HyersTrace> traces;  // probe traces when config.keep_traces

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

// The probe set verify_theorem uses for a given config (negation closed).
std::vector<Vector> theorem_probes(const TheoremCheckConfig& cfg, std::size_t dim);

/// Runs the whole chain in proof order. Throws HypothesisViolation
/// ("ODD_VIOLATION") when f is not odd on the probes. A diverged Hyers run
/// ends the report early with status "diverged".
StabilityReport verify_theorem(const PexiderTriple& triple, const TheoremCheckConfig& cfg);

struct UniquenessReport {
  std::string schema = kReportSchema;
  std::string status = "ok";
  double epsilon = 0.0;
  int n_max_first = 0;
  int n_max_second = 0;
  int stop_first = 0;
  int stop_second = 0;
  std::vector<int> scales{1, 2, 4, 8};
  // scaling[p][j] = ||T(s_j x_p) - T'(s_j x_p)|| / s_j
  std::vector<std::vector<double>> scaling;
  std::vector<double> scaling_sup;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// Reruns the pipeline with (seed, n_max) and (alt_seed, n_max - 5) and
/// compares A, T and Q from the two runs on the first run's probes.
UniquenessReport uniqueness_probe(const PexiderTriple& triple, const TheoremCheckConfig& cfg,
                                  std::uint64_t alt_seed);

enum class DegenerateMode { GEqLambdaF, HEqLambdaF };

std::string to_string(DegenerateMode m);
DegenerateMode degenerate_mode_from_string(const std::string& s);

struct DegenerateReport {
  std::string schema = kReportSchema;
  std::string status = "ok";
  DegenerateMode mode = DegenerateMode::GEqLambdaF;
  double lambda = 0.0;
  double epsilon = 0.0;
  double amplitude = 0.0;
  double epsilon_sampled = 0.0;
  HyersSummary hyers;
  std::vector<CheckResult> checks;

  bool passed() const;
};

// Triple realizing the tie g = lambda f (mode i) or h = lambda f (mode ii).
PexiderTriple degenerate_triple(DegenerateMode mode, double lambda, double eps, std::uint64_t seed,
                                std::size_t dim, OrthoRelation rel);

/// Throws std::invalid_argument for lambda = 1 in mode i or lambda = 0 in
/// mode ii.
DegenerateReport remark_24_degenerate(DegenerateMode mode, double lambda, double eps,
                                      const TheoremCheckConfig& cfg, std::size_t dim = 2,
                                      OrthoRelation rel = OrthoRelation::inner_product());

struct Z2Certificate {
  int grid_radius = 0;
  std::size_t grid_points = 0;
  std::size_t pairs_checked = 0;
  std::size_t failures = 0;
  int value_at_zero = 0;
  bool real_identity_holds = false;
  double real_shifted_additivity_max = 0.0;

  bool passed() const { return failures == 0 && value_at_zero != 0 && real_identity_holds; }
};

/// Exhaustive check of A(x + y) + A(x - y) = 2 A(x) in Z_2 for A = 1 on the
/// integer grid [-r, r]^2, all ordered pairs.
Z2Certificate z2_remark_check(int grid_radius);

struct EvenExploreReport {
  std::string schema = kReportSchema;
  std::string status = "ok";
  double epsilon_sampled = 0.0;
  double sup_f_minus_q = 0.0;
  double sup_g_minus_q = 0.0;
  double sup_h_minus_q = 0.0;
  // sup / eps; empty when eps is zero and the sup is not.
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  double orthogonal_quadratic_residual = 0.0;
  HyersSummary hyers;
};

/// Candidate quadratic Q from 4^-n f(2^n x) for even f. No bound is asserted.
/// Throws HypothesisViolation ("EVEN_VIOLATION") when f is not even.
EvenExploreReport even_case_explore(const PexiderTriple& triple, const TheoremCheckConfig& cfg);

}  // namespace orthostab
