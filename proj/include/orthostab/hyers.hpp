#pragma once

// Hyers sequences 2^-n f(2^n x) and 4^-n f(2^n x), residual checks for the
// Jensen-type and orthogonal-additivity identities, and the odd/even split of
// a sampled limit into its additive and quadratic parts.

#include <optional>
#include <string>
#include <vector>

#include "orthostab/exec.hpp"
#include "orthostab/function_models.hpp"
#include "orthostab/linalg.hpp"
#include "orthostab/orthogonality.hpp"

namespace orthostab {

enum class HyersScaling { Additive, Quadratic };
enum class HyersVerdict { Converged, Diverged, BudgetExhausted };

std::string to_string(HyersVerdict v);
std::string to_string(HyersScaling s);

struct HyersOptions {
  int n_max = 40;
  double stop_tol = 1e-12;
  // Premise bound used for the tail estimate; 0 leaves tail_bound at 0.
  double epsilon = 0.0;
  double overflow_guard = 1e300;
};

struct HyersIterate {
  int n = 0;
  Vector value;
  double delta = 0.0;  // ||value(n) - value(n-1)||, 0 for n = 0
};

/// Iterates of a Hyers sequence at one point.
///
/// Converged: the last delta is <= stop_tol and is at most 0.75 of the
/// largest of the five deltas before it (or all recent deltas are already
/// below stop_tol). Diverged: five consecutive deltas each grew by >= 1.5x.
/// Otherwise the run stops at n_max (or at the overflow guard) with
/// BudgetExhausted and the last iterate is still the best estimate.
struct HyersTrace {
  Vector x;
  HyersScaling scaling = HyersScaling::Additive;
  std::vector<HyersIterate> iterates;
  HyersVerdict verdict = HyersVerdict::BudgetExhausted;
  int stop_n = 0;
  // Additive: 6 eps 2^-n. Quadratic: eps 4^-n.
  double tail_bound = 0.0;
  std::string diagnostic;

  const Vector& limit() const { return iterates.back().value; }
  bool usable() const { return verdict != HyersVerdict::Diverged; }
};

HyersTrace hyers_limit(const VectorMap& f, const Vector& x, const HyersOptions& opts,
                       HyersScaling scaling);

inline HyersTrace additive_hyers_limit(const VectorMap& f, const Vector& x, const HyersOptions& opts = {}) {
  return hyers_limit(f, x, opts, HyersScaling::Additive);
}

inline HyersTrace quadratic_hyers_limit(const VectorMap& f, const Vector& x, const HyersOptions& opts = {}) {
  return hyers_limit(f, x, opts, HyersScaling::Quadratic);
}

double tail_bound(HyersScaling scaling, double epsilon, int n);

/// x -> last iterate of the Hyers run at x, evaluated lazily per point.
/// Throws std::runtime_error on a diverged run.
VectorMap hyers_limit_map(VectorMap f, HyersOptions opts, HyersScaling scaling);

VectorMap odd_part(VectorMap a);
VectorMap even_part(VectorMap a);

struct ResidualSummary {
  double max = 0.0;
  std::size_t count = 0;
  std::optional<VectorPair> argmax;
};

ResidualSummary summarize(std::span<const double> residuals, std::span<const VectorPair> pairs);

ResidualSummary jensen_residual(const VectorMap& map, const OrthoRelation& rel, PairSampler& sampler,
                                std::size_t n_pairs, Exec exec);
ResidualSummary orthogonal_additivity_residual(const VectorMap& map, const OrthoRelation& rel,
                                               PairSampler& sampler, std::size_t n_pairs, Exec exec);

/// A map known only at a finite probe set.
struct SampledMap {
  std::vector<Vector> probes;
  std::vector<Vector> values;
  std::string provenance;

  bool negation_closed() const;
  // Index of -probes[i]; throws if absent.
  std::vector<std::size_t> negation_index() const;
};

// Probe set of n random points together with their negatives (size 2n).
std::vector<Vector> negation_closed_probes(PairSampler& sampler, std::size_t n);

SampledMap sample_map(const VectorMap& map, std::vector<Vector> probes, std::string provenance, Exec exec);

struct LinearFit {
  Matrix matrix;
  double max_residual = 0.0;
};

struct QuadraticFit {
  std::vector<Matrix> forms;
  double max_residual = 0.0;
};

struct Decomposition {
  SampledMap additive;   // T(x) = (A(x) - A(-x)) / 2
  SampledMap quadratic;  // Q(x) = (A(x) + A(-x)) / 2
  LinearFit linear_fit;
  QuadraticFit quadratic_fit;
  double additive_max_norm = 0.0;
  double quadratic_max_norm = 0.0;
};

/// Parity split of a sampled limit. The least-squares fits are diagnostics
/// only: additive maps need not be linear, so linearity is never asserted.
/// Throws std::invalid_argument if the probe set is not closed under negation.
Decomposition decompose_T_Q(const SampledMap& a);

struct PartResiduals {
  double additive_jensen = 0.0;
  double additive_orthogonal_additivity = 0.0;
  double quadratic_jensen = 0.0;
  double quadratic_orthogonal_additivity = 0.0;
};

PartResiduals part_residuals(const VectorMap& a, std::span<const VectorPair> pairs, Exec exec);

}  // namespace orthostab
