#pragma once

// Orthogonality relations on R^d, the (O1)-(O4) axiom checks, the Thalesian
// solver, and seeded samplers for orthogonal pairs.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orthostab/linalg.hpp"
#include "orthostab/random.hpp"

namespace orthostab {

/// A bounded search (Thalesian root, BJ direction, pair sampling) ran out of
/// budget. This says nothing about whether a solution exists.
class SearchFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RelationKind { Trivial, InnerProduct, BirkhoffJames, AOrtho };

struct OrthoRelation {
  RelationKind kind = RelationKind::InnerProduct;
  NormSpec norm;         // BirkhoffJames only
  Matrix a;              // AOrtho only
  double tolerance = 1e-8;

  static OrthoRelation trivial();
  static OrthoRelation inner_product(double tol = 1e-8);
  static OrthoRelation birkhoff_james(NormSpec norm, double tol = 1e-8);
  static OrthoRelation a_ortho(Matrix a, double tol = 1e-8);

  // Rank threshold for linear-independence decisions: sigma_min/sigma_max.
  static constexpr double kRankThreshold = 1e-10;

  std::string name() const;
  // True for relations that are bilinear in (x, y), hence exactly homogeneous.
  bool is_bilinear() const { return kind == RelationKind::InnerProduct || kind == RelationKind::AOrtho; }
};

/// Verdict plus the defect it was decided on: orthogonal iff residual <= threshold.
///   InnerProduct  |<x,y>| / (|x| |y|)
///   AOrtho        |<Ax,y>| / (|Ax| |y|)
///   BirkhoffJames 1 - min_l |x + l y| / |x|
///   Trivial       1 - sigma_min / sigma_max of the normalized 2 x d matrix
struct OrthoVerdict {
  bool orthogonal = false;
  double residual = 0.0;
  double threshold = 0.0;
};

OrthoVerdict decide(const OrthoRelation& rel, const Vector& x, const Vector& y);
bool is_orthogonal(const OrthoRelation& rel, const Vector& x, const Vector& y);

// sigma_min / sigma_max of the 2 x d matrix with rows x/|x|, y/|y|.
double independence_ratio(const Vector& x, const Vector& y);

struct BjMinimum {
  double lambda_star = 0.0;
  double min_value = 0.0;
};

/// Minimizes the convex function l -> ||x + l y|| over |l| <= 2||x||/||y||
/// by golden-section search. Throws std::invalid_argument when y = 0.
BjMinimum bj_minimize(const NormSpec& norm, const Vector& x, const Vector& y);

/// Relative Birkhoff-James defect max(0, 1 - min_l ||x + l y|| / ||x||);
/// zero when x or y vanishes.
double bj_defect(const NormSpec& norm, const Vector& x, const Vector& y);

/// A direction u in span(plane) with x BJ-orthogonal to u, normalized to
/// ||u|| = 1 in `norm`. Found by maximizing dist(x, span u(theta)) over the
/// half-turn of directions in the plane; that distance is quasi-concave.
Vector bj_orthogonal_direction(const NormSpec& norm, const Vector& x,
                               const std::pair<Vector, Vector>& plane);

struct ThalesSolution {
  Vector y0;
  double residual = 0.0;  // phi(y0), sum of both defects
};

/// Solves the Thalesian property: y0 in the plane with x _|_ y0 and
/// x + y0 _|_ lambda x - y0. Closed forms for InnerProduct, AOrtho and
/// Trivial; a direction search plus scan/golden root-find for Birkhoff-James.
/// Throws SearchFailed if phi <= 1e-8 cannot be reached.
ThalesSolution thales_solve(const OrthoRelation& rel, const Vector& x, double lambda,
                            const std::pair<Vector, Vector>& plane);

double thales_residual(const OrthoRelation& rel, const Vector& x, double lambda, const Vector& y0);

inline constexpr double kThalesTolerance = 1e-8;

/// Seeded sampler of vectors with log-uniform radii. Streams for parallel
/// workers come from split(), never from sharing one instance.
class PairSampler {
 public:
  PairSampler(std::uint64_t seed, std::size_t dim, double r_lo = 0.1, double r_hi = 10.0);

  PairSampler split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }
  std::size_t dim() const { return dim_; }
  double r_lo() const { return r_lo_; }
  double r_hi() const { return r_hi_; }

  double next_radius();
  Vector next_vector();
  Rng& rng() { return rng_; }

 private:
  std::uint64_t seed_;
  std::size_t dim_;
  double r_lo_;
  double r_hi_;
  Rng rng_;
};

using VectorPair = std::pair<Vector, Vector>;

VectorPair sample_orthogonal_pair(const OrthoRelation& rel, PairSampler& sampler);
std::vector<VectorPair> sample_orthogonal_pairs(const OrthoRelation& rel, PairSampler& sampler,
                                                std::size_t n);

struct Witness {
  std::vector<Vector> vectors;
  std::vector<double> scalars;
  double residual = 0.0;
};

struct AxiomResult {
  std::string axiom;
  std::size_t checked = 0;
  std::vector<Witness> violations;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t search_failures = 0;  // O4 only: solver budget, not violations
};

struct AxiomReport {
  std::string relation;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::array<AxiomResult, 4> axioms;

  bool clean() const;
};

AxiomReport axiom_suite(const OrthoRelation& rel, PairSampler& sampler, std::size_t n_samples);

/// First sampled orthogonal pair (x, y) for which y _|_ x fails, if any.
std::optional<VectorPair> symmetry_probe(const OrthoRelation& rel, PairSampler& sampler,
                                         std::size_t n_samples);

}  // namespace orthostab
