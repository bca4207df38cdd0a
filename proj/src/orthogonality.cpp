#include "orthostab/orthogonality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "orthostab/golden.hpp"

namespace orthostab {

OrthoRelation OrthoRelation::trivial() {
  OrthoRelation r;
  r.kind = RelationKind::Trivial;
  r.tolerance = kRankThreshold;
  return r;
}

OrthoRelation OrthoRelation::inner_product(double tol) {
  OrthoRelation r;
  r.kind = RelationKind::InnerProduct;
  r.tolerance = tol;
  return r;
}

OrthoRelation OrthoRelation::birkhoff_james(NormSpec norm, double tol) {
  norm.validate();
  OrthoRelation r;
  r.kind = RelationKind::BirkhoffJames;
  r.norm = std::move(norm);
  r.tolerance = tol;
  return r;
}

OrthoRelation OrthoRelation::a_ortho(Matrix a, double tol) {
  if (a.rows() != a.cols() || !a.is_symmetric(1e-12)) {
    throw std::invalid_argument("OrthoRelation: A-orthogonality needs a symmetric square matrix");
  }
  OrthoRelation r;
  r.kind = RelationKind::AOrtho;
  r.a = std::move(a);
  r.tolerance = tol;
  return r;
}

std::string OrthoRelation::name() const {
  switch (kind) {
    case RelationKind::Trivial: return "Trivial";
    case RelationKind::InnerProduct: return "InnerProduct";
    case RelationKind::BirkhoffJames: return "BirkhoffJames(" + norm.name() + ")";
    case RelationKind::AOrtho: return "AOrtho";
  }
  return "?";
}

double independence_ratio(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "independence_ratio");
  const double nx = norm2(x);
  const double ny = norm2(y);
  if (nx == 0.0 || ny == 0.0) return 0.0;
  const Vector xh = x / nx;
  const Vector yh = y / ny;
  const double c = dot(xh, yh);
  // sin(theta) from the residual of yh against span(xh) keeps accuracy for
  // nearly parallel pairs; sigma_min / sigma_max = sin / (1 + |cos|).
  const double s = norm2(Vector::axpy(yh, -c, xh));
  return s / (1.0 + std::abs(c));
}

namespace {

OrthoVerdict bilinear_verdict(double inner, double scale, double tol) {
  const double r = scale == 0.0 ? 0.0 : std::abs(inner) / scale;
  return {r <= tol, r, tol};
}

}  // namespace

OrthoVerdict decide(const OrthoRelation& rel, const Vector& x, const Vector& y) {
  require_same_dim(x, y, "is_orthogonal");
  switch (rel.kind) {
    case RelationKind::Trivial: {
      const double thr = 1.0 - OrthoRelation::kRankThreshold;
      if (x.is_zero() || y.is_zero()) return {true, 0.0, thr};
      const double residual = 1.0 - independence_ratio(x, y);
      return {residual < thr, residual, thr};
    }
    case RelationKind::InnerProduct:
      return bilinear_verdict(dot(x, y), norm2(x) * norm2(y), rel.tolerance);
    case RelationKind::AOrtho: {
      if (rel.a.cols() != x.dim()) throw DimensionMismatch("is_orthogonal: A does not match dimension");
      const Vector ax = rel.a.apply(x);
      return bilinear_verdict(dot(ax, y), norm2(ax) * norm2(y), rel.tolerance);
    }
    case RelationKind::BirkhoffJames: {
      const double d = bj_defect(rel.norm, x, y);
      return {d <= rel.tolerance, d, rel.tolerance};
    }
  }
  return {};
}

bool is_orthogonal(const OrthoRelation& rel, const Vector& x, const Vector& y) {
  return decide(rel, x, y).orthogonal;
}

BjMinimum bj_minimize(const NormSpec& norm, const Vector& x, const Vector& y) {
  require_same_dim(x, y, "bj_minimize");
  const double ny = norm_eval(norm, y);
  if (ny == 0.0) throw std::invalid_argument("bj_minimize: y must be nonzero");
  const double nx = norm_eval(norm, x);
  if (nx == 0.0) return {0.0, 0.0};

  // Outside |l| <= 2|x|/|y| we have |x + l y| >= |l||y| - |x| > |x|.
  const double bound = 2.0 * nx / ny;
  const double width = 2.0 * bound;
  auto objective = [&](double l) { return norm_eval(norm, Vector::axpy(x, l, y)); };
  const LineMinimum m = golden_section_minimize(objective, -bound, bound, 1e-12 * (1.0 + width));
  if (nx <= m.value) return {0.0, nx};
  return {m.argmin, m.value};
}

double bj_defect(const NormSpec& norm, const Vector& x, const Vector& y) {
  if (x.is_zero() || y.is_zero()) return 0.0;
  const double nx = norm_eval(norm, x);
  const BjMinimum m = bj_minimize(norm, x, y);
  return std::max(0.0, 1.0 - m.min_value / nx);
}

Vector bj_orthogonal_direction(const NormSpec& norm, const Vector& x,
                               const std::pair<Vector, Vector>& plane) {
  const double nx = norm2(x);
  if (nx == 0.0) throw std::invalid_argument("bj_orthogonal_direction: x is zero");
  const Vector e1 = x / nx;
  const Vector e2 = orthonormal_complement_in_plane(x, plane);
  auto direction = [&](double theta) {
    return Vector::axpy(std::cos(theta) * e1, std::sin(theta), e2);
  };
  auto negated_distance = [&](double theta) {
    return -bj_minimize(norm, x, direction(theta)).min_value;
  };
  const LineMinimum m = golden_section_minimize(negated_distance, 0.0, std::numbers::pi, 1e-12);
  const Vector u = direction(m.argmin);
  return u / norm_eval(norm, u);
}

namespace {

// Defect excess of one pair: continuous defect for metric relations, 0/1 for
// the trivial relation.
double pair_excess(const OrthoRelation& rel, const Vector& a, const Vector& b) {
  const OrthoVerdict v = decide(rel, a, b);
  if (rel.kind == RelationKind::Trivial) return v.orthogonal ? 0.0 : 1.0;
  return v.residual;
}

ThalesSolution finish(const OrthoRelation& rel, const Vector& x, double lambda, Vector y0) {
  const double phi = thales_residual(rel, x, lambda, y0);
  if (!(phi <= kThalesTolerance)) {
    std::ostringstream os;
    os << "thales_solve: SEARCH_FAILED (phi = " << phi << ")";
    throw SearchFailed(os.str());
  }
  return {std::move(y0), phi};
}

ThalesSolution thales_birkhoff_james(const OrthoRelation& rel, const Vector& x, double lambda,
                                     const std::pair<Vector, Vector>& plane) {
  const NormSpec& norm = rel.norm;
  const Vector lx = lambda * x;
  const double nx = norm_eval(norm, x);
  const double t_max = 4.0 * std::sqrt(lambda + 1.0) * nx;
  const Vector found = bj_orthogonal_direction(norm, x, plane);

  double best_phi = std::numeric_limits<double>::infinity();
  Vector best_y(x.dim());
  // x _|_ u iff x _|_ -u, and the root may sit on either side.
  for (const Vector& u : {found, -found}) {
    auto phi = [&](double t) {
      const Vector y = t * u;
      return bj_defect(norm, x + y, lx - y) + bj_defect(norm, x, y);
    };

    constexpr int kScan = 128;
    const double step = t_max / (kScan - 1);
    std::vector<double> values(kScan);
    for (int k = 0; k < kScan; ++k) values[k] = phi(k * step);

    // Refine the deepest few local minima of the scan, scan minimum first.
    std::vector<int> candidates;
    for (int k = 0; k < kScan; ++k) {
      const bool left = k == 0 || values[k] <= values[k - 1];
      const bool right = k == kScan - 1 || values[k] <= values[k + 1];
      if (left && right) candidates.push_back(k);
    }
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    if (candidates.size() > 4) candidates.resize(4);

    for (int k : candidates) {
      if (best_phi <= kThalesTolerance * 1e-3) break;
      const double lo = std::max(0, k - 1) * step;
      const double hi = std::min(kScan - 1, k + 1) * step;
      const LineMinimum m = golden_section_minimize(phi, lo, hi, 1e-12 * (1.0 + t_max));
      if (m.value < best_phi) {
        best_phi = m.value;
        best_y = m.argmin * u;
      }
    }
    if (best_phi <= kThalesTolerance * 1e-3) break;
  }
  return finish(rel, x, lambda, std::move(best_y));
}

ThalesSolution thales_a_ortho(const OrthoRelation& rel, const Vector& x, double lambda,
                              const std::pair<Vector, Vector>& plane) {
  const Vector e1 = x / norm2(x);
  const Vector e2 = orthonormal_complement_in_plane(x, plane);
  const Vector ax = rel.a.apply(x);
  const double axx = dot(ax, x);
  // <A(x + t v), lambda x - t v> = lambda <Ax,x> - t^2 <Av,v> once <Ax,v> = 0.
  if (axx == 0.0 || lambda == 0.0) return finish(rel, x, lambda, Vector(x.dim()));
  const double c1 = dot(ax, e1);
  const double c2 = dot(ax, e2);
  Vector v = (std::abs(c1) + std::abs(c2) <= 1e-14 * norm2(ax)) ? e2 : Vector::axpy(-c2 * e1, c1, e2);
  v = v / norm2(v);
  const double avv = rel.a.bilinear(v, v);
  const double t2 = lambda * axx / avv;
  if (!(t2 >= 0.0) || !std::isfinite(t2)) {
    throw SearchFailed("thales_solve: SEARCH_FAILED (no real root for this A in the plane)");
  }
  return finish(rel, x, lambda, std::sqrt(t2) * v);
}

}  // namespace

double thales_residual(const OrthoRelation& rel, const Vector& x, double lambda, const Vector& y0) {
  return pair_excess(rel, x, y0) + pair_excess(rel, x + y0, lambda * x - y0);
}

ThalesSolution thales_solve(const OrthoRelation& rel, const Vector& x, double lambda,
                            const std::pair<Vector, Vector>& plane) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("thales_solve: lambda must be a nonnegative real");
  }
  if (x.is_zero()) throw std::invalid_argument("thales_solve: x must be nonzero");
  switch (rel.kind) {
    case RelationKind::InnerProduct: {
      const Vector u = orthonormal_complement_in_plane(x, plane);
      return finish(rel, x, lambda, (std::sqrt(lambda) * norm2(x)) * u);
    }
    case RelationKind::Trivial: {
      // x + y0 and lambda x - y0 stay independent for lambda >= 0.
      const Vector u = orthonormal_complement_in_plane(x, plane);
      return finish(rel, x, lambda, norm2(x) * u);
    }
    case RelationKind::AOrtho:
      return thales_a_ortho(rel, x, lambda, plane);
    case RelationKind::BirkhoffJames:
      return thales_birkhoff_james(rel, x, lambda, plane);
  }
  throw std::logic_error("thales_solve: unknown relation");
}

PairSampler::PairSampler(std::uint64_t seed, std::size_t dim, double r_lo, double r_hi)
    : seed_(seed), dim_(dim), r_lo_(r_lo), r_hi_(r_hi), rng_(seed) {
  if (dim == 0) throw std::invalid_argument("PairSampler: dim must be >= 1");
  if (!(r_lo > 0.0 && r_hi >= r_lo)) throw std::invalid_argument("PairSampler: bad radius range");
}

PairSampler PairSampler::split(std::uint64_t stream) const {
  return PairSampler(derive_seed(seed_, stream), dim_, r_lo_, r_hi_);
}

double PairSampler::next_radius() { return rng_.log_uniform(r_lo_, r_hi_); }

Vector PairSampler::next_vector() {
  const Vector d = rng_.direction(dim_);
  return next_radius() * d;
}

namespace {

constexpr int kSampleBudget = 16;

Vector independent_of(const Vector& x, PairSampler& s) {
  for (int i = 0; i < 64; ++i) {
    Vector r = s.next_vector();
    if (independence_ratio(x, r) > 1e-6) return r;
  }
  throw SearchFailed("sampler: could not draw a vector independent of x");
}

}  // namespace

VectorPair sample_orthogonal_pair(const OrthoRelation& rel, PairSampler& sampler) {
  if (sampler.dim() < 2) throw std::invalid_argument("sample_orthogonal_pair: needs dim >= 2");
  for (int attempt = 0; attempt < kSampleBudget; ++attempt) {
    Vector x = sampler.next_vector();
    switch (rel.kind) {
      case RelationKind::Trivial: {
        Vector y = sampler.next_vector();
        if (is_orthogonal(rel, x, y)) return {std::move(x), std::move(y)};
        break;
      }
      case RelationKind::InnerProduct:
      case RelationKind::AOrtho: {
        const Vector n = rel.kind == RelationKind::AOrtho ? rel.a.apply(x) : x;
        const Vector r = sampler.next_vector();
        const double nn = dot(n, n);
        Vector y = r;
        if (nn > 0.0) {
          y = Vector::axpy(y, -dot(n, y) / nn, n);
          y = Vector::axpy(y, -dot(n, y) / nn, n);
        }
        const double ny = norm2(y);
        if (ny <= 1e-8 * norm2(r)) break;
        y = (sampler.next_radius() / ny) * y;
        if (is_orthogonal(rel, x, y)) return {std::move(x), std::move(y)};
        break;
      }
      case RelationKind::BirkhoffJames: {
        const Vector r = independent_of(x, sampler);
        const Vector u = bj_orthogonal_direction(rel.norm, x, {x, r});
        Vector y = sampler.next_radius() * u;
        if (is_orthogonal(rel, x, y)) return {std::move(x), std::move(y)};
        break;
      }
    }
  }
  throw SearchFailed("sample_orthogonal_pair: search budget exceeded");
}

std::vector<VectorPair> sample_orthogonal_pairs(const OrthoRelation& rel, PairSampler& sampler,
                                                std::size_t n) {
  std::vector<VectorPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_orthogonal_pair(rel, sampler));
  return out;
}

bool AxiomReport::clean() const {
  return std::all_of(axioms.begin(), axioms.end(),
                     [](const AxiomResult& a) { return a.violations.empty(); });
}

namespace {

double nonzero_scalar(Rng& rng) {
  for (;;) {
    const double v = rng.uniform(-8.0, 8.0);
    if (v != 0.0) return v;
  }
}

void note(AxiomResult& r, double residual, bool violated, Witness w) {
  ++r.checked;
  r.max_residual = std::max(r.max_residual, residual);
  if (violated) {
    w.residual = residual;
    r.violations.push_back(std::move(w));
  }
}

}  // namespace

AxiomReport axiom_suite(const OrthoRelation& rel, PairSampler& sampler, std::size_t n_samples) {
  if (n_samples == 0) throw std::invalid_argument("axiom_suite: n_samples must be >= 1");
  AxiomReport rep;
  rep.relation = rel.name();
  rep.dim = sampler.dim();
  rep.seed = sampler.seed();
  auto& [o1, o2, o3, o4] = rep.axioms;
  o1.axiom = "O1";
  o2.axiom = "O2";
  o3.axiom = "O3";
  o4.axiom = "O4";
  const Vector zero(sampler.dim());

  PairSampler s1 = sampler.split(1);
  o1.tolerance = decide(rel, zero, zero).threshold;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vector x = s1.next_vector();
    const OrthoVerdict a = decide(rel, x, zero);
    const OrthoVerdict b = decide(rel, zero, x);
    note(o1, std::max(a.residual, b.residual), !(a.orthogonal && b.orthogonal), {{x}, {}, 0.0});
  }

  PairSampler s2 = sampler.split(2);
  o2.tolerance = 1.0 - OrthoRelation::kRankThreshold;
  o3.tolerance = rel.kind == RelationKind::Trivial ? 1.0 - OrthoRelation::kRankThreshold : rel.tolerance;
  for (std::size_t i = 0; i < n_samples; ++i) {
    VectorPair p;
    try {
      p = sample_orthogonal_pair(rel, s2);
    } catch (const SearchFailed&) {
      ++o2.search_failures;
      continue;
    }
    const auto& [x, y] = p;
    const double ratio = independence_ratio(x, y);
    note(o2, 1.0 - ratio, !(ratio > OrthoRelation::kRankThreshold), {{x, y}, {ratio}, 0.0});

    const double alpha = nonzero_scalar(s2.rng());
    const double beta = nonzero_scalar(s2.rng());
    const OrthoVerdict v = decide(rel, alpha * x, beta * y);
    note(o3, v.residual, !v.orthogonal, {{x, y}, {alpha, beta}, 0.0});
  }

  PairSampler s4 = sampler.split(4);
  o4.tolerance = kThalesTolerance;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vector x = s4.next_vector();
    const Vector r = independent_of(x, s4);
    const double lambda = s4.rng().log_uniform(0.01, 100.0);
    try {
      const ThalesSolution sol = thales_solve(rel, x, lambda, {x, r});
      const bool ok = is_orthogonal(rel, x, sol.y0) &&
                      is_orthogonal(rel, x + sol.y0, lambda * x - sol.y0);
      note(o4, sol.residual, !ok, {{x, sol.y0}, {lambda}, 0.0});
    } catch (const SearchFailed&) {
      ++o4.search_failures;
    }
  }
  return rep;
}

std::optional<VectorPair> symmetry_probe(const OrthoRelation& rel, PairSampler& sampler,
                                         std::size_t n_samples) {
  if (n_samples == 0) throw std::invalid_argument("symmetry_probe: n_samples must be >= 1");
  for (std::size_t i = 0; i < n_samples; ++i) {
    VectorPair p;
    try {
      p = sample_orthogonal_pair(rel, sampler);
    } catch (const SearchFailed&) {
      continue;
    }
    if (!is_orthogonal(rel, p.second, p.first)) return p;
  }
  return std::nullopt;
}

}  // namespace orthostab
