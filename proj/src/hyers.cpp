#include "orthostab/hyers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "orthostab/kernels.hpp"

namespace orthostab {

std::string to_string(HyersVerdict v) {
  switch (v) {
    case HyersVerdict::Converged: return "converged";
    case HyersVerdict::Diverged: return "diverged";
    case HyersVerdict::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

std::string to_string(HyersScaling s) {
  return s == HyersScaling::Additive ? "additive" : "quadratic";
}

namespace {

// Exact multiplication by 2^e.
Vector ldexp(const Vector& v, int e) {
  std::vector<double> c(v.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::ldexp(v[i], e);
  return Vector::unchecked(std::move(c));
}

bool converged_at(const std::vector<HyersIterate>& it, double stop_tol) {
  const std::size_t n = it.size() - 1;
  const double last = it[n].delta;
  if (!(last <= stop_tol)) return false;
  double recent = 0.0;
  for (std::size_t k = (n > 4 ? n - 4 : 1); k <= n; ++k) recent = std::max(recent, it[k].delta);
  if (recent <= stop_tol) return true;
  double before = 0.0;
  for (std::size_t k = (n > 5 ? n - 5 : 1); k < n; ++k) before = std::max(before, it[k].delta);
  return last <= 0.75 * before;
}

bool diverged_at(const std::vector<HyersIterate>& it) {
  const std::size_t n = it.size() - 1;
  if (n < 6) return false;
  for (std::size_t k = n - 4; k <= n; ++k) {
    const double prev = it[k - 1].delta;
    if (!(prev > 0.0) || !(it[k].delta >= 1.5 * prev)) return false;
  }
  return true;
}

}  // namespace

double tail_bound(HyersScaling scaling, double epsilon, int n) {
  return scaling == HyersScaling::Additive ? 6.0 * epsilon * std::ldexp(1.0, -n)
                                           : epsilon * std::ldexp(1.0, -2 * n);
}

HyersTrace hyers_limit(const VectorMap& f, const Vector& x, const HyersOptions& opts,
                       HyersScaling scaling) {
  if (opts.n_max < 1) throw std::invalid_argument("hyers_limit: n_max must be >= 1");
  HyersTrace tr;
  tr.x = x;
  tr.scaling = scaling;
  tr.iterates.push_back({0, f(x), 0.0});
  const int per_step = scaling == HyersScaling::Additive ? 1 : 2;

  bool decided = false;
  for (int n = 1; n <= opts.n_max; ++n) {
    const Vector z = ldexp(x, n);
    if (!(norm_inf(z) <= opts.overflow_guard)) {
      tr.diagnostic = "overflow guard: ||2^n x|| exceeds the limit at n = " + std::to_string(n);
      break;
    }
    Vector value = ldexp(f(z), -per_step * n);
    if (!value.all_finite()) {
      tr.diagnostic = "non-finite iterate at n = " + std::to_string(n);
      break;
    }
    const double delta = norm_inf(value - tr.iterates.back().value);
    tr.iterates.push_back({n, std::move(value), delta});
    if (converged_at(tr.iterates, opts.stop_tol)) {
      tr.verdict = HyersVerdict::Converged;
      decided = true;
      break;
    }
    if (diverged_at(tr.iterates)) {
      tr.verdict = HyersVerdict::Diverged;
      tr.diagnostic = "deltas grew by >= 1.5x over 5 consecutive steps";
      decided = true;
      break;
    }
  }
  if (!decided) {
    tr.verdict = HyersVerdict::BudgetExhausted;
    if (tr.diagnostic.empty()) tr.diagnostic = "n_max reached";
  }
  tr.stop_n = tr.iterates.back().n;
  tr.tail_bound = tail_bound(scaling, opts.epsilon, tr.stop_n);
  return tr;
}

VectorMap hyers_limit_map(VectorMap f, HyersOptions opts, HyersScaling scaling) {
  return [f = std::move(f), opts, scaling](const Vector& x) {
    HyersTrace tr = hyers_limit(f, x, opts, scaling);
    if (tr.verdict == HyersVerdict::Diverged) throw std::runtime_error("hyers limit diverged");
    return tr.limit();
  };
}

VectorMap odd_part(VectorMap a) {
  return [a = std::move(a)](const Vector& x) { return 0.5 * (a(x) - a(-x)); };
}

VectorMap even_part(VectorMap a) {
  return [a = std::move(a)](const Vector& x) { return 0.5 * (a(x) + a(-x)); };
}

ResidualSummary summarize(std::span<const double> residuals, std::span<const VectorPair> pairs) {
  ResidualSummary s;
  s.count = residuals.size();
  if (residuals.empty()) return s;
  const kernels::MaxResult m = kernels::max_of(residuals);
  s.max = m.value;
  if (m.index < pairs.size()) s.argmax = pairs[m.index];
  return s;
}

ResidualSummary jensen_residual(const VectorMap& map, const OrthoRelation& rel, PairSampler& sampler,
                                std::size_t n_pairs, Exec exec) {
  if (n_pairs == 0) throw std::invalid_argument("jensen_residual: n_pairs must be >= 1");
  const auto pairs = sample_orthogonal_pairs(rel, sampler, n_pairs);
  const auto r = kernels::jensen_residuals(map, pairs, exec);
  return summarize(r, pairs);
}

ResidualSummary orthogonal_additivity_residual(const VectorMap& map, const OrthoRelation& rel,
                                               PairSampler& sampler, std::size_t n_pairs, Exec exec) {
  if (n_pairs == 0) throw std::invalid_argument("orthogonal_additivity_residual: n_pairs must be >= 1");
  const auto pairs = sample_orthogonal_pairs(rel, sampler, n_pairs);
  const auto r = kernels::additivity_residuals(map, pairs, exec);
  return summarize(r, pairs);
}

namespace {

std::vector<std::uint64_t> key_of(const Vector& v) {
  std::vector<std::uint64_t> k(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) k[i] = v[i] == 0.0 ? 0 : std::bit_cast<std::uint64_t>(v[i]);
  return k;
}

}  // namespace

std::vector<std::size_t> SampledMap::negation_index() const {
  std::map<std::vector<std::uint64_t>, std::size_t> where;
  for (std::size_t i = 0; i < probes.size(); ++i) where.emplace(key_of(probes[i]), i);
  std::vector<std::size_t> neg(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto it = where.find(key_of(-probes[i]));
    if (it == where.end()) throw std::invalid_argument("SampledMap: probe set is not closed under negation");
    neg[i] = it->second;
  }
  return neg;
}

bool SampledMap::negation_closed() const {
  try {
    negation_index();
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::vector<Vector> negation_closed_probes(PairSampler& sampler, std::size_t n) {
  std::vector<Vector> probes;
  probes.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector x = sampler.next_vector();
    probes.push_back(-x);
    probes.push_back(std::move(x));
  }
  return probes;
}

SampledMap sample_map(const VectorMap& map, std::vector<Vector> probes, std::string provenance, Exec exec) {
  SampledMap s;
  s.values = kernels::map_indices<Vector>(exec, probes.size(), [&](std::size_t i) { return map(probes[i]); });
  s.probes = std::move(probes);
  s.provenance = std::move(provenance);
  return s;
}

namespace {

LinearFit fit_linear(const SampledMap& t) {
  const std::size_t n = t.probes.size();
  const std::size_t d = t.probes.front().dim();
  const std::size_t m = t.values.front().dim();
  Eigen::MatrixXd x(n, d), y(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(i, j) = t.probes[i][j];
    for (std::size_t k = 0; k < m; ++k) y(i, k) = t.values[i][k];
  }
  const Eigen::MatrixXd coef = x.colPivHouseholderQr().solve(y);  // d x m
  LinearFit fit;
  fit.matrix = Matrix(m, d);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < d; ++j) fit.matrix(k, j) = coef(j, k);
  const Eigen::MatrixXd res = x * coef - y;
  for (std::size_t i = 0; i < n; ++i) fit.max_residual = std::max(fit.max_residual, res.row(i).cwiseAbs().maxCoeff());
  return fit;
}

QuadraticFit fit_quadratic(const SampledMap& q) {
  const std::size_t n = q.probes.size();
  const std::size_t d = q.probes.front().dim();
  const std::size_t m = q.values.front().dim();
  const std::size_t nf = d * (d + 1) / 2;
  Eigen::MatrixXd x(n, nf), y(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& p = q.probes[i];
    std::size_t c = 0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) x(i, c++) = (a == b ? 1.0 : 2.0) * p[a] * p[b];
    for (std::size_t k = 0; k < m; ++k) y(i, k) = q.values[i][k];
  }
  const Eigen::MatrixXd coef = x.colPivHouseholderQr().solve(y);
  QuadraticFit fit;
  for (std::size_t k = 0; k < m; ++k) {
    Matrix s(d, d);
    std::size_t c = 0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) {
        s(a, b) = coef(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
        s(b, a) = s(a, b);
        ++c;
      }
    fit.forms.push_back(std::move(s));
  }
  const Eigen::MatrixXd res = x * coef - y;
  for (std::size_t i = 0; i < n; ++i) fit.max_residual = std::max(fit.max_residual, res.row(i).cwiseAbs().maxCoeff());
  return fit;
}

}  // namespace

Decomposition decompose_T_Q(const SampledMap& a) {
  if (a.probes.empty() || a.probes.size() != a.values.size()) {
    throw std::invalid_argument("decompose_T_Q: empty or inconsistent sampled map");
  }
  const std::vector<std::size_t> neg = a.negation_index();
  Decomposition d;
  d.additive.probes = a.probes;
  d.quadratic.probes = a.probes;
  d.additive.provenance = "odd part of " + a.provenance;
  d.quadratic.provenance = "even part of " + a.provenance;
  for (std::size_t i = 0; i < a.probes.size(); ++i) {
    const Vector& v = a.values[i];
    const Vector& w = a.values[neg[i]];
    d.additive.values.push_back(0.5 * (v - w));
    d.quadratic.values.push_back(0.5 * (v + w));
    d.additive_max_norm = std::max(d.additive_max_norm, norm_inf(d.additive.values.back()));
    d.quadratic_max_norm = std::max(d.quadratic_max_norm, norm_inf(d.quadratic.values.back()));
  }
  d.linear_fit = fit_linear(d.additive);
  d.quadratic_fit = fit_quadratic(d.quadratic);
  return d;
}

PartResiduals part_residuals(const VectorMap& a, std::span<const VectorPair> pairs, Exec exec) {
  const VectorMap t = odd_part(a);
  const VectorMap q = even_part(a);
  PartResiduals r;
  r.additive_jensen = kernels::max_of(kernels::jensen_residuals(t, pairs, exec)).value;
  r.additive_orthogonal_additivity = kernels::max_of(kernels::additivity_residuals(t, pairs, exec)).value;
  r.quadratic_jensen = kernels::max_of(kernels::jensen_residuals(q, pairs, exec)).value;
  r.quadratic_orthogonal_additivity = kernels::max_of(kernels::additivity_residuals(q, pairs, exec)).value;
  return r;
}

}  // namespace orthostab
