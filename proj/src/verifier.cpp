#include "orthostab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>

#include "orthostab/kernels.hpp"

namespace orthostab {

CheckResult make_check(std::string name, std::string formula, std::optional<double> constant,
                       double measured, double bound, std::vector<Vector> witness, std::size_t count) {
  CheckResult c;
  c.name = std::move(name);
  c.bound_formula = std::move(formula);
  c.constant = constant;
  c.measured = measured;
  c.bound = bound;
  c.margin = bound - measured;
  c.pass = measured <= bound + numerical_slack(bound);
  c.witness = std::move(witness);
  c.count = count;
  return c;
}

std::string to_string(EpsilonMode m) { return m == EpsilonMode::Design ? "design" : "sampled"; }

void TheoremCheckConfig::validate() const {
  if (n_pairs == 0 || n_probes == 0 || n_limit_pairs == 0 || n_part_pairs == 0 || symmetry_samples == 0) {
    throw std::invalid_argument("TheoremCheckConfig: counts must be >= 1");
  }
  if (n_max < 1) throw std::invalid_argument("TheoremCheckConfig: n_max must be >= 1");
  if (!(stop_tol >= 0.0)) throw std::invalid_argument("TheoremCheckConfig: stop_tol must be >= 0");
  if (!(bound_scale > 0.0)) throw std::invalid_argument("TheoremCheckConfig: bound_scale must be > 0");
}

PremiseSup premise_sup(const PexiderTriple& triple, std::span<const VectorPair> pairs, Exec exec) {
  if (pairs.empty()) throw std::invalid_argument("premise_sup: n_pairs must be >= 1");
  const auto r = kernels::premise_residuals(triple, pairs, exec);
  const auto scales = kernels::map_indices<double>(exec, pairs.size(), [&](std::size_t i) {
    return premise_scale(triple, pairs[i].first, pairs[i].second);
  });
  PremiseSup s;
  const kernels::MaxResult m = kernels::max_of(r);
  s.epsilon_sampled = m.value;
  s.argmax = pairs[m.index];
  s.scale = kernels::max_of(scales).value;
  s.n_pairs = pairs.size();
  return s;
}

PremiseSup premise_sup(const PexiderTriple& triple, PairSampler& sampler, std::size_t n_pairs, Exec exec) {
  if (n_pairs == 0) throw std::invalid_argument("premise_sup: n_pairs must be >= 1");
  const auto pairs = sample_orthogonal_pairs(triple.relation, sampler, n_pairs);
  return premise_sup(triple, pairs, exec);
}

HyersSummary summarize(const std::vector<HyersTrace>& traces) {
  HyersSummary s;
  s.probes = traces.size();
  s.min_stop_n = std::numeric_limits<int>::max();
  for (const auto& t : traces) {
    ++s.verdicts[to_string(t.verdict)];
    s.min_stop_n = std::min(s.min_stop_n, t.stop_n);
    s.max_stop_n = std::max(s.max_stop_n, t.stop_n);
    s.max_tail_bound = std::max(s.max_tail_bound, t.tail_bound);
  }
  if (traces.empty()) s.min_stop_n = 0;
  return s;
}

bool StabilityReport::passed() const {
  return status == "ok" && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const CheckResult* StabilityReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

// Streams derived from the master seed; fixed so reports are reproducible.
enum Stream : std::uint64_t { kPairs = 1, kProbes = 2, kLimitPairs = 3, kPlanes = 4, kSymmetry = 5, kParts = 6 };

PairSampler master_sampler(const TheoremCheckConfig& cfg, std::size_t dim) {
  return PairSampler(cfg.seed, dim, cfg.r_lo, cfg.r_hi);
}

// Max of ||values_i|| with the probe at the argmax.
struct PointMax {
  double value = 0.0;
  std::size_t index = 0;
};

PointMax point_max(std::span<const double> v) {
  const auto m = kernels::max_of(v);
  return {m.value, m.index};
}

HyersOptions hyers_options(const TheoremCheckConfig& cfg, double eps) {
  HyersOptions o;
  o.n_max = cfg.n_max;
  o.stop_tol = cfg.stop_tol;
  o.epsilon = eps;
  return o;
}

}  // namespace

std::vector<Vector> theorem_probes(const TheoremCheckConfig& cfg, std::size_t dim) {
  PairSampler s = master_sampler(cfg, dim).split(kProbes);
  return negation_closed_probes(s, cfg.n_probes);
}

StabilityReport verify_theorem(const PexiderTriple& t, const TheoremCheckConfig& cfg) {
  cfg.validate();
  t.f.validate();
  t.g.validate();
  t.h.validate();
  const std::size_t dim = t.f.in_dim;
  const Exec exec = cfg.exec;
  const VectorMap f = as_map(t.f);
  const VectorMap g = as_map(t.g);
  const VectorMap h = as_map(t.h);
  const PairSampler master = master_sampler(cfg, dim);

  StabilityReport rep;
  rep.relation = t.relation.name();
  rep.config = cfg;
  rep.epsilon_design = t.epsilon_design;

  const std::vector<Vector> probes = theorem_probes(cfg, dim);
  const std::size_t np = probes.size();

  // Hypothesis: f odd.
  const auto odd = kernels::map_indices<double>(exec, np, [&](std::size_t i) {
    return norm_inf(f(probes[i]) + f(-probes[i]));
  });
  rep.odd_residual = kernels::max_of(odd).value;
  if (!(rep.odd_residual <= 1e-9)) {
    throw HypothesisViolation("ODD_VIOLATION", "f is not odd: max ||f(x) + f(-x)|| = " +
                                                   std::to_string(rep.odd_residual));
  }

  // Hypothesis: the relation is symmetric. Recorded, not enforced.
  {
    PairSampler s = master.split(kSymmetry);
    rep.symmetry_witness = symmetry_probe(t.relation, s, cfg.symmetry_samples);
  }

  // Premise sup over sampled orthogonal pairs.
  PairSampler pair_stream = master.split(kPairs);
  const auto pairs = sample_orthogonal_pairs(t.relation, pair_stream, cfg.n_pairs);
  const PremiseSup ps = premise_sup(t, pairs, exec);
  rep.epsilon_sampled = ps.epsilon_sampled;
  const double eps = cfg.epsilon_mode == EpsilonMode::Sampled ? ps.epsilon_sampled : t.epsilon_design;
  rep.epsilon_used = eps;
  auto bound = [&](double c) { return c * eps * cfg.bound_scale; };

  // (a) x = 0 in the premise: ||h(y)|| <= eps/2.
  {
    const auto v = kernels::map_indices<double>(exec, np, [&](std::size_t i) { return norm_inf(h(probes[i])); });
    const PointMax m = point_max(v);
    rep.checks.push_back(make_check("h_bound", "eps/2", 0.5, m.value, bound(0.5), {probes[m.index]}, np));
  }
  // (b) y = 0 in the premise: ||f(x) - g(x)|| <= eps/2.
  {
    const auto v = kernels::map_indices<double>(exec, np, [&](std::size_t i) {
      return norm_inf(f(probes[i]) - g(probes[i]));
    });
    const PointMax m = point_max(v);
    rep.checks.push_back(make_check("f_minus_g", "eps/2", 0.5, m.value, bound(0.5), {probes[m.index]}, np));
  }
  // (c) ||f(x + y) + f(x - y) - 2 f(x)|| <= eps + 2 eps/2 + 2 eps/2 = 3 eps.
  {
    const auto v = kernels::jensen_residuals(f, pairs, exec);
    const PointMax m = point_max(v);
    rep.checks.push_back(make_check("jensen_premise", "3*eps", 3.0, m.value, bound(3.0),
                                    {pairs[m.index].first, pairs[m.index].second}, pairs.size()));
  }
  // (d) Doubling through the Thalesian y0 with x _|_ y0 and x + y0 _|_ x - y0.
  {
    PairSampler plane_stream = master.split(kPlanes);
    std::vector<Vector> others;
    others.reserve(np);
    for (std::size_t i = 0; i < np; ++i) {
      Vector r = plane_stream.next_vector();
      while (independence_ratio(probes[i], r) <= 1e-6) r = plane_stream.next_vector();
      others.push_back(std::move(r));
    }
    struct Doubling {
      bool solved = false;
      double doubling = 0.0;
      double chain = 0.0;
    };
    const auto v = kernels::map_indices<Doubling>(exec, np, [&](std::size_t i) -> Doubling {
      const Vector& x = probes[i];
      Vector y0;
      try {
        y0 = thales_solve(t.relation, x, 1.0, {x, others[i]}).y0;
      } catch (const SearchFailed&) {
        return {};
      }
      const Vector f2x = f(2.0 * x);
      const Vector f2y = f(2.0 * y0);
      const Vector fp = f(x + y0);
      const Vector fm = f(x - y0);
      const double c1 = norm_inf(fp + fm - 2.0 * f(x));
      const double c2 = norm_inf(f2x + f2y - 2.0 * fp);
      const double c3 = norm_inf(f2x - f2y - 2.0 * fm);
      return {true, norm_inf(f2x - 2.0 * f(x)), std::max({c1, c2, c3})};
    });
    std::vector<double> doubling(np, 0.0), chain(np, 0.0);
    rep.thales_attempted = np;
    for (std::size_t i = 0; i < np; ++i) {
      if (!v[i].solved) {
        ++rep.thales_skipped;
        continue;
      }
      doubling[i] = v[i].doubling;
      chain[i] = v[i].chain;
    }
    const std::size_t solved = np - rep.thales_skipped;
    const PointMax mc = point_max(chain);
    rep.checks.push_back(make_check("doubling_chain", "3*eps", 3.0, mc.value, bound(3.0), {probes[mc.index]}, solved));
    const PointMax md = point_max(doubling);
    rep.checks.push_back(make_check("doubling", "6*eps", 6.0, md.value, bound(6.0), {probes[md.index]}, solved));
  }

  // (e) Hyers limit A(x) = lim 2^-n f(2^n x) and ||f(x) - A(x)|| <= 6 eps.
  const HyersOptions hopts = hyers_options(cfg, eps);
  std::vector<HyersTrace> traces = kernels::hyers_batch(f, probes, hopts, HyersScaling::Additive, exec);
  rep.hyers = summarize(traces);
  for (const auto& tr : traces) {
    if (tr.verdict == HyersVerdict::Diverged) {
      rep.status = "diverged";
      rep.diagnostic = "Hyers sequence diverged at a probe: " + tr.diagnostic;
      if (cfg.keep_traces) rep.traces = std::move(traces);
      return rep;
    }
  }
  std::vector<Vector> limits;
  limits.reserve(np);
  for (const auto& tr : traces) limits.push_back(tr.limit());
  {
    const auto v = kernels::map_indices<double>(exec, np, [&](std::size_t i) {
      return norm_inf(f(probes[i]) - limits[i]);
    });
    const PointMax m = point_max(v);
    rep.checks.push_back(make_check("hyers_limit", "6*eps", 6.0, m.value, bound(6.0), {probes[m.index]}, np));
  }
  {
    const std::vector<std::size_t> neg = SampledMap{probes, limits, ""}.negation_index();
    std::vector<double> v(np), allowed(np);
    for (std::size_t i = 0; i < np; ++i) {
      v[i] = norm_inf(limits[i] + limits[neg[i]]);
      allowed[i] = traces[i].tail_bound + traces[neg[i]].tail_bound;
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < np; ++i) {
      if (v[i] - allowed[i] > v[worst] - allowed[worst]) worst = i;
    }
    rep.checks.push_back(make_check("limit_odd", "2*tail", std::nullopt, v[worst],
                                    allowed[worst] * cfg.bound_scale, {probes[worst]}, np));
    const HyersTrace zero = hyers_limit(f, Vector(dim), hopts, HyersScaling::Additive);
    rep.checks.push_back(make_check("limit_at_zero", "tail", std::nullopt, norm_inf(zero.limit()),
                                    zero.tail_bound * cfg.bound_scale, {Vector(dim)}, 1));
  }

  // (f) The limit satisfies the Jensen-type identity on fresh orthogonal pairs.
  {
    PairSampler s = master.split(kLimitPairs);
    const auto fresh = sample_orthogonal_pairs(t.relation, s, cfg.n_limit_pairs);
    struct Item {
      double residual = 0.0;
      double allowed = 0.0;
      bool diverged = false;
    };
    const auto v = kernels::map_indices<Item>(exec, fresh.size(), [&](std::size_t i) -> Item {
      const auto& [x, y] = fresh[i];
      const HyersTrace a = hyers_limit(f, x + y, hopts, HyersScaling::Additive);
      const HyersTrace b = hyers_limit(f, x - y, hopts, HyersScaling::Additive);
      const HyersTrace c = hyers_limit(f, x, hopts, HyersScaling::Additive);
      if (!a.usable() || !b.usable() || !c.usable()) return {0.0, 0.0, true};
      const double r = norm_inf(a.limit() + b.limit() - 2.0 * c.limit());
      return {r, 2.0 * std::max({a.tail_bound, b.tail_bound, c.tail_bound}), false};
    });
    std::size_t worst = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].diverged) {
        rep.status = "diverged";
        rep.diagnostic = "Hyers sequence diverged on a fresh orthogonal pair";
        return rep;
      }
      if (v[i].residual - v[i].allowed > v[worst].residual - v[worst].allowed) worst = i;
    }
    rep.checks.push_back(make_check("limit_jensen", "2*tail", std::nullopt, v[worst].residual,
                                    v[worst].allowed * cfg.bound_scale,
                                    {fresh[worst].first, fresh[worst].second}, fresh.size()));
  }

  // (g) A = T + Q, then ||f - T - Q|| <= 6 eps and ||g - T - Q|| <= 13/2 eps.
  {
    const SampledMap a{probes, limits, "additive Hyers limit of f"};
    const Decomposition d = decompose_T_Q(a);
    const auto vf = kernels::map_indices<double>(exec, np, [&](std::size_t i) {
      return norm_inf(f(probes[i]) - d.additive.values[i] - d.quadratic.values[i]);
    });
    const auto vg = kernels::map_indices<double>(exec, np, [&](std::size_t i) {
      return norm_inf(g(probes[i]) - d.additive.values[i] - d.quadratic.values[i]);
    });
    const PointMax mf = point_max(vf);
    const PointMax mg = point_max(vg);
    rep.checks.push_back(make_check("f_minus_TQ", "6*eps", 6.0, mf.value, bound(6.0), {probes[mf.index]}, np));
    rep.checks.push_back(make_check("g_minus_TQ", "13/2*eps", 6.5, mg.value, bound(6.5), {probes[mg.index]}, np));

    DecompositionDiagnostics diag;
    diag.linear_fit = d.linear_fit.matrix;
    diag.linear_fit_residual = d.linear_fit.max_residual;
    diag.quadratic_fit_residual = d.quadratic_fit.max_residual;
    diag.additive_max_norm = d.additive_max_norm;
    diag.quadratic_max_norm = d.quadratic_max_norm;
    PairSampler s = master.split(kParts);
    const auto part_pairs = sample_orthogonal_pairs(t.relation, s, cfg.n_part_pairs);
    diag.parts = part_residuals(hyers_limit_map(f, hopts, HyersScaling::Additive), part_pairs, exec);
    rep.decomposition = diag;
  }

  if (cfg.keep_traces) rep.traces = std::move(traces);
  return rep;
}

bool UniquenessReport::passed() const {
  return status == "ok" && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

UniquenessReport uniqueness_probe(const PexiderTriple& t, const TheoremCheckConfig& cfg,
                                  std::uint64_t alt_seed) {
  if (cfg.n_max <= 5) throw std::invalid_argument("uniqueness_probe: n_max must exceed 5");
  TheoremCheckConfig first = cfg;
  TheoremCheckConfig second = cfg;
  second.seed = alt_seed;
  second.n_max = cfg.n_max - 5;
  first.keep_traces = second.keep_traces = false;

  UniquenessReport rep;
  rep.n_max_first = first.n_max;
  rep.n_max_second = second.n_max;
  const StabilityReport r1 = verify_theorem(t, first);
  const StabilityReport r2 = verify_theorem(t, second);
  if (r1.status != "ok" || r2.status != "ok") {
    rep.status = "diverged";
    return rep;
  }
  rep.stop_first = r1.hyers.min_stop_n;
  rep.stop_second = r2.hyers.min_stop_n;
  rep.epsilon = std::min(r1.epsilon_used, r2.epsilon_used);

  const VectorMap f = as_map(t.f);
  const VectorMap a1 = hyers_limit_map(f, hyers_options(first, rep.epsilon), HyersScaling::Additive);
  const VectorMap a2 = hyers_limit_map(f, hyers_options(second, rep.epsilon), HyersScaling::Additive);
  const VectorMap t1 = odd_part(a1), t2 = odd_part(a2);
  const VectorMap q1 = even_part(a1), q2 = even_part(a2);

  const std::vector<Vector> probes = theorem_probes(first, t.f.in_dim);
  const std::size_t np = probes.size();
  struct Diff {
    double a = 0.0, t = 0.0, q = 0.0;
  };
  const auto diffs = kernels::map_indices<Diff>(cfg.exec, np, [&](std::size_t i) -> Diff {
    const Vector& x = probes[i];
    const Vector v1 = a1(x), v2 = a2(x), w1 = a1(-x), w2 = a2(-x);
    return {norm_inf(v1 - v2), norm_inf(0.5 * (v1 - w1) - 0.5 * (v2 - w2)),
            norm_inf(0.5 * (v1 + w1) - 0.5 * (v2 + w2))};
  });
  std::vector<double> da(np), dt(np), dq(np);
  for (std::size_t i = 0; i < np; ++i) {
    da[i] = diffs[i].a;
    dt[i] = diffs[i].t;
    dq[i] = diffs[i].q;
  }
  const double tails = tail_bound(HyersScaling::Additive, rep.epsilon, rep.stop_first) +
                       tail_bound(HyersScaling::Additive, rep.epsilon, rep.stop_second);
  const auto ma = kernels::max_of(da), mt = kernels::max_of(dt), mq = kernels::max_of(dq);
  rep.checks.push_back(make_check("A_vs_A_prime", "12*eps", 12.0, ma.value, 12.0 * rep.epsilon * cfg.bound_scale,
                                  {probes[ma.index]}, np));
  rep.checks.push_back(make_check("T_vs_T_prime", "tail+tail'", std::nullopt, mt.value, tails * cfg.bound_scale,
                                  {probes[mt.index]}, np));
  rep.checks.push_back(make_check("Q_vs_Q_prime", "tail+tail'", std::nullopt, mq.value, tails * cfg.bound_scale,
                                  {probes[mq.index]}, np));

  // ||T(s x) - T'(s x)|| / s for s in {1, 2, 4, 8} on ten base probes. For
  // exact additive T, T' the column is constant in s.
  const std::size_t n_scaled = std::min<std::size_t>(10, np / 2);
  rep.scaling = kernels::map_indices<std::vector<double>>(cfg.exec, n_scaled, [&](std::size_t p) {
    const Vector& x = probes[2 * p + 1];
    std::vector<double> row;
    for (int s : rep.scales) row.push_back(norm_inf(t1(s * x) - t2(s * x)) / s);
    return row;
  });
  rep.scaling_sup.assign(rep.scales.size(), 0.0);
  for (const auto& row : rep.scaling) {
    for (std::size_t j = 0; j < row.size(); ++j) rep.scaling_sup[j] = std::max(rep.scaling_sup[j], row[j]);
  }
  double rise = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < rep.scaling_sup.size(); ++j) rise = std::max(rise, rep.scaling_sup[j] - rep.scaling_sup[j - 1]);
  rep.checks.push_back(make_check("scaling_nonincreasing", "sup_s(n+1) - sup_s(n) <= 0", std::nullopt, rise, 0.0,
                                  {}, rep.scales.size()));
  double rise_last = -std::numeric_limits<double>::infinity();
  for (const auto& row : rep.scaling) rise_last = std::max(rise_last, row.back() - row.front());
  rep.checks.push_back(make_check("scaling_last_le_first", "col8 - col1 <= 0", std::nullopt, rise_last, 0.0, {},
                                  rep.scaling.size()));
  return rep;
}

std::string to_string(DegenerateMode m) {
  return m == DegenerateMode::GEqLambdaF ? "g_eq_lambda_f" : "h_eq_lambda_f";
}

DegenerateMode degenerate_mode_from_string(const std::string& s) {
  if (s == "g_eq_lambda_f") return DegenerateMode::GEqLambdaF;
  if (s == "h_eq_lambda_f") return DegenerateMode::HEqLambdaF;
  throw std::invalid_argument("unknown degenerate mode '" + s + "'");
}

bool DegenerateReport::passed() const {
  return status == "ok" && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

namespace {

void check_degenerate_lambda(DegenerateMode mode, double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("degenerate: lambda must be finite");
  if (mode == DegenerateMode::GEqLambdaF && lambda == 1.0) {
    throw std::invalid_argument("degenerate: mode g_eq_lambda_f requires lambda != 1");
  }
  if (mode == DegenerateMode::HEqLambdaF && lambda == 0.0) {
    throw std::invalid_argument("degenerate: mode h_eq_lambda_f requires lambda != 0");
  }
}

double degenerate_divisor(DegenerateMode mode, double lambda) {
  return mode == DegenerateMode::GEqLambdaF ? std::abs(1.0 - lambda) : std::abs(lambda);
}

}  // namespace

PexiderTriple degenerate_triple(DegenerateMode mode, double lambda, double eps, std::uint64_t seed,
                                std::size_t dim, OrthoRelation rel) {
  check_degenerate_lambda(mode, lambda);
  if (!(eps >= 0.0)) throw std::invalid_argument("degenerate: eps must be >= 0");
  // Largest amplitude for which the premise holds with eps: the four terms
  // contribute at most (2 + 2|g scale| + 2|h scale|) times it.
  const double gs = mode == DegenerateMode::GEqLambdaF ? std::abs(lambda) : 1.0;
  const double hs = mode == DegenerateMode::HEqLambdaF ? std::abs(lambda) : 0.0;
  const double amplitude = eps / (2.0 + 2.0 * gs + 2.0 * hs);
  PexiderTriple t;
  t.f = MapModel::zero(dim, 1);
  t.f.noise = NoiseSpec{amplitude, seed, Parity::Odd};
  t.f.parity_filter = Parity::Odd;
  if (mode == DegenerateMode::GEqLambdaF) {
    t.g = t.f.scaled(lambda);
    t.h = MapModel::zero(dim, 1);
  } else {
    t.g = t.f;
    t.h = t.f.scaled(lambda);
  }
  t.epsilon_design = eps;
  t.relation = std::move(rel);
  return t;
}

DegenerateReport remark_24_degenerate(DegenerateMode mode, double lambda, double eps,
                                      const TheoremCheckConfig& cfg, std::size_t dim, OrthoRelation rel) {
  cfg.validate();
  check_degenerate_lambda(mode, lambda);
  const PexiderTriple t = degenerate_triple(mode, lambda, eps, cfg.seed, dim, rel);
  DegenerateReport rep;
  rep.mode = mode;
  rep.lambda = lambda;
  rep.epsilon = eps;
  rep.amplitude = t.f.noise->amplitude;

  const PairSampler master = master_sampler(cfg, dim);
  {
    PairSampler s = master.split(kPairs);
    const PremiseSup p = premise_sup(t, s, cfg.n_pairs, cfg.exec);
    rep.epsilon_sampled = p.epsilon_sampled;
    std::vector<Vector> w;
    if (p.argmax) w = {p.argmax->first, p.argmax->second};
    rep.checks.push_back(make_check("premise", "eps", 1.0, p.epsilon_sampled, eps * cfg.bound_scale, w, cfg.n_pairs));
  }
  const std::vector<Vector> probes = theorem_probes(cfg, dim);
  const VectorMap f = as_map(t.f);
  const std::size_t np = probes.size();

  // |1 - lambda| ||f|| <= eps/2 (mode i) or ||h|| = |lambda| ||f|| <= eps/2 (mode ii).
  const double divisor = degenerate_divisor(mode, lambda);
  const auto tie = kernels::map_indices<double>(cfg.exec, np, [&](std::size_t i) { return divisor * norm_inf(f(probes[i])); });
  const auto mt = kernels::max_of(tie);
  rep.checks.push_back(make_check(mode == DegenerateMode::GEqLambdaF ? "one_minus_lambda_f_bound" : "h_bound",
                                  "eps/2", 0.5, mt.value, 0.5 * eps * cfg.bound_scale, {probes[mt.index]}, np));

  HyersOptions opts;
  opts.n_max = cfg.n_max;
  opts.stop_tol = cfg.stop_tol;
  const auto traces = kernels::hyers_batch(f, probes, opts, HyersScaling::Additive, cfg.exec);
  rep.hyers = summarize(traces);
  std::size_t worst = 0;
  std::vector<double> value(np), allowed(np);
  const double factor = std::max(1.0 / divisor, 1.0);
  for (std::size_t i = 0; i < np; ++i) {
    if (traces[i].verdict == HyersVerdict::Diverged) {
      rep.status = "diverged";
      return rep;
    }
    value[i] = norm_inf(traces[i].limit());
    allowed[i] = std::ldexp(1.0, -traces[i].stop_n) * eps * factor;
    if (value[i] - allowed[i] > value[worst] - allowed[worst]) worst = i;
  }
  rep.checks.push_back(make_check("limit_vanishes", "2^-n*eps*max(1/d,1)", std::nullopt, value[worst],
                                  allowed[worst] * cfg.bound_scale, {probes[worst]}, np));
  return rep;
}

Z2Certificate z2_remark_check(int grid_radius) {
  if (grid_radius < 1) throw std::invalid_argument("z2_remark_check: grid_radius must be >= 1");
  // Sums and differences of grid points stay within radius 2r.
  const FiniteModel a(2 * grid_radius, 1);
  Z2Certificate cert;
  cert.grid_radius = grid_radius;
  const int r = grid_radius;
  const std::size_t side = static_cast<std::size_t>(2 * r + 1);
  cert.grid_points = side * side;
  for (int x1 = -r; x1 <= r; ++x1)
    for (int x2 = -r; x2 <= r; ++x2)
      for (int y1 = -r; y1 <= r; ++y1)
        for (int y2 = -r; y2 <= r; ++y2) {
          const int lhs = (a.at(x1 + y1, x2 + y2) + a.at(x1 - y1, x2 - y2)) % 2;
          const int rhs = (2 * a.at(x1, x2)) % 2;
          ++cert.pairs_checked;
          if (lhs != rhs) ++cert.failures;
        }
  cert.value_at_zero = a.at(0, 0);

  // The same constant table read in R: the identity holds and A - A(0) = 0.
  const double one = 1.0;
  cert.real_identity_holds = (one + one - 2.0 * one) == 0.0;
  cert.real_shifted_additivity_max = std::abs((one - one) - (one - one) - (one - one));
  return cert;
}

EvenExploreReport even_case_explore(const PexiderTriple& t, const TheoremCheckConfig& cfg) {
  cfg.validate();
  const std::size_t dim = t.f.in_dim;
  const VectorMap f = as_map(t.f);
  const VectorMap g = as_map(t.g);
  const VectorMap h = as_map(t.h);
  const std::vector<Vector> probes = theorem_probes(cfg, dim);
  const std::size_t np = probes.size();

  const auto even = kernels::map_indices<double>(cfg.exec, np, [&](std::size_t i) {
    return norm_inf(f(probes[i]) - f(-probes[i]));
  });
  const double even_residual = kernels::max_of(even).value;
  if (!(even_residual <= 1e-9)) {
    throw HypothesisViolation("EVEN_VIOLATION", "f is not even: max ||f(x) - f(-x)|| = " +
                                                    std::to_string(even_residual));
  }

  EvenExploreReport rep;
  const PairSampler master = master_sampler(cfg, dim);
  PairSampler pair_stream = master.split(kPairs);
  const auto pairs = sample_orthogonal_pairs(t.relation, pair_stream, cfg.n_pairs);
  const PremiseSup ps = premise_sup(t, pairs, cfg.exec);
  rep.epsilon_sampled = ps.epsilon_sampled;

  HyersOptions opts;
  opts.n_max = cfg.n_max;
  opts.stop_tol = cfg.stop_tol;
  opts.epsilon = ps.epsilon_sampled;
  const auto traces = kernels::hyers_batch(f, probes, opts, HyersScaling::Quadratic, cfg.exec);
  rep.hyers = summarize(traces);
  for (const auto& tr : traces) {
    if (tr.verdict == HyersVerdict::Diverged) {
      rep.status = "diverged";
      return rep;
    }
  }
  const auto sups = kernels::map_indices<std::array<double, 3>>(cfg.exec, np, [&](std::size_t i) {
    const Vector& q = traces[i].limit();
    return std::array<double, 3>{norm_inf(f(probes[i]) - q), norm_inf(g(probes[i]) - q),
                                 norm_inf(h(probes[i]) - q)};
  });
  for (const auto& s : sups) {
    rep.sup_f_minus_q = std::max(rep.sup_f_minus_q, s[0]);
    rep.sup_g_minus_q = std::max(rep.sup_g_minus_q, s[1]);
    rep.sup_h_minus_q = std::max(rep.sup_h_minus_q, s[2]);
  }
  auto ratio = [&](double sup) -> std::optional<double> {
    if (rep.epsilon_sampled > 0.0) return sup / rep.epsilon_sampled;
    if (sup == 0.0) return 0.0;
    return std::nullopt;
  };
  rep.alpha = ratio(rep.sup_f_minus_q);
  rep.beta = ratio(rep.sup_g_minus_q);
  rep.gamma = ratio(rep.sup_h_minus_q);

  const VectorMap q = hyers_limit_map(f, opts, HyersScaling::Quadratic);
  PairSampler s = master.split(kLimitPairs);
  const auto fresh = sample_orthogonal_pairs(t.relation, s, cfg.n_limit_pairs);
  const auto oq = kernels::map_indices<double>(cfg.exec, fresh.size(), [&](std::size_t i) {
    const auto& [x, y] = fresh[i];
    return norm_inf(q(x + y) + q(x - y) - 2.0 * q(x) - 2.0 * q(y));
  });
  rep.orthogonal_quadratic_residual = kernels::max_of(oq).value;
  return rep;
}

}  // namespace orthostab
