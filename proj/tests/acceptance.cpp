// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "orthostab/kernels.hpp"
#include "orthostab/verifier.hpp"

using namespace orthostab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

constexpr int kTriples = 20;

// The twenty seeded triples shared by criteria 1, 2 and 9.
PexiderTriple seeded_triple(int k) {
  const std::uint64_t s = 1000 + 10 * static_cast<std::uint64_t>(k);
  return make_pexider_instance(Matrix::from_rows({{1.5, -0.5}}), 0.25, 0.25, 0.25, {s + 1, s + 2, s + 3},
                               OrthoRelation::inner_product());
}

TheoremCheckConfig criterion_config(int k) {
  TheoremCheckConfig c;
  c.seed = 500 + static_cast<std::uint64_t>(k);
  c.n_max = 30;
  c.n_pairs = 10000;
  c.n_probes = 1000;
  c.epsilon_mode = EpsilonMode::Sampled;
  return c;
}

bool within(double measured, double bound) { return measured <= bound + 1e-9 * (1.0 + bound); }

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

std::vector<double> sampled_eps(kTriples, 0.0);

Outcome criterion_1() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, double>> chain{{"h_bound", 0.5},     {"f_minus_g", 0.5},
                                                          {"jensen_premise", 3.0}, {"doubling", 6.0},
                                                          {"hyers_limit", 6.0}, {"f_minus_TQ", 6.0},
                                                          {"g_minus_TQ", 6.5}};
  Outcome o;
  double worst_ratio = 0.0;
  for (int k = 0; k < kTriples; ++k) {
    const StabilityReport r = verify_theorem(seeded_triple(k), criterion_config(k));
    sampled_eps[k] = r.epsilon_sampled;
    if (r.status != "ok" || r.epsilon_used != r.epsilon_sampled || r.epsilon_sampled > r.epsilon_design) {
      o.pass = false;
    }
    for (const auto& [name, constant] : chain) {
      const CheckResult* c = r.find(name);
      if (c == nullptr || !c->constant || *c->constant != constant) {
        o.pass = false;
        continue;
      }
      const double bound = constant * r.epsilon_sampled;
      o.pass = o.pass && within(c->measured, bound) && c->pass;
      worst_ratio = std::max(worst_ratio, c->measured / bound);
    }
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < 60.0;
  o.detail = fmt("20 triples, 7 checks each, worst measured/bound %.3f, %.1f s", worst_ratio, secs);
  return o;
}

Outcome criterion_2() {
  Outcome o;
  double worst = -1e300;
  for (int k = 0; k < kTriples; ++k) {
    const PexiderTriple t = seeded_triple(k);
    const double eps = sampled_eps[k];
    PairSampler s(7000 + static_cast<std::uint64_t>(k), 2);
    for (int p = 0; p < 100; ++p) {
      const Vector x = s.next_vector();
      const Vector fx = eval(t.f, x);
      for (int n = 0; n <= 30; ++n) {
        const double two_n = std::ldexp(1.0, n);
        const Vector it = (1.0 / two_n) * eval(t.f, two_n * x);
        const double gap = norm_inf(it - fx) - (6.0 * eps * (1.0 - 1.0 / two_n) + 1e-9);
        worst = std::max(worst, gap);
        o.pass = o.pass && gap <= 0.0;
      }
    }
  }
  o.detail = fmt("100 probes x 31 steps x 20 triples, max(measured - bound) %.3g", worst);
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const std::vector<Matrix> maps{Matrix::from_rows({{1.5, -0.5}}), Matrix::from_rows({{1.0, -2.0}, {0.5, 3.0}}),
                                 Matrix::from_rows({{0.0, 0.0}}), Matrix::from_rows({{-7.0, 4.0}})};
  double worst = 0.0;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    const PexiderTriple t = make_pexider_instance(maps[m], 0.0, 0.0, 0.0, {}, OrthoRelation::inner_product());
    TheoremCheckConfig c = criterion_config(static_cast<int>(m));
    c.n_pairs = 2000;
    c.n_probes = 200;
    double scale = 1.0;
    for (const Vector& x : theorem_probes(c, 2)) scale = std::max(scale, 1.0 + norm_inf(eval(t.f, x)));
    const StabilityReport r = verify_theorem(t, c);
    const UniquenessReport u = uniqueness_probe(t, c, 4242);
    o.pass = o.pass && r.status == "ok" && u.status == "ok";
    std::vector<CheckResult> all = r.checks;
    all.insert(all.end(), u.checks.begin(), u.checks.end());
    for (const CheckResult& k : all) {
      worst = std::max(worst, k.measured / scale);
      o.pass = o.pass && k.measured <= 1e-9 * scale;
    }
    o.pass = o.pass && r.epsilon_sampled <= 1e-9 * scale;
  }
  o.detail = fmt("4 exact triples, verify + uniqueness, max measured/scale %.3g", worst);
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const OrthoRelation ip = OrthoRelation::inner_product();
  MapModel constant = MapModel::zero(2, 1);
  constant.constant = Vector{-2.5};
  MapModel lq = MapModel::linear_map(Matrix::from_rows({{2.0, -1.0}}));
  lq.quad = {Matrix::identity(2)};
  double worst = 0.0;
  int seed = 0;
  for (const MapModel& m : {MapModel::linear_map(Matrix::from_rows({{2.0, -1.0}})), constant, lq}) {
    PairSampler s(8000 + seed++, 2);
    const double r = orthogonal_additivity_residual(as_map(m), ip, s, 1000, Exec::Parallel).max;
    worst = std::max(worst, r);
    o.pass = o.pass && r <= 1e-9;
  }
  // ||x||^2 under the trivial relation: the shifted additivity defect is
  // |<x, y>| times two, a closed form computed here from coordinates.
  PairSampler s(8100, 2);
  const auto pairs = sample_orthogonal_pairs(OrthoRelation::trivial(), s, 1000);
  const auto res = kernels::additivity_residuals(as_map(MapModel::squared_norm(2)), pairs, Exec::Parallel);
  double worst_closed = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    const double want = 2.0 * std::fabs(x[0] * y[0] + x[1] * y[1]);
    worst_closed = std::max(worst_closed, std::fabs(res[i] - want));
  }
  o.pass = o.pass && worst_closed <= 1e-9;
  o.detail = fmt("exact maps max residual %.3g; trivial-relation closed form max error %.3g", worst, worst_closed);
  return o;
}

Outcome criterion_5() {
  const auto t0 = Clock::now();
  const Z2Certificate c = z2_remark_check(5);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = c.passed() && c.grid_points == 121 && c.pairs_checked == 121u * 121u && c.failures == 0 &&
           c.value_at_zero == 1 && secs < 1.0;
  o.detail = fmt("%zu points, %zu ordered pairs, %zu failures, A(0) = %d, %.3f s", c.grid_points, c.pairs_checked,
                 c.failures, c.value_at_zero, secs);
  return o;
}

Outcome criterion_6() {
  Outcome o;
  TheoremCheckConfig c;
  c.seed = 606;
  c.n_max = 30;
  double worst = 0.0;
  for (const auto& [mode, lambda] : {std::pair{DegenerateMode::GEqLambdaF, 2.0}, {DegenerateMode::HEqLambdaF, 1.0}}) {
    const DegenerateReport r = remark_24_degenerate(mode, lambda, 1.0, c);
    o.pass = o.pass && r.passed();
    const PexiderTriple t = degenerate_triple(mode, lambda, 1.0, c.seed, 2, OrthoRelation::inner_product());
    HyersOptions h;
    h.n_max = c.n_max;
    const auto probes = theorem_probes(c, 2);
    for (const HyersTrace& tr : kernels::hyers_batch(as_map(t.f), probes, h, HyersScaling::Additive, Exec::Parallel)) {
      const double a = norm_inf(tr.limit());
      worst = std::max(worst, a);
      o.pass = o.pass && tr.usable() && a <= std::ldexp(1.0, -30);
    }
  }
  o.detail = fmt("modes i (lambda 2) and ii (lambda 1), eps 1, max ||A|| = %.3g vs 2^-30 = %.3g", worst,
                 std::ldexp(1.0, -30));
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const OrthoRelation linf = OrthoRelation::birkhoff_james(NormSpec::linf());
  int found = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PairSampler s(9000 + seed, 2);
    found += symmetry_probe(linf, s, 10000).has_value();
  }
  o.pass = found >= 19;

  const OrthoRelation ip = OrthoRelation::inner_product();
  const OrthoRelation bj2 = OrthoRelation::birkhoff_james(NormSpec::l2());
  PairSampler s(9100, 2);
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    // Half the pairs are drawn orthogonal so both verdicts occur.
    const VectorPair p = i % 2 == 0 ? sample_orthogonal_pair(ip, s) : VectorPair{s.next_vector(), s.next_vector()};
    agree += is_orthogonal(bj2, p.first, p.second) == is_orthogonal(ip, p.first, p.second);
  }
  o.pass = o.pass && agree == 1000;

  double worst = 0.0;
  PairSampler g(9200, 2);
  for (const NormSpec& n : {NormSpec::linf(), NormSpec::l1(), NormSpec::l2()}) {
    for (int i = 0; i < 100; ++i) {
      const Vector x = g.next_vector();
      const Vector y = g.next_vector();
      const double b = oracle::bj_bracket(n, x, y);
      const double grid = oracle::min_on_grid(n, x, y, -b, b, 100000).value;
      worst = std::max(worst, std::fabs(bj_minimize(n, x, y).min_value - grid));
    }
  }
  o.pass = o.pass && worst <= 1e-6;
  o.detail = fmt("LInf symmetry witness on %d/20 seeds; L2 vs inner product %d/1000 agree; grid max |diff| %.3g",
                 found, agree, worst);
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const OrthoRelation ip = OrthoRelation::inner_product();
  PairSampler s(9300, 2);
  double worst_ip = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vector x = s.next_vector();
    const Vector r = s.next_vector();
    const double lambda = s.rng().log_uniform(0.01, 100.0);
    const ThalesSolution t = thales_solve(ip, x, lambda, {x, r});
    // Both conditions, measured by relative inner products computed here.
    const Vector a = x + t.y0, b = lambda * x - t.y0;
    const double r1 = std::fabs(dot(x, t.y0)) / (norm2(x) * norm2(t.y0));
    const double r2 = std::fabs(dot(a, b)) / (norm2(a) * norm2(b));
    worst_ip = std::max({worst_ip, r1, r2});
  }
  o.pass = worst_ip <= 1e-10;

  std::string rates;
  for (const NormSpec& n : {NormSpec::linf(), NormSpec::l1()}) {
    const OrthoRelation rel = OrthoRelation::birkhoff_james(n);
    PairSampler ps(9400, 2);
    int ok = 0;
    for (int i = 0; i < 200; ++i) {
      const Vector x = ps.next_vector();
      const Vector r = ps.next_vector();
      const double lambda = ps.rng().log_uniform(0.01, 100.0);
      try {
        const ThalesSolution t = thales_solve(rel, x, lambda, {x, r});
        ok += thales_residual(rel, x, lambda, t.y0) <= 1e-8;
      } catch (const SearchFailed&) {
      }
    }
    o.pass = o.pass && ok >= 190;
    rates += fmt(" %s %d/200", n.name().c_str(), ok);
  }
  o.detail = fmt("inner product max residual %.3g;", worst_ip) + rates + " with phi <= 1e-8";
  return o;
}

Outcome criterion_9() {
  Outcome o;
  double worst_gap = -1e300, worst_rise = -1e300;
  for (int k = 0; k < kTriples; ++k) {
    const TheoremCheckConfig c = criterion_config(k);
    const UniquenessReport u = uniqueness_probe(seeded_triple(k), c, 90000 + static_cast<std::uint64_t>(k));
    o.pass = o.pass && u.status == "ok" && u.n_max_first == 30 && u.n_max_second == 25;
    const double eps = sampled_eps[k];
    const double bound = 6.0 * eps * (std::ldexp(1.0, -25) + std::ldexp(1.0, -30)) + 1e-9;
    for (const CheckResult& ch : u.checks) {
      if (ch.name == "T_vs_T_prime") {
        worst_gap = std::max(worst_gap, ch.measured - bound);
        o.pass = o.pass && ch.measured <= bound;
      }
    }
    for (std::size_t j = 1; j < u.scaling_sup.size(); ++j) {
      const double rise = u.scaling_sup[j] - u.scaling_sup[j - 1];
      worst_rise = std::max(worst_rise, rise);
      o.pass = o.pass && within(rise, 0.0);
    }
  }
  o.detail = fmt("20 triples; max(||T - T'|| - bound) %.3g; max rise of sup ||T(nx) - T'(nx)||/n %.3g", worst_gap,
                 worst_rise);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 proof-chain bounds on 20 seeded triples", criterion_1},
      {"2 geometric-series invariant", criterion_2},
      {"3 exact-solution regression", criterion_3},
      {"4 orthogonal additivity oracles", criterion_4},
      {"5 Z2 certificate, radius 5", criterion_5},
      {"6 degenerate ties vanish", criterion_6},
      {"7 Birkhoff-James facts", criterion_7},
      {"8 Thalesian solver", criterion_8},
      {"9 uniqueness under reprocessing", criterion_9},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
