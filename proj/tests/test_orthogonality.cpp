#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "orthostab/golden.hpp"
#include "orthostab/orthogonality.hpp"
#include "orthostab/random.hpp"

using namespace orthostab;

namespace {

std::vector<OrthoRelation> all_relations() {
  return {OrthoRelation::trivial(), OrthoRelation::inner_product(),
          OrthoRelation::birkhoff_james(NormSpec::l1()), OrthoRelation::birkhoff_james(NormSpec::linf()),
          OrthoRelation::birkhoff_james(NormSpec::lp(3.0)),
          OrthoRelation::a_ortho(Matrix::from_rows({{2.0, 1.0}, {1.0, 3.0}}))};
}

}  // namespace

TEST(Golden, SmoothAndKinkedMinima) {
  const LineMinimum a = golden_section_minimize([](double t) { return (t - 1.3) * (t - 1.3); }, -5.0, 5.0, 1e-12);
  EXPECT_NEAR(a.argmin, 1.3, 1e-6);
  EXPECT_LE(a.value, 1e-12);
  const LineMinimum b = golden_section_minimize([](double t) { return std::fabs(t + 0.25) + 2.0; }, -1.0, 3.0, 1e-12);
  EXPECT_NEAR(b.argmin, -0.25, 1e-11);
  EXPECT_NEAR(b.value, 2.0, 1e-11);
  // Minimum at the bracket edge.
  const LineMinimum c = golden_section_minimize([](double t) { return t; }, 0.0, 1.0, 1e-12);
  EXPECT_LE(c.value, 1e-11);
}

TEST(Rng, SameSeedSameStreamAndSplitsDiffer) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform01();
    EXPECT_EQ(va, b.uniform01());
    EXPECT_GE(va, 0.0);
    EXPECT_LT(va, 1.0);
    EXPECT_NE(va, c.uniform01());
  }
  EXPECT_NE(derive_seed(42, 1), derive_seed(42, 2));
  Rng d(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = d.log_uniform(0.1, 10.0);
    EXPECT_GE(v, 0.1);
    EXPECT_LT(v, 10.0 * (1 + 1e-15));
  }
}

TEST(IsOrthogonal, SpecExamples) {
  EXPECT_TRUE(is_orthogonal(OrthoRelation::inner_product(), Vector{1.0, 0.0}, Vector{0.0, 3.0}));
  for (const auto& rel : all_relations()) {
    EXPECT_TRUE(is_orthogonal(rel, Vector{1.3, -2.0}, Vector(2))) << rel.name();
    EXPECT_TRUE(is_orthogonal(rel, Vector(2), Vector{1.3, -2.0})) << rel.name();
  }
  // Grid of lambda over [-4, 4] step 1e-4: min ||(1,1) + l(1,0)||_inf = 1.
  const NormSpec linf = NormSpec::linf();
  double grid_min = 1e300;
  for (int i = -40000; i <= 40000; ++i) {
    grid_min = std::min(grid_min, oracle::norm(linf, oracle::combo(Vector{1.0, 1.0}, i * 1e-4, Vector{1.0, 0.0})));
  }
  EXPECT_DOUBLE_EQ(grid_min, 1.0);
  EXPECT_TRUE(is_orthogonal(OrthoRelation::birkhoff_james(linf), Vector{1.0, 1.0}, Vector{1.0, 0.0}));
}

TEST(IsOrthogonal, TrivialIsIndependence) {
  const OrthoRelation t = OrthoRelation::trivial();
  EXPECT_TRUE(is_orthogonal(t, Vector{1.0, 0.0}, Vector{1.0, 1e-3}));
  EXPECT_FALSE(is_orthogonal(t, Vector{1.0, 2.0}, Vector{-2.0, -4.0}));
  EXPECT_FALSE(is_orthogonal(t, Vector{1.0, 2.0, 3.0}, Vector{2.0, 4.0, 6.0}));
}

TEST(IsOrthogonal, AOrthoValidatesAndUsesA) {
  EXPECT_THROW(OrthoRelation::a_ortho(Matrix::from_rows({{1.0, 2.0}, {0.0, 1.0}})), std::invalid_argument);
  const OrthoRelation a = OrthoRelation::a_ortho(Matrix::from_rows({{2.0, 0.0}, {0.0, 1.0}}));
  // <A(1,1), (1,-2)> = 2 - 2 = 0
  EXPECT_TRUE(is_orthogonal(a, Vector{1.0, 1.0}, Vector{1.0, -2.0}));
  EXPECT_FALSE(is_orthogonal(a, Vector{1.0, 1.0}, Vector{1.0, -1.0}));
  EXPECT_THROW(is_orthogonal(a, Vector{1.0, 1.0, 1.0}, Vector{1.0, 1.0, 1.0}), DimensionMismatch);
}

TEST(BjMinimize, SpecExamples) {
  const BjMinimum a = bj_minimize(NormSpec::l2(), Vector{1.0, 0.0}, Vector{0.0, 1.0});
  EXPECT_NEAR(a.lambda_star, 0.0, 1e-9);
  EXPECT_NEAR(a.min_value, 1.0, 1e-9);
  const BjMinimum b = bj_minimize(NormSpec::l2(), Vector{1.0, 1.0}, Vector{1.0, 0.0});
  EXPECT_NEAR(b.lambda_star, -1.0, 1e-6);
  EXPECT_NEAR(b.min_value, 1.0, 1e-9);
  const BjMinimum c = bj_minimize(NormSpec::linf(), Vector{1.0, 0.0}, Vector{1.0, 1.0});
  EXPECT_NEAR(c.lambda_star, -0.5, 1e-9);
  EXPECT_NEAR(c.min_value, 0.5, 1e-9);
  EXPECT_THROW(bj_minimize(NormSpec::l2(), Vector{1.0, 0.0}, Vector(2)), std::invalid_argument);
}

TEST(BjMinimize, MatchesGridOracle) {
  PairSampler s(3, 2);
  for (const NormSpec& n : {NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), NormSpec::lp(3.0)}) {
    for (int i = 0; i < 25; ++i) {
      const Vector x = s.next_vector();
      const Vector y = s.next_vector();
      const double b = oracle::bj_bracket(n, x, y);
      const oracle::GridMin g = oracle::min_on_grid(n, x, y, -b, b, 20000);
      EXPECT_NEAR(bj_minimize(n, x, y).min_value, g.value, 1e-6 * (1.0 + g.value)) << n.name();
    }
  }
}

TEST(BjDecision, AgreesWithGridOracleSign) {
  const NormSpec linf = NormSpec::linf();
  const OrthoRelation rel = OrthoRelation::birkhoff_james(linf);
  PairSampler s(5, 2);
  int orth_count = 0;
  for (int i = 0; i < 100; ++i) {
    // Half the pairs are drawn BJ-orthogonal so both verdicts occur.
    VectorPair p = i % 2 == 0 ? sample_orthogonal_pair(rel, s) : VectorPair{s.next_vector(), s.next_vector()};
    const auto& [x, y] = p;
    const double b = oracle::bj_bracket(linf, x, y);
    const double gap = oracle::min_on_grid(linf, x, y, -b, b, 20000).value - oracle::norm(linf, x) * (1 - 1e-8);
    const bool verdict = is_orthogonal(rel, x, y);
    orth_count += verdict;
    if (verdict) {
      EXPECT_GE(gap, -1e-9) << i;
    } else {
      EXPECT_LT(gap, 1e-9) << i;
    }
  }
  EXPECT_GE(orth_count, 50);
  EXPECT_LT(orth_count, 100);
}

TEST(BjDecision, L2AgreesWithInnerProduct) {
  const OrthoRelation ip = OrthoRelation::inner_product();
  const OrthoRelation bj = OrthoRelation::birkhoff_james(NormSpec::l2());
  PairSampler s(8, 3);
  for (int i = 0; i < 500; ++i) {
    const auto [x, y] = sample_orthogonal_pair(ip, s);
    EXPECT_TRUE(is_orthogonal(bj, x, y));
    EXPECT_TRUE(is_orthogonal(bj, y, x));
  }
  for (int i = 0; i < 500; ++i) {
    const Vector x = s.next_vector();
    const Vector y = s.next_vector();
    EXPECT_EQ(is_orthogonal(bj, x, y), is_orthogonal(ip, x, y));
    EXPECT_EQ(is_orthogonal(bj, y, x), is_orthogonal(ip, y, x));
  }
}

TEST(Thales, InnerProductSpecExamples) {
  const OrthoRelation ip = OrthoRelation::inner_product();
  const std::pair<Vector, Vector> axes{Vector{1.0, 0.0}, Vector{0.0, 1.0}};
  const ThalesSolution s = thales_solve(ip, Vector{1.0, 0.0}, 4.0, axes);
  EXPECT_NEAR(s.y0[0], 0.0, 1e-15);
  EXPECT_NEAR(s.y0[1], 2.0, 1e-15);
  EXPECT_EQ(dot(Vector{1.0, 2.0}, Vector{4.0, -2.0}), 0.0);

  PairSampler ps(9, 3);
  for (int i = 0; i < 200; ++i) {
    const Vector x = ps.next_vector();
    const Vector r = ps.next_vector();
    const double lambda = ps.rng().log_uniform(0.01, 100.0);
    const ThalesSolution t = thales_solve(ip, x, lambda, {x, r});
    EXPECT_NEAR(norm2(t.y0), std::sqrt(lambda) * norm2(x), 1e-12 * std::sqrt(lambda) * norm2(x));
    EXPECT_LE(t.residual, 1e-10);
    const ThalesSolution one = thales_solve(ip, x, 1.0, {x, r});
    EXPECT_NEAR(norm2(one.y0), norm2(x), 1e-12 * norm2(x));
  }
}

TEST(Thales, BirkhoffJamesLInfSpecExample) {
  const OrthoRelation rel = OrthoRelation::birkhoff_james(NormSpec::linf());
  const ThalesSolution s = thales_solve(rel, Vector{1.0, 0.0}, 1.0, {Vector{1.0, 0.0}, Vector{0.0, 1.0}});
  EXPECT_LE(s.residual, kThalesTolerance);
  EXPECT_NEAR(s.y0[0], 0.0, 1e-6);
  EXPECT_NEAR(std::fabs(s.y0[1]), 1.0, 1e-6);
  // (1,1) _|_ (1,-1): min over mu of max(|1+mu|, |1-mu|) = 1 on a dense grid.
  double m = 1e300;
  for (int i = -20000; i <= 20000; ++i) {
    m = std::min(m, oracle::norm(NormSpec::linf(), oracle::combo(Vector{1.0, 1.0}, i * 1e-4, Vector{1.0, -1.0})));
  }
  EXPECT_DOUBLE_EQ(m, 1.0);
}

TEST(Thales, BirkhoffJamesSuccessRate) {
  for (const NormSpec& n : {NormSpec::linf(), NormSpec::l1(), NormSpec::l2(), NormSpec::lp(3.0)}) {
    const OrthoRelation rel = OrthoRelation::birkhoff_james(n);
    PairSampler ps(21, 2);
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
      const Vector x = ps.next_vector();
      const Vector r = ps.next_vector();
      const double lambda = ps.rng().log_uniform(0.01, 100.0);
      try {
        const ThalesSolution t = thales_solve(rel, x, lambda, {x, r});
        ok += t.residual <= kThalesTolerance && is_orthogonal(rel, x, t.y0) &&
              is_orthogonal(rel, x + t.y0, lambda * x - t.y0);
      } catch (const SearchFailed&) {
      }
    }
    EXPECT_GE(ok, 95) << n.name();
  }
}

TEST(Thales, RejectsBadInput) {
  const OrthoRelation ip = OrthoRelation::inner_product();
  const std::pair<Vector, Vector> axes{Vector{1.0, 0.0}, Vector{0.0, 1.0}};
  EXPECT_THROW(thales_solve(ip, Vector{1.0, 0.0}, -1.0, axes), std::invalid_argument);
  EXPECT_THROW(thales_solve(ip, Vector(2), 1.0, axes), std::invalid_argument);
}

TEST(AxiomSuite, InnerProductAndTrivialAreClean) {
  PairSampler a(1, 2);
  const AxiomReport ip = axiom_suite(OrthoRelation::inner_product(), a, 1000);
  EXPECT_TRUE(ip.clean());
  for (const auto& r : ip.axioms) {
    EXPECT_EQ(r.checked, 1000u) << r.axiom;
    EXPECT_LE(r.max_residual, r.tolerance) << r.axiom;
  }
  PairSampler b(1, 2);
  const AxiomReport tr = axiom_suite(OrthoRelation::trivial(), b, 1000);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(tr.axioms[k].violations.empty()) << tr.axioms[k].axiom;
}

TEST(AxiomSuite, IdentityAOrthoMatchesInnerProduct) {
  const OrthoRelation ip = OrthoRelation::inner_product();
  const OrthoRelation ai = OrthoRelation::a_ortho(Matrix::identity(2));
  PairSampler s(2, 2);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = s.next_vector();
    const Vector y = i % 2 ? s.next_vector() : sample_orthogonal_pair(ip, s).second;
    const Vector xx = i % 2 ? x : sample_orthogonal_pair(ip, s).first;
    EXPECT_EQ(is_orthogonal(ai, xx, y), is_orthogonal(ip, xx, y));
  }
}

TEST(Symmetry, ProbeResults) {
  PairSampler a(4, 2);
  EXPECT_FALSE(symmetry_probe(OrthoRelation::inner_product(), a, 10000).has_value());
  const OrthoRelation linf = OrthoRelation::birkhoff_james(NormSpec::linf());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    PairSampler s(seed, 2);
    const auto w = symmetry_probe(linf, s, 10000);
    ASSERT_TRUE(w.has_value()) << seed;
    EXPECT_TRUE(is_orthogonal(linf, w->first, w->second));
    EXPECT_FALSE(is_orthogonal(linf, w->second, w->first));
  }
  // x = (1,1), y = (1,0): x _|_ y, but min ||y + mu x|| = 0.5 at mu = -0.5.
  EXPECT_TRUE(is_orthogonal(linf, Vector{1.0, 1.0}, Vector{1.0, 0.0}));
  const BjMinimum m = bj_minimize(NormSpec::linf(), Vector{1.0, 0.0}, Vector{1.0, 1.0});
  EXPECT_NEAR(m.lambda_star, -0.5, 1e-9);
  EXPECT_NEAR(m.min_value, 0.5, 1e-9);
  EXPECT_FALSE(is_orthogonal(linf, Vector{1.0, 0.0}, Vector{1.0, 1.0}));
}

TEST(Symmetry, BirkhoffJamesL2HasNoWitness) {
  PairSampler s(6, 2);
  EXPECT_FALSE(symmetry_probe(OrthoRelation::birkhoff_james(NormSpec::l2()), s, 10000).has_value());
}

TEST(Sampler, InnerProductPairsAreOrthogonal) {
  PairSampler s(10, 4);
  for (int i = 0; i < 1000; ++i) {
    const auto [x, y] = sample_orthogonal_pair(OrthoRelation::inner_product(), s);
    EXPECT_LE(std::fabs(dot(x, y)), 1e-10 * norm2(x) * norm2(y));
  }
}

TEST(Sampler, SeedDeterminism) {
  for (const auto& rel : all_relations()) {
    PairSampler a(42, 2), b(42, 2);
    for (int i = 0; i < 50; ++i) {
      const auto p = sample_orthogonal_pair(rel, a);
      const auto q = sample_orthogonal_pair(rel, b);
      EXPECT_EQ(p.first, q.first);
      EXPECT_EQ(p.second, q.second);
    }
  }
}

TEST(Sampler, BirkhoffJamesL1InR3) {
  const NormSpec l1 = NormSpec::l1();
  const OrthoRelation rel = OrthoRelation::birkhoff_james(l1);
  PairSampler s(12, 3);
  for (int i = 0; i < 1000; ++i) {
    const auto [x, y] = sample_orthogonal_pair(rel, s);
    EXPECT_TRUE(is_orthogonal(rel, x, y));
    if (i % 50 == 0) {
      const double b = oracle::bj_bracket(l1, x, y);
      const double g = oracle::min_on_grid(l1, x, y, -b, b, 20000).value;
      EXPECT_GE(g, oracle::norm(l1, x) * (1 - 1e-8) - 1e-9);
    }
  }
}

TEST(Homogeneity, ScaledPairsStayOrthogonal) {
  for (const auto& rel : all_relations()) {
    PairSampler s(14, 2);
    for (int i = 0; i < 30; ++i) {
      const auto [x, y] = sample_orthogonal_pair(rel, s);
      for (int k = 0; k < 100; ++k) {
        double a = 0.0, b = 0.0;
        while (a == 0.0) a = s.rng().uniform(-8.0, 8.0);
        while (b == 0.0) b = s.rng().uniform(-8.0, 8.0);
        ASSERT_TRUE(is_orthogonal(rel, a * x, b * y)) << rel.name() << " a=" << a << " b=" << b;
      }
    }
  }
}
