#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "orthostab/kernels.hpp"

using namespace orthostab;

namespace {

// Force several threads even on a single-core host so the parallel path
// really interleaves.
class Kernels : public ::testing::Test {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(4);
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

PexiderTriple noisy_triple(const OrthoRelation& rel) {
  return make_pexider_instance(Matrix::from_rows({{1.5, -0.5}, {0.25, 2.0}}), 0.25, 0.25, 0.25, {21, 22, 23}, rel);
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_F(Kernels, PremiseResidualsSerialEqualsParallel) {
  for (const OrthoRelation& rel : {OrthoRelation::inner_product(), OrthoRelation::birkhoff_james(NormSpec::l1())}) {
    const PexiderTriple t = noisy_triple(rel);
    PairSampler s(1, 2);
    const auto pairs = sample_orthogonal_pairs(rel, s, 5000);
    EXPECT_TRUE(same_bits(kernels::premise_residuals(t, pairs, Exec::Serial),
                          kernels::premise_residuals(t, pairs, Exec::Parallel)))
        << rel.name();
  }
}

TEST_F(Kernels, ResidualKernelsSerialEqualsParallel) {
  const PexiderTriple t = noisy_triple(OrthoRelation::inner_product());
  const VectorMap f = as_map(t.f);
  PairSampler s(2, 2);
  const auto pairs = sample_orthogonal_pairs(t.relation, s, 3000);
  EXPECT_TRUE(same_bits(kernels::jensen_residuals(f, pairs, Exec::Serial),
                        kernels::jensen_residuals(f, pairs, Exec::Parallel)));
  EXPECT_TRUE(same_bits(kernels::additivity_residuals(f, pairs, Exec::Serial),
                        kernels::additivity_residuals(f, pairs, Exec::Parallel)));
}

TEST_F(Kernels, HyersBatchSerialEqualsParallel) {
  const PexiderTriple t = noisy_triple(OrthoRelation::inner_product());
  PairSampler s(3, 2);
  const auto probes = negation_closed_probes(s, 300);
  HyersOptions o;
  o.n_max = 30;
  o.epsilon = t.epsilon_design;
  const auto a = kernels::hyers_batch(as_map(t.f), probes, o, HyersScaling::Additive, Exec::Serial);
  const auto b = kernels::hyers_batch(as_map(t.f), probes, o, HyersScaling::Additive, Exec::Parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].verdict, b[i].verdict);
    EXPECT_EQ(a[i].stop_n, b[i].stop_n);
    ASSERT_EQ(a[i].iterates.size(), b[i].iterates.size());
    for (std::size_t k = 0; k < a[i].iterates.size(); ++k) {
      EXPECT_EQ(a[i].iterates[k].value, b[i].iterates[k].value);
      EXPECT_EQ(a[i].iterates[k].delta, b[i].iterates[k].delta);
    }
  }
}

TEST_F(Kernels, ParallelRethrowsLowestIndexFailure) {
  auto fn = [](std::size_t i) -> int {
    if (i == 37 || i == 911) throw std::runtime_error(std::to_string(i));
    return static_cast<int>(i);
  };
  for (Exec e : {Exec::Serial, Exec::Parallel}) {
    try {
      kernels::map_indices<int>(e, 1000, fn);
      FAIL() << "no exception";
    } catch (const std::runtime_error& err) {
      EXPECT_STREQ(err.what(), "37");
    }
  }
}

TEST(MaxOf, TiesNanAndEmpty) {
  const std::vector<double> ties{1.0, 3.0, 2.0, 3.0};
  EXPECT_EQ(kernels::max_of(ties).index, 1u);
  EXPECT_EQ(kernels::max_of(ties).value, 3.0);
  const std::vector<double> nan{1.0, std::numeric_limits<double>::quiet_NaN(), 5.0};
  EXPECT_EQ(kernels::max_of(nan).index, 1u);
  EXPECT_TRUE(std::isinf(kernels::max_of(nan).value));
  EXPECT_EQ(kernels::max_of({}).value, 0.0);
  const std::vector<double> negative{-2.0, -1.0};
  EXPECT_EQ(kernels::max_of(negative).index, 1u);
}

TEST(MaxOf, MatchesLinearScanOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(200);
    for (auto& x : v) x = std::floor(rng.uniform(0.0, 20.0));
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[best]) best = i;
    }
    EXPECT_EQ(kernels::max_of(v).index, best);
  }
}
