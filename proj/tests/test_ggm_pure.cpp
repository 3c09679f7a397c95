#include "ggm/ggm_pure.hpp"
#include "ggm/states.hpp"
#include "ggm/twirl.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ggm;

TEST(GgmPure, KnownStates) {
  for (int n = 2; n <= 8; ++n) EXPECT_NEAR(ggm_pure(ghz(n)).value, 0.5, 1e-12);
  for (int n = 3; n <= 8; ++n) EXPECT_NEAR(ggm_pure(dicke(n, 1)).value, 1.0 / n, 1e-12);
  for (int d = 2; d <= 4; ++d) EXPECT_NEAR(ggm_pure(ghz(3, d)).value, 0.5, 1e-12);  // two-term GHZ in any d
  const CVector prod = CVector::Unit(8, 5);
  EXPECT_NEAR(ggm_pure(PureState(SystemShape::qubits(3), prod)).value, 0.0, 1e-15);
}

TEST(GgmPure, BiseparableStateIsZero) {
  // |Bell>|0>: a product across {0,1}:{2}.
  CVector v = CVector::Zero(8);
  v[0] = v[6] = 1 / std::sqrt(2.0);
  const auto rep = ggm_pure(PureState(SystemShape::qubits(3), v));
  EXPECT_NEAR(rep.value, 0.0, 1e-12);
  ASSERT_EQ(rep.maximizing_cuts.size(), 1u);
  EXPECT_EQ(rep.maximizing_cuts.front().label(), "{0,1}:{2}");
}

TEST(GgmPure, ReportListsEveryCutAndTies) {
  const auto rep = ggm_pure(ghz(4));
  EXPECT_EQ(rep.per_cut.size(), 7u);
  EXPECT_EQ(rep.maximizing_cuts.size(), 7u);  // all cuts tie at 1/2
}

TEST(GgmPure, MatchesBruteForceOracleOnRandomStates) {
  std::mt19937_64 rng(2024);
  const std::vector<std::vector<int>> shapes{{2, 2}, {2, 2, 2}, {2, 3, 2}, {3, 3, 3}, {2, 2, 2, 2, 2}, {4, 2, 3}};
  for (const auto& dims : shapes) {
    const SystemShape s(dims);
    for (int t = 0; t < 5; ++t) {
      const CVector v = oracle::random_state(s.total_dim(), rng);
      const PureState psi(s, v);
      EXPECT_NEAR(ggm_pure(psi).value, oracle::ggm(v, dims), 1e-12) << s.to_string();
      GgmEvaluator ev(s);
      EXPECT_NEAR(ev(v), oracle::ggm(v, dims), 1e-12);
    }
  }
}

TEST(GgmPure, PrunedMaximumEqualsPerCutMaximum) {
  std::mt19937_64 rng(5);
  const auto s = SystemShape::qubits(6);
  GgmEvaluator ev(s);
  for (int t = 0; t < 20; ++t) {
    const CVector v = oracle::random_state(s.total_dim(), rng);
    double best = 0.0;
    for (std::size_t i = 0; i < ev.cuts().size(); ++i) best = std::max(best, ev.lambda_sq(i, v));
    EXPECT_DOUBLE_EQ(ev.max_lambda_sq(v), best);
  }
}

TEST(GgmPure, InvariantUnderLocalUnitaries) {
  std::mt19937_64 rng(99);
  const SystemShape s({2, 3, 2});
  for (int t = 0; t < 5; ++t) {
    const PureState psi(s, oracle::random_state(s.total_dim(), rng));
    std::vector<CMatrix> f;
    for (int d : s.dims()) f.push_back(oracle::random_unitary(d, rng));
    const LocalUnitaryElement u(s, f);
    EXPECT_NEAR(ggm_pure(apply(u, psi)).value, ggm_pure(psi).value, 1e-12);
  }
}

TEST(GgmPure, GeneralizedGhzClosedForm) {
  for (int n = 2; n <= 6; ++n) {
    for (int i = 0; i <= 10; ++i) {
      const double a = i / 10.0;
      EXPECT_NEAR(ggm_pure(gghz(n, a)).value, std::min(a * a, 1 - a * a), 1e-12);
    }
  }
}

TEST(GgmPure, RangeIsBounded) {
  std::mt19937_64 rng(3);
  const SystemShape s({3, 3, 3});
  for (int t = 0; t < 20; ++t) {
    const double g = ggm_pure(PureState(s, oracle::random_state(27, rng))).value;
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0 - 1.0 / 3.0 + 1e-12);  // min side dimension 3
  }
}
