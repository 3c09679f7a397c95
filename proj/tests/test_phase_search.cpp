#include "ggm/closed_form.hpp"
#include "ggm/phase_search.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace ggm;

namespace {

double direct_ggm(const std::vector<PureState>& basis, const std::vector<double>& w, const std::vector<double>& ph) {
  return ggm_pure(superpose(basis, w, ph)).value;
}

}  // namespace

TEST(PhaseSearch, EvaluateMatchesSuperposition) {
  const auto m = families::rank3_ghz_w();
  PhaseMinimizer pm(m.basis());
  const std::vector<double> w{0.2, 0.5, 0.3};
  const std::vector<double> ph{0.0, 1.1, -2.0};
  EXPECT_NEAR(pm.evaluate(w, ph), direct_ggm(m.basis(), w, ph), 1e-13);
}

TEST(PhaseSearch, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(std::numbers::pi), std::numbers::pi);
  EXPECT_DOUBLE_EQ(wrap_angle(-std::numbers::pi), std::numbers::pi);
  EXPECT_NEAR(wrap_angle(3 * std::numbers::pi / 2), -std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(wrap_angle(-7.0), -7.0 + 2 * std::numbers::pi, 1e-15);
}

TEST(PhaseSearch, MinimumNeverExceedsAnySampledPhase) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  for (const auto& m : {families::rank3_gghz(0.55), families::zeta_full(), families::qutrit()}) {
    PhaseMinimizer pm(m.basis());
    const std::size_t k = m.basis().size();
    std::vector<double> w(k, 1.0 / static_cast<double>(k));
    const auto res = pm.minimize(w);
    EXPECT_NEAR(res.value, pm.evaluate(w, res.phases), 1e-14);
    EXPECT_DOUBLE_EQ(res.phases.front(), 0.0);  // gauge
    for (int t = 0; t < 200; ++t) {
      std::vector<double> ph(k, 0.0);
      for (std::size_t i = 1; i < k; ++i) ph[i] = u(rng);
      EXPECT_LE(res.value, pm.evaluate(w, ph) + 1e-12) << m.name();
    }
  }
}

TEST(PhaseSearch, RankTwoReachesClosedFormAtZeroPhase) {
  for (int n : {3, 4, 5}) {
    const auto m = families::rank2_sym(n);
    PhaseMinimizer pm(m.basis());
    for (double x : {0.1, 0.3, 0.5, 0.8}) {
      const std::vector<double> p{x};
      const auto res = pm.minimize(m.weights(p));
      EXPECT_NEAR(res.value, closed_form(ClosedFormId::rank2_sym, p), 1e-9);
      EXPECT_NEAR(res.phases[1], 0.0, 1e-6);
    }
  }
}

TEST(PhaseSearch, ZeroWeightsDropTheirPhase) {
  const auto m = families::rank3_ghz_w();
  PhaseMinimizer pm(m.basis());
  const std::vector<double> w{0.5, 0.0, 0.5};
  const auto res = pm.minimize(w);
  EXPECT_DOUBLE_EQ(res.phases[1], 0.0);
  const std::vector<double> only_last{0.0, 0.0, 1.0};
  const auto single = pm.minimize(only_last);
  EXPECT_NEAR(single.value, ggm_pure(dicke(3, 2)).value, 1e-14);
  EXPECT_THROW(pm.minimize(std::vector<double>{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(PhaseSearch, RefineFromNeverWorsensItsStart) {
  const auto m = families::rank5_5qubit();
  PhaseMinimizer pm(m.basis());
  const auto w = m.weights(std::vector<double>{0.3, 0.3});
  const std::vector<double> start{0.0, 0.4, -0.3, 0.2, 1.0};
  const auto res = pm.refine_from(w, {start});
  EXPECT_LE(res.value, pm.evaluate(w, start));
}

TEST(PhaseSearch, ZetaSliceArgminUpToConjugation) {
  const auto m = families::zeta_slice();
  PhaseMinimizer pm(m.basis());
  const auto res = pm.minimize(m.weights(std::vector<double>{0.3, 0.4}));
  // Gauge on zeta_1; the minimizer is (pi/2, -pi/2, 0) or its mirror.
  EXPECT_NEAR(std::abs(res.phases[1]), std::numbers::pi / 2, 1e-2);
  EXPECT_NEAR(res.phases[2], -res.phases[1], 1e-2);
  EXPECT_NEAR(res.phases[3], 0.0, 1e-2);
}

TEST(PhaseSearch, Deterministic) {
  const auto m = families::zeta_full();
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  PhaseMinimizer a(m.basis());
  PhaseMinimizer b(m.basis());
  const auto ra = a.minimize(w);
  const auto rb = b.minimize(w);
  EXPECT_EQ(ra.value, rb.value);
  EXPECT_EQ(ra.phases, rb.phases);
}
