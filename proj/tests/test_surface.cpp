#include "ggm/closed_form.hpp"
#include "ggm/surface.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <sstream>

using namespace ggm;

namespace {

SurfaceOptions coarse(int grid, bool hessian = true) {
  SurfaceOptions o;
  o.grid = grid;
  o.hessian = hessian;
  return o;
}

}  // namespace

TEST(Surface, EnvelopeBelowRawBelowSampledPhases) {
  const auto m = families::rank3_ghz_w();
  const auto s = ggm_mixed(m, coarse(21, false));
  ASSERT_EQ(s.size(), 231u);
  PhaseMinimizer pm(m.basis());
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  for (std::size_t i = 0; i < s.size(); i += 7) {
    EXPECT_LE(s.envelope[i], s.raw[i] + 1e-15);
    const auto w = m.weights(s.grid[i]);
    for (int t = 0; t < 20; ++t) {
      const std::vector<double> ph{0.0, u(rng), u(rng)};
      EXPECT_LE(s.raw[i], pm.evaluate(w, ph) + 1e-12);
    }
  }
}

TEST(Surface, RankTwoIndependentOfPartyCount) {
  const auto a = ggm_mixed(families::rank2_sym(3), coarse(21));
  const auto b = ggm_mixed(families::rank2_sym(6), coarse(21));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.raw[i], b.raw[i], 1e-6);
    EXPECT_NEAR(a.raw[i], closed_form(ClosedFormId::rank2_sym, a.grid[i]), 1e-8);
  }
}

TEST(Surface, HessianSkipsBoundaryPoints) {
  const auto s = ggm_mixed(families::rank2_sym(3), coarse(11));
  EXPECT_TRUE(std::isnan(s.hessian_min_eig.front()));
  EXPECT_TRUE(std::isnan(s.hessian_min_eig.back()));
  EXPECT_FALSE(std::isnan(s.hessian_min_eig[5]));
  EXPECT_FALSE(s.hessian_flagged[5]);
}

TEST(Surface, RejectsCoarseGrids) {
  EXPECT_THROW(ggm_mixed(families::rank2_sym(3), coarse(10)), std::invalid_argument);
  EXPECT_THROW(ggm_mixed(families::qutrit(), coarse(20)), std::invalid_argument);
  EXPECT_THROW(ggm_mixed(families::qutrit(), std::vector<Point>{{0.8, 0.8}}), std::invalid_argument);
}

TEST(Surface, CsvLayoutIsStable) {
  const auto s = ggm_mixed(families::rank3_ghz_w(), coarse(21, false));
  std::ostringstream a, b;
  write_csv(a, s);
  write_csv(b, ggm_mixed(families::rank3_ghz_w(), coarse(21, false)));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "x1,x2,raw,envelope,hessian_min_eig,phi_2,phi_3");
  int rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 6);
    EXPECT_EQ(row.find("-0,"), std::string::npos);
  }
  EXPECT_EQ(rows, 231);
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(0.25), "0.25");
}
