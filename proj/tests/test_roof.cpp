#include "ggm/closed_form.hpp"
#include "ggm/family.hpp"
#include "ggm/roof_bound.hpp"

#include <gtest/gtest.h>

using namespace ggm;

TEST(ClosedForm, CornerAndCentreValues) {
  using V = std::vector<double>;
  EXPECT_NEAR(closed_form(ClosedFormId::rank2_sym, V{0.5}), 0.0, 1e-15);
  EXPECT_NEAR(closed_form(ClosedFormId::rank2_sym, V{1.0}), 0.5, 1e-15);
  EXPECT_NEAR(closed_form(ClosedFormId::rank3_ghz_w, V{1, 0}), 0.5, 1e-12);
  EXPECT_NEAR(closed_form(ClosedFormId::rank3_ghz_w, V{0, 1}), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(closed_form(ClosedFormId::rank3_ghz_w, V{0, 0}), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(closed_form(ClosedFormId::rank5_5qubit, V{1, 0}), 0.5, 1e-12);
  EXPECT_NEAR(closed_form(ClosedFormId::qutrit, V{1.0 / 3, 1.0 / 3}), 0.0, 1e-12);
  EXPECT_NEAR(closed_form(ClosedFormId::qutrit, V{1, 0}), 2.0 / 3.0, 1e-15);
}

TEST(ClosedForm, RejectsOutsideSimplex) {
  using V = std::vector<double>;
  EXPECT_THROW(closed_form(ClosedFormId::rank2_sym, V{1.1}), std::invalid_argument);
  EXPECT_THROW(closed_form(ClosedFormId::qutrit, V{0.7, 0.7}), std::invalid_argument);
  EXPECT_THROW(closed_form(ClosedFormId::qutrit, V{-0.1, 0.2}), std::invalid_argument);
  EXPECT_THROW(closed_form(ClosedFormId::qutrit, V{0.1}), std::invalid_argument);
  EXPECT_THROW(parse_closed_form_id("rank9"), std::invalid_argument);
}

TEST(RoofBound, PureStateIsItsOwnDecomposition) {
  const auto rho = DensityMatrix::projector(dicke(3, 1));
  for (int m : {1, 2, 4}) EXPECT_NEAR(hjw_upper_bound(rho, m, 50, 3), 1.0 / 3.0, 1e-12);
}

TEST(RoofBound, RankTwoSymmetricBoundsTheClosedForm) {
  const auto fam = families::rank2_sym(3).at(std::vector<double>{0.3});
  const double exact = closed_form(ClosedFormId::rank2_sym, std::vector<double>{0.3});
  const double ub = hjw_upper_bound(fam.target(), 4, 2000, kDefaultSeed);
  EXPECT_GE(ub, exact - 1e-9);
  EXPECT_LT(ub - exact, 0.05);
}

TEST(RoofBound, SeparableStateApproachesZero) {
  // (|00><00| + |11><11|)/2 on parties 0 and 1, times |0> on party 2.
  const auto s = SystemShape::qubits(3);
  const PureState a(s, CVector::Unit(8, 0));
  const PureState b(s, CVector::Unit(8, 6));
  const auto rho = DensityMatrix::mixture(std::vector<PureState>{a, b}, std::vector<double>{0.5, 0.5});
  EXPECT_LE(hjw_upper_bound(rho, 2, 5000, kDefaultSeed), 0.02);
}

TEST(RoofBound, ValidatesArgumentsAndIsDeterministic) {
  const auto rho = families::rank3_ghz_w().at(std::vector<double>{0.3, 0.3}).target();
  EXPECT_THROW(hjw_upper_bound(rho, 2, 10, 1), std::invalid_argument);
  EXPECT_THROW(hjw_upper_bound(rho, 3, 0, 1), std::invalid_argument);
  EXPECT_EQ(hjw_upper_bound(rho, 5, 100, 9), hjw_upper_bound(rho, 5, 100, 9));
}
