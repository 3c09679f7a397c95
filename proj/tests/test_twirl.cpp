#include "ggm/family.hpp"
#include "ggm/twirl.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace ggm;

TEST(LocalUnitary, FullMatrixIsKroneckerProduct) {
  std::mt19937_64 rng(1);
  const SystemShape s({2, 3});
  std::vector<CMatrix> f{oracle::random_unitary(2, rng), oracle::random_unitary(3, rng)};
  const LocalUnitaryElement u(s, f);
  EXPECT_LT((u.full_matrix() - oracle::kron_all(f)).cwiseAbs().maxCoeff(), 1e-14);
  const CVector v = oracle::random_state(6, rng);
  CVector w = v;
  u.apply_in_place(w);
  EXPECT_LT((w - oracle::kron_all(f) * v).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(LocalUnitary, RejectsNonUnitaryFactors) {
  const auto s = SystemShape::qubits(2);
  EXPECT_THROW(LocalUnitaryElement(s, {CMatrix::Identity(2, 2), 2.0 * CMatrix::Identity(2, 2)}), std::invalid_argument);
  EXPECT_THROW(LocalUnitaryElement(s, {CMatrix::Identity(2, 2)}), std::invalid_argument);
}

TEST(LocalUnitary, PhaseDistanceIgnoresGlobalPhase) {
  const auto s = SystemShape::qubits(2);
  const auto a = LocalUnitaryElement::uniform(s, gates::pauli_z());
  const auto b = LocalUnitaryElement(s, {CMatrix(cplx(0, 1) * gates::pauli_z()), CMatrix(cplx(0, -1) * gates::pauli_z())});
  EXPECT_LT(a.phase_distance(b), 1e-14);
  EXPECT_GT(a.phase_distance(LocalUnitaryElement::identity(s)), 0.5);
}

TEST(Groups, BuiltinsSatisfyAxioms) {
  const std::vector<std::pair<GroupKind, SystemShape>> cases{
      {GroupKind::parity, SystemShape::qubits(4)}, {GroupKind::omega, SystemShape::qubits(3)},
      {GroupKind::omega, SystemShape::qubits(5)},  {GroupKind::zeta, SystemShape::qubits(3)},
      {GroupKind::qudit, SystemShape::uniform(3, 3)}, {GroupKind::qudit, SystemShape({2, 3})}};
  for (const auto& [k, s] : cases) {
    const auto g = builtin_group(k, s);
    const auto chk = check_group(g.elements());
    EXPECT_TRUE(chk.ok()) << s.to_string();
    EXPECT_LE(chk.max_closure_defect, 1e-9);
  }
  EXPECT_EQ(builtin_group(GroupKind::omega, SystemShape::qubits(5)).size(), 5u);
  EXPECT_EQ(builtin_group(GroupKind::omega, SystemShape::qubits(5), 3).size(), 3u);
  EXPECT_EQ(builtin_group(GroupKind::zeta, SystemShape::qubits(3)).size(), 4u);
  EXPECT_EQ(builtin_group(GroupKind::qudit, SystemShape({2, 3})).size(), 6u);
  EXPECT_THROW(builtin_group(GroupKind::zeta, SystemShape::qubits(4)), std::invalid_argument);
}

TEST(Groups, RejectsNonClosedSets) {
  const auto s = SystemShape::qubits(2);
  std::vector<LocalUnitaryElement> els{LocalUnitaryElement::identity(s),
                                       LocalUnitaryElement::uniform(s, gates::phase(std::numbers::pi / 2))};
  EXPECT_FALSE(check_group(els).closed);
  EXPECT_THROW(UnitaryGroup{els}, VerificationError);
  std::vector<LocalUnitaryElement> no_id{LocalUnitaryElement::uniform(s, gates::pauli_x())};
  EXPECT_FALSE(check_group(no_id).has_identity);
}

TEST(Twirl, IsAnIdempotentInvariantProjection) {
  std::mt19937_64 rng(4);
  for (const auto& g : {builtin_group(GroupKind::zeta, SystemShape::qubits(3)),
                        builtin_group(GroupKind::qudit, SystemShape::uniform(3, 3))}) {
    const auto D = static_cast<Eigen::Index>(g.shape().total_dim());
    const PureState psi(g.shape(), oracle::random_state(static_cast<std::size_t>(D), rng));
    const DensityMatrix t = twirl(g, psi);
    EXPECT_TRUE(verify_invariance(g, t).ok);
    EXPECT_LT((twirl(g, t).matrix() - t.matrix()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(t.matrix().trace().real(), 1.0, 1e-13);
  }
}

TEST(Twirl, AnnihilatesCrossSectorTerms) {
  // Omega group of order N on N qubits: |D^q><D^r| picks up e^{2 pi i (q - r)/N}.
  for (int n : {3, 5}) {
    const auto g = builtin_group(GroupKind::omega, SystemShape::qubits(n));
    for (int q = 0; q < n; ++q) {
      for (int r = 0; r < n; ++r) {
        const CMatrix op = dicke(n, q).amplitudes() * dicke(n, r).amplitudes().adjoint();
        const double norm = twirl_operator(g, op).cwiseAbs().maxCoeff();
        if (q == r) {
          EXPECT_GT(norm, 1e-3);
        } else {
          EXPECT_LT(norm, 1e-12);
        }
      }
    }
  }
  // Qudit clock on three qutrits: distinct residue sectors decouple.
  const auto s = SystemShape::uniform(3, 3);
  const auto g = builtin_group(GroupKind::qudit, s);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const CMatrix op = qudit_sector_state(s, a).amplitudes() * qudit_sector_state(s, b).amplitudes().adjoint();
      EXPECT_LT(twirl_operator(g, op).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Twirl, ConjugatedGroupTwirlsRotatedStates) {
  const auto s = SystemShape::qubits(3);
  const auto h = LocalUnitaryElement::uniform(s, gates::hadamard());
  const auto g = builtin_group(GroupKind::parity, s).conjugated_by(h);
  EXPECT_TRUE(check_group(g.elements()).ok());
  // GHZ+ and GHZ- are the rotated parity sectors; their coherence is removed.
  const CMatrix op = ghz(3).amplitudes() * ghz(3, 2, -1).amplitudes().adjoint();
  EXPECT_LT(twirl_operator(g, op).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Preimage, BuiltinFamiliesVerify) {
  using namespace families;
  const std::vector<FamilyModel> models{rank2_sym(4),         ghz_pm(3),          rank3_ghz_w(),
                                        rank3_gghz(0.55),     rank3_ghz_dicke(5), gghz_dicke(4, 0.3),
                                        rank5_5qubit(),       zeta_full(),        zeta_slice(),
                                        qudit_sectors(SystemShape({2, 3, 2})), qutrit()};
  std::mt19937_64 rng(8);
  for (const auto& m : models) {
    for (int t = 0; t < 3; ++t) {
      std::vector<double> x(static_cast<std::size_t>(m.simplex_dim()));
      std::gamma_distribution<double> gam(1.0);
      double sum = 0;
      std::vector<double> e(x.size() + 1);
      for (auto& v : e) sum += (v = gam(rng));
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = e[i] / sum;
      const auto fam = m.at(x);
      EXPECT_TRUE(verify_preimage(fam, preimage_phase_samples(fam.basis().size(), 77)).ok) << m.name();
    }
  }
}

TEST(Preimage, WrongGroupIsRejected) {
  // The order-3 omega group merges D^1 and D^4 on five qubits.
  const auto s = SystemShape::qubits(5);
  const auto g3 = builtin_group(GroupKind::omega, s, 3);
  EXPECT_THROW(TwirledFamily(g3, {dicke(5, 1), dicke(5, 4)}, {0.5, 0.5}), VerificationError);
  // |000> and |011> share a parity sector: the mixture is invariant, but the
  // relative phase survives the twirl, so the phase orbit is not a preimage.
  const auto s3 = SystemShape::qubits(3);
  const auto gp = builtin_group(GroupKind::parity, s3);
  const PureState a(s3, CVector::Unit(8, 0));
  const PureState b(s3, CVector::Unit(8, 3));
  EXPECT_TRUE(verify_invariance(gp, DensityMatrix::mixture(std::vector<PureState>{a, b}, std::vector<double>{0.5, 0.5})).ok);
  EXPECT_THROW(TwirledFamily(gp, {a, b}, {0.5, 0.5}), VerificationError);
}
