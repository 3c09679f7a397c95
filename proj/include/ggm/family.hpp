#pragma once

#include "ggm/states.hpp"
#include "ggm/twirl.hpp"

#include <random>

namespace ggm {

inline constexpr std::uint64_t kDefaultSeed = 20130501;

/**
 * Phase assignments used to spot-check a preimage family: an 8-point sweep
 * of each free phase (others held at 0) plus 20 uniform draws from a fixed
 * seed. The first basis element is the gauge and always gets phase 0.
 */
inline std::vector<std::vector<double>> preimage_phase_samples(std::size_t basis_size,
                                                               std::uint64_t seed = kDefaultSeed,
                                                               int random_draws = 20) {
  std::vector<std::vector<double>> out;
  out.emplace_back(basis_size, 0.0);
  for (std::size_t k = 1; k < basis_size; ++k) {
    for (int m = 1; m < 8; ++m) {
      std::vector<double> ph(basis_size, 0.0);
      ph[k] = 2.0 * std::numbers::pi * m / 8.0;
      out.push_back(std::move(ph));
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  for (int s = 0; s < random_draws; ++s) {
    std::vector<double> ph(basis_size, 0.0);
    for (std::size_t k = 1; k < basis_size; ++k) ph[k] = u(rng);
    out.push_back(std::move(ph));
  }
  return out;
}

/**
 * @brief A group-invariant mixture together with its twirl preimage.
 *
 * target = sum_k w_k |basis_k><basis_k|; every sum_k sqrt(w_k) e^{i phi_k}
 * |basis_k> must twirl back onto target. Both properties are checked on
 * construction.
 */
class TwirledFamily {
 public:
  TwirledFamily(UnitaryGroup group, std::vector<PureState> basis, std::vector<double> weights)
      : group_(std::move(group)),
        basis_(std::move(basis)),
        weights_(std::move(weights)),
        target_(make_target(basis_, weights_)) {
    for (const auto& b : basis_) require_same_shape(group_.shape(), b.shape(), "TwirledFamily");
    if (!verify_invariance(group_, target_).ok) {
      throw VerificationError("TwirledFamily: target is not invariant under the group");
    }
    const auto chk = verify_preimage(group_, basis_, weights_, target_.matrix(),
                                     preimage_phase_samples(basis_.size()));
    if (!chk.ok) {
      throw VerificationError("TwirledFamily: phase orbit does not twirl onto the target (deviation " +
                                  std::to_string(chk.max_deviation) + ")");
    }
  }

  const UnitaryGroup& group() const { return group_; }
  const std::vector<PureState>& basis() const { return basis_; }
  const std::vector<double>& weights() const { return weights_; }
  const DensityMatrix& target() const { return target_; }
  std::size_t free_phases() const { return basis_.size() - 1; }

 private:
  static DensityMatrix make_target(const std::vector<PureState>& basis, const std::vector<double>& w) {
    if (basis.empty() || basis.size() != w.size()) {
      throw std::invalid_argument("TwirledFamily: basis and weights must have equal nonzero length");
    }
    if (orthonormality_defect(basis) > 1e-8) throw std::invalid_argument("TwirledFamily: basis is not orthonormal");
    double s = 0.0;
    for (double x : w) {
      if (x < 0.0) throw std::invalid_argument("TwirledFamily: negative weight");
      s += x;
    }
    if (std::abs(s - 1.0) > kNormTol) throw std::invalid_argument("TwirledFamily: weights do not sum to 1");
    return DensityMatrix::mixture(basis, w);
  }

  UnitaryGroup group_;
  std::vector<PureState> basis_;
  std::vector<double> weights_;
  DensityMatrix target_;
};

inline VerifyResult verify_preimage(const TwirledFamily& fam, const std::vector<std::vector<double>>& phase_samples,
                                    double tol = kGroupTol) {
  return verify_preimage(fam.group(), fam.basis(), fam.weights(), fam.target().matrix(), phase_samples, tol);
}

/**
 * @brief A family of twirled mixtures parameterized by a mixing simplex.
 *
 * Free coordinates (x_1..x_p) extend to barycentric coordinates
 * (x_1..x_p, 1 - sum x); basis weights are weight_map * barycentric. Each
 * column of weight_map is a probability vector.
 */
class FamilyModel {
 public:
  FamilyModel(std::string name, UnitaryGroup group, std::vector<PureState> basis, Eigen::MatrixXd weight_map,
              std::vector<std::string> param_names)
      : name_(std::move(name)),
        group_(std::move(group)),
        basis_(std::move(basis)),
        map_(std::move(weight_map)),
        params_(std::move(param_names)) {
    if (map_.rows() != static_cast<Eigen::Index>(basis_.size())) {
      throw std::invalid_argument("FamilyModel: weight map needs one row per basis state");
    }
    if (map_.cols() != static_cast<Eigen::Index>(params_.size()) + 1 || params_.empty()) {
      throw std::invalid_argument("FamilyModel: weight map needs (parameter count + 1) columns");
    }
    for (Eigen::Index c = 0; c < map_.cols(); ++c) {
      if (map_.col(c).minCoeff() < 0.0 || std::abs(map_.col(c).sum() - 1.0) > kNormTol) {
        throw std::invalid_argument("FamilyModel: weight map columns must be probability vectors");
      }
    }
    // Validates invariance and preimage at the barycenter of the parameter simplex.
    std::vector<double> center(params_.size(), 1.0 / static_cast<double>(params_.size() + 1));
    (void)at(center);
  }

  static FamilyModel with_identity_map(std::string name, UnitaryGroup group, std::vector<PureState> basis) {
    const auto k = static_cast<Eigen::Index>(basis.size());
    std::vector<std::string> names;
    for (Eigen::Index i = 1; i < k; ++i) names.push_back("x" + std::to_string(i));
    return FamilyModel(std::move(name), std::move(group), std::move(basis), Eigen::MatrixXd::Identity(k, k),
                       std::move(names));
  }

  const std::string& name() const { return name_; }
  const UnitaryGroup& group() const { return group_; }
  const std::vector<PureState>& basis() const { return basis_; }
  const Eigen::MatrixXd& weight_map() const { return map_; }
  const std::vector<std::string>& param_names() const { return params_; }
  int simplex_dim() const { return static_cast<int>(params_.size()); }

  std::vector<double> weights(std::span<const double> coords) const {
    if (coords.size() != params_.size()) throw std::invalid_argument("FamilyModel: wrong number of coordinates");
    Eigen::VectorXd bary(map_.cols());
    double s = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] < -1e-12) throw std::invalid_argument("FamilyModel: coordinate outside the simplex");
      bary[static_cast<Eigen::Index>(i)] = std::max(coords[i], 0.0);
      s += bary[static_cast<Eigen::Index>(i)];
    }
    if (s > 1.0 + 1e-12) throw std::invalid_argument("FamilyModel: coordinates sum above 1");
    bary[bary.size() - 1] = std::max(0.0, 1.0 - s);
    const Eigen::VectorXd w = map_ * bary;
    return {w.data(), w.data() + w.size()};
  }

  TwirledFamily at(std::span<const double> coords) const { return TwirledFamily(group_, basis_, weights(coords)); }

  /// Same family seen through V^(x)N: basis -> V^(x)N basis, group -> V g V^dag.
  FamilyModel rotated(std::string name, const LocalUnitaryElement& v) const {
    std::vector<PureState> b;
    for (const auto& s : basis_) b.push_back(apply(v, s));
    return FamilyModel(std::move(name), group_.conjugated_by(v), std::move(b), map_, params_);
  }

 private:
  std::string name_;
  UnitaryGroup group_;
  std::vector<PureState> basis_;
  Eigen::MatrixXd map_;
  std::vector<std::string> params_;
};

namespace families {

/// x |even> + (1-x) |odd>, uniform parity sectors, parity group.
inline FamilyModel rank2_sym(int n) {
  const auto shape = SystemShape::qubits(n);
  return FamilyModel("rank2_sym", builtin_group(GroupKind::parity, shape),
                     {parity_state(n, 0), parity_state(n, 1)}, Eigen::MatrixXd::Identity(2, 2), {"x"});
}

/// x GHZ+ + (1-x) GHZ-: the parity family rotated by a Hadamard on every qubit.
inline FamilyModel ghz_pm(int n) {
  return rank2_sym(n).rotated("ghz_pm", LocalUnitaryElement::uniform(SystemShape::qubits(n), gates::hadamard()));
}

/// x1 GHZ+ + x2 D^1 + (1-x1-x2) D^2 on three qubits.
inline FamilyModel rank3_ghz_w() {
  const auto shape = SystemShape::qubits(3);
  return FamilyModel::with_identity_map("rank3_ghz_w", builtin_group(GroupKind::omega, shape),
                                        {ghz(3), dicke(3, 1), dicke(3, 2)});
}

/// x1 gGHZ(alpha) + x2 D^1 + (1-x1-x2) D^2 on three qubits.
inline FamilyModel rank3_gghz(double alpha) {
  const auto shape = SystemShape::qubits(3);
  return FamilyModel::with_identity_map("rank3_gghz", builtin_group(GroupKind::omega, shape),
                                        {gghz(3, alpha), dicke(3, 1), dicke(3, 2)});
}

/// Slice x2 = r (1 - x1) of rank3_gghz, parameterized by x1.
inline FamilyModel rank3_gghz_slice(double alpha, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("rank3_gghz_slice: r must lie in [0,1]");
  const auto shape = SystemShape::qubits(3);
  Eigen::MatrixXd map(3, 2);
  map << 1, 0, 0, r, 0, 1 - r;
  return FamilyModel("rank3_gghz_slice", builtin_group(GroupKind::omega, shape),
                     {gghz(3, alpha), dicke(3, 1), dicke(3, 2)}, map, {"x1"});
}

/// x1 GHZ+ + x2 D^1 + (1-x1-x2) D^{N-1}; invariant under the order-N omega group.
inline FamilyModel rank3_ghz_dicke(int n) {
  const auto shape = SystemShape::qubits(n);
  return FamilyModel::with_identity_map("rank3_ghz_dicke", builtin_group(GroupKind::omega, shape),
                                        {ghz(n), dicke(n, 1), dicke(n, n - 1)});
}

/// (1 - sum x) gGHZ(alpha) + sum_i x_i D^i, i = 1..N-1.
inline FamilyModel gghz_dicke(int n, double alpha) {
  const auto shape = SystemShape::qubits(n);
  std::vector<PureState> basis;
  for (int k = 1; k < n; ++k) basis.push_back(dicke(n, k));
  basis.push_back(gghz(n, alpha));
  auto m = FamilyModel::with_identity_map("gghz_dicke", builtin_group(GroupKind::omega, shape), std::move(basis));
  return m;
}

/// x1 GHZ5 + x2/2 (D^1 + D^2) + (1-x1-x2)/2 (D^3 + D^4).
inline FamilyModel rank5_5qubit() {
  const auto shape = SystemShape::qubits(5);
  Eigen::MatrixXd map(5, 3);
  map << 1, 0, 0,
         0, 0.5, 0,
         0, 0.5, 0,
         0, 0, 0.5,
         0, 0, 0.5;
  return FamilyModel("rank5_5qubit", builtin_group(GroupKind::omega, shape),
                     {ghz(5), dicke(5, 1), dicke(5, 2), dicke(5, 3), dicke(5, 4)}, map, {"x1", "x2"});
}

/// sum_i x_i |zeta_i><zeta_i|, i = 1..4.
inline FamilyModel zeta_full() {
  return FamilyModel::with_identity_map("zeta", builtin_group(GroupKind::zeta, SystemShape::qubits(3)),
                                        {zeta(1), zeta(2), zeta(3), zeta(4)});
}

/// x zeta_1 + y/2 (zeta_2 + zeta_3) + (1-x-y) zeta_4.
inline FamilyModel zeta_slice() {
  Eigen::MatrixXd map(4, 3);
  map << 1, 0, 0,
         0, 0.5, 0,
         0, 0.5, 0,
         0, 0, 1;
  return FamilyModel("zeta_slice", builtin_group(GroupKind::zeta, SystemShape::qubits(3)),
                     {zeta(1), zeta(2), zeta(3), zeta(4)}, map, {"x", "y"});
}

/// Uniform residue sectors k = 0..L-1 of a qudit system, qudit clock group.
inline FamilyModel qudit_sectors(const SystemShape& shape) {
  const int L = sector_modulus(shape);
  std::vector<PureState> basis;
  for (int k = 0; k < L; ++k) {
    if (!SectorSpec::sector_indices(shape, L, k).empty()) basis.push_back(qudit_sector_state(shape, k));
  }
  return FamilyModel::with_identity_map("qudit_sectors", builtin_group(GroupKind::qudit, shape), std::move(basis));
}

/// Three qutrits: x1 Psi_0 + x2 Psi_1 + (1-x1-x2) Psi_2.
inline FamilyModel qutrit() {
  auto m = qudit_sectors(SystemShape::uniform(3, 3));
  return FamilyModel::with_identity_map("qutrit", m.group(), m.basis());
}

}  // namespace families

}  // namespace ggm
