#pragma once

#include "ggm/hilbert.hpp"
#include "ggm/states.hpp"

#include <numbers>
#include <optional>

namespace ggm {

inline constexpr double kGroupTol = 1e-9;

/// A group axiom, invariance or preimage check failed beyond tolerance.
class VerificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace gates {

inline CMatrix identity(int d) { return CMatrix::Identity(d, d); }

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline CMatrix hadamard() {
  CMatrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::numbers::sqrt2;
}

/// (1/sqrt 2) [[1, 1], [-1, 1]].
inline CMatrix h_prime() {
  CMatrix m(2, 2);
  m << 1, 1, -1, 1;
  return m / std::numbers::sqrt2;
}

/// diag(1, e^{i theta}).
inline CMatrix phase(double theta) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = std::polar(1.0, theta);
  return m;
}

/// sum_j e^{2 pi i j / period} |j><j| on a d-level system.
inline CMatrix clock(int d, int period) {
  CMatrix m = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) m(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / period);
  return m;
}

}  // namespace gates

/// In-place action of one d x d factor on party p of a flat amplitude vector.
inline void apply_factor(CVector& v, const SystemShape& shape, int party, const CMatrix& u) {
  const auto d = static_cast<std::size_t>(shape.dim(party));
  std::size_t stride = 1;
  for (int q = party + 1; q < shape.party_count(); ++q) stride *= static_cast<std::size_t>(shape.dim(q));
  const std::size_t block = d * stride;
  CVector tmp(static_cast<Eigen::Index>(d));
  for (std::size_t base = 0; base < shape.total_dim(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (std::size_t j = 0; j < d; ++j) tmp[static_cast<Eigen::Index>(j)] = v[static_cast<Eigen::Index>(base + off + j * stride)];
      for (std::size_t i = 0; i < d; ++i) {
        cplx acc = 0;
        for (std::size_t j = 0; j < d; ++j) {
          acc += u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * tmp[static_cast<Eigen::Index>(j)];
        }
        v[static_cast<Eigen::Index>(base + off + i * stride)] = acc;
      }
    }
  }
}

/// U_0 (x) U_1 (x) ... (x) U_{N-1}.
class LocalUnitaryElement {
 public:
  LocalUnitaryElement(SystemShape shape, std::vector<CMatrix> factors)
      : shape_(std::move(shape)), factors_(std::move(factors)) {
    if (factors_.size() != static_cast<std::size_t>(shape_.party_count())) {
      throw std::invalid_argument("LocalUnitaryElement: need one factor per party");
    }
    for (int p = 0; p < shape_.party_count(); ++p) {
      const CMatrix& u = factors_[static_cast<std::size_t>(p)];
      if (u.rows() != shape_.dim(p) || u.cols() != shape_.dim(p)) {
        throw std::invalid_argument("LocalUnitaryElement: factor " + std::to_string(p) +
                                    " has the wrong size");
      }
      const double defect = (u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
      if (defect > kNormTol) {
        throw std::invalid_argument("LocalUnitaryElement: factor " + std::to_string(p) + " is not unitary");
      }
    }
  }

  static LocalUnitaryElement identity(const SystemShape& shape) {
    std::vector<CMatrix> f;
    for (int d : shape.dims()) f.push_back(gates::identity(d));
    return LocalUnitaryElement(shape, std::move(f));
  }

  /// The same single-party unitary on every party.
  static LocalUnitaryElement uniform(const SystemShape& shape, const CMatrix& u) {
    return LocalUnitaryElement(shape, std::vector<CMatrix>(static_cast<std::size_t>(shape.party_count()), u));
  }

  const SystemShape& shape() const { return shape_; }
  const std::vector<CMatrix>& factors() const { return factors_; }

  /// this * other (other acts first).
  LocalUnitaryElement compose(const LocalUnitaryElement& other) const {
    require_same_shape(shape_, other.shape_, "LocalUnitaryElement::compose");
    std::vector<CMatrix> f(factors_.size());
    for (std::size_t p = 0; p < f.size(); ++p) f[p] = factors_[p] * other.factors_[p];
    return LocalUnitaryElement(shape_, std::move(f));
  }

  LocalUnitaryElement inverse() const {
    std::vector<CMatrix> f(factors_.size());
    for (std::size_t p = 0; p < f.size(); ++p) f[p] = factors_[p].adjoint();
    return LocalUnitaryElement(shape_, std::move(f));
  }

  /**
   * Distance from equality up to a global phase. Tensor products of
   * unitaries agree up to phase iff every factor pair does, so the test
   * runs factor-wise: max_p min_c ||A_p B_p^dag - c I||_max.
   */
  double phase_distance(const LocalUnitaryElement& other) const {
    require_same_shape(shape_, other.shape_, "LocalUnitaryElement::phase_distance");
    double worst = 0.0;
    for (std::size_t p = 0; p < factors_.size(); ++p) {
      const CMatrix w = factors_[p] * other.factors_[p].adjoint();
      const cplx c = w.trace() / static_cast<double>(w.rows());
      const double dev = (w - c * CMatrix::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
      worst = std::max({worst, dev, std::abs(std::abs(c) - 1.0)});
    }
    return worst;
  }

  /// Dense kron product; desk-scale shapes only.
  CMatrix full_matrix() const {
    CMatrix m = CMatrix::Identity(1, 1);
    for (const auto& f : factors_) {
      CMatrix k(m.rows() * f.rows(), m.cols() * f.cols());
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          k.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = m(i, j) * f;
        }
      }
      m = std::move(k);
    }
    return m;
  }

  void apply_in_place(CVector& v) const {
    for (int p = 0; p < shape_.party_count(); ++p) apply_factor(v, shape_, p, factors_[static_cast<std::size_t>(p)]);
  }

 private:
  SystemShape shape_;
  std::vector<CMatrix> factors_;
};

inline PureState apply(const LocalUnitaryElement& u, const PureState& psi) {
  require_same_shape(u.shape(), psi.shape(), "apply");
  CVector v = psi.amplitudes();
  u.apply_in_place(v);
  return PureState::normalized(psi.shape(), std::move(v));
}

/// U A U^dag for an arbitrary operator A.
inline CMatrix conjugate(const LocalUnitaryElement& u, const CMatrix& a) {
  CMatrix out = a;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    CVector col = out.col(c);
    u.apply_in_place(col);
    out.col(c) = col;
  }
  // (U A) U^dag = (U (U A)^dag)^dag
  CMatrix t = out.adjoint();
  for (Eigen::Index c = 0; c < t.cols(); ++c) {
    CVector col = t.col(c);
    u.apply_in_place(col);
    t.col(c) = col;
  }
  return t.adjoint();
}

inline DensityMatrix apply(const LocalUnitaryElement& u, const DensityMatrix& rho) {
  require_same_shape(u.shape(), rho.shape(), "apply");
  CMatrix m = conjugate(u, rho.matrix());
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix(rho.shape(), std::move(m));
}

struct GroupCheck {
  bool has_identity = false;
  bool closed = false;
  bool has_inverses = false;
  double max_closure_defect = 0.0;  // worst distance of a product to its nearest element
  double max_inverse_defect = 0.0;
  bool ok() const { return has_identity && closed && has_inverses; }
};

inline GroupCheck check_group(const std::vector<LocalUnitaryElement>& elements, double tol = kGroupTol) {
  GroupCheck out;
  if (elements.empty()) return out;
  const auto& shape = elements.front().shape();
  auto nearest = [&](const LocalUnitaryElement& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : elements) best = std::min(best, x.phase_distance(e));
    return best;
  };
  out.has_identity = nearest(LocalUnitaryElement::identity(shape)) <= tol;
  for (const auto& a : elements) {
    for (const auto& b : elements) out.max_closure_defect = std::max(out.max_closure_defect, nearest(a.compose(b)));
    out.max_inverse_defect = std::max(out.max_inverse_defect, nearest(a.inverse()));
  }
  out.closed = out.max_closure_defect <= tol;
  out.has_inverses = out.max_inverse_defect <= tol;
  return out;
}

/// Finite group of local unitaries; closure is verified on construction.
class UnitaryGroup {
 public:
  explicit UnitaryGroup(std::vector<LocalUnitaryElement> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("UnitaryGroup: no elements");
    for (const auto& e : elements_) require_same_shape(e.shape(), elements_.front().shape(), "UnitaryGroup");
    const GroupCheck chk = check_group(elements_);
    if (!chk.has_identity) throw VerificationError("UnitaryGroup: identity element missing");
    if (!chk.closed) throw VerificationError("UnitaryGroup: not closed under composition");
    if (!chk.has_inverses) throw VerificationError("UnitaryGroup: not closed under inverse");
  }

  const SystemShape& shape() const { return elements_.front().shape(); }
  const std::vector<LocalUnitaryElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  /// Conjugates every element by the same local unitary: g -> V g V^dag.
  UnitaryGroup conjugated_by(const LocalUnitaryElement& v) const {
    std::vector<LocalUnitaryElement> out;
    for (const auto& g : elements_) out.push_back(v.compose(g).compose(v.inverse()));
    return UnitaryGroup(std::move(out));
  }

 private:
  std::vector<LocalUnitaryElement> elements_;
};

enum class GroupKind { parity, omega, zeta, qudit };

inline std::optional<GroupKind> parse_group_kind(const std::string& s) {
  if (s == "parity") return GroupKind::parity;
  if (s == "omega") return GroupKind::omega;
  if (s == "zeta") return GroupKind::zeta;
  if (s == "qudit") return GroupKind::qudit;
  return std::nullopt;
}

/**
 * @brief Built-in symmetry groups.
 *
 * parity: {I, sigma_z^(x)N}. omega: {diag(1, e^{2 pi i j/order})^(x)N},
 * j = 0..order-1, order defaulting to N. zeta: the four three-qubit
 * elements I(x)I(x)I, i sigma_y(x)H'(x)H', I(x)sigma_y(x)sigma_y,
 * -i sigma_y(x)H'^T(x)H'^T. qudit: powers 0..L-1 of the per-party clock
 * diag(e^{2 pi i j/L}), L = lcm of the local dimensions, whose sectors are
 * exactly (sum_m j_m) mod L.
 */
inline UnitaryGroup builtin_group(GroupKind kind, const SystemShape& shape, int order = 0) {
  std::vector<LocalUnitaryElement> els;
  const bool all_qubits = std::all_of(shape.dims().begin(), shape.dims().end(), [](int d) { return d == 2; });
  switch (kind) {
    case GroupKind::parity:
      if (!all_qubits) throw std::invalid_argument("builtin_group(parity): requires qubits");
      els.push_back(LocalUnitaryElement::identity(shape));
      els.push_back(LocalUnitaryElement::uniform(shape, gates::pauli_z()));
      break;
    case GroupKind::omega: {
      if (!all_qubits) throw std::invalid_argument("builtin_group(omega): requires qubits");
      const int n = order > 0 ? order : shape.party_count();
      for (int j = 0; j < n; ++j) {
        els.push_back(LocalUnitaryElement::uniform(shape, gates::phase(2.0 * std::numbers::pi * j / n)));
      }
      break;
    }
    case GroupKind::zeta: {
      if (!(shape == SystemShape::qubits(3))) throw std::invalid_argument("builtin_group(zeta): requires three qubits");
      const cplx I(0, 1);
      const CMatrix isy = I * gates::pauli_y();
      const CMatrix hp = gates::h_prime();
      els.push_back(LocalUnitaryElement::identity(shape));
      els.push_back(LocalUnitaryElement(shape, {isy, hp, hp}));
      els.push_back(LocalUnitaryElement(shape, {gates::identity(2), gates::pauli_y(), gates::pauli_y()}));
      els.push_back(LocalUnitaryElement(shape, {CMatrix(-isy), hp.transpose(), hp.transpose()}));
      break;
    }
    case GroupKind::qudit: {
      const int L = sector_modulus(shape);
      std::vector<CMatrix> gen;
      for (int d : shape.dims()) gen.push_back(gates::clock(d, L));
      std::vector<CMatrix> cur;
      for (int d : shape.dims()) cur.push_back(gates::identity(d));
      for (int q = 0; q < L; ++q) {
        els.emplace_back(shape, cur);
        for (std::size_t p = 0; p < cur.size(); ++p) cur[p] = gen[p] * cur[p];
      }
      break;
    }
  }
  return UnitaryGroup(std::move(els));
}

/// (1/|G|) sum_g g A g^dag for an arbitrary operator.
inline CMatrix twirl_operator(const UnitaryGroup& group, const CMatrix& a) {
  CMatrix acc = CMatrix::Zero(a.rows(), a.cols());
  for (const auto& g : group.elements()) acc += conjugate(g, a);
  return acc / static_cast<double>(group.size());
}

inline DensityMatrix twirl(const UnitaryGroup& group, const DensityMatrix& rho) {
  require_same_shape(group.shape(), rho.shape(), "twirl");
  CMatrix m = twirl_operator(group, rho.matrix());
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix(rho.shape(), std::move(m));
}

/// Twirl of the projector |psi><psi|, via (1/|G|) sum_g (g psi)(g psi)^dag.
inline CMatrix twirl_projector(const UnitaryGroup& group, const CVector& psi) {
  const auto D = psi.size();
  CMatrix acc = CMatrix::Zero(D, D);
  for (const auto& g : group.elements()) {
    CVector v = psi;
    g.apply_in_place(v);
    acc.noalias() += v * v.adjoint();
  }
  return acc / static_cast<double>(group.size());
}

inline DensityMatrix twirl(const UnitaryGroup& group, const PureState& psi) {
  require_same_shape(group.shape(), psi.shape(), "twirl");
  CMatrix m = twirl_projector(group, psi.amplitudes());
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix(psi.shape(), std::move(m));
}

struct VerifyResult {
  bool ok = false;
  double max_deviation = 0.0;
};

inline VerifyResult verify_invariance(const UnitaryGroup& group, const DensityMatrix& rho, double tol = kGroupTol) {
  require_same_shape(group.shape(), rho.shape(), "verify_invariance");
  const double dev = (twirl_operator(group, rho.matrix()) - rho.matrix()).cwiseAbs().maxCoeff();
  return {dev <= tol, dev};
}

/**
 * True iff the twirl of every sampled member sum_k sqrt(w_k) e^{i phi_k}
 * |basis_k> equals the target within tol.
 */
inline VerifyResult verify_preimage(const UnitaryGroup& group, std::span<const PureState> basis,
                                    std::span<const double> weights, const CMatrix& target,
                                    const std::vector<std::vector<double>>& phase_samples,
                                    double tol = kGroupTol) {
  VerifyResult out{true, 0.0};
  for (const auto& phases : phase_samples) {
    if (phases.size() != basis.size()) {
      throw std::invalid_argument("verify_preimage: phase sample length does not match basis size");
    }
    CVector psi = CVector::Zero(target.rows());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      require_same_shape(group.shape(), basis[k].shape(), "verify_preimage");
      psi += std::sqrt(std::max(weights[k], 0.0)) * std::polar(1.0, phases[k]) * basis[k].amplitudes();
    }
    const double dev = (twirl_projector(group, psi) - target).cwiseAbs().maxCoeff();
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  out.ok = out.max_deviation <= tol;
  return out;
}

}  // namespace ggm
