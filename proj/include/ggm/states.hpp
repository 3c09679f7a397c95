#pragma once

#include "ggm/hilbert.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace ggm {

namespace detail {

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  }
  return r;
}

/// Flat indices of the N-qubit basis strings with k ones, ascending.
inline std::vector<std::size_t> weight_k_indices(int n, int k) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
    if (std::popcount(i) == k) out.push_back(i);
  }
  return out;
}

inline int digit_sum(const SystemShape& shape, std::size_t index) {
  int s = 0;
  for (std::size_t p = static_cast<std::size_t>(shape.party_count()); p-- > 0;) {
    const auto d = static_cast<std::size_t>(shape.dim(static_cast<int>(p)));
    s += static_cast<int>(index % d);
    index /= d;
  }
  return s;
}

}  // namespace detail

/// lcm of the local dimensions; the sector modulus for mixed-dimension systems.
inline int sector_modulus(const SystemShape& shape) {
  int m = 1;
  for (int d : shape.dims()) m = std::lcm(m, d);
  return m;
}

/// (|0...0> + sign |1...1>)/sqrt(2) with d-level parties.
inline PureState ghz(int parties, int d = 2, int sign = +1) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("ghz: sign must be +1 or -1");
  const auto shape = SystemShape::uniform(parties, d);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  std::vector<int> ones(static_cast<std::size_t>(parties), 1);
  v[0] = std::numbers::sqrt2 / 2;
  v[static_cast<Eigen::Index>(shape.index(ones))] = sign * std::numbers::sqrt2 / 2;
  return PureState(shape, std::move(v));
}

/// alpha |0...0> + sqrt(1 - alpha^2) |1...1> on qubits.
inline PureState gghz(int parties, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("gghz: alpha must lie in [0,1]");
  const auto shape = SystemShape::qubits(parties);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  v[0] = alpha;
  v[v.size() - 1] = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  return PureState(shape, std::move(v));
}

/// Coefficients b_kj of a generalized Dicke state, j running over weight-k
/// bitstrings in increasing integer order.
struct DickeCoefficients {
  int parties = 0;
  int excitations = 0;
  CVector b;

  DickeCoefficients(int n, int k, CVector coeffs) : parties(n), excitations(k), b(std::move(coeffs)) {
    if (n < 2) throw std::invalid_argument("DickeCoefficients: need at least two parties");
    if (k < 0 || k > n) throw std::invalid_argument("DickeCoefficients: excitation count out of range");
    if (static_cast<std::size_t>(b.size()) != detail::binomial(n, k)) {
      throw std::invalid_argument("DickeCoefficients: expected C(N,k) coefficients");
    }
    if (std::abs(b.norm() - 1.0) > kNormTol) {
      throw std::invalid_argument("DickeCoefficients: coefficients are not unit norm");
    }
  }

  static DickeCoefficients uniform(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("dicke: excitation count out of range");
    const auto c = static_cast<Eigen::Index>(detail::binomial(n, k));
    return DickeCoefficients(n, k, CVector::Constant(c, 1.0 / std::sqrt(static_cast<double>(c))));
  }
};

inline PureState generalized_dicke(const DickeCoefficients& coeffs) {
  const auto shape = SystemShape::qubits(coeffs.parties);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  const auto idx = detail::weight_k_indices(coeffs.parties, coeffs.excitations);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    v[static_cast<Eigen::Index>(idx[j])] = coeffs.b[static_cast<Eigen::Index>(j)];
  }
  return PureState(shape, std::move(v));
}

inline PureState dicke(int parties, int excitations) {
  return generalized_dicke(DickeCoefficients::uniform(parties, excitations));
}

/**
 * @brief A state supported on one residue class of the digit sum.
 *
 * q is a full-length amplitude vector (flat index order); construction
 * rejects any amplitude outside the sector (sum_m j_m) mod modulus == k.
 */
struct SectorSpec {
  SystemShape shape;
  int modulus = 0;
  int residue = 0;
  CVector q;

  SectorSpec(SystemShape s, int mod, int k, CVector amplitudes)
      : shape(std::move(s)), modulus(mod), residue(k), q(std::move(amplitudes)) {
    if (modulus < 1) throw std::invalid_argument("SectorSpec: modulus must be positive");
    if (residue < 0 || residue >= modulus) throw std::invalid_argument("SectorSpec: residue out of range");
    if (static_cast<std::size_t>(q.size()) != shape.total_dim()) {
      throw std::invalid_argument("SectorSpec: amplitude count does not match total dimension");
    }
    for (std::size_t i = 0; i < shape.total_dim(); ++i) {
      if (!in_sector(i) && std::abs(q[static_cast<Eigen::Index>(i)]) > kNormTol) {
        throw std::invalid_argument("SectorSpec: support leaks outside residue sector " +
                                    std::to_string(residue));
      }
    }
    if (std::abs(q.norm() - 1.0) > kNormTol) throw std::invalid_argument("SectorSpec: not unit norm");
  }

  bool in_sector(std::size_t index) const {
    return detail::digit_sum(shape, index) % modulus == residue;
  }

  /// Flat indices of the sector, ascending.
  static std::vector<std::size_t> sector_indices(const SystemShape& shape, int modulus, int k) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < shape.total_dim(); ++i) {
      if (detail::digit_sum(shape, i) % modulus == k) out.push_back(i);
    }
    return out;
  }

  /// Equal-amplitude superposition over the whole sector.
  static SectorSpec uniform(const SystemShape& shape, int modulus, int k) {
    if (modulus < 1 || k < 0 || k >= modulus) throw std::invalid_argument("SectorSpec: residue out of range");
    const auto idx = sector_indices(shape, modulus, k);
    if (idx.empty()) throw std::invalid_argument("SectorSpec: residue sector is empty");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
    const double a = 1.0 / std::sqrt(static_cast<double>(idx.size()));
    for (auto i : idx) v[static_cast<Eigen::Index>(i)] = a;
    return SectorSpec(shape, modulus, k, std::move(v));
  }

  /// Coefficients listed over the sector's indices only (ascending flat index).
  static SectorSpec from_sector_coefficients(const SystemShape& shape, int modulus, int k,
                                             const CVector& coeffs) {
    const auto idx = sector_indices(shape, modulus, k);
    if (static_cast<std::size_t>(coeffs.size()) != idx.size()) {
      throw std::invalid_argument("SectorSpec: expected one coefficient per sector index");
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      v[static_cast<Eigen::Index>(idx[j])] = coeffs[static_cast<Eigen::Index>(j)];
    }
    return SectorSpec(shape, modulus, k, std::move(v));
  }
};

inline PureState sector_state(const SectorSpec& spec) { return PureState(spec.shape, spec.q); }

/// Uniform even (k = 0) or odd (k = 1) parity sector of N qubits.
inline PureState parity_state(int parties, int parity) {
  return sector_state(SectorSpec::uniform(SystemShape::qubits(parties), 2, parity));
}

/// Uniform qudit sector state with modulus lcm(dims).
inline PureState qudit_sector_state(const SystemShape& shape, int k) {
  return sector_state(SectorSpec::uniform(shape, sector_modulus(shape), k));
}

/// The four orthonormal three-qubit zeta states, i in 1..4.
inline PureState zeta(int i) {
  const cplx I(0.0, 1.0);
  CVector v = CVector::Zero(8);
  switch (i) {
    case 1:  // |001> + |010> - |100> + |111>
      v[1] = 0.5; v[2] = 0.5; v[4] = -0.5; v[7] = 0.5;
      break;
    case 2:  // -i|000> - i|011> + |100> + |111>
      v[0] = -0.5 * I; v[3] = -0.5 * I; v[4] = 0.5; v[7] = 0.5;
      break;
    case 3:  // i|000> + i|011> + |100> + |111>
      v[0] = 0.5 * I; v[3] = 0.5 * I; v[4] = 0.5; v[7] = 0.5;
      break;
    case 4:  // |001> + |010> + |100> - |111>
      v[1] = 0.5; v[2] = 0.5; v[4] = 0.5; v[7] = -0.5;
      break;
    default:
      throw std::invalid_argument("zeta: index must be 1..4");
  }
  return PureState(SystemShape::qubits(3), std::move(v));
}

/// Max |<a|b> - delta_ab| over a list of states.
inline double orthonormality_defect(std::span<const PureState> basis) {
  double worst = 0.0;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = a; b < basis.size(); ++b) {
      const cplx ip = inner(basis[a], basis[b]);
      worst = std::max(worst, std::abs(ip - cplx(a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

/// sum_k sqrt(w_k) e^{i phi_k} |basis_k>.
inline PureState superpose(std::span<const PureState> basis, std::span<const double> weights,
                           std::span<const double> phases) {
  if (basis.empty() || basis.size() != weights.size() || basis.size() != phases.size()) {
    throw std::invalid_argument("superpose: basis, weights and phases must have equal nonzero length");
  }
  if (orthonormality_defect(basis) > 1e-8) {
    throw std::invalid_argument("superpose: basis is not orthonormal");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("superpose: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kNormTol) throw std::invalid_argument("superpose: weights do not sum to 1");

  CVector v = CVector::Zero(basis.front().amplitudes().size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    v += std::sqrt(weights[k]) * std::polar(1.0, phases[k]) * basis[k].amplitudes();
  }
  return PureState::normalized(basis.front().shape(), std::move(v));
}

}  // namespace ggm
