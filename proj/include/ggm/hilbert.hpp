#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggm {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-10;

/**
 * @brief Per-party local dimensions of a tensor-product space.
 *
 * Basis index layout is row-major in party order: party 0 is the most
 * significant digit.
 */
class SystemShape {
 public:
  SystemShape() = default;

  explicit SystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) {
      throw std::invalid_argument("SystemShape: at least two parties are required");
    }
    if (dims_.size() > 30) {
      throw std::invalid_argument("SystemShape: at most 30 parties are supported");
    }
    total_ = 1;
    for (int d : dims_) {
      if (d < 2) {
        throw std::invalid_argument("SystemShape: every local dimension must be >= 2");
      }
      total_ *= static_cast<std::size_t>(d);
      if (total_ > (std::size_t{1} << 28)) {
        throw std::invalid_argument("SystemShape: total dimension too large");
      }
    }
  }

  static SystemShape uniform(int parties, int d) {
    return SystemShape(std::vector<int>(static_cast<std::size_t>(std::max(parties, 0)), d));
  }
  static SystemShape qubits(int parties) { return uniform(parties, 2); }

  int party_count() const { return static_cast<int>(dims_.size()); }
  std::size_t total_dim() const { return total_; }
  int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
  const std::vector<int>& dims() const { return dims_; }
  int min_dim() const { return *std::min_element(dims_.begin(), dims_.end()); }

  /// Multi-index digits (j_0, ..., j_{N-1}) of a flat basis index.
  std::vector<int> digits(std::size_t index) const {
    std::vector<int> out(dims_.size());
    for (std::size_t p = dims_.size(); p-- > 0;) {
      const auto d = static_cast<std::size_t>(dims_[p]);
      out[p] = static_cast<int>(index % d);
      index /= d;
    }
    return out;
  }

  std::size_t index(std::span<const int> digits) const {
    if (digits.size() != dims_.size()) {
      throw std::invalid_argument("SystemShape::index: digit count does not match party count");
    }
    std::size_t idx = 0;
    for (std::size_t p = 0; p < dims_.size(); ++p) {
      if (digits[p] < 0 || digits[p] >= dims_[p]) {
        throw std::out_of_range("SystemShape::index: digit out of range");
      }
      idx = idx * static_cast<std::size_t>(dims_[p]) + static_cast<std::size_t>(digits[p]);
    }
    return idx;
  }

  bool operator==(const SystemShape& other) const { return dims_ == other.dims_; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t p = 0; p < dims_.size(); ++p) {
      if (p) s += ",";
      s += std::to_string(dims_[p]);
    }
    return s + ")";
  }

 private:
  std::vector<int> dims_;
  std::size_t total_ = 0;
};

inline void require_same_shape(const SystemShape& a, const SystemShape& b, const char* where) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(where) + ": shape mismatch " + a.to_string() +
                                " vs " + b.to_string());
  }
}

/// Unit-norm amplitude vector over a SystemShape.
class PureState {
 public:
  PureState(SystemShape shape, CVector amplitudes)
      : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != shape_.total_dim()) {
      throw std::invalid_argument("PureState: amplitude count does not match total dimension");
    }
    const double n = amps_.norm();
    if (std::abs(n - 1.0) > kNormTol) {
      throw std::invalid_argument("PureState: amplitudes are not unit norm (norm = " +
                                  std::to_string(n) + ")");
    }
  }

  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(SystemShape shape, CVector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0)) {
      throw std::invalid_argument("PureState::normalized: zero vector");
    }
    amplitudes /= n;
    return PureState(std::move(shape), std::move(amplitudes));
  }

  const SystemShape& shape() const { return shape_; }
  const CVector& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

 private:
  SystemShape shape_;
  CVector amps_;
};

inline cplx inner(const PureState& a, const PureState& b) {
  require_same_shape(a.shape(), b.shape(), "inner");
  return a.amplitudes().dot(b.amplitudes());  // conjugates a
}

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  DensityMatrix(SystemShape shape, CMatrix entries)
      : shape_(std::move(shape)), rho_(std::move(entries)) {
    const auto D = static_cast<Eigen::Index>(shape_.total_dim());
    if (rho_.rows() != D || rho_.cols() != D) {
      throw std::invalid_argument("DensityMatrix: matrix size does not match total dimension");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kNormTol) {
      throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - cplx(1.0)) > kNormTol) {
      throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kNormTol) {
      throw std::invalid_argument("DensityMatrix: matrix has a negative eigenvalue");
    }
  }

  static DensityMatrix projector(const PureState& psi) {
    return DensityMatrix(psi.shape(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  /// Sum_k w_k |s_k><s_k|.
  static DensityMatrix mixture(std::span<const PureState> states, std::span<const double> weights) {
    if (states.empty() || states.size() != weights.size()) {
      throw std::invalid_argument("DensityMatrix::mixture: need equally many states and weights");
    }
    const auto D = static_cast<Eigen::Index>(states.front().shape().total_dim());
    CMatrix rho = CMatrix::Zero(D, D);
    for (std::size_t k = 0; k < states.size(); ++k) {
      require_same_shape(states[k].shape(), states.front().shape(), "DensityMatrix::mixture");
      rho.noalias() += weights[k] * (states[k].amplitudes() * states[k].amplitudes().adjoint());
    }
    return DensityMatrix(states.front().shape(), std::move(rho));
  }

  const SystemShape& shape() const { return shape_; }
  const CMatrix& matrix() const { return rho_; }

 private:
  SystemShape shape_;
  CMatrix rho_;
};

/**
 * @brief An unordered split I:L of the parties.
 *
 * Stored canonically with party 0 on side I, so each split has exactly
 * one representation.
 */
class Bipartition {
 public:
  Bipartition(SystemShape shape, std::uint32_t side_mask) : shape_(std::move(shape)) {
    const int n = shape_.party_count();
    const std::uint32_t full = (n >= 32) ? ~0u : ((1u << n) - 1u);
    side_mask &= full;
    if (side_mask == 0 || side_mask == full) {
      throw std::invalid_argument("Bipartition: both sides must be nonempty");
    }
    if ((side_mask & 1u) == 0) side_mask = full & ~side_mask;
    mask_ = side_mask;
  }

  Bipartition(SystemShape shape, std::span<const int> side) : Bipartition(shape, mask_of(shape, side)) {}

  const SystemShape& shape() const { return shape_; }
  std::uint32_t mask() const { return mask_; }
  bool on_side_I(int party) const { return (mask_ >> party) & 1u; }

  std::vector<int> side_I() const { return collect(true); }
  std::vector<int> side_L() const { return collect(false); }

  std::size_t dim_I() const { return side_dim(true); }
  std::size_t dim_L() const { return side_dim(false); }

  bool operator==(const Bipartition& o) const { return mask_ == o.mask_ && shape_ == o.shape_; }
  bool operator<(const Bipartition& o) const { return mask_ < o.mask_; }

  /// "{0,2}:{1}" style label.
  std::string label() const {
    auto fmt = [](const std::vector<int>& v) {
      std::string s = "{";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
      }
      return s + "}";
    };
    return fmt(side_I()) + ":" + fmt(side_L());
  }

 private:
  static std::uint32_t mask_of(const SystemShape& shape, std::span<const int> side) {
    std::uint32_t m = 0;
    for (int p : side) {
      if (p < 0 || p >= shape.party_count()) {
        throw std::out_of_range("Bipartition: party index out of range");
      }
      m |= (1u << p);
    }
    return m;
  }

  std::vector<int> collect(bool side) const {
    std::vector<int> out;
    for (int p = 0; p < shape_.party_count(); ++p) {
      if (on_side_I(p) == side) out.push_back(p);
    }
    return out;
  }

  std::size_t side_dim(bool side) const {
    std::size_t d = 1;
    for (int p = 0; p < shape_.party_count(); ++p) {
      if (on_side_I(p) == side) d *= static_cast<std::size_t>(shape_.dim(p));
    }
    return d;
  }

  SystemShape shape_;
  std::uint32_t mask_ = 0;
};

/// All 2^(N-1) - 1 canonical splits, ordered by side-I bitmask.
inline std::vector<Bipartition> enumerate_bipartitions(const SystemShape& shape) {
  const int n = shape.party_count();
  std::vector<Bipartition> out;
  out.reserve((std::size_t{1} << (n - 1)) - 1);
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t m = 1; m < full; m += 2) {
    out.emplace_back(shape, m);
  }
  return out;
}

/**
 * @brief Precomputed index map of a bipartition.
 *
 * gather[r * cols + c] is the flat amplitude index whose side-I digits
 * encode r and whose side-L digits encode c (both row-major, ascending
 * party order).
 */
struct CutLayout {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> gather;

  explicit CutLayout(const Bipartition& cut) : rows(cut.dim_I()), cols(cut.dim_L()) {
    const SystemShape& shape = cut.shape();
    gather.resize(shape.total_dim());
    for (std::size_t idx = 0; idx < shape.total_dim(); ++idx) {
      const auto j = shape.digits(idx);
      std::size_t r = 0;
      std::size_t c = 0;
      for (int p = 0; p < shape.party_count(); ++p) {
        const auto d = static_cast<std::size_t>(shape.dim(p));
        if (cut.on_side_I(p)) {
          r = r * d + static_cast<std::size_t>(j[static_cast<std::size_t>(p)]);
        } else {
          c = c * d + static_cast<std::size_t>(j[static_cast<std::size_t>(p)]);
        }
      }
      gather[r * cols + c] = static_cast<std::uint32_t>(idx);
    }
  }
};

inline CMatrix matricize(const PureState& state, const Bipartition& cut) {
  require_same_shape(state.shape(), cut.shape(), "matricize");
  const CutLayout layout(cut);
  CMatrix m(static_cast<Eigen::Index>(layout.rows), static_cast<Eigen::Index>(layout.cols));
  for (std::size_t r = 0; r < layout.rows; ++r) {
    for (std::size_t c = 0; c < layout.cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          state[layout.gather[r * layout.cols + c]];
    }
  }
  return m;
}

/// Inverse of matricize: scatters a dim_I x dim_L matrix back into a flat amplitude vector.
inline CVector unmatricize(const CMatrix& m, const Bipartition& cut) {
  const CutLayout layout(cut);
  if (static_cast<std::size_t>(m.rows()) != layout.rows ||
      static_cast<std::size_t>(m.cols()) != layout.cols) {
    throw std::invalid_argument("unmatricize: matrix shape does not match the bipartition");
  }
  CVector v(static_cast<Eigen::Index>(cut.shape().total_dim()));
  for (std::size_t r = 0; r < layout.rows; ++r) {
    for (std::size_t c = 0; c < layout.cols; ++c) {
      v[layout.gather[r * layout.cols + c]] =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return v;
}

}  // namespace ggm
