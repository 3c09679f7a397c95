#pragma once

// Slow, independent reference computations used as test oracles. None of
// these share code paths with the library beyond the basic vector types.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Digits of a flat row-major index, party 0 most significant.
inline std::vector<int> digits(std::size_t index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (std::size_t p = dims.size(); p-- > 0;) {
    d[p] = static_cast<int>(index % static_cast<std::size_t>(dims[p]));
    index /= static_cast<std::size_t>(dims[p]);
  }
  return d;
}

/// Largest squared singular value of the matricization A(side | rest), built by
/// direct digit bookkeeping and a full SVD.
inline double lambda_sq(const Eigen::VectorXcd& psi, const std::vector<int>& dims, const std::vector<bool>& side) {
  std::size_t rows = 1, cols = 1;
  for (std::size_t p = 0; p < dims.size(); ++p) (side[p] ? rows : cols) *= static_cast<std::size_t>(dims[p]);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < static_cast<std::size_t>(psi.size()); ++i) {
    const auto d = digits(i, dims);
    std::size_t r = 0, c = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) {
      if (side[p]) {
        r = r * static_cast<std::size_t>(dims[p]) + static_cast<std::size_t>(d[p]);
      } else {
        c = c * static_cast<std::size_t>(dims[p]) + static_cast<std::size_t>(d[p]);
      }
    }
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = psi[static_cast<Eigen::Index>(i)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const double s = svd.singularValues()[0];
  return s * s;
}

/// GGM by enumerating every nonempty proper subset of parties (both sides of each cut).
inline double ggm(const Eigen::VectorXcd& psi, const std::vector<int>& dims) {
  const std::size_t n = dims.size();
  double best = 0.0;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    std::vector<bool> side(n);
    for (std::size_t p = 0; p < n; ++p) side[p] = (mask >> p) & 1u;
    best = std::max(best, lambda_sq(psi, dims, side));
  }
  return 1.0 - best;
}

/// Greatest convex minorant of (t_i, v_i) at the samples, by checking every chord: O(n^3).
inline std::vector<double> envelope_1d(const std::vector<double>& t, const std::vector<double>& v) {
  const std::size_t n = t.size();
  std::vector<double> out(v);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a <= i; ++a) {
      for (std::size_t b = i; b < n; ++b) {
        if (a == b) continue;
        const double s = (t[i] - t[a]) / (t[b] - t[a]);
        out[i] = std::min(out[i], (1.0 - s) * v[a] + s * v[b]);
      }
    }
  }
  return out;
}

/// Lower convex envelope of a 2D cloud at the cloud points, by trying every
/// triangle (and segment) of cloud points containing the query: O(n^4).
inline std::vector<double> envelope_2d(const std::vector<std::vector<double>>& x, const std::vector<double>& v) {
  const std::size_t n = x.size();
  std::vector<double> out(v);
  constexpr double eps = 1e-12;
  for (std::size_t q = 0; q < n; ++q) {
    const double qx = x[q][0], qy = x[q][1];
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        // Segment a-b.
        {
          const double dx = x[b][0] - x[a][0], dy = x[b][1] - x[a][1];
          const double cross = dx * (qy - x[a][1]) - dy * (qx - x[a][0]);
          const double len2 = dx * dx + dy * dy;
          if (std::abs(cross) <= eps) {
            const double s = ((qx - x[a][0]) * dx + (qy - x[a][1]) * dy) / len2;
            if (s >= -eps && s <= 1 + eps) out[q] = std::min(out[q], (1 - s) * v[a] + s * v[b]);
          }
        }
        for (std::size_t c = b + 1; c < n; ++c) {
          const double det = (x[b][0] - x[a][0]) * (x[c][1] - x[a][1]) - (x[c][0] - x[a][0]) * (x[b][1] - x[a][1]);
          if (std::abs(det) <= eps) continue;
          const double l1 = ((qx - x[a][0]) * (x[c][1] - x[a][1]) - (x[c][0] - x[a][0]) * (qy - x[a][1])) / det;
          const double l2 = ((x[b][0] - x[a][0]) * (qy - x[a][1]) - (qx - x[a][0]) * (x[b][1] - x[a][1])) / det;
          const double l0 = 1 - l1 - l2;
          if (l0 < -eps || l1 < -eps || l2 < -eps) continue;
          out[q] = std::min(out[q], l0 * v[a] + l1 * v[b] + l2 * v[c]);
        }
      }
    }
  }
  return out;
}

/// Haar-ish random unit vector (complex Gaussian, normalized).
inline Eigen::VectorXcd random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(g(rng), g(rng));
  return v.normalized();
}

/// Random d x d unitary from the QR of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(d, d);
}

/// Full Kronecker product of per-party factors, party 0 most significant.
inline Eigen::MatrixXcd kron_all(const std::vector<Eigen::MatrixXcd>& f) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& m : f) {
    Eigen::MatrixXcd next(out.rows() * m.rows(), out.cols() * m.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = out(i, j) * m;
    out = next;
  }
  return out;
}

}  // namespace oracle
