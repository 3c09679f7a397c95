#pragma once

#include "ggm/ggm_pure.hpp"

#include <Eigen/QR>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace ggm {

inline constexpr double kRankTol = 1e-12;

/**
 * Sampled upper bound on the convex roof of the GGM.
 *
 * Every m-element decomposition of rho arises from an m x r isometry Q acting
 * on the weighted eigenvectors: psi_i = sum_j Q(i, j) sqrt(l_j) e_j. Isometries
 * are drawn as the thin Q factor of a complex Gaussian matrix.
 */
inline double hjw_upper_bound(const DensityMatrix& rho, int m, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("hjw_upper_bound: samples must be >= 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    if (es.eigenvalues()[j] > kRankTol) support.push_back(j);
  }
  const auto r = static_cast<Eigen::Index>(support.size());
  if (m < r) throw std::invalid_argument("hjw_upper_bound: decomposition size below rank");

  const auto dim = static_cast<Eigen::Index>(rho.shape().total_dim());
  CMatrix weighted(dim, r);  // columns sqrt(l_j) e_j
  for (Eigen::Index c = 0; c < r; ++c) {
    const Eigen::Index j = support[static_cast<std::size_t>(c)];
    weighted.col(c) = std::sqrt(es.eigenvalues()[j]) * es.eigenvectors().col(j);
  }

  GgmEvaluator eval(rho.shape());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(m, r);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        g(i, j) = cplx(re, im);
      }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    const CMatrix q = qr.householderQ() * CMatrix::Identity(m, r);
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      CVector v = weighted * q.row(i).transpose();
      const double p = v.squaredNorm();
      if (p <= kRankTol * kRankTol) continue;
      v /= std::sqrt(p);
      total += p * eval(v);
    }
    best = std::min(best, total);
  }
  return best;
}

}  // namespace ggm
