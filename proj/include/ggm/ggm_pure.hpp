#pragma once

#include "ggm/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace ggm {

inline constexpr double kCutTieTol = 1e-9;

/**
 * @brief Reusable evaluator of the generalized geometric measure on one shape.
 *
 * Precomputes the index map of every canonical bipartition so repeated
 * evaluations (phase searches, sampling) only gather amplitudes and
 * diagonalize the smaller-side Gram matrix. Holds scratch buffers, so an
 * instance must not be shared between threads; copies are independent.
 */
class GgmEvaluator {
 public:
  explicit GgmEvaluator(const SystemShape& shape) : shape_(shape), cuts_(enumerate_bipartitions(shape)) {
    layouts_.reserve(cuts_.size());
    for (const auto& c : cuts_) layouts_.emplace_back(c);
    // Cheap cuts first so the bound below prunes the expensive ones.
    order_.resize(cuts_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
      return std::min(layouts_[a].rows, layouts_[a].cols) < std::min(layouts_[b].rows, layouts_[b].cols);
    });
  }

  const SystemShape& shape() const { return shape_; }
  const std::vector<Bipartition>& cuts() const { return cuts_; }

  /// Largest squared Schmidt coefficient of a unit vector across cut i.
  double lambda_sq(std::size_t i, const CVector& amps) {
    gram(i, amps);
    return std::min(top_eigenvalue(gram_), 1.0);
  }

  /// Exact maximum over cuts; a cut is diagonalized only if its spectral bound beats the running best.
  double max_lambda_sq(const CVector& amps) {
    double best = 0.0;
    for (std::size_t i : order_) {
      gram(i, amps);
      if (gram_.rows() > 2 && upper_bound(gram_) <= best) continue;
      best = std::max(best, std::min(top_eigenvalue(gram_), 1.0));
    }
    return best;
  }

  double operator()(const CVector& amps) { return 1.0 - max_lambda_sq(amps); }
  double operator()(const PureState& psi) { return (*this)(psi.amplitudes()); }

 private:
  void gram(std::size_t i, const CVector& amps) {
    const CutLayout& L = layouts_[i];
    const auto rows = static_cast<Eigen::Index>(L.rows);
    const auto cols = static_cast<Eigen::Index>(L.cols);
    m_.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const std::uint32_t* g = L.gather.data() + r * cols;
      for (Eigen::Index c = 0; c < cols; ++c) m_(r, c) = amps[g[c]];
    }
    if (rows <= cols) {
      gram_.noalias() = m_ * m_.adjoint();
    } else {
      gram_.noalias() = m_.adjoint() * m_;
    }
  }

  // Wolkowicz-Styan bound: lmax <= t/n + sqrt((n-1)/n (|G|_F^2 - t^2/n)), padded for round-off.
  static double upper_bound(const CMatrix& g) {
    const double n = static_cast<double>(g.rows());
    const double t = g.trace().real();
    const double f2 = g.squaredNorm();
    return t / n + std::sqrt(std::max(0.0, (n - 1.0) / n * (f2 - t * t / n))) + 1e-12;
  }

  double top_eigenvalue(const CMatrix& g) {
    if (g.rows() == 2) {
      const double a = g(0, 0).real();
      const double d = g(1, 1).real();
      const double h = 0.5 * (a - d);
      return 0.5 * (a + d) + std::sqrt(h * h + std::norm(g(0, 1)));
    }
    solver_.compute(g, Eigen::EigenvaluesOnly);
    return solver_.eigenvalues().maxCoeff();
  }

  SystemShape shape_;
  std::vector<Bipartition> cuts_;
  std::vector<CutLayout> layouts_;
  std::vector<std::size_t> order_;
  CMatrix m_;
  CMatrix gram_;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver_;
};

inline double max_schmidt_sq(const PureState& state, const Bipartition& cut) {
  require_same_shape(state.shape(), cut.shape(), "max_schmidt_sq");
  const CMatrix m = matricize(state, cut);
  const CMatrix g = (m.rows() <= m.cols()) ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  return std::min(es.eigenvalues().maxCoeff(), 1.0);
}

struct CutValue {
  Bipartition cut;
  double lambda_sq;
};

struct GgmReport {
  double value = 0.0;
  double lambda_sq_max = 0.0;
  std::vector<Bipartition> maximizing_cuts;  // every cut within kCutTieTol of the max
  std::vector<CutValue> per_cut;             // canonical bipartition order
};

inline GgmReport ggm_pure(const PureState& state) {
  GgmEvaluator eval(state.shape());
  GgmReport rep;
  rep.per_cut.reserve(eval.cuts().size());
  for (std::size_t i = 0; i < eval.cuts().size(); ++i) {
    const double l = eval.lambda_sq(i, state.amplitudes());
    rep.per_cut.push_back({eval.cuts()[i], l});
    rep.lambda_sq_max = std::max(rep.lambda_sq_max, l);
  }
  for (const auto& cv : rep.per_cut) {
    if (cv.lambda_sq >= rep.lambda_sq_max - kCutTieTol) rep.maximizing_cuts.push_back(cv.cut);
  }
  rep.value = 1.0 - rep.lambda_sq_max;
  return rep;
}

}  // namespace ggm
