#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ggm {

using Point = std::vector<double>;

/**
 * Triangular grid over the p-simplex {x_i >= 0, sum x_i <= 1} in free
 * coordinates, spacing 1/(n-1), lexicographic in the integer coordinates.
 */
inline std::vector<Point> simplex_grid(int dim, int per_axis) {
  if (dim < 1) throw std::invalid_argument("simplex_grid: dimension must be >= 1");
  if (per_axis < 2) throw std::invalid_argument("simplex_grid: need at least 2 points per axis");
  const int m = per_axis - 1;
  std::vector<Point> out;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  // Odometer over idx with the constraint sum(idx) <= m.
  while (true) {
    Point p(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = static_cast<double>(idx[static_cast<std::size_t>(i)]) / m;
    out.push_back(std::move(p));
    int i = dim - 1;
    while (i >= 0) {
      ++idx[static_cast<std::size_t>(i)];
      int s = 0;
      for (int v : idx) s += v;
      if (s <= m) break;
      idx[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

/// Smallest barycentric coordinate (x_1..x_p, 1 - sum x) of a free-coordinate point.
inline double simplex_margin(std::span<const double> x) {
  double s = 0.0;
  double m = std::numeric_limits<double>::infinity();
  for (double v : x) {
    s += v;
    m = std::min(m, v);
  }
  return std::min(m, 1.0 - s);
}

struct HessianEntry {
  std::optional<double> min_eigenvalue;  // empty when the point is too close to the boundary
  bool flagged = false;                  // min eigenvalue below the threshold
};

inline constexpr double kHessianStep = 1e-3;
inline constexpr double kNonconvexThreshold = -1e-6;

namespace detail {

inline double min_hessian_eigenvalue(const std::function<double(const Point&)>& f, const Point& x, double f0,
                                     double h) {
  const auto p = static_cast<Eigen::Index>(x.size());
  auto shifted = [&](Eigen::Index i, double si, Eigen::Index j, double sj) {
    Point y = x;
    y[static_cast<std::size_t>(i)] += si * h;
    if (j >= 0) y[static_cast<std::size_t>(j)] += sj * h;
    return f(y);
  };
  Eigen::MatrixXd H(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    H(i, i) = (shifted(i, 1, -1, 0) - 2.0 * f0 + shifted(i, -1, -1, 0)) / (h * h);
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double v =
          (shifted(i, 1, j, 1) - shifted(i, 1, j, -1) - shifted(i, -1, j, 1) + shifted(i, -1, j, -1)) / (4.0 * h * h);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

inline constexpr double kHessianConfirmRatio = 0.25;

/**
 * Central-difference Hessian of f in free simplex coordinates at each point.
 * Points with a barycentric coordinate below 2h are skipped. A negative
 * estimate at step h is re-measured at h/4 and only flagged if it persists:
 * near a sqrt-type edge singularity the O(h^2) stencil error alone can turn
 * the sign, and the reported eigenvalue is then the finer estimate.
 */
inline std::vector<HessianEntry> hessian_report(const std::function<double(const Point&)>& f,
                                                const std::vector<Point>& points, double h = kHessianStep,
                                                double threshold = kNonconvexThreshold) {
  std::vector<HessianEntry> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    HessianEntry e;
    if (simplex_margin(x) < 2.0 * h - 1e-15) {
      out.push_back(e);
      continue;
    }
    const double f0 = f(x);
    double eig = detail::min_hessian_eigenvalue(f, x, f0, h);
    if (eig < threshold) eig = detail::min_hessian_eigenvalue(f, x, f0, h * kHessianConfirmRatio);
    e.min_eigenvalue = eig;
    e.flagged = eig < threshold;
    out.push_back(e);
  }
  return out;
}

/**
 * Greatest convex minorant of the piecewise-linear interpolant through
 * (t_i, v_i), evaluated at the t_i. t must be strictly increasing.
 */
inline std::vector<double> convex_envelope_1d(std::span<const double> t, std::span<const double> v) {
  if (t.size() < 2 || t.size() != v.size()) {
    throw std::invalid_argument("convex_envelope_1d: need at least two samples with matching values");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw std::invalid_argument("convex_envelope_1d: abscissae must increase strictly");
  }
  // Lower hull, monotone chain.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (t[b] - t[a]) * (v[i] - v[a]) - (v[b] - v[a]) * (t[i] - t[a]);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> out(t.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (seg + 2 < hull.size() && t[hull[seg + 1]] <= t[i]) ++seg;
    const std::size_t a = hull[seg];
    const std::size_t b = hull[std::min(seg + 1, hull.size() - 1)];
    if (a == b || i == a) {
      out[i] = v[a];
    } else if (i == b) {
      out[i] = v[b];
    } else {
      const double s = (t[i] - t[a]) / (t[b] - t[a]);
      out[i] = std::min(v[i], (1.0 - s) * v[a] + s * v[b]);
    }
  }
  return out;
}

/**
 * @brief Lower convex envelope of a lifted point cloud (x_i, v_i), x_i in R^p.
 *
 * The envelope at q is the LP
 *   min sum_i l_i v_i  s.t.  sum_i l_i x_i = q,  sum_i l_i = 1,  l >= 0,
 * i.e. the lower face of the convex hull of the lifted cloud above q.
 * Solved with a dense revised simplex on the p + 1 equality rows
 * (two-phase, Dantzig pricing with a Bland fallback), warm-started from the
 * previous query's basis.
 */
class LowerEnvelope {
 public:
  LowerEnvelope(std::vector<Point> points, std::vector<double> values)
      : pts_(std::move(points)), vals_(std::move(values)) {
    if (pts_.empty() || pts_.size() != vals_.size()) {
      throw std::invalid_argument("LowerEnvelope: need matching nonempty points and values");
    }
    dim_ = static_cast<Eigen::Index>(pts_.front().size());
    rows_ = dim_ + 1;
    if (dim_ < 1) throw std::invalid_argument("LowerEnvelope: points must have at least one coordinate");
    A_.resize(rows_, static_cast<Eigen::Index>(pts_.size()));
    for (std::size_t j = 0; j < pts_.size(); ++j) {
      if (static_cast<Eigen::Index>(pts_[j].size()) != dim_) {
        throw std::invalid_argument("LowerEnvelope: inconsistent point dimension");
      }
      for (Eigen::Index r = 0; r < dim_; ++r) A_(r, static_cast<Eigen::Index>(j)) = pts_[j][static_cast<std::size_t>(r)];
      A_(dim_, static_cast<Eigen::Index>(j)) = 1.0;
    }
    // Reject clouds that do not span their dimension (e.g. collinear points in 2D).
    Eigen::MatrixXd centered = A_.topRows(dim_);
    centered = centered.colwise() - centered.rowwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    const auto& sv = svd.singularValues();
    if (sv.size() < dim_ || sv[dim_ - 1] <= 1e-9 * std::max(1.0, sv[0])) {
      throw std::invalid_argument("LowerEnvelope: degenerate point cloud (affinely dependent)");
    }
    c_ = Eigen::Map<const Eigen::VectorXd>(vals_.data(), static_cast<Eigen::Index>(vals_.size()));
  }

  /// Envelope value at q; throws if q lies outside the cloud's convex hull.
  double at(std::span<const double> q) {
    if (static_cast<Eigen::Index>(q.size()) != dim_) throw std::invalid_argument("LowerEnvelope::at: wrong dimension");
    Eigen::VectorXd b(rows_);
    for (Eigen::Index r = 0; r < dim_; ++r) b[r] = q[static_cast<std::size_t>(r)];
    b[dim_] = 1.0;

    std::vector<Eigen::Index> basis;
    if (!warm_.empty() && feasible(warm_, b)) {
      basis = warm_;
    } else {
      basis = phase_one(b);
    }
    const double value = simplex(A_, b, c_, basis);
    warm_ = basis;
    return value;
  }

  std::vector<double> at_all_points() {
    std::vector<double> out(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i) out[i] = std::min(vals_[i], at(pts_[i]));
    return out;
  }

 private:
  static constexpr double kPivotTol = 1e-12;
  static constexpr double kCostTol = 1e-12;
  static constexpr int kBlandAfter = 50;

  bool feasible(const std::vector<Eigen::Index>& basis, const Eigen::VectorXd& b) const {
    Eigen::MatrixXd B(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) B.col(i) = A_.col(basis[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) return false;
    const Eigen::VectorXd x = lu.solve(b);
    return (B * x - b).cwiseAbs().maxCoeff() < 1e-10 && x.minCoeff() >= -1e-12;
  }

  /// Feasible basis of real columns via artificial variables.
  std::vector<Eigen::Index> phase_one(const Eigen::VectorXd& b) {
    const auto n = static_cast<Eigen::Index>(pts_.size());
    // Rows with negative rhs are negated so the artificial identity basis is feasible.
    Eigen::VectorXd sign = Eigen::VectorXd::Ones(rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (b[r] < 0) sign[r] = -1.0;
    }
    const Eigen::VectorXd bs = sign.asDiagonal() * b;

    Eigen::MatrixXd ext(rows_, n + rows_);
    ext.leftCols(n) = sign.asDiagonal() * A_;
    ext.rightCols(rows_) = Eigen::MatrixXd::Identity(rows_, rows_);
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + rows_);
    cost.tail(rows_).setOnes();
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows_));
    for (Eigen::Index r = 0; r < rows_; ++r) basis[static_cast<std::size_t>(r)] = n + r;

    const double infeas = simplex(ext, bs, cost, basis);
    if (infeas > 1e-9) {
      throw std::invalid_argument("LowerEnvelope::at: query point lies outside the convex hull of the cloud");
    }
    // Pivot remaining (zero-level) artificials out of the basis.
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (basis[static_cast<std::size_t>(r)] < n) continue;
      Eigen::MatrixXd B(rows_, rows_);
      for (Eigen::Index i = 0; i < rows_; ++i) B.col(i) = ext.col(basis[static_cast<std::size_t>(i)]);
      const Eigen::MatrixXd Binv = B.inverse();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
        if (std::abs((Binv.row(r) * ext.col(j))(0)) > 1e-9) {
          basis[static_cast<std::size_t>(r)] = j;
          break;
        }
      }
    }
    for (auto j : basis) {
      if (j >= n) throw std::runtime_error("LowerEnvelope: could not find a basis of real columns");
    }
    return basis;
  }

  /// Revised simplex from a feasible basis; returns the optimal objective.
  double simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& cost,
                 std::vector<Eigen::Index>& basis) const {
    const Eigen::Index n = A.cols();
    Eigen::MatrixXd B(rows_, rows_);
    Eigen::VectorXd cb(rows_);
    int iter = 0;
    int stalled = 0;
    while (true) {
      for (Eigen::Index i = 0; i < rows_; ++i) {
        B.col(i) = A.col(basis[static_cast<std::size_t>(i)]);
        cb[i] = cost[basis[static_cast<std::size_t>(i)]];
      }
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      const Eigen::VectorXd xb = lu.solve(b);
      const Eigen::VectorXd y = lu.transpose().solve(cb);
      const Eigen::VectorXd reduced = cost - A.transpose() * y;

      const bool bland = stalled > kBlandAfter;
      Eigen::Index enter = -1;
      double best = -kCostTol;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (reduced[j] < best) {
          if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
          enter = j;
          if (bland) break;
          best = reduced[j];
        }
      }
      if (enter < 0) return cb.dot(xb);

      const Eigen::VectorXd d = lu.solve(A.col(enter));
      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (d[i] > kPivotTol) {
          const double r = std::max(xb[i], 0.0) / d[i];
          if (r < ratio - 1e-15 ||
              (bland && r <= ratio + 1e-15 && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("LowerEnvelope: unbounded LP");
      stalled = (ratio <= 1e-15) ? stalled + 1 : 0;
      basis[static_cast<std::size_t>(leave)] = enter;
      if (++iter > 100000) throw std::runtime_error("LowerEnvelope: simplex did not terminate");
    }
  }

  std::vector<Point> pts_;
  std::vector<double> vals_;
  Eigen::Index dim_ = 0;
  Eigen::Index rows_ = 0;
  Eigen::MatrixXd A_;
  Eigen::VectorXd c_;
  std::vector<Eigen::Index> warm_;
};

/// Lower convex envelope of values on a 2-simplex grid, evaluated back on the grid.
inline std::vector<double> convex_envelope_2d(const std::vector<Point>& grid, std::span<const double> values) {
  for (const auto& p : grid) {
    if (p.size() != 2) throw std::invalid_argument("convex_envelope_2d: grid points must have two coordinates");
  }
  LowerEnvelope env(grid, {values.begin(), values.end()});
  return env.at_all_points();
}

/// Worst violation of f(mid) <= (f(a) + f(b)) / 2 over grid-aligned triples a, mid, b.
inline double midpoint_convexity_violation(const std::vector<Point>& grid, std::span<const double> values,
                                           int per_axis) {
  const int m = per_axis - 1;
  auto key = [m](const Point& p) {
    std::vector<int> k;
    for (double v : p) k.push_back(static_cast<int>(std::lround(v * m)));
    return k;
  };
  std::map<std::vector<int>, double> lookup;
  for (std::size_t i = 0; i < grid.size(); ++i) lookup[key(grid[i])] = values[i];
  double worst = 0.0;
  const std::size_t dim = grid.front().size();
  // Directions: unit steps along every axis and along (e_i - e_j).
  std::vector<std::vector<int>> dirs;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<int> d(dim, 0);
    d[i] = 1;
    dirs.push_back(d);
    for (std::size_t j = i + 1; j < dim; ++j) {
      std::vector<int> e(dim, 0);
      e[i] = 1;
      e[j] = -1;
      dirs.push_back(e);
    }
  }
  for (const auto& [k, v] : lookup) {
    for (const auto& d : dirs) {
      for (int step = 1; step <= m; ++step) {
        std::vector<int> lo = k;
        std::vector<int> hi = k;
        for (std::size_t i = 0; i < dim; ++i) {
          lo[i] -= step * d[i];
          hi[i] += step * d[i];
        }
        auto a = lookup.find(lo);
        auto b = lookup.find(hi);
        if (a == lookup.end() || b == lookup.end()) break;
        worst = std::max(worst, v - 0.5 * (a->second + b->second));
      }
    }
  }
  return worst;
}

}  // namespace ggm
