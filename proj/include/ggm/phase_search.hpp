#pragma once

#include "ggm/family.hpp"
#include "ggm/ggm_pure.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ggm {

struct PhaseSearchOptions {
  int grid_points = 32;                 // coarse samples per free phase
  std::size_t tensor_grid_budget = 32768;  // full product grid while grid_points^k fits
  int refine_candidates = 4;            // distinct coarse basins handed to the local search
  double step_tol = 1e-4;               // stop once a sweep moves no phase further than this
  int line_bits = 26;                   // Brent precision, about 2^-26 relative in the step
  int max_line_evals = 100;
  double tie_tol = 1e-9;                // minimizers this close in value count as ties
  double zero_weight = 1e-14;           // weights at or below this drop their basis element
  double keep_gap = 1e-2;               // minimizers kept as warm starts lie this close to the best
  int max_sweeps = 200;
};

struct PhaseResult {
  double value = 0.0;
  std::vector<double> phases;                   // one per basis element, wrapped to (-pi, pi]
  std::vector<std::vector<double>> minimizers;  // refined local minimizers, warm starts for nearby weights
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

inline double phase_norm_sq(std::span<const double> phases) {
  double s = 0.0;
  for (double p : phases) s += wrap_angle(p) * wrap_angle(p);
  return s;
}

/**
 * @brief Minimizes the pure-state GGM over the free phases of a preimage family.
 *
 * The member state is sum_k sqrt(w_k) e^{i phi_k} |basis_k>, with the phase
 * of the first nonzero-weight element fixed at 0. Search: a coarse grid
 * (the full product grid when small enough, otherwise cyclic per-phase
 * scans), then coordinate and pairwise-diagonal Brent line descent from
 * the best few distinct coarse points. Among minimizers tied within
 * tie_tol, the smallest wrapped phase vector is reported.
 *
 * Holds a GgmEvaluator, so one instance per thread.
 */
class PhaseMinimizer {
 public:
  explicit PhaseMinimizer(std::vector<PureState> basis, PhaseSearchOptions opts = {})
      : basis_(std::move(basis)), opts_(opts), eval_(check_basis(basis_)) {
    const auto D = basis_.front().amplitudes().size();
    B_.resize(D, static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t k = 0; k < basis_.size(); ++k) B_.col(static_cast<Eigen::Index>(k)) = basis_[k].amplitudes();
  }

  const PhaseSearchOptions& options() const { return opts_; }
  std::size_t basis_size() const { return basis_.size(); }

  /// GGM of the member with the given weights and full phase vector.
  double evaluate(std::span<const double> weights, std::span<const double> phases) {
    CVector c(B_.cols());
    for (Eigen::Index k = 0; k < B_.cols(); ++k) {
      const auto i = static_cast<std::size_t>(k);
      c[k] = std::sqrt(std::max(weights[i], 0.0)) * std::polar(1.0, phases[i]);
    }
    psi_.noalias() = B_ * c;
    psi_.normalize();
    return eval_(psi_);
  }

  PhaseResult minimize(std::span<const double> weights) {
    setup(weights);
    PhaseResult res;
    if (free_.empty()) {
      res.value = objective(std::vector<double>{});
      res.phases.assign(basis_.size(), 0.0);
      res.minimizers.push_back(res.phases);
      return res;
    }
    return finish(coarse_candidates());
  }

  /// Local descent only, from the supplied full-length phase vectors.
  PhaseResult refine_from(std::span<const double> weights, const std::vector<std::vector<double>>& starts) {
    setup(weights);
    if (free_.empty()) {
      PhaseResult res;
      res.value = objective(std::vector<double>{});
      res.phases.assign(basis_.size(), 0.0);
      res.minimizers.push_back(res.phases);
      return res;
    }
    std::vector<std::vector<double>> cands;
    for (const auto& s : starts) {
      std::vector<double> x(free_.size());
      for (std::size_t i = 0; i < free_.size(); ++i) x[i] = s.at(free_[i]);
      cands.push_back(std::move(x));
    }
    return finish(std::move(cands));
  }

 private:
  static const SystemShape& check_basis(const std::vector<PureState>& basis) {
    if (basis.empty()) throw std::invalid_argument("PhaseMinimizer: empty basis");
    for (const auto& b : basis) require_same_shape(b.shape(), basis.front().shape(), "PhaseMinimizer");
    return basis.front().shape();
  }

  void setup(std::span<const double> weights) {
    if (weights.size() != basis_.size()) throw std::invalid_argument("PhaseMinimizer: weight count mismatch");
    active_.clear();
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] > opts_.zero_weight) active_.push_back(k);
    }
    if (active_.empty()) throw std::invalid_argument("PhaseMinimizer: all weights are zero");
    free_.assign(active_.begin() + 1, active_.end());
    amp_.resize(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      amp_[static_cast<Eigen::Index>(k)] = weights[k] > opts_.zero_weight ? std::sqrt(weights[k]) : 0.0;
    }
  }

  double objective(const std::vector<double>& x) {
    CVector c = amp_.cast<cplx>();
    for (std::size_t i = 0; i < free_.size(); ++i) {
      c[static_cast<Eigen::Index>(free_[i])] *= std::polar(1.0, x[i]);
    }
    psi_.noalias() = B_ * c;
    psi_.normalize();
    return eval_(psi_);
  }

  std::vector<double> grid_angles() const {
    std::vector<double> a(static_cast<std::size_t>(opts_.grid_points));
    for (int m = 0; m < opts_.grid_points; ++m) {
      a[static_cast<std::size_t>(m)] = wrap_angle(2.0 * std::numbers::pi * m / opts_.grid_points);
    }
    return a;
  }

  double grid_step() const { return 2.0 * std::numbers::pi / opts_.grid_points; }

  static double wrapped_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(wrap_angle(a[i] - b[i])));
    return d;
  }

  std::vector<std::vector<double>> coarse_candidates() {
    const std::size_t k = free_.size();
    const auto angles = grid_angles();
    const auto g = angles.size();
    std::size_t total = 1;
    bool tensor = true;
    for (std::size_t i = 0; i < k; ++i) {
      total *= g;
      if (total > opts_.tensor_grid_budget) {
        tensor = false;
        break;
      }
    }

    struct Sample {
      double value;
      double norm;
      std::vector<double> x;
    };
    std::vector<Sample> samples;

    if (tensor) {
      samples.reserve(total);
      std::vector<std::size_t> idx(k, 0);
      std::vector<double> x(k);
      for (std::size_t n = 0; n < total; ++n) {
        for (std::size_t i = 0; i < k; ++i) x[i] = angles[idx[i]];
        samples.push_back({objective(x), phase_norm_sq(x), x});
        for (std::size_t i = k; i-- > 0;) {
          if (++idx[i] < g) break;
          idx[i] = 0;
        }
      }
    } else {
      // Cyclic per-phase scans from the zero vector.
      std::vector<double> x(k, 0.0);
      double fx = objective(x);
      samples.push_back({fx, 0.0, x});
      for (int sweep = 0; sweep < opts_.max_sweeps; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < k; ++i) {
          const double keep = x[i];
          double best = fx;
          double best_a = keep;
          for (double a : angles) {
            x[i] = a;
            const double f = objective(x);
            if (f < best - 1e-14) {
              best = f;
              best_a = a;
            } else if (f <= best + 1e-14 && std::abs(a) < std::abs(best_a)) {
              best_a = a;
            }
          }
          x[i] = best_a;
          if (best_a != keep) moved = true;
          fx = objective(x);
        }
        samples.push_back({fx, phase_norm_sq(x), x});
        if (!moved) break;
      }
    }

    std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.value < b.value; });
    // Exact ties at the top go to the smallest phase vector.
    const double top = samples.front().value;
    std::size_t lead = 0;
    for (std::size_t i = 1; i < samples.size() && samples[i].value <= top + 1e-12; ++i) {
      if (samples[i].norm < samples[lead].norm) lead = i;
    }
    std::vector<std::vector<double>> chosen{samples[lead].x};
    const double sep = 1.5 * grid_step();
    for (const auto& s : samples) {
      if (static_cast<int>(chosen.size()) >= opts_.refine_candidates) break;
      bool far = true;
      for (const auto& c : chosen) {
        if (wrapped_distance(c, s.x) < sep) {
          far = false;
          break;
        }
      }
      if (far) chosen.push_back(s.x);
    }
    return chosen;
  }

  /// Brent minimum of f(x + t d) for t in [-s, s]; moves x only on strict improvement.
  bool line_search(std::vector<double>& x, double& fx, const std::vector<double>& dir, double s) {
    std::vector<double> y(x.size());
    auto at = [&](double t) {
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + t * dir[i];
      return objective(y);
    };
    std::uintmax_t iters = static_cast<std::uintmax_t>(opts_.max_line_evals);
    const auto [t, ft] = boost::math::tools::brent_find_minima(at, -s, s, opts_.line_bits, iters);
    if (ft < fx - 1e-14) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = wrap_angle(x[i] + t * dir[i]);
      fx = ft;
      return true;
    }
    return false;
  }

  // Coordinate sweeps; pairwise diagonals (which cross valleys along phase
  // differences) only once the coordinates stall. Stops when neither moves x.
  std::pair<std::vector<double>, double> descend(std::vector<double> x) {
    const std::size_t k = x.size();
    std::vector<std::vector<double>> coords;
    std::vector<std::vector<double>> diags;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> e(k, 0.0);
      e[i] = 1.0;
      coords.push_back(std::move(e));
      for (std::size_t j = i + 1; j < k; ++j) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> d(k, 0.0);
          d[i] = 1.0;
          d[j] = sgn;
          diags.push_back(std::move(d));
        }
      }
    }
    double fx = objective(x);
    const double s = grid_step();
    auto sweep = [&](const std::vector<std::vector<double>>& dirs) {
      const std::vector<double> before = x;
      bool improved = false;
      for (const auto& d : dirs) improved |= line_search(x, fx, d, s);
      return improved && wrapped_distance(before, x) >= opts_.step_tol;
    };
    for (int it = 0; it < opts_.max_sweeps; ++it) {
      if (sweep(coords)) continue;
      if (diags.empty() || !sweep(diags)) break;
    }
    return {x, fx};
  }

  PhaseResult finish(std::vector<std::vector<double>> starts) {
    std::vector<std::pair<std::vector<double>, double>> refined;
    for (auto& s : starts) refined.push_back(descend(std::move(s)));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : refined) best = std::min(best, r.second);
    std::size_t pick = 0;
    double pick_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < refined.size(); ++i) {
      if (refined[i].second <= best + opts_.tie_tol) {
        const double n = phase_norm_sq(refined[i].first);
        if (n < pick_norm - 1e-12) {
          pick_norm = n;
          pick = i;
        }
      }
    }
    PhaseResult res;
    res.value = best;
    res.phases = expand(refined[pick].first);
    // Warm starts: minimizers within keep_gap of the best, best first, one per
    // value. Equal values at a generic point come from a symmetry (a local
    // unitary orbit, complex conjugation) that keeps them equal nearby too.
    res.minimizers.push_back(res.phases);
    std::vector<double> kept{best};
    for (const auto& r : refined) {
      if (r.second > best + opts_.keep_gap) continue;
      bool dup = false;
      for (double v : kept) dup = dup || std::abs(v - r.second) <= opts_.tie_tol;
      if (dup) continue;
      kept.push_back(r.second);
      res.minimizers.push_back(expand(r.first));
    }
    return res;
  }

  std::vector<double> expand(const std::vector<double>& x) const {
    std::vector<double> full(basis_.size(), 0.0);
    for (std::size_t i = 0; i < free_.size(); ++i) full[free_[i]] = wrap_angle(x[i]);
    return full;
  }

  std::vector<PureState> basis_;
  PhaseSearchOptions opts_;
  GgmEvaluator eval_;
  CMatrix B_;
  CVector psi_;
  Eigen::VectorXd amp_;
  std::vector<std::size_t> active_;
  std::vector<std::size_t> free_;
};

inline PhaseResult min_phase_ggm(const TwirledFamily& family, std::span<const double> weights,
                                 PhaseSearchOptions opts = {}) {
  PhaseMinimizer pm(family.basis(), opts);
  return pm.minimize(weights);
}

inline PhaseResult min_phase_ggm(const TwirledFamily& family, PhaseSearchOptions opts = {}) {
  return min_phase_ggm(family, family.weights(), opts);
}

}  // namespace ggm
