#pragma once

#include "ggm/convexity.hpp"
#include "ggm/family.hpp"
#include "ggm/phase_search.hpp"

#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace ggm {

struct SurfaceOptions {
  int grid = 0;  // points per axis; 0 picks 201 in 1D and 101 otherwise
  bool hessian = true;
  double hessian_step = kHessianStep;
  double nonconvex_threshold = kNonconvexThreshold;
  PhaseSearchOptions phase{};
};

inline int default_grid(int simplex_dim) { return simplex_dim == 1 ? 201 : 101; }

struct GgmSurface {
  std::vector<std::string> param_names;
  std::vector<Point> grid;                      // free simplex coordinates, lexicographic
  std::vector<double> raw;                      // phase-minimized pure GGM
  std::vector<double> envelope;                 // lower convex envelope of raw over the grid
  std::vector<double> hessian_min_eig;          // NaN where the stencil leaves the simplex
  std::vector<bool> hessian_flagged;
  std::vector<std::vector<double>> phase_argmin;  // full phase vector per point, gauge phase first

  std::size_t size() const { return grid.size(); }
};

namespace detail {

// Preimage check at the vertices and barycenter of the parameter simplex.
inline void verify_family(const FamilyModel& model) {
  const int p = model.simplex_dim();
  std::vector<Point> probes;
  for (int v = 0; v <= p; ++v) {
    Point x(static_cast<std::size_t>(p), 0.0);
    if (v < p) x[static_cast<std::size_t>(v)] = 1.0;
    probes.push_back(std::move(x));
  }
  probes.emplace_back(static_cast<std::size_t>(p), 1.0 / (p + 1));
  for (const auto& x : probes) (void)model.at(x);  // throws on failure
}

}  // namespace detail

/// Envelope of values over an arbitrary grid of free simplex coordinates.
inline std::vector<double> convex_envelope(const std::vector<Point>& grid, std::span<const double> values) {
  if (grid.empty()) throw std::invalid_argument("convex_envelope: empty grid");
  if (grid.front().size() == 1) {
    std::vector<double> t;
    for (const auto& p : grid) t.push_back(p[0]);
    return convex_envelope_1d(t, values);
  }
  LowerEnvelope env(grid, {values.begin(), values.end()});
  return env.at_all_points();
}

/**
 * Mixed-state GGM over a grid: phase-minimized pure GGM of the preimage
 * member at each point, its Hessian in the simplex coordinates, and the
 * lower convex envelope. Hessian stencils warm-start from the minimizers
 * found at the centre point.
 */
inline GgmSurface ggm_mixed(const FamilyModel& model, const std::vector<Point>& grid, const SurfaceOptions& opts = {}) {
  detail::verify_family(model);
  for (const auto& x : grid) {
    if (static_cast<int>(x.size()) != model.simplex_dim()) {
      throw std::invalid_argument("ggm_mixed: grid point has the wrong number of coordinates");
    }
    if (simplex_margin(x) < -1e-12) throw std::invalid_argument("ggm_mixed: grid point outside the simplex");
  }

  GgmSurface s;
  s.param_names = model.param_names();
  s.grid = grid;
  PhaseMinimizer pm(model.basis(), opts.phase);
  for (const auto& x : grid) {
    const PhaseResult r = pm.minimize(model.weights(x));
    s.raw.push_back(r.value);
    s.phase_argmin.push_back(r.phases);

    double eig = std::numeric_limits<double>::quiet_NaN();
    bool flagged = false;
    if (opts.hessian) {
      auto f = [&](const Point& y) {
        if (y == x) return r.value;
        return pm.refine_from(model.weights(y), r.minimizers).value;
      };
      const auto h = hessian_report(f, {x}, opts.hessian_step, opts.nonconvex_threshold);
      if (h.front().min_eigenvalue) {
        eig = *h.front().min_eigenvalue;
        flagged = h.front().flagged;
      }
    }
    s.hessian_min_eig.push_back(eig);
    s.hessian_flagged.push_back(flagged);
  }
  s.envelope = convex_envelope(grid, s.raw);
  return s;
}

inline GgmSurface ggm_mixed(const FamilyModel& model, const SurfaceOptions& opts = {}) {
  const int n = opts.grid > 0 ? opts.grid : default_grid(model.simplex_dim());
  if (n < 11) throw std::invalid_argument("ggm_mixed: grid resolution must be >= 11");
  if (model.simplex_dim() >= 2 && n < 21) {
    throw std::invalid_argument("ggm_mixed: simplex grids need at least 21 points per axis");
  }
  return ggm_mixed(model, simplex_grid(model.simplex_dim(), n), opts);
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

/// CSV columns: parameters, raw, envelope, hessian_min_eig, then phi_2..phi_K.
inline void write_csv_header(std::ostream& os, const GgmSurface& s, std::string_view prefix_header = {}) {
  if (!prefix_header.empty()) os << prefix_header << ',';
  for (const auto& n : s.param_names) os << n << ',';
  os << "raw,envelope,hessian_min_eig";
  const std::size_t k = s.phase_argmin.empty() ? 0 : s.phase_argmin.front().size();
  for (std::size_t i = 1; i < k; ++i) os << ",phi_" << (i + 1);
  os << '\n';
}

inline void write_csv_rows(std::ostream& os, const GgmSurface& s, std::string_view prefix_value = {}) {
  for (std::size_t r = 0; r < s.size(); ++r) {
    if (!prefix_value.empty()) os << prefix_value << ',';
    for (double c : s.grid[r]) os << format_number(c) << ',';
    os << format_number(s.raw[r]) << ',' << format_number(s.envelope[r]) << ','
       << format_number(s.hessian_min_eig[r]);
    for (std::size_t i = 1; i < s.phase_argmin[r].size(); ++i) os << ',' << format_number(s.phase_argmin[r][i]);
    os << '\n';
  }
}

inline void write_csv(std::ostream& os, const GgmSurface& s) {
  write_csv_header(os, s);
  write_csv_rows(os, s);
}

}  // namespace ggm
