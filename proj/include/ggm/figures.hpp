#pragma once

#include "ggm/closed_form.hpp"
#include "ggm/surface.hpp"

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>

namespace ggm {

/**
 * Defaults behind each figure dataset.
 *
 *  k  family                              grid  other
 *  1  rank2_sym, N = 3                    201
 *  2  rank3_ghz_w                         101
 *  3  rank3_gghz                          101   alpha = 0.55
 *  4  rank3_gghz_slice                    201   alpha = 0.55, r in {0.96, 0.98}
 *  5  rank3_ghz_dicke, N = 5              101   convex-window diagnostic
 *  6  rank5_5qubit                        101
 *  7  zeta_slice                          101
 *  8  qutrit                              101
 */
struct FigureOptions {
  std::optional<int> grid;
  std::optional<double> alpha;
  std::optional<std::vector<double>> r;
  std::optional<int> parties;
  PhaseSearchOptions phase{};
};

struct FigureData {
  std::string csv;
  nlohmann::json summary;  // per-figure diagnostics
};

inline constexpr int kFigureCount = 8;
inline constexpr double kFigureAlpha = 0.55;

namespace figure_detail {

inline std::string to_csv(const GgmSurface& s) {
  std::ostringstream os;
  write_csv(os, s);
  return os.str();
}

inline nlohmann::json surface_summary(const GgmSurface& s) {
  std::size_t flagged = 0;
  std::size_t checked = 0;
  double max_gap = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isnan(s.hessian_min_eig[i])) ++checked;
    if (s.hessian_flagged[i]) ++flagged;
    max_gap = std::max(max_gap, s.raw[i] - s.envelope[i]);
  }
  return {{"points", s.size()}, {"hessian_checked", checked}, {"hessian_flagged", flagged},
          {"max_raw_minus_envelope", max_gap}};
}

inline double max_closed_form_deviation(const GgmSurface& s, ClosedFormId id) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s.envelope[i] - closed_form(id, s.grid[i])));
  return worst;
}

}  // namespace figure_detail

/// Dataset behind figure k (1..8) with the documented defaults unless overridden.
inline FigureData make_figure(int k, const FigureOptions& fo = {}) {
  using namespace figure_detail;
  SurfaceOptions so;
  so.phase = fo.phase;
  const double alpha = fo.alpha.value_or(kFigureAlpha);
  auto surface = [&](const FamilyModel& m, int default_grid_size) {
    so.grid = fo.grid.value_or(default_grid_size);
    return ggm_mixed(m, so);
  };
  FigureData out;
  switch (k) {
    case 1: {
      const int n = fo.parties.value_or(3);
      const auto s = surface(families::rank2_sym(n), 201);
      out.csv = to_csv(s);
      out.summary = surface_summary(s);
      out.summary["parties"] = n;
      out.summary["max_closed_form_deviation"] = max_closed_form_deviation(s, ClosedFormId::rank2_sym);
      break;
    }
    case 2: {
      const auto s = surface(families::rank3_ghz_w(), 101);
      out.csv = to_csv(s);
      out.summary = surface_summary(s);
      out.summary["max_closed_form_deviation"] = max_closed_form_deviation(s, ClosedFormId::rank3_ghz_w);
      break;
    }
    case 3: {
      const auto s = surface(families::rank3_gghz(alpha), 101);
      out.csv = to_csv(s);
      out.summary = surface_summary(s);
      out.summary["alpha"] = alpha;
      break;
    }
    case 4: {
      const std::vector<double> rs = fo.r.value_or(std::vector<double>{0.96, 0.98});
      std::ostringstream os;
      out.summary = {{"alpha", alpha}, {"slices", nlohmann::json::array()}};
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto s = surface(families::rank3_gghz_slice(alpha, rs[i]), 201);
        if (i == 0) write_csv_header(os, s, "r");
        write_csv_rows(os, s, format_number(rs[i]));
        auto sum = surface_summary(s);
        sum["r"] = rs[i];
        out.summary["slices"].push_back(sum);
      }
      out.csv = os.str();
      break;
    }
    case 5: {
      const int n = fo.parties.value_or(5);
      const auto s = surface(families::rank3_ghz_dicke(n), 101);
      out.csv = to_csv(s);
      out.summary = surface_summary(s);
      out.summary["parties"] = n;
      // Convex window x1 >= 0.64, x2 <= 0.36: flags inside versus outside.
      std::size_t in = 0, in_flag = 0, out_flag = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::isnan(s.hessian_min_eig[i])) continue;
        const bool inside = s.grid[i][0] >= 0.64 - 1e-12 && s.grid[i][1] <= 0.36 + 1e-12;
        in += inside;
        if (s.hessian_flagged[i]) (inside ? in_flag : out_flag)++;
      }
      out.summary["window"] = {{"points", in}, {"flagged", in_flag}, {"flagged_outside", out_flag}};
      break;
    }
    case 6: {
      const auto s = surface(families::rank5_5qubit(), 101);
      out.csv = to_csv(s);
      out.summary = surface_summary(s);
      out.summary["max_closed_form_deviation"] = max_closed_form_deviation(s, ClosedFormId::rank5_5qubit);
      break;
    }
    case 7: {
      const auto s = surface(families::zeta_slice(), 101);
      out.csv = to_csv(s);
      out.summary = surface_summary(s);
      break;
    }
    case 8: {
      const auto s = surface(families::qutrit(), 101);
      out.csv = to_csv(s);
      out.summary = surface_summary(s);
      out.summary["max_closed_form_deviation"] = max_closed_form_deviation(s, ClosedFormId::qutrit);
      break;
    }
    default:
      throw std::invalid_argument("figure index must be 1.." + std::to_string(kFigureCount));
  }
  out.summary["figure"] = k;
  return out;
}

}  // namespace ggm
