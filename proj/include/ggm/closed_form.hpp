#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ggm {

/// Families with a known analytic GGM, used as cross-checks of the numerical pipeline.
enum class ClosedFormId { rank2_sym, rank3_ghz_w, rank5_5qubit, qutrit };

inline ClosedFormId parse_closed_form_id(std::string_view name) {
  if (name == "rank2_sym") return ClosedFormId::rank2_sym;
  if (name == "rank3_ghz_w") return ClosedFormId::rank3_ghz_w;
  if (name == "rank5_5qubit") return ClosedFormId::rank5_5qubit;
  if (name == "qutrit") return ClosedFormId::qutrit;
  throw std::invalid_argument("unknown closed form '" + std::string(name) + "'");
}

inline int closed_form_arity(ClosedFormId id) { return id == ClosedFormId::rank2_sym ? 1 : 2; }

namespace detail {

inline constexpr double kSimplexSlack = 1e-12;

// Square root tolerant of round-off below zero; genuinely negative radicands are errors.
inline double safe_sqrt(double v) {
  if (v < -kSimplexSlack) throw std::domain_error("closed form: negative radicand");
  return std::sqrt(std::max(v, 0.0));
}

}  // namespace detail

/**
 * Literal evaluation of the analytic GGM for the given family.
 * rank2_sym takes (x); the others take (x1, x2) with x3 = 1 - x1 - x2.
 */
inline double closed_form(ClosedFormId id, std::span<const double> params) {
  if (static_cast<int>(params.size()) != closed_form_arity(id)) {
    throw std::invalid_argument("closed_form: wrong number of parameters");
  }
  double rest = 1.0;
  for (double p : params) {
    if (!(p >= -detail::kSimplexSlack)) throw std::invalid_argument("closed_form: parameter outside the simplex");
    rest -= p;
  }
  if (rest < -detail::kSimplexSlack) throw std::invalid_argument("closed_form: parameter outside the simplex");
  rest = std::max(rest, 0.0);
  using detail::safe_sqrt;

  switch (id) {
    case ClosedFormId::rank2_sym: {
      const double x = std::clamp(params[0], 0.0, 1.0);
      return 0.5 * (1.0 - 2.0 * std::sqrt(x) * std::sqrt(1.0 - x));
    }
    case ClosedFormId::rank3_ghz_w: {
      const double x1 = std::max(params[0], 0.0);
      const double x2 = std::max(params[1], 0.0);
      const double s = safe_sqrt(x2 * rest);
      const double inner = 1.0 - 5.0 * x1 * x1 - 12.0 * x2 * (x2 - 1.0) +
                           8.0 * std::sqrt(6.0 * x1 * x2) * (1.0 + s - x1 - x2) + 4.0 * x1 * (1.0 + 3.0 * s - 3.0 * x2);
      return (3.0 - safe_sqrt(inner)) / 6.0;
    }
    case ClosedFormId::rank5_5qubit: {
      const double x1 = std::max(params[0], 0.0);
      const double x2 = std::max(params[1], 0.0);
      const double a = (2.0 * x1 + 4.0 * x2 + 3.0) / 10.0;
      const double b = (7.0 - 2.0 * x1 - 4.0 * x2) / 10.0;
      const double c = std::sqrt(x1 * x2 / 20.0) + std::sqrt(x1 * rest / 20.0) + 2.0 * x2 / (5.0 * std::sqrt(2.0)) +
                       2.0 * rest / (5.0 * std::sqrt(2.0)) + 0.3 * std::sqrt(x2 * rest);
      return 0.5 * (1.0 - safe_sqrt(1.0 - 4.0 * (a * b - c * c)));
    }
    case ClosedFormId::qutrit: {
      const double x1 = std::max(params[0], 0.0);
      const double x2 = std::max(params[1], 0.0);
      return (2.0 / 3.0) * (1.0 - std::sqrt(x1 * x2) - std::sqrt(x1 * rest) - std::sqrt(x2 * rest));
    }
  }
  throw std::logic_error("closed_form: unhandled id");
}

}  // namespace ggm
