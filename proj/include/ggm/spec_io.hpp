#pragma once

#include "ggm/family.hpp"
#include "ggm/ggm_pure.hpp"
#include "ggm/states.hpp"
#include "ggm/twirl.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ggm {

using json = nlohmann::json;

/// Malformed specification; what() starts with the path of the offending field.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& path, const std::string& msg) : std::runtime_error(path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace spec_detail {

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
inline std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SpecError(path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(join(path, key), "missing required field");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  return j.get<double>();
}

inline int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SpecError(path, "expected an integer");
  return j.get<int>();
}

inline int integer_or(const json& obj, const std::string& key, int fallback, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : integer(*it, join(path, key));
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected an array");
  return j;
}

/// A complex number written as [re, im] or as a bare real.
inline cplx complex_number(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SpecError(path, "expected [re, im] or a real number");
}

inline CVector complex_vector(const json& j, const std::string& path) {
  array(j, path);
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_number(j[i], join(path, i));
  return v;
}

inline std::vector<double> real_vector(const json& j, const std::string& path) {
  array(j, path);
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], join(path, i)));
  return v;
}

inline CMatrix complex_matrix(const json& j, const std::string& path) {
  array(j, path);
  if (j.empty() || !j[0].is_array()) throw SpecError(path, "expected a nonempty matrix of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rp = join(path, static_cast<std::size_t>(r));
    const json& row = array(j[static_cast<std::size_t>(r)], rp);
    if (static_cast<Eigen::Index>(row.size()) != cols) throw SpecError(rp, "ragged matrix row");
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_number(row[static_cast<std::size_t>(c)], join(rp, static_cast<std::size_t>(c)));
    }
  }
  return m;
}

inline SystemShape shape(const json& j, const std::string& path) {
  array(j, path);
  std::vector<int> dims;
  for (std::size_t i = 0; i < j.size(); ++i) dims.push_back(integer(j[i], join(path, i)));
  try {
    return SystemShape(std::move(dims));
  } catch (const std::invalid_argument& e) {
    throw SpecError(path, e.what());
  }
}

// Runs a constructor, re-labelling its validation errors with the spec path.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SpecError&) {
    throw;
  } catch (const VerificationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SpecError(path, e.what());
  } catch (const std::domain_error& e) {
    throw SpecError(path, e.what());
  }
}

}  // namespace spec_detail

/**
 * State spec: {"constructor": name, "args": {...}} with name one of
 * ghz, gghz, dicke, generalized_dicke, sector, zeta, superpose;
 * or {"shape": [d_1..d_N], "amplitudes": [[re, im], ...]} in flat index order.
 */
inline PureState parse_state(const json& j, const std::string& path = "") {
  using namespace spec_detail;
  if (j.is_object() && j.contains("amplitudes")) {
    const SystemShape s = shape(field(j, "shape", path), join(path, "shape"));
    const CVector v = complex_vector(field(j, "amplitudes", path), join(path, "amplitudes"));
    return guarded(join(path, "amplitudes"), [&] { return PureState(s, v); });
  }
  const json& ctor = field(j, "constructor", path);
  if (!ctor.is_string()) throw SpecError(join(path, "constructor"), "expected a string");
  const std::string name = ctor.get<std::string>();
  const std::string ap = join(path, "args");
  const json empty = json::object();
  const json& args = j.contains("args") ? j.at("args") : empty;
  if (!args.is_object()) throw SpecError(ap, "expected an object");

  if (name == "ghz") {
    const int n = integer(field(args, "parties", ap), join(ap, "parties"));
    const int d = integer_or(args, "d", 2, ap);
    const int sign = integer_or(args, "sign", 1, ap);
    return guarded(ap, [&] { return ghz(n, d, sign); });
  }
  if (name == "gghz") {
    const int n = integer(field(args, "parties", ap), join(ap, "parties"));
    const double alpha = number(field(args, "alpha", ap), join(ap, "alpha"));
    return guarded(join(ap, "alpha"), [&] { return gghz(n, alpha); });
  }
  if (name == "dicke") {
    const int n = integer(field(args, "parties", ap), join(ap, "parties"));
    const int k = integer(field(args, "excitations", ap), join(ap, "excitations"));
    return guarded(ap, [&] { return dicke(n, k); });
  }
  if (name == "generalized_dicke") {
    const int n = integer(field(args, "parties", ap), join(ap, "parties"));
    const int k = integer(field(args, "excitations", ap), join(ap, "excitations"));
    const CVector b = complex_vector(field(args, "coefficients", ap), join(ap, "coefficients"));
    return guarded(join(ap, "coefficients"), [&] { return generalized_dicke(DickeCoefficients(n, k, b)); });
  }
  if (name == "sector") {
    const SystemShape s = shape(field(args, "shape", ap), join(ap, "shape"));
    const int mod = integer_or(args, "modulus", sector_modulus(s), ap);
    const int k = integer(field(args, "residue", ap), join(ap, "residue"));
    if (args.contains("coefficients")) {
      const CVector c = complex_vector(args.at("coefficients"), join(ap, "coefficients"));
      return guarded(join(ap, "coefficients"),
                     [&] { return sector_state(SectorSpec::from_sector_coefficients(s, mod, k, c)); });
    }
    return guarded(join(ap, "residue"), [&] { return sector_state(SectorSpec::uniform(s, mod, k)); });
  }
  if (name == "zeta") {
    const int i = integer(field(args, "index", ap), join(ap, "index"));
    return guarded(join(ap, "index"), [&] { return zeta(i); });
  }
  if (name == "superpose") {
    const std::string bp = join(ap, "basis");
    const json& bj = array(field(args, "basis", ap), bp);
    std::vector<PureState> basis;
    for (std::size_t i = 0; i < bj.size(); ++i) basis.push_back(parse_state(bj[i], join(bp, i)));
    const auto w = real_vector(field(args, "weights", ap), join(ap, "weights"));
    std::vector<double> ph(basis.size(), 0.0);
    if (args.contains("phases")) ph = real_vector(args.at("phases"), join(ap, "phases"));
    return guarded(ap, [&] { return superpose(basis, w, ph); });
  }
  throw SpecError(join(path, "constructor"), "unknown constructor '" + name + "'");
}

/// Elements of an {"elements": ...} group spec, without checking the group axioms.
inline std::vector<LocalUnitaryElement> parse_group_elements(const json& j, const std::string& path = "") {
  using namespace spec_detail;
  const std::string ep = join(path, "elements");
  const json& ej = array(field(j, "elements", path), ep);
  if (ej.empty()) throw SpecError(ep, "expected at least one element");
  std::vector<LocalUnitaryElement> els;
  for (std::size_t e = 0; e < ej.size(); ++e) {
    const std::string p = join(ep, e);
    const json& fj = array(ej[e], p);
    std::vector<CMatrix> factors;
    std::vector<int> dims;
    for (std::size_t f = 0; f < fj.size(); ++f) {
      factors.push_back(complex_matrix(fj[f], join(p, f)));
      dims.push_back(static_cast<int>(factors.back().rows()));
    }
    const SystemShape s = guarded(p, [&] { return SystemShape(dims); });
    els.push_back(guarded(p, [&] { return LocalUnitaryElement(s, factors); }));
  }
  if (!std::all_of(els.begin(), els.end(), [&](const auto& e) { return e.shape() == els.front().shape(); })) {
    throw SpecError(ep, "elements act on different shapes");
  }
  return els;
}

/**
 * Group spec: {"kind": parity|omega|zeta|qudit, "shape": [...], "order": n}
 * or {"elements": [[U_1, ..., U_N], ...]} with each U a matrix of [re, im].
 */
inline UnitaryGroup parse_group(const json& j, const std::string& path = "") {
  using namespace spec_detail;
  if (j.is_object() && j.contains("elements")) {
    auto els = parse_group_elements(j, path);
    return guarded(join(path, "elements"), [&] { return UnitaryGroup(std::move(els)); });
  }
  const json& kj = field(j, "kind", path);
  if (!kj.is_string()) throw SpecError(join(path, "kind"), "expected a string");
  const auto kind = parse_group_kind(kj.get<std::string>());
  if (!kind) throw SpecError(join(path, "kind"), "unknown group kind '" + kj.get<std::string>() + "'");
  SystemShape s = SystemShape::qubits(3);
  if (j.contains("shape")) {
    s = shape(j.at("shape"), join(path, "shape"));
  } else if (*kind != GroupKind::zeta) {
    throw SpecError(join(path, "shape"), "missing required field");
  }
  const int order = integer_or(j, "order", 0, path);
  return guarded(path.empty() ? "<root>" : path, [&] { return builtin_group(*kind, s, order); });
}

/**
 * Family spec: {"family": name, "args": {...}} for the built-in families,
 * or {"group": ..., "basis": [states], "weight_map": [[...]], "params": [...]}.
 * Without weight_map the basis weights themselves are the simplex coordinates.
 */
inline FamilyModel parse_family(const json& j, const std::string& path = "") {
  using namespace spec_detail;
  if (j.is_object() && j.contains("family")) {
    const json& nj = j.at("family");
    if (!nj.is_string()) throw SpecError(join(path, "family"), "expected a string");
    const std::string name = nj.get<std::string>();
    const std::string ap = join(path, "args");
    const json empty = json::object();
    const json& args = j.contains("args") ? j.at("args") : empty;
    auto parties = [&](int fallback) { return integer_or(args, "parties", fallback, ap); };
    auto alpha = [&]() { return number(field(args, "alpha", ap), join(ap, "alpha")); };
    return guarded(ap, [&]() -> FamilyModel {
      if (name == "rank2_sym") return families::rank2_sym(parties(3));
      if (name == "ghz_pm") return families::ghz_pm(parties(3));
      if (name == "rank3_ghz_w") return families::rank3_ghz_w();
      if (name == "rank3_gghz") return families::rank3_gghz(alpha());
      if (name == "rank3_gghz_slice") {
        return families::rank3_gghz_slice(alpha(), number(field(args, "r", ap), join(ap, "r")));
      }
      if (name == "rank3_ghz_dicke") return families::rank3_ghz_dicke(parties(5));
      if (name == "gghz_dicke") return families::gghz_dicke(parties(3), alpha());
      if (name == "rank5_5qubit") return families::rank5_5qubit();
      if (name == "zeta") return families::zeta_full();
      if (name == "zeta_slice") return families::zeta_slice();
      if (name == "qudit_sectors") return families::qudit_sectors(shape(field(args, "shape", ap), join(ap, "shape")));
      if (name == "qutrit") return families::qutrit();
      throw SpecError(join(path, "family"), "unknown family '" + name + "'");
    });
  }
  UnitaryGroup group = parse_group(field(j, "group", path), join(path, "group"));
  const std::string bp = join(path, "basis");
  const json& bj = array(field(j, "basis", path), bp);
  std::vector<PureState> basis;
  for (std::size_t i = 0; i < bj.size(); ++i) basis.push_back(parse_state(bj[i], join(bp, i)));
  const std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "custom";
  if (!j.contains("weight_map")) {
    return guarded(bp, [&] { return FamilyModel::with_identity_map(name, group, basis); });
  }
  const std::string mp = join(path, "weight_map");
  const json& mj = array(j.at("weight_map"), mp);
  if (mj.empty() || !mj[0].is_array()) throw SpecError(mp, "expected a nonempty matrix of rows");
  Eigen::MatrixXd map(static_cast<Eigen::Index>(mj.size()), static_cast<Eigen::Index>(mj[0].size()));
  for (std::size_t r = 0; r < mj.size(); ++r) {
    const auto row = real_vector(mj[r], join(mp, r));
    if (static_cast<Eigen::Index>(row.size()) != map.cols()) throw SpecError(join(mp, r), "ragged matrix row");
    for (std::size_t c = 0; c < row.size(); ++c) map(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  std::vector<std::string> params;
  if (j.contains("params")) {
    const std::string pp = join(path, "params");
    const json& pj = array(j.at("params"), pp);
    for (std::size_t i = 0; i < pj.size(); ++i) {
      if (!pj[i].is_string()) throw SpecError(join(pp, i), "expected a string");
      params.push_back(pj[i].get<std::string>());
    }
  } else {
    for (Eigen::Index i = 1; i < map.cols(); ++i) params.push_back("x" + std::to_string(i));
  }
  return guarded(mp, [&] { return FamilyModel(name, group, basis, map, params); });
}

inline json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw SpecError(file, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError(file, std::string("invalid JSON: ") + e.what());
  }
}

inline json to_json(const GgmReport& rep) {
  json j;
  j["value"] = rep.value;
  j["lambda_sq_max"] = rep.lambda_sq_max;
  j["maximizing_cuts"] = json::array();
  for (const auto& c : rep.maximizing_cuts) j["maximizing_cuts"].push_back(c.label());
  j["per_cut"] = json::array();
  for (const auto& cv : rep.per_cut) j["per_cut"].push_back({{"cut", cv.cut.label()}, {"lambda_sq", cv.lambda_sq}});
  return j;
}

inline json to_json(const GroupCheck& g) {
  return {{"has_identity", g.has_identity},
          {"closed", g.closed},
          {"has_inverses", g.has_inverses},
          {"max_closure_defect", g.max_closure_defect},
          {"max_inverse_defect", g.max_inverse_defect}};
}

}  // namespace ggm
