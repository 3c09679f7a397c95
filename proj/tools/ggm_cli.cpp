// Command-line front end: pure-state reports, mixed-family surfaces,
// group verification and figure datasets.
//
// Exit codes: 0 success, 1 usage or parse error, 2 verification failure.

#include "ggm/figures.hpp"
#include "ggm/ggm.hpp"
#include "ggm/spec_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitVerify = 2;

// Writes through a sibling temp file and renames, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_atomic(out_path, content);
  }
}

struct Config {
  std::string input;
  std::string state;
  std::string family;
  std::string out;
  int grid = 0;
  std::uint64_t seed = ggm::kDefaultSeed;
  double tol = ggm::kGroupTol;
  std::optional<double> alpha;
  std::vector<double> r;
  int figure = 0;
};

int run_pure(const Config& c) {
  const auto psi = ggm::parse_state(ggm::read_json_file(c.input));
  emit(c.out, ggm::to_json(ggm::ggm_pure(psi)).dump(2) + "\n");
  return kExitOk;
}

int run_mixed(const Config& c) {
  const auto model = ggm::parse_family(ggm::read_json_file(c.input));
  ggm::SurfaceOptions so;
  so.grid = c.grid;
  const auto s = ggm::ggm_mixed(model, so);
  std::ostringstream os;
  ggm::write_csv(os, s);
  emit(c.out, os.str());
  return kExitOk;
}

int run_verify(const Config& c) {
  const auto j = ggm::read_json_file(c.input);
  ggm::json report;
  bool ok = true;
  std::optional<ggm::UnitaryGroup> group;
  if (j.contains("elements")) {
    const auto els = ggm::parse_group_elements(j);
    const auto chk = ggm::check_group(els, c.tol);
    report["group"] = ggm::to_json(chk);
    report["group"]["size"] = els.size();
    ok = chk.ok();
    if (ok) group.emplace(els);
  } else {
    group.emplace(ggm::parse_group(j));
    const auto chk = ggm::check_group(group->elements(), c.tol);
    report["group"] = ggm::to_json(chk);
    report["group"]["size"] = group->size();
    ok = chk.ok();
  }

  if (group && !c.state.empty()) {
    const auto psi = ggm::parse_state(ggm::read_json_file(c.state), "state");
    const auto rho = ggm::twirl(*group, psi);
    const auto inv = ggm::verify_invariance(*group, rho, c.tol);
    // Invariance of the state itself, and of its twirl.
    const auto self = ggm::verify_invariance(*group, ggm::DensityMatrix::projector(psi), c.tol);
    report["state"] = {{"invariant", self.ok}, {"max_deviation", self.max_deviation},
                       {"twirl_invariant", inv.ok}, {"twirl_max_deviation", inv.max_deviation}};
    ok = ok && inv.ok;
  }
  if (group && !c.family.empty()) {
    const auto fj = ggm::read_json_file(c.family);
    std::vector<ggm::PureState> basis;
    const auto& bj = fj.at("basis");
    for (std::size_t i = 0; i < bj.size(); ++i) basis.push_back(ggm::parse_state(bj[i], "basis[" + std::to_string(i) + "]"));
    std::vector<double> w(basis.size(), 1.0 / static_cast<double>(basis.size()));
    if (fj.contains("weights")) w = fj.at("weights").get<std::vector<double>>();
    const auto target = ggm::DensityMatrix::mixture(basis, w);
    const auto inv = ggm::verify_invariance(*group, target, c.tol);
    const auto pre = ggm::verify_preimage(*group, basis, w, target.matrix(),
                                          ggm::preimage_phase_samples(basis.size(), c.seed), c.tol);
    report["family"] = {{"invariant", inv.ok}, {"invariance_deviation", inv.max_deviation},
                        {"preimage", pre.ok}, {"preimage_deviation", pre.max_deviation}};
    ok = ok && inv.ok && pre.ok;
  }
  report["ok"] = ok;
  emit(c.out, report.dump(2) + "\n");
  return ok ? kExitOk : kExitVerify;
}

int run_figure(const Config& c) {
  ggm::FigureOptions fo;
  if (c.grid > 0) fo.grid = c.grid;
  fo.alpha = c.alpha;
  if (!c.r.empty()) fo.r = c.r;
  const auto data = ggm::make_figure(c.figure, fo);
  emit(c.out, data.csv);
  (c.out.empty() ? std::cerr : std::cout) << data.summary.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized geometric measure of multiparty entanglement"};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Output file (default: stdout)");
  };
  auto check_grid = CLI::Range(11, 100000);

  auto* pure = app.add_subcommand("pure", "GGM report of a pure state spec (JSON)");
  pure->add_option("state", c.input, "State spec file")->required();
  add_common(pure);

  auto* mixed = app.add_subcommand("mixed", "Surface CSV for a mixed family spec (JSON)");
  mixed->add_option("family", c.input, "Family spec file")->required();
  mixed->add_option("--grid", c.grid, "Points per simplex axis")->check(check_grid);
  add_common(mixed);

  auto* verify = app.add_subcommand("verify-group", "Group axioms, optional state invariance and family preimage");
  verify->add_option("group", c.input, "Group spec file")->required();
  verify->add_option("--state", c.state, "State spec whose twirl is checked");
  verify->add_option("--family", c.family, "File with \"basis\" states and optional \"weights\"");
  verify->add_option("--tol", c.tol, "Verification tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--seed", c.seed, "Seed for random preimage phases");
  add_common(verify);

  auto* figure = app.add_subcommand("figure", "Dataset for one of the eight figure presets");
  figure->add_option("k", c.figure, "Figure index")->required()->check(CLI::Range(1, ggm::kFigureCount));
  figure->add_option("--grid", c.grid, "Points per simplex axis")->check(check_grid);
  figure->add_option("--alpha", c.alpha, "gGHZ amplitude for figures 3 and 4")->check(CLI::Range(0.0, 1.0));
  figure->add_option("--r", c.r, "Slice ratios x2/(1-x1) for figure 4")->check(CLI::Range(0.0, 1.0));
  add_common(figure);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*pure) return run_pure(c);
    if (*mixed) return run_mixed(c);
    if (*verify) return run_verify(c);
    if (*figure) return run_figure(c);
  } catch (const ggm::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerify;
  } catch (const ggm::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}
