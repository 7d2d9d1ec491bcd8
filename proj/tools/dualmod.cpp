// dualmod command-line harness: selftest plus file-driven solvers/checkers.
//
// Exit codes: 0 success, 1 mathematical failure, 2 usage, parse or I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dualmod/dualmod.hpp"

namespace {

using dualmod::Json;

enum Exit { kOk = 0, kMathFailure = 1, kInputError = 2 };

struct RunConfig {
  std::string input;
  std::string output;
  std::optional<double> tol;  // explicit --tol
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string fault;
};

// Errors in reading or validating the input; always exit 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json read_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InputError("--input is required");
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw InputError("cannot open " + cfg.input);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return dualmod::parse_json_text(buf.str());
  } catch (const dualmod::ParseError& e) {
    throw InputError(cfg.input + ": " + e.what());
  }
}

// Runs a reader, turning parse and shape errors into InputError.
template <typename F>
auto load(const RunConfig& cfg, F&& reader) {
  try {
    return reader(read_input(cfg));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(cfg.input + ": " + e.what());
  }
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  const bool scalar_array =
      j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !scalar_array) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << j.dump() << '\n';
  }
}

std::string render(const Json& report, const std::string& format) {
  if (format == "text") {
    std::ostringstream out;
    flatten(report, "", out);
    return out.str();
  }
  return report.dump(2) + "\n";
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw InputError("failed writing to stdout");
    return;
  }
  const std::filesystem::path target(cfg.output);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << text;
    out.close();
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot rename onto " + target.string());
  }
}

Json envelope(const std::string& command, const RunConfig& cfg, double check_tol) {
  return Json{{"command", command},
              {"version", dualmod::kVersion},
              {"tolerance", dualmod::default_tolerance()},
              {"check_tolerance", check_tol},
              {"seed", cfg.seed},
              {"samples", cfg.samples}};
}

// Tolerance for finite-difference based checks: explicit --tol, otherwise the
// dual_diff default.
double check_tolerance(const RunConfig& cfg) { return cfg.tol.value_or(dualmod::kDefaultCrTolerance); }

int cmd_selftest(const RunConfig& cfg, Json& report) {
  dualmod::SelftestConfig sc;
  sc.samples = cfg.samples;
  sc.seed = cfg.seed;
  sc.fault = cfg.fault;
  const auto results = dualmod::run_selftest(sc);
  Json list = Json::array();
  std::vector<std::string> failed;
  for (const auto& r : results) {
    list.push_back({{"module", r.module},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"worst", std::isfinite(r.worst) ? Json(r.worst) : Json(nullptr)},
                    {"threshold", r.threshold},
                    {"trials", r.trials}});
    if (!r.passed) failed.push_back(r.module + "." + r.name);
  }
  report["invariants"] = list;
  report["failed"] = failed;
  report["passed"] = failed.empty();
  if (!cfg.fault.empty()) report["fault"] = cfg.fault;
  return failed.empty() ? kOk : kMathFailure;
}

int cmd_basis(const RunConfig& cfg, Json& report) {
  const auto gens = load(cfg, [](const Json& j) {
    const Json& list = j.is_object() && j.contains("generators") ? j["generators"] : j;
    if (!list.is_array()) throw dualmod::ParseError("at /generators: expected an array of vectors");
    std::vector<dualmod::DualVec> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.push_back(dualmod::vector_from_json(list[i], "/generators/" + std::to_string(i)));
      if (out.back().n() != out.front().n() || out.back().m() != out.front().m()) {
        throw dualmod::ParseError("at /generators/" + std::to_string(i) + ": shape differs from /generators/0");
      }
    }
    return out;
  });
  const auto basis = dualmod::extract_basis(gens);
  report["basis"] = dualmod::to_json(basis);
  report["independent"] = dualmod::is_independent(basis);
  report["passed"] = report["independent"];
  return report["passed"].get<bool>() ? kOk : kMathFailure;
}

int cmd_solve(const RunConfig& cfg, Json& report) {
  const auto [f, b] = load(cfg, [](const Json& j) {
    auto f = dualmod::map_from_json(j.contains("map") ? j["map"] : Json(), "/map");
    auto b = dualmod::vector_from_json(j.contains("rhs") ? j["rhs"] : Json(), "/rhs");
    if (b.n() != f.s() || b.m() != f.t()) throw dualmod::ParseError("at /rhs: shape does not match the map codomain");
    return std::make_pair(f, b);
  });
  try {
    const auto x = dualmod::solve(f, b);
    report["solution"] = dualmod::to_json(x);
    report["residual"] = dualmod::max_abs_entry(dualmod::DualVec(f(x) - b));
    report["passed"] = true;
    return kOk;
  } catch (const dualmod::Error& e) {
    report["passed"] = false;
    report["error"] = e.what();
    return kMathFailure;
  }
}

int cmd_diffcheck(const RunConfig& cfg, Json& report) {
  struct Input {
    dualmod::ExprFunction f;
    std::vector<dualmod::DualVec> points;
  };
  const Input in = load(cfg, [&](const Json& j) {
    Input out;
    const bool wrapped = j.is_object() && j.contains("function");
    out.f = dualmod::function_from_json(wrapped ? j["function"] : j, wrapped ? "/function" : "");
    if (wrapped && j.contains("points")) {
      for (std::size_t i = 0; i < j["points"].size(); ++i) {
        out.points.push_back(dualmod::vector_from_json(j["points"][i], "/points/" + std::to_string(i)));
      }
    } else if (wrapped && j.contains("point")) {
      out.points.push_back(dualmod::vector_from_json(j["point"], "/point"));
    } else {
      dualmod::Rng rng(cfg.seed);
      for (std::size_t k = 0; k < cfg.samples; ++k) out.points.push_back(dualmod::random_vector(rng, out.f.n(), out.f.m()));
    }
    for (const auto& p : out.points) {
      if (p.n() != out.f.n() || p.m() != out.f.m()) throw dualmod::ParseError("at /points: shape does not match the domain");
    }
    return out;
  });
  const double tol = check_tolerance(cfg);
  Json checks = Json::array();
  bool all = true;
  for (std::size_t k = 0; k < in.points.size(); ++k) {
    Json item;
    try {
      const auto cr = dualmod::cr_check(in.f, in.points[k], tol);
      item["cr"] = dualmod::to_json(cr);
      bool ok = cr.passed;
      if (cr.derivative) {
        const auto lim = dualmod::limit_check(in.f, in.points[k], *cr.derivative, 0.1, 8, 1e-3, 10, cfg.seed + k);
        item["limit"] = dualmod::to_json(lim);
        ok = ok && lim.passed;
      }
      item["passed"] = ok;
      all = all && ok;
    } catch (const dualmod::Error& e) {
      item["point"] = dualmod::to_json(in.points[k]);
      item["passed"] = false;
      item["error"] = e.what();
      all = false;
    }
    checks.push_back(std::move(item));
  }
  report["checks"] = checks;
  report["passed"] = all;
  return all ? kOk : kMathFailure;
}

int cmd_atlas(const RunConfig& cfg, Json& report) {
  const auto atlas = load(cfg, [](const Json& j) { return dualmod::atlas_from_json(j); });
  dualmod::AtlasCheckOptions opts;
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  opts.tol = check_tolerance(cfg);
  const auto result = dualmod::verify_atlas(atlas, opts);
  report["checks"] = dualmod::to_json(result);
  report["passed"] = result.passed();
  return result.passed() ? kOk : kMathFailure;
}

int cmd_darboux(const RunConfig& cfg, Json& report) {
  const auto g = load(cfg, [](const Json& j) { return dualmod::form_from_json(j); });
  const auto form = dualmod::check_form(g);
  report["form"] = dualmod::to_json(form);
  if (!form.passed()) {
    report["passed"] = false;
    return kMathFailure;
  }
  try {
    const auto basis = dualmod::darboux_basis(g);
    const bool ok = dualmod::verify_darboux(basis, g);
    report["basis"] = dualmod::to_json(basis);
    report["verified"] = ok;
    report["passed"] = ok;
    return ok ? kOk : kMathFailure;
  } catch (const dualmod::Error& e) {
    report["passed"] = false;
    report["error"] = e.what();
    return kMathFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual real module toolkit"};
  app.set_version_flag("--version", std::string(dualmod::kVersion));
  app.require_subcommand(1);

  RunConfig cfg;
  double tol_value = 0;
  CLI::Option* tol_opt = nullptr;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Input JSON file");
    sub->add_option("--output", cfg.output, "Report path (default stdout)");
    tol_opt = sub->add_option("--tol", tol_value, "Tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--samples", cfg.samples, "Trials per property")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "text"}));
    return sub;
  };

  using Handler = int (*)(const RunConfig&, Json&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"selftest", "Run the invariant suites of every module", cmd_selftest},
      {"basis", "Split basis of the submodule spanned by generators", cmd_basis},
      {"solve", "Solve f(x) = b for a module map", cmd_solve},
      {"diffcheck", "Dual differentiability check of an expression function", cmd_diffcheck},
      {"atlas", "Verify the axioms of an atlas", cmd_atlas},
      {"darboux", "Check a form and compute its Darboux basis", cmd_darboux}};
  std::vector<std::pair<CLI::App*, CLI::Option*>> subs;
  for (const auto& [name, help, handler] : commands) {
    CLI::App* sub = common(app.add_subcommand(name, help));
    if (name == "selftest") sub->add_option("--fault", cfg.fault)->group("");
    subs.emplace_back(sub, tol_opt);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (const char* env = std::getenv("DUALMOD_TOL")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v)) {
        throw InputError(std::string("DUALMOD_TOL is not a positive number: ") + env);
      }
      dualmod::set_default_tolerance(v);
    }
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (!subs[k].first->parsed()) continue;
      const auto& [name, help, handler] = commands[k];
      // For the finite-difference checks --tol is the check tolerance; elsewhere it
      // replaces the global zero/invertibility tolerance.
      const bool fd_check = name == "diffcheck" || name == "atlas";
      if (subs[k].second->count() > 0) {
        cfg.tol = tol_value;
        if (!fd_check) dualmod::set_default_tolerance(tol_value);
      }
      Json report = envelope(name, cfg, fd_check ? check_tolerance(cfg) : dualmod::default_tolerance());
      int code = kOk;
      try {
        code = handler(cfg, report);
      } catch (const InputError&) {
        throw;
      } catch (const dualmod::Error& e) {
        report["passed"] = false;
        report["error"] = e.what();
        code = kMathFailure;
      }
      write_output(cfg, render(report, cfg.format));
      if (code != kOk && !cfg.output.empty()) {
        std::cerr << name << ": failed (see " << cfg.output << ")\n";
      }
      return code;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
