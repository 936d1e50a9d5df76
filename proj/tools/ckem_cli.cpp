// Command-line front end: verification suites, ansatz solves and plots,
// blow-up catalog work and Futaki evaluation.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ckem/ansatz.hpp"
#include "ckem/catalog.hpp"
#include "ckem/errors.hpp"
#include "ckem/invariants.hpp"
#include "ckem/plot.hpp"
#include "ckem/report.hpp"
#include "ckem/suite.hpp"

namespace {

using namespace ckem;

struct Options {
  double p = 0.5;
  int m = 2;
  double a = 1.0;
  double b = 2.0;
  double B = 0.0;
  double c = 1.0;
  std::optional<double> family_b;
  std::uint64_t seed = SuiteConfig{}.seed;
  std::vector<std::string> tol;
  std::string out;
  std::string format = "json";
  std::string what = "both";
  std::string csv;
  int workers = 1;
  std::string suite;
};

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
}

ReportFormat report_format(const std::string& f) {
  if (f == "json") return ReportFormat::Json;
  if (f == "csv") return ReportFormat::Csv;
  throw UsageError("format must be json or csv, got '" + f + "'");
}

std::string render(const std::vector<VerificationReport>& reports, const Options& o) {
  return report_format(o.format) == ReportFormat::Json ? render_json(reports)
                                                       : render_csv(reports);
}

// "--tol name=value" entries feed suite tolerances; a bare number is the
// tolerance of single-check commands.
std::optional<double> split_tolerances(const Options& o, std::map<std::string, double>& named) {
  std::optional<double> bare;
  for (const auto& item : o.tol) {
    const auto eq = item.find('=');
    try {
      if (eq == std::string::npos) {
        bare = std::stod(item);
      } else {
        named[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      }
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse tolerance '" + item + "'");
    }
  }
  return bare;
}

int all_pass(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) return 1;
  }
  return 0;
}

int cmd_verify(const Options& o) {
  SuiteConfig config;
  config.seed = o.seed;
  config.workers = o.workers;
  if (split_tolerances(o, config.tolerances)) {
    throw UsageError("verify takes named tolerances, e.g. --tol zero_b.relative=1e-8");
  }
  const auto reports = run_suite(o.suite, config);
  write_output(o, render(reports, o));
  for (const auto& r : reports) {
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.check_id << "  residual " << r.residual
              << " / " << r.tolerance << '\n';
  }
  return all_pass(reports);
}

nlohmann::ordered_json positivity_json(const PositivityResult& p) {
  return {{"verdict", to_string(p.verdict)},
          {"deflated_min", p.deflated_min},
          {"deflated_argmin", p.deflated_argmin},
          {"sampled_min", p.sampled_min},
          {"peak", p.peak},
          {"peak_at", p.peak_at},
          {"reason", p.reason}};
}

int cmd_ansatz_solve(const Options& o) {
  const AnsatzProfile profile = solve_boundary_value(o.m, o.a, o.b, o.B);
  nlohmann::json pj = profile;
  nlohmann::ordered_json out;
  out["profile"] = nlohmann::ordered_json::parse(pj.dump());
  out["positivity"] =
      positivity_json(positivity_certificate(profile.quintic(), o.a, o.b));
  out["extremality_defect"] = extremality_defect(profile);
  write_output(o, out.dump(2) + "\n");
  if (!o.csv.empty()) write_text_file(o.csv, profile_csv(profile.curve()));
  return 0;
}

int cmd_ansatz_ckem(const Options& o) {
  const CkemResult r = find_ckem(o.m, o.a, o.b);
  nlohmann::json pj = r.profile;
  nlohmann::ordered_json out;
  out["profile"] = nlohmann::ordered_json::parse(pj.dump());
  out["positivity"] = positivity_json(r.certificate);
  out["feasible"] = r.feasible();
  write_output(o, out.dump(2) + "\n");
  return r.feasible() ? 0 : 1;
}

int cmd_ansatz_plot(const Options& o) {
  if (o.out.empty()) throw UsageError("ansatz plot needs --out <file.svg>");
  const AnsatzProfile profile = solve_boundary_value(o.m, o.a, o.b, o.B);
  plot_profile(profile.curve(), parse_plot_content(o.what), o.out);
  if (!o.csv.empty()) write_text_file(o.csv, profile_csv(profile.curve()));
  return 0;
}

std::string number_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int cmd_blowup_catalog(const Options& o) {
  std::map<std::string, double> named;
  VanishingConfig config;
  if (auto t = split_tolerances(o, named)) config.tolerance = *t;
  const auto entries = catalog_entries(o.p, o.family_b);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "case_id,p,a,b,valid,c_star,residual,pass\n";
  int failures = 0;
  for (const auto& e : entries) {
    nlohmann::ordered_json row;
    row["case_id"] = e.case_id;
    row["p"] = e.p;
    row["a"] = e.valid ? nlohmann::ordered_json(e.slope_a) : nullptr;
    row["b"] = e.valid ? nlohmann::ordered_json(e.slope_b) : nullptr;
    row["valid"] = e.valid;
    row["reason"] = e.reason;
    std::string c_star, residual, pass;
    if (e.valid) {
      const auto v = verify_vanishing(e, o.m, config);
      row["c_star"] = v.get("c_star");
      row["residual"] = v.residual;
      row["pass"] = v.pass;
      c_star = number_text(v.get("c_star"));
      residual = number_text(v.residual);
      pass = v.pass ? "true" : "false";
      failures += v.pass ? 0 : 1;
    }
    rows.push_back(row);
    csv << e.case_id << ',' << number_text(e.p) << ','
        << (e.valid ? number_text(e.slope_a) : "") << ','
        << (e.valid ? number_text(e.slope_b) : "") << ',' << (e.valid ? "true" : "false")
        << ',' << c_star << ',' << residual << ',' << pass << '\n';
  }
  write_output(o, report_format(o.format) == ReportFormat::Json ? rows.dump(2) + "\n"
                                                                 : csv.str());
  return failures == 0 ? 0 : 1;
}

int cmd_blowup_verify(const Options& o) {
  std::map<std::string, double> named;
  VanishingConfig config;
  if (auto t = split_tolerances(o, named)) config.tolerance = *t;
  const auto report = verify_vanishing_slopes(o.p, o.a, o.b, o.m, config);
  write_output(o, render({report}, o));
  return report.pass ? 0 : 1;
}

int cmd_blowup_search(const Options& o) {
  SearchConfig config;
  config.m = o.m;
  const SearchResult result = critical_search(o.p, config, o.family_b);
  nlohmann::ordered_json out;
  out["p"] = o.p;
  out["m"] = o.m;
  out["starts"] = result.starts.size();
  auto& roots = out["roots"] = nlohmann::ordered_json::array();
  for (const auto& r : result.roots) {
    roots.push_back({{"a", r.a},
                     {"b", r.b},
                     {"c", 1.0},
                     {"residual", r.residual},
                     {"ray_compatible_cases", r.ray_compatible_cases}});
  }
  write_output(o, out.dump(2) + "\n");
  return 0;
}

int cmd_futaki_eval(const Options& o) {
  const AffineHamiltonian f{o.a, o.b, o.c};
  const FutakiPair pair = futaki_toric_basis(o.p, f, o.m, QuadratureRule{2, 12});
  nlohmann::ordered_json out;
  out["p"] = o.p;
  out["m"] = o.m;
  out["f"] = {{"a", o.a}, {"b", o.b}, {"c", o.c}};
  out["fut_mu1"] = pair.mu1;
  out["fut_mu2"] = pair.mu2;
  out["norm"] = pair.norm();
  write_output(o, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for conformally Kaehler Einstein-Maxwell geometry"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file mirroring the flags");
  Options o;
  app.add_option("--p", o.p, "blow-up parameter in (0, 1)");
  app.add_option("--m", o.m, "complex dimension (>= 2)");
  app.add_option("--a", o.a, "interval start, or mu_1 slope for blow-up commands");
  app.add_option("--b", o.b, "interval end, or mu_2 slope for blow-up commands");
  app.add_option("--B", o.B, "free coefficient B of the ansatz");
  app.add_option("--c", o.c, "offset of the Killing potential");
  app.add_option("--family-b", o.family_b, "parameter of catalog cases 6 and 7");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--tol", o.tol, "name=value suite tolerance, or a bare number");
  app.add_option("--out", o.out, "output path (stdout when omitted)");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", o.workers, "threads for independent checks");
  app.fallthrough();

  int code = 0;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", o.suite, "ansatz, invariance, blowup, calibration or all")
      ->required();
  verify->callback([&] { code = cmd_verify(o); });

  auto* ansatz = app.add_subcommand("ansatz", "CP^1 x M profiles");
  ansatz->require_subcommand(1);
  auto* solve = ansatz->add_subcommand("solve", "solve the boundary-value problem");
  solve->add_option("--csv", o.csv, "also write t,psi,s_tilde samples");
  solve->callback([&] { code = cmd_ansatz_solve(o); });
  ansatz->add_subcommand("ckem", "choose B so the scalar curvature is constant")
      ->callback([&] { code = cmd_ansatz_ckem(o); });
  auto* plot = ansatz->add_subcommand("plot", "SVG of psi and/or S~");
  plot->add_option("--what", o.what, "psi, s_tilde or both");
  plot->add_option("--csv", o.csv, "also write t,psi,s_tilde samples");
  plot->callback([&] { code = cmd_ansatz_plot(o); });

  auto* blowup = app.add_subcommand("blowup", "one-point blow-up of CP^2");
  blowup->require_subcommand(1);
  blowup->add_subcommand("catalog", "evaluate and certify the critical-slope catalog")
      ->callback([&] { code = cmd_blowup_catalog(o); });
  blowup->add_subcommand("verify", "Futaki vanishing for slopes --a, --b")
      ->callback([&] { code = cmd_blowup_verify(o); });
  blowup->add_subcommand("search", "multistart search for critical slopes")
      ->callback([&] { code = cmd_blowup_search(o); });

  auto* futaki = app.add_subcommand("futaki", "Futaki character");
  futaki->require_subcommand(1);
  futaki->add_subcommand("eval", "Fut(mu_1), Fut(mu_2) for f = a mu_1 + b mu_2 + c")
      ->callback([&] { code = cmd_futaki_eval(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return code;
}
