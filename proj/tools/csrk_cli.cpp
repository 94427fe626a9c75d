// Command-line front end: construct, verify, discretize, integrate, convergence.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csrk/discretize.hpp"
#include "csrk/errors.hpp"
#include "csrk/integrate.hpp"
#include "csrk/io.hpp"
#include "csrk/method.hpp"
#include "csrk/verify.hpp"

namespace fs = std::filesystem;
using csrk::io::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  json parameters = json::object();
  std::vector<std::string> outputs;
};

fs::path sibling(const fs::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

void write_output(Manifest& manifest, const fs::path& path, const std::string& text) {
  csrk::io::write_text_file(path, text);
  manifest.outputs.push_back(path.string());
}

void write_manifest(const Manifest& manifest, const fs::path& path, double seconds) {
  json j = {{"command", manifest.command},
            {"inputs", manifest.inputs},
            {"parameters", manifest.parameters},
            {"tool_version", kToolVersion},
            {"outputs", manifest.outputs},
            {"wall_time_seconds", seconds}};
  csrk::io::write_text_file(path, j.dump(2) + "\n");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_index(const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw csrk::Error(csrk::ErrorKind::ParseError, "bad index '" + text + "'");
  }
}

// "i,j=value"
csrk::SparseAlpha parse_entries(const std::vector<std::string>& items) {
  csrk::SparseAlpha out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw csrk::Error(csrk::ErrorKind::ParseError, "expected i,j=value, got '" + item + "'");
    const auto ij = split(item.substr(0, eq), ',');
    if (ij.size() != 2) throw csrk::Error(csrk::ErrorKind::ParseError, "expected i,j=value, got '" + item + "'");
    const int i = parse_index(ij[0]), j = parse_index(ij[1]);
    if (i < 0 || j < 0) throw csrk::Error(csrk::ErrorKind::InvalidArgument, "negative index in '" + item + "'");
    out[{i, j}] = csrk::Scalar::parse(item.substr(eq + 1));
  }
  return out;
}

std::vector<csrk::Scalar> parse_scalar_list(const std::string& text) {
  std::vector<csrk::Scalar> out;
  for (const auto& part : split(text, ',')) out.push_back(csrk::Scalar::parse(part));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw csrk::Error(csrk::ErrorKind::ParseError, "bad number '" + part + "'");
    }
  }
  return out;
}

json full_report(const csrk::CsrkMethod& m, const json& claims) {
  json r = csrk::io::report_to_json(csrk::verify_method(m));
  if (!claims.is_null()) r["claims"] = claims;
  return r;
}

csrk::StepperConfig stepper(const std::string& solver, double tol, int max_iter) {
  csrk::StepperConfig cfg;
  cfg.tolerance = tol;
  cfg.max_iterations = max_iter;
  if (solver == "newton") {
    cfg.solver = csrk::SolverKind::Newton;
  } else if (solver != "fixed-point") {
    throw csrk::Error(csrk::ErrorKind::InvalidArgument, "unknown solver '" + solver + "'");
  }
  return cfg;
}

void check_format(const std::string& format) {
  if (format != "json" && format != "csv") {
    throw csrk::Error(csrk::ErrorKind::InvalidArgument, "format must be json or csv");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-stage Runge-Kutta toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string format;
  std::string out_path;
  std::string construct_out, construct_format, disc_out, disc_format, integ_out, integ_format, conv_out, conv_format;

  // construct
  auto* construct = app.add_subcommand("construct", "Build a method from a family and write method + report JSON");
  std::string family;
  int order = 4, alpha_level = 1, beta_level = 1;
  std::vector<std::string> sets, generators;
  std::string omega;
  construct->add_option("--family", family, "order|simplifying|symplectic|symmetric|ep-legendre|ep-general")
      ->required();
  construct->add_option("--order", order, "Target order for the order family");
  construct->add_option("--alpha", alpha_level, "C(alpha) level for the simplifying family");
  construct->add_option("--beta", beta_level, "D(beta) level for the simplifying family");
  construct->add_option("--set", sets, "Coefficient i,j=value (repeatable)");
  construct->add_option("--omega", omega, "Comma-separated omega weights");
  construct->add_option("--generator", generators, "Comma-separated Legendre coefficients of one generator (repeatable)");
  construct->add_option("--out", construct_out, "Method file")->default_val("method.json");
  construct->add_option("--format", construct_format, "json")->default_val("json");

  // verify
  auto* verify = app.add_subcommand("verify", "Print the property report of a method file");
  std::string method_path;
  std::string verify_out;
  verify->add_option("method", method_path, "Method JSON")->required();
  verify->add_option("--out", verify_out, "Also write the report here");

  // discretize
  auto* disc = app.add_subcommand("discretize", "Apply a quadrature rule and write the Butcher tableau");
  std::string rule = "gauss";
  int stages = 2;
  std::string quad_path;
  disc->add_option("method", method_path, "Method JSON")->required();
  disc->add_option("--rule", rule, "gauss|lobatto|custom")->default_val("gauss");
  disc->add_option("--stages", stages, "Stage count")->default_val(2);
  disc->add_option("--quadrature", quad_path, "Quadrature JSON for --rule custom");
  disc->add_option("--out", disc_out, "Tableau file")->default_val("tableau.json");
  disc->add_option("--format", disc_format, "json|csv")->default_val("json");

  // integrate / convergence
  std::string tableau_path, problem = "harmonic", solver = "fixed-point", h_list;
  double h = 0.1, ecc = 0.6, tol = 1e-14, t_final = 10.0;
  int steps = 100, max_iter = 100;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("tableau", tableau_path, "Tableau JSON")->required();
    sub->add_option("--problem", problem, "harmonic|pendulum|kepler")->default_val("harmonic");
    sub->add_option("--eccentricity", ecc, "Kepler eccentricity")->default_val(0.6);
    sub->add_option("--solver", solver, "fixed-point|newton")->default_val("fixed-point");
    sub->add_option("--tol", tol, "Stage tolerance")->default_val(1e-14);
    sub->add_option("--max-iter", max_iter, "Stage iteration limit")->default_val(100);
  };
  auto* integ = app.add_subcommand("integrate", "Integrate a builtin problem and write trajectory + diagnostics");
  integ->set_help_flag("--help", "Print this help message and exit");
  add_common(integ);
  integ->add_option("--h", h, "Step size")->default_val(0.1);
  integ->add_option("--steps", steps, "Number of steps")->default_val(100);
  integ->add_option("--out", integ_out, "Trajectory file")->default_val("trajectory.csv");
  integ->add_option("--format", integ_format, "csv|json")->default_val("csv");

  auto* conv = app.add_subcommand("convergence", "Estimate the empirical order over a step-size sweep");
  add_common(conv);
  conv->add_option("--h-list", h_list, "Comma-separated decreasing step sizes")->required();
  conv->add_option("--t-final", t_final, "Final time")->default_val(10.0);
  conv->add_option("--out", conv_out, "Diagnostics file")->default_val("convergence.json");
  conv->add_option("--format", conv_format, "json|csv")->default_val("json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return csrk::exit_code(csrk::ErrorKind::ParseError);
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  if (*construct) {
    out_path = construct_out;
    format = construct_format;
  } else if (*disc) {
    out_path = disc_out;
    format = disc_format;
  } else if (*integ) {
    out_path = integ_out;
    format = integ_format;
  } else if (*conv) {
    out_path = conv_out;
    format = conv_format;
  } else {
    format = "json";
  }

  try {
    check_format(format);
    Manifest manifest;

    if (*construct) {
      manifest.command = "construct";
      manifest.parameters = {{"family", family}, {"order", order},   {"alpha", alpha_level}, {"beta", beta_level},
                             {"set", sets},      {"omega", omega}, {"generator", generators}};
      if (format != "json") throw csrk::Error(csrk::ErrorKind::InvalidArgument, "method files are JSON only");
      const csrk::SparseAlpha entries = parse_entries(sets);
      std::optional<csrk::CsrkMethod> m;
      json claims = nullptr;
      if (family == "order") {
        m = csrk::construct_order_by_order(order, entries);
      } else if (family == "simplifying") {
        m = csrk::construct_simplifying(alpha_level, beta_level, entries);
      } else if (family == "symplectic") {
        m = csrk::construct_symplectic(entries);
      } else if (family == "symmetric") {
        m = csrk::construct_symmetric(entries);
      } else if (family == "ep-legendre" || family == "ep-general") {
        if (omega.empty()) throw csrk::Error(csrk::ErrorKind::InvalidArgument, "--omega is required");
        csrk::EpSpec spec{parse_scalar_list(omega), std::nullopt};
        if (family == "ep-legendre") {
          if (!generators.empty()) {
            throw csrk::Error(csrk::ErrorKind::InvalidArgument, "ep-legendre takes no generators");
          }
          const auto ep = csrk::construct_ep_legendre(spec);
          m = ep.method;
          claims = {{"kappa", ep.kappa},
                    {"claimed_order", ep.claimed_order},
                    {"tuned", ep.tuned},
                    {"conjugate_symplectic_order", ep.conjugate_symplectic_order}};
        } else {
          std::vector<csrk::UnivariatePoly> gens;
          for (const auto& g : generators) gens.emplace_back(parse_scalar_list(g));
          spec.generators = std::move(gens);
          const auto ep = csrk::construct_ep_general(spec);
          m = ep.method;
          claims = {{"c_is_tau", ep.c_is_tau}};
        }
      } else {
        throw csrk::Error(csrk::ErrorKind::InvalidArgument, "unknown family '" + family + "'");
      }
      const fs::path out(out_path);
      const json report = full_report(*m, claims);
      write_output(manifest, out, csrk::io::method_to_json(*m, claims).dump(2) + "\n");
      write_output(manifest, sibling(out, ".report.json"), report.dump(2) + "\n");
      std::cout << report.dump(2) << "\n";
      write_manifest(manifest, sibling(out, ".manifest.json"), elapsed());
      return 0;
    }

    if (*verify) {
      manifest.command = "verify";
      manifest.inputs.push_back(method_path);
      const json file = csrk::io::read_json_file(method_path);
      const csrk::CsrkMethod m = csrk::io::method_from_json(file);
      const json report = full_report(m, csrk::io::method_claims(file));
      std::cout << report.dump(2) << "\n";
      if (!verify_out.empty()) {
        const fs::path out(verify_out);
        write_output(manifest, out, report.dump(2) + "\n");
        write_manifest(manifest, sibling(out, ".manifest.json"), elapsed());
      }
      return 0;
    }

    if (*disc) {
      manifest.command = "discretize";
      manifest.inputs.push_back(method_path);
      manifest.parameters = {{"rule", rule}, {"stages", stages}, {"format", format}};
      const csrk::CsrkMethod m = csrk::io::method_from_json(csrk::io::read_json_file(method_path));
      csrk::Quadrature q;
      if (rule == "gauss") {
        q = csrk::gauss_legendre(stages);
      } else if (rule == "lobatto") {
        q = csrk::lobatto(stages);
      } else if (rule == "custom") {
        if (quad_path.empty()) throw csrk::Error(csrk::ErrorKind::InvalidArgument, "--quadrature is required");
        manifest.inputs.push_back(quad_path);
        q = csrk::io::quadrature_from_json(csrk::io::read_json_file(quad_path));
      } else {
        throw csrk::Error(csrk::ErrorKind::InvalidArgument, "unknown rule '" + rule + "'");
      }
      const csrk::ButcherTableau t = csrk::discretize(m, q);
      json predicted = nullptr;
      if (m.is_normalized()) predicted = csrk::predicted_rk_order(m, q);
      const json sidecar = {{"predicted_rk_order", predicted},
                            {"rk_symplectic_residual", csrk::rk_symplectic_residual(t)},
                            {"quadrature", {{"id", q.id}, {"order", q.order}, {"stages", q.stages()}}},
                            {"provenance", t.provenance}};
      const fs::path out(out_path);
      write_output(manifest, out,
                   format == "csv" ? csrk::io::tableau_to_csv(t) : csrk::io::tableau_to_json(t).dump(2) + "\n");
      if (format == "csv") write_output(manifest, sibling(out, ".json"), csrk::io::tableau_to_json(t).dump(2) + "\n");
      write_output(manifest, sibling(out, ".sidecar.json"), sidecar.dump(2) + "\n");
      std::cout << sidecar.dump(2) << "\n";
      write_manifest(manifest, sibling(out, ".manifest.json"), elapsed());
      return 0;
    }

    const csrk::ButcherTableau t = csrk::io::tableau_from_json(csrk::io::read_json_file(tableau_path));
    csrk::ProblemParams params;
    params.eccentricity = ecc;
    const csrk::OdeProblem prob = csrk::builtin_problem(problem, params);
    const csrk::StepperConfig cfg = stepper(solver, tol, max_iter);
    manifest.inputs.push_back(tableau_path);

    if (*integ) {
      manifest.command = "integrate";
      manifest.parameters = {{"problem", problem}, {"h", h},     {"steps", steps},     {"solver", solver},
                             {"tol", tol},         {"max_iter", max_iter}, {"format", format}};
      if (problem == "kepler") manifest.parameters["eccentricity"] = ecc;
      const csrk::Trajectory traj = csrk::integrate(t, prob, h, steps, cfg);
      json diag = {{"empirical_order", nullptr},
                   {"pairwise_ratios", json::array()},
                   {"energy_drift", csrk::energy_drift(traj, prob)},
                   {"symmetry_residual", csrk::symmetry_residual(t, prob, prob.z0, h, cfg)},
                   {"symplecticity_residual", csrk::symplecticity_residual(t, prob, prob.z0, h, cfg)}};
      json drifts = json::object();
      for (const auto& inv : prob.invariants) drifts[inv.name] = csrk::invariant_drift(traj, prob, inv.name);
      diag["invariant_drift"] = drifts;

      const fs::path out(out_path);
      if (format == "csv") {
        write_output(manifest, out, csrk::io::trajectory_to_csv(traj));
      } else {
        json states = json::array();
        for (const auto& z : traj.states) states.push_back(std::vector<double>(z.data(), z.data() + z.size()));
        write_output(manifest, out,
                     json{{"t", traj.times}, {"z", states}, {"iters", traj.iterations}}.dump() + "\n");
      }
      write_output(manifest, sibling(out, ".diagnostics.json"), diag.dump(2) + "\n");
      std::printf("%-10s %-10s %-8s %-14s %-14s %-14s\n", "problem", "h", "steps", "energy_drift", "symmetry",
                  "symplecticity");
      std::printf("%-10s %-10g %-8d %-14.3e %-14.3e %-14.3e\n", problem.c_str(), h, steps,
                  diag["energy_drift"].get<double>(), diag["symmetry_residual"].get<double>(),
                  diag["symplecticity_residual"].get<double>());
      write_manifest(manifest, sibling(out, ".manifest.json"), elapsed());
      return 0;
    }

    if (*conv) {
      manifest.command = "convergence";
      const std::vector<double> hs = parse_double_list(h_list);
      manifest.parameters = {{"problem", problem}, {"h_list", hs},         {"t_final", t_final}, {"solver", solver},
                             {"tol", tol},         {"max_iter", max_iter}, {"format", format}};
      if (problem == "kepler") manifest.parameters["eccentricity"] = ecc;
      const csrk::OrderEstimate est = csrk::empirical_order(t, prob, hs, t_final, cfg);
      const double h_min = hs.back();
      const auto steps_min = static_cast<int>(std::lround(t_final / h_min));
      const csrk::Trajectory finest = csrk::integrate(t, prob, h_min, steps_min, cfg);
      json diag = {{"empirical_order", est.slope ? json(*est.slope) : json(nullptr)},
                   {"saturated", est.saturated},
                   {"pairwise_ratios", est.pairwise},
                   {"h", est.h},
                   {"errors", est.errors},
                   {"energy_drift", csrk::energy_drift(finest, prob)},
                   {"symmetry_residual", csrk::symmetry_residual(t, prob, prob.z0, h_min, cfg)},
                   {"symplecticity_residual", csrk::symplecticity_residual(t, prob, prob.z0, h_min, cfg)}};
      const fs::path out(out_path);
      if (format == "csv") {
        std::string csv = "h,error\n";
        for (std::size_t k = 0; k < hs.size(); ++k) {
          csv += csrk::io::format_double(hs[k]) + "," + csrk::io::format_double(est.errors[k]) + "\n";
        }
        write_output(manifest, out, csv);
        write_output(manifest, sibling(out, ".diagnostics.json"), diag.dump(2) + "\n");
      } else {
        write_output(manifest, out, diag.dump(2) + "\n");
      }
      std::printf("%-10s %-10s %-14s %-10s\n", "problem", "h", "error", "ratio");
      for (std::size_t k = 0; k < hs.size(); ++k) {
        if (k == 0) {
          std::printf("%-10s %-10g %-14.3e %-10s\n", problem.c_str(), hs[k], est.errors[k], "-");
        } else {
          std::printf("%-10s %-10g %-14.3e %-10.3f\n", problem.c_str(), hs[k], est.errors[k], est.pairwise[k - 1]);
        }
      }
      if (est.slope) {
        std::printf("slope %.4f\n", *est.slope);
      } else {
        std::printf("saturated: errors reached the 1e-12 floor\n");
      }
      write_manifest(manifest, sibling(out, ".manifest.json"), elapsed());
      return 0;
    }
  } catch (const csrk::Error& e) {
    std::cerr << json{{"error", std::string(csrk::to_string(e.kind()))}, {"message", e.what()}}.dump() << "\n";
    return csrk::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "IoError"}, {"message", e.what()}}.dump() << "\n";
    return csrk::exit_code(csrk::ErrorKind::IoError);
  }
  return 0;
}
