// Command-line front end: evaluate the kernel series, run the solvers, compare
// against the finite-difference arbiter, and fit decay rates. All runs are
// deterministic given a config file; flags override single config entries.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "esjj/config.hpp"
#include "esjj/diagnostics.hpp"
#include "esjj/fd.hpp"
#include "esjj/green.hpp"
#include "esjj/linear.hpp"
#include "esjj/picard.hpp"
#include "json.hpp"

namespace {

using namespace esjj;
using nlohmann::json;

int exit_code_for(ErrKind k) {
  switch (k) {
    case ErrKind::IoError:
      return 4;
    case ErrKind::NoConvergence:
    case ErrKind::Instability:
    case ErrKind::NonFinite:
    case ErrKind::Underflow:
    case ErrKind::QuadratureUnderResolved:
    case ErrKind::StabilityPrecheckFailed:
    case ErrKind::BoundaryViolation:
    case ErrKind::WindowRestartFailure:
      return 3;
    default:
      return 2; // configuration or declared-contract problems
  }
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(rc.out_dir, ec);
  if (ec) fail(ErrKind::IoError, "cannot create output directory " + rc.out_dir);
  return (std::filesystem::path(rc.out_dir) / name).string();
}

json field_json(const Field& f) {
  json rows = json::array();
  for (size_t i = 0; i < f.nx(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < f.nt(); ++j) row.push_back(f.at(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"x", f.x}, {"t", f.t}, {"values", rows}};
}

void write_field(const RunConfig& rc, const Field& f, const std::string& stem) {
  switch (rc.format) {
    case OutputFormat::Csv:
      write_csv(f, out_path(rc, stem + ".csv"));
      break;
    case OutputFormat::Binary:
      write_binary(f, out_path(rc, stem + ".bin"));
      break;
    case OutputFormat::Json: {
      std::ofstream out(out_path(rc, stem + ".json"));
      if (!out) fail(ErrKind::IoError, "cannot write " + stem + ".json");
      out << field_json(f).dump(2) << "\n";
      break;
    }
  }
}

// key: value lines, or a JSON object, depending on the configured format
void write_report(const RunConfig& rc, const json& rep, const std::string& stem) {
  if (rc.format == OutputFormat::Json) {
    std::ofstream out(out_path(rc, stem + ".json"));
    if (!out) fail(ErrKind::IoError, "cannot write " + stem + ".json");
    out << rep.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path(rc, stem + ".txt"));
  if (!out) fail(ErrKind::IoError, "cannot write " + stem + ".txt");
  for (auto it = rep.begin(); it != rep.end(); ++it) {
    if (it->is_array()) {
      out << it.key() << ":";
      for (const auto& v : *it) out << " " << v.dump();
      out << "\n";
    } else {
      out << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
    }
  }
}

json truncation_json(const GreenEvaluator& ev) {
  return json{{"n_max", ev.truncation.n_max},
              {"tail_bound", ev.truncation.tail_bound},
              {"policy", ev.truncation.policy == TruncationPolicy::TailTol ? "tail_tol" : "fixed_n"}};
}

// output x grids must land on fd nodes; shrink nx to the nearest nesting count
int nested_fd_nx(int nx, size_t x_points) {
  const long cells = static_cast<long>(x_points) - 1;
  long mult = std::max(1L, std::lround(static_cast<double>(nx + 1) / cells));
  return static_cast<int>(mult * cells - 1);
}

struct ProblemData {
  Profile h0, h1;
  SourceFn f;
};

ProblemData problem_data(const RunConfig& rc) {
  return {profile_from_spec(rc.h0, rc.params.length), profile_from_spec(rc.h1, rc.params.length),
          source_from_spec(rc.source, rc.params.length)};
}

Field run_fd(const RunConfig& rc, const ProblemData& pd, const std::vector<double>& xs,
             const std::vector<double>& ts) {
  FdGrid g = rc.fd;
  g.t_end = rc.params.horizon;
  g.nx = nested_fd_nx(g.nx, xs.size());
  return fd_solve(pd.h0, pd.h1, pd.f, rc.params, g, xs, ts);
}

int cmd_green_eval(const RunConfig& rc) {
  GreenEvaluator ev = evaluator_from_config(rc);
  const double l = rc.params.length;
  std::vector<double> xs = uniform_grid(0.0, l, rc.x_points);
  std::vector<double> ts = uniform_grid(0.0, rc.params.horizon, rc.t_points);
  const double stations[3] = {0.25 * l, 0.5 * l, 0.75 * l};

  std::string path = out_path(rc, "green.csv");
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) fail(ErrKind::IoError, "cannot open " + path + " for writing");
  std::fputs("x,xi,t,G,Gt,epsGtG\n", fp);
  for (double xi : stations)
    for (double x : xs)
      for (double t : ts) {
        double g = green_eval(ev, x, xi, t);
        double gt = green_dt(ev, x, xi, t, 1);
        double c = eps_gt_plus_g(ev, x, xi, t, 0);
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x, xi, t, g, gt, c);
      }
  if (std::fclose(fp) != 0) fail(ErrKind::IoError, "write failed for " + path);
  std::printf("green-eval: wrote %zu samples to %s (n_max %d)\n",
              3 * xs.size() * ts.size(), path.c_str(), ev.truncation.n_max);
  return 0;
}

int cmd_solve(const RunConfig& rc) {
  ProblemData pd = problem_data(rc);
  std::vector<double> xs = uniform_grid(0.0, rc.params.length, rc.x_points);
  std::vector<double> ts = uniform_grid(0.0, rc.params.horizon, rc.t_points);
  json rep;

  Field u;
  if (rc.solver == SolverKind::Linear) {
    if (pd.f.depends_on_u)
      fail(ErrKind::ConfigError, "source depends on u; pick the picard solver");
    GreenEvaluator ev = evaluator_from_config(rc);
    u = linear_solve(pd.h0, pd.h1, pd.f, ev, rc.quad, xs, ts);
    rep["solver"] = "linear";
    rep["truncation"] = truncation_json(ev);
  } else if (rc.solver == SolverKind::Picard) {
    GreenEvaluator ev = evaluator_from_config(rc);
    auto [field, prep] = picard_solve(pd.h0, pd.h1, pd.f, ev, rc.quad, xs, ts, rc.picard);
    u = std::move(field);
    BoundReport brep = apriori_bound(u, pd.h0, pd.h1, pd.f, rc.params);
    rep["solver"] = "picard";
    rep["truncation"] = truncation_json(ev);
    rep["iterations"] = prep.iterations;
    rep["final_change"] = prep.final_change;
    rep["change_history"] = prep.change_history;
    rep["contraction_ratio"] = prep.contraction_ratio;
    rep["residual"] = prep.residual;
    rep["converged"] = prep.converged;
    rep["windows"] = prep.windows;
    rep["window_length"] = prep.window_length;
    rep["bound"] = json{{"delta", brep.delta},
                        {"sup_f", brep.sup_f},
                        {"norm_h1", brep.norm_h1},
                        {"norm_h0", brep.norm_h0},
                        {"norm_h0pp", brep.norm_h0pp},
                        {"fitted_k", brep.fitted_k},
                        {"bound_satisfied", brep.bound_satisfied},
                        {"margin", brep.margin}};
  } else {
    u = run_fd(rc, pd, xs, ts);
    rep["solver"] = "fd";
    rep["scheme"] = rc.fd.scheme == FdScheme::ExplicitRK4 ? "rk4" : "semi-implicit";
  }

  double sup = 0.0;
  for (double v : u.v) sup = std::max(sup, std::abs(v));
  rep["sup_u"] = sup;
  rep["x_points"] = u.nx();
  rep["t_points"] = u.nt();
  write_field(rc, u, "solution");
  write_report(rc, rep, "report");
  std::printf("solve: sup|u| = %.6e, wrote solution + report to %s\n", sup, rc.out_dir.c_str());
  return 0;
}

int cmd_validate(const RunConfig& rc) {
  ProblemData pd = problem_data(rc);
  std::vector<double> xs = uniform_grid(0.0, rc.params.length, rc.x_points);
  std::vector<double> ts = uniform_grid(0.0, rc.params.horizon, rc.t_points);

  GreenEvaluator ev = evaluator_from_config(rc);
  Field sa;
  std::string sa_name;
  if (pd.f.depends_on_u) {
    sa = picard_solve(pd.h0, pd.h1, pd.f, ev, rc.quad, xs, ts, rc.picard).first;
    sa_name = "picard";
  } else {
    sa = linear_solve(pd.h0, pd.h1, pd.f, ev, rc.quad, xs, ts);
    sa_name = "linear";
  }
  Field fd = run_fd(rc, pd, xs, ts);
  ErrorReport er = compare_fields(sa, fd);

  std::string path = out_path(rc, "validation.csv");
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) fail(ErrKind::IoError, "cannot open " + path + " for writing");
  std::fputs("t,slice_max\n", fp);
  for (size_t j = 0; j < ts.size(); ++j)
    std::fprintf(fp, "%.17g,%.17g\n", ts[j], er.per_slice_max[j]);
  if (std::fclose(fp) != 0) fail(ErrKind::IoError, "write failed for " + path);

  json rep{{"series_solver", sa_name}, {"l_inf", er.l_inf},   {"l2", er.l2},
           {"x_at_max", er.x_at_max},  {"t_at_max", er.t_at_max}};
  write_report(rc, rep, "validation");
  std::printf("validate: %s vs fd, l_inf = %.6e, l2 = %.6e\n", sa_name.c_str(), er.l_inf, er.l2);
  return 0;
}

int cmd_decay_study(const RunConfig& rc) {
  ProblemData pd = problem_data(rc);
  std::vector<double> xs = uniform_grid(0.0, rc.params.length, rc.x_points);
  std::vector<double> ts = uniform_grid(0.0, rc.params.horizon, rc.t_points);

  Field u;
  if (rc.solver == SolverKind::FdOracle) {
    u = run_fd(rc, pd, xs, ts);
  } else if (pd.f.depends_on_u || rc.solver == SolverKind::Picard) {
    GreenEvaluator ev = evaluator_from_config(rc);
    u = picard_solve(pd.h0, pd.h1, pd.f, ev, rc.quad, xs, ts, rc.picard).first;
  } else {
    GreenEvaluator ev = evaluator_from_config(rc);
    u = linear_solve(pd.h0, pd.h1, pd.f, ev, rc.quad, xs, ts);
  }

  const double T = rc.params.horizon;
  auto [rate, r2] = decay_rate_estimate(u, 0.5 * T, T);
  DecayConstants dc = decay_constants(rc.params);

  std::string path = out_path(rc, "decay.csv");
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) fail(ErrKind::IoError, "cannot open " + path + " for writing");
  std::fputs("t,sup_u,rate,delta,p_lambda,q_lambda\n", fp);
  for (size_t j = 0; j < u.nt(); ++j) {
    double sup = 0.0;
    for (size_t i = 0; i < u.nx(); ++i) sup = std::max(sup, std::abs(u.at(i, j)));
    std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", u.t[j], sup, rate, dc.delta,
                 dc.p_lambda, dc.q_lambda);
  }
  if (std::fclose(fp) != 0) fail(ErrKind::IoError, "write failed for " + path);

  json rep{{"rate", rate},          {"r2", r2},
           {"delta", dc.delta},     {"p_lambda", dc.p_lambda},
           {"q_lambda", dc.q_lambda}, {"fit_window", json::array({0.5 * T, T})}};
  write_report(rc, rep, "decay");
  std::printf("decay-study: fitted rate %.4f (r2 %.4f), delta %.4f\n", rate, r2, dc.delta);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"series and finite-difference solvers for the tapered junction strip"};
  app.require_subcommand(1);

  std::string config_path, out_dir, truncation, solver, weight, format;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--truncation", truncation, "mode count, tol=X, or 2x (overrides config)");
  app.add_option("--solver", solver, "linear | picard | fd (overrides config)")
      ->check(CLI::IsMember({"linear", "picard", "fd"}));
  app.add_option("--weight", weight, "selfadjoint | onesided (overrides config)")
      ->check(CLI::IsMember({"selfadjoint", "onesided"}));
  app.add_option("--format", format, "csv | bin | json (overrides config)")
      ->check(CLI::IsMember({"csv", "bin", "json"}));

  CLI::App* green = app.add_subcommand("green-eval", "tabulate G, G_t, eps G_t + G");
  CLI::App* solve = app.add_subcommand("solve", "solve the strip problem");
  CLI::App* validate = app.add_subcommand("validate", "series solver vs finite differences");
  CLI::App* decay = app.add_subcommand("decay-study", "fit the long-time decay rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig rc = load_run_config(config_path);
    if (!out_dir.empty()) rc.out_dir = out_dir;
    if (!truncation.empty())
      rc.truncation = truncation == "2x" ? doubled_truncation(rc.truncation) : truncation;
    if (solver == "linear") rc.solver = SolverKind::Linear;
    else if (solver == "picard") rc.solver = SolverKind::Picard;
    else if (solver == "fd") rc.solver = SolverKind::FdOracle;
    if (weight == "selfadjoint") rc.weight = WeightMode::SelfAdjoint;
    else if (weight == "onesided") rc.weight = WeightMode::OneSided;
    if (format == "csv") rc.format = OutputFormat::Csv;
    else if (format == "bin") rc.format = OutputFormat::Binary;
    else if (format == "json") rc.format = OutputFormat::Json;

    if (green->parsed()) return cmd_green_eval(rc);
    if (solve->parsed()) return cmd_solve(rc);
    if (validate->parsed()) return cmd_validate(rc);
    if (decay->parsed()) return cmd_decay_study(rc);
    return 2;
  } catch (const esjj::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
