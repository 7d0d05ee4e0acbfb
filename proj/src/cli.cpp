#include "vlp/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "vlp/config.hpp"
#include "vlp/error.hpp"
#include "vlp/field_io.hpp"
#include "vlp/suites.hpp"
#include "vlp/varexp.hpp"

namespace vlp {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IO, "cannot write '" + path.string() + "'");
  return f;
}

// Writes to `path` when given, else to `out`.
void emit(const std::vector<ReportRow>& rows, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_report(out, rows);
    return;
  }
  auto f = open_output(path);
  write_report(f, rows);
}

VariableExponent exponent_argument(const std::string& text, const Grid& grid) {
  try {
    return VariableExponent::constant(grid, parse_number(text));
  } catch (const Error& e) {
    if (e.code() != Errc::Parse) throw;
  }
  ExponentSamples s = load_exponent(text);
  if (!(s.samples.grid() == grid)) throw Error(Errc::GridMismatch, "exponent grid differs from the field grid");
  return VariableExponent(s.samples, s.p_inf);
}

std::vector<ReportRow> verdict_rows(const RunSettings& s) {
  const ProblemSpec& spec = s.spec;
  if (std::holds_alternative<GlobalSpace>(spec.space)) {
    if (spec.force.form == ForceForm::Direct && spec.gamma == 0) {
      ProblemSpec as_potential = spec;
      as_potential.force.form = ForceForm::Potential;
      return smallness_rows(check_smallness_global(as_potential, kDefaultNormTol, s.trials, s.seed));
    }
    return smallness_rows(check_smallness_global(spec, kDefaultNormTol, s.trials, s.seed));
  }
  try {
    return local_existence_rows(check_local_existence(spec, kDefaultNormTol, s.trials, s.seed));
  } catch (const Error& e) {
    if (e.code() != Errc::NoAdmissibleT) throw;
    return {{"local-existence", "no-admissible-T", spec.T / static_cast<double>(spec.M), 0.0, false}};
  }
}

int run_solve(const std::string& config, const std::string& dir, std::ostream& out) {
  const RunSettings s = load_config(config);
  const PicardResult res = picard_solve(s.spec, s.K_max, s.tol);
  fs::create_directories(dir);
  const auto& frames = res.solution.frames();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "u_%04zu.field", i);
    auto f = open_output(fs::path(dir) / name);
    write_field(f, frames[i]);
  }
  {
    auto f = open_output(fs::path(dir) / "trace.csv");
    write_trace(f, res.trace);
  }
  std::vector<ReportRow> verdict;
  if (!(std::holds_alternative<GlobalSpace>(s.spec.space) && s.spec.force.form == ForceForm::Direct &&
        s.spec.gamma == 1)) {
    verdict = verdict_rows(s);
  }
  {
    auto f = open_output(fs::path(dir) / "smallness.csv");
    write_report(f, verdict);
  }
  out << "iterations=" << res.trace.iterations << " converged=" << (res.trace.converged ? 1 : 0)
      << " residual=" << format_number(res.trace.residual) << '\n';
  return res.trace.converged ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional heat equations in variable Lebesgue spaces", "vlp"};
  app.require_subcommand(1, 1);

  std::string field_path, p_text = "2", out_path, config_path, out_dir;
  double q_const = 0.0, tol = kDefaultNormTol, alpha = 1.0, L = 20.0, t = 1.0;
  int dim = 1;
  std::size_t N = 512;
  std::uint64_t seed = 1;

  auto* norm = app.add_subcommand("norm", "Luxemburg norm of a field (mixed norm with --q-const)");
  norm->add_option("field", field_path, "field file")->required();
  norm->add_option("--p", p_text, "exponent: a number or an exponent file")->capture_default_str();
  norm->add_option("--q-const", q_const, "constant exponent of the mixed norm");
  norm->add_option("--tol", tol, "relative bisection tolerance")->capture_default_str();

  auto* kernel = app.add_subcommand("verify-kernel", "Heat-kernel closed forms, decay and smoothing rates");
  kernel->add_option("--alpha", alpha, "fractional order in (0, 1]")->required();
  kernel->add_option("--n", dim, "dimension")->capture_default_str();
  kernel->add_option("--L", L, "box half-length")->capture_default_str();
  kernel->add_option("--N", N, "points per axis")->capture_default_str();
  kernel->add_option("--t", t, "closed-form and mass time")->capture_default_str();
  kernel->add_option("--out", out_path, "CSV output file (default stdout)");

  std::size_t op_N = 64;
  double op_L = 8.0;
  auto* ops = app.add_subcommand("verify-operators", "Norm, maximal-function and Riesz checks");
  ops->add_option("--n", dim, "dimension")->capture_default_str();
  ops->add_option("--L", op_L, "box half-length")->capture_default_str();
  ops->add_option("--N", op_N, "points per axis")->capture_default_str();
  ops->add_option("--seed", seed, "random seed")->capture_default_str();
  ops->add_option("--out", out_path, "CSV output file (default stdout)");

  auto* check = app.add_subcommand("check", "Smallness / local-existence verdict for a config");
  check->add_option("config", config_path, "vlp-config v1 file")->required();
  check->add_option("--out", out_path, "CSV output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Picard solve of a config");
  solve->add_option("config", config_path, "vlp-config v1 file")->required();
  solve->add_option("--out", out_dir, "output directory")->required();

  auto* report = app.add_subcommand("report", "All verification suites in one CSV");
  report->add_option("--seed", seed, "random seed")->capture_default_str();
  report->add_option("--out", out_path, "CSV output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*norm) {
      const Field f = load_field(field_path);
      const VariableExponent p = exponent_argument(p_text, f.grid());
      const double v = q_const > 0.0 ? mixed_norm(f, MixedSpaceParams{p, q_const}, tol) : luxemburg_norm(f, p, tol);
      out << format_number(v) << '\n';
      return 0;
    }
    if (*kernel) {
      const auto rows = kernel_rows(alpha, Grid(dim, L, N), t);
      emit(rows, out_path, out);
      return all_pass(rows) ? 0 : 1;
    }
    if (*ops) {
      const auto rows = operator_rows(Grid(dim, op_L, op_N), seed);
      emit(rows, out_path, out);
      return all_pass(rows) ? 0 : 1;
    }
    if (*check) {
      const auto rows = verdict_rows(load_config(config_path));
      emit(rows, out_path, out);
      return all_pass(rows) ? 0 : 1;
    }
    if (*solve) return run_solve(config_path, out_dir, out);
    if (*report) {
      std::vector<ReportRow> rows;
      const Grid line(1, 20.0, 512);
      for (double a : {0.5, 0.6, 0.75, 1.0}) {
        const auto k = kernel_rows(a, line, 1.0);
        rows.insert(rows.end(), k.begin(), k.end());
      }
      for (const Grid& g : {Grid(1, 8.0, 64), Grid(2, 8.0, 32)}) {
        const auto o = operator_rows(g, seed);
        rows.insert(rows.end(), o.begin(), o.end());
      }
      const auto s = solver_rows();
      rows.insert(rows.end(), s.begin(), s.end());
      emit(rows, out_path, out);
      return all_pass(rows) ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "vlp: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "vlp: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace vlp
