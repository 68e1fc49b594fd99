#include "logtauber_cli/app.hpp"

#include <algorithm>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "logtauber/errors.hpp"
#include "logtauber_cli/commands.hpp"

namespace logtauber::cli {

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::optional<int> max_depth;
  std::string catalog;
  std::string expr;
  std::string var;
  std::string grid;
  std::string axis;
  std::vector<double> lambdas;
  std::vector<std::string> kinds;
  std::optional<int> m_max;
  std::optional<std::size_t> tail;
};

RunConfig build_config(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (!f.catalog.empty() && !f.expr.empty()) {
    throw ConfigError("--catalog and --expr are mutually exclusive");
  }
  if (!f.catalog.empty()) {
    cfg.input = InputConfig{};
    cfg.input.source = Source::catalog;
    cfg.input.catalog = f.catalog;
  }
  if (!f.expr.empty()) {
    cfg.input = InputConfig{};
    cfg.input.source = Source::expr;
    cfg.input.expr = f.expr;
  }
  if (!f.var.empty()) {
    if (f.var == "u") {
      cfg.input.var = Var::u;
    } else if (f.var == "k") {
      cfg.input.var = Var::k;
    } else {
      throw ConfigError("--var must be u or k");
    }
  }
  if (!f.grid.empty()) cfg.grid = parse_grid_text(f.grid);
  if (!f.axis.empty()) {
    if (!cfg.grid) cfg.grid = parse_grid_text("decades:10:10000");
    cfg.grid->axis = parse_axis(f.axis);
  }
  if (!f.out.empty()) cfg.out_path = f.out;
  if (!f.format.empty()) cfg.format = f.format == "json" ? Format::json : Format::csv;
  if (f.seed) cfg.seed = *f.seed;
  if (f.abs_tol) cfg.quad.abs_tol = *f.abs_tol;
  if (f.rel_tol) cfg.quad.rel_tol = *f.rel_tol;
  if (f.max_depth) cfg.quad.max_depth = *f.max_depth;
  if (!f.kinds.empty()) {
    cfg.kinds.clear();
    for (const auto& k : f.kinds) cfg.kinds.push_back(parse_kind(k));
  }
  if (!f.lambdas.empty()) {
    cfg.identity_lambdas = f.lambdas;
    cfg.lambdas_upper.clear();
    cfg.lambdas_lower.clear();
    for (double l : f.lambdas) (l > 1.0 ? cfg.lambdas_upper : cfg.lambdas_lower).push_back(l);
  }
  if (f.m_max) cfg.m_max = *f.m_max;
  if (f.tail) cfg.tail = *f.tail;
  try {
    cfg.quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void emit(const CommandResult& r, std::ostream& out) {
  for (const OutputFile& f : r.files) {
    if (f.path.empty()) {
      out << f.content;
    } else {
      write_atomic(f.path, f.content);
    }
  }
  out.flush();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cesaro and logarithmic means, Tauberian condition profiles and "
               "representation-identity checks"};
  app.fallthrough();
  app.require_subcommand(1);

  Flags f;
  app.add_option("--config", f.config, "JSON run configuration");
  app.add_option("--out", f.out, "Output path (default: standard output)");
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", f.seed, "Seed for random inputs");
  app.add_option("--abs-tol", f.abs_tol, "Quadrature absolute tolerance");
  app.add_option("--rel-tol", f.rel_tol, "Quadrature relative tolerance");
  app.add_option("--max-depth", f.max_depth, "Quadrature bisection depth limit");
  app.add_option("--catalog", f.catalog, "Catalog entry, e.g. const(5) or thm3");
  app.add_option("--expr", f.expr, "Inline expression in u (function) or k (sequence)");
  app.add_option("--var", f.var, "Expression variable: u or k");
  app.add_option("--grid", f.grid, "decades:A:B, log:A:B:N or points:x,y,...");
  app.add_option("--axis", f.axis, "Grid axis: n, t or logt");
  app.add_option("--lambda", f.lambdas, "Window exponents (repeatable)");
  app.add_option("--kinds", f.kinds, "Mean kinds: C1 L1 L2");
  app.add_option("--m-max", f.m_max, "Largest plateau index for counterexample");
  app.add_option("--tail", f.tail, "Tail length for tauber aggregates");

  auto* means = app.add_subcommand("means", "Evaluate sigma, tau and tau2 over a grid");
  auto* tauber = app.add_subcommand("tauber", "Window-condition profile and verdict");
  auto* identity = app.add_subcommand("identity", "Representation-identity residual sweep");
  auto* counter = app.add_subcommand("counterexample", "Plateau function table");
  auto* catalog = app.add_subcommand("catalog", "Built-in examples");
  auto* catalog_list_cmd = catalog->add_subcommand("list", "List catalog entries");
  catalog->require_subcommand(1);
  catalog->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config_error;
  }

  RunConfig cfg;
  try {
    cfg = build_config(f);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  }

  CommandResult result;
  try {
    if (means->parsed()) {
      result = cmd_means(cfg);
    } else if (tauber->parsed()) {
      result = cmd_tauber(cfg);
    } else if (identity->parsed()) {
      result = cmd_identity(cfg);
    } else if (counter->parsed()) {
      result = cmd_counterexample(cfg);
    } else if (catalog_list_cmd->parsed()) {
      result = cmd_catalog_list(cfg);
    }
  } catch (const ConvergenceError& e) {
    err << "quadrature failure: " << e.what() << "\n";
    return exit_soft_quadrature_failure;
  } catch (const std::exception& e) {
    // Parse, domain and argument errors all stem from the configuration.
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  }

  try {
    emit(result, out);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return exit_config_error;
  }
  for (const std::string& note : result.notes) err << note << "\n";
  return result.exit_code;
}

}  // namespace logtauber::cli
