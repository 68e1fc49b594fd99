#include "logtauber_cli/commands.hpp"

#include <cmath>
#include <map>

#include "json.hpp"
#include "logtauber/catalog.hpp"
#include "logtauber/identities.hpp"
#include "logtauber/means.hpp"
#include "logtauber/parallel.hpp"
#include "logtauber/tauberian.hpp"

namespace logtauber::cli {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::optional<Grid::Axis> axis_hint(const RunConfig& cfg) {
  return cfg.grid ? cfg.grid->axis : std::nullopt;
}

bool is_complex(const Spec& spec) {
  return std::visit([](const auto& s) { return s.is_complex(); }, spec);
}

ordered_json complex_json(std::complex<double> z, bool complex) {
  const auto num = [](double x) -> ordered_json {
    return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
  };
  if (!complex) return num(z.real());
  return ordered_json::array({num(z.real()), num(z.imag())});
}

ordered_json opt_json(const std::optional<double>& x) {
  return x && std::isfinite(*x) ? ordered_json(*x) : ordered_json(nullptr);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

OutputFile main_output(const RunConfig& cfg, std::string content) {
  return {cfg.out_path.value_or(""), std::move(content)};
}

void axis_comment(CsvWriter& csv, const Grid& grid, const ResolvedInput& in) {
  if (grid.is_log()) {
    csv.comment("abscissa is log t (t itself exceeds the double range); input " +
                in.description);
  }
}

}  // namespace

CommandResult cmd_means(const RunConfig& cfg) {
  const ResolvedInput in = resolve_input(cfg, axis_hint(cfg));
  const Grid grid = resolve_grid(cfg, in);
  const bool complex = is_complex(in.spec);

  std::map<MeanKind, MeanSeries> series;
  for (MeanKind kind : cfg.kinds) {
    if (!series.contains(kind)) series.emplace(kind, mean_series(in.spec, grid, kind, cfg.quad));
  }

  CommandResult result;
  std::vector<double> unconverged;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const auto& [kind, s] : series) {
      if (!s.points[i].converged) {
        unconverged.push_back(grid[i]);
        break;
      }
    }
  }
  if (!unconverged.empty()) {
    result.exit_code = exit_soft_quadrature_failure;
    result.notes.push_back(std::to_string(unconverged.size()) +
                           " row(s) with unconverged quadrature");
  }

  const MeanKind order[] = {MeanKind::C1, MeanKind::L1, MeanKind::L2};
  if (cfg.format == Format::json) {
    ordered_json j;
    j["command"] = "means";
    j["input"] = in.description;
    j["abscissa"] = axis_name(grid.axis());
    j["fingerprint"] = series.empty() ? 0 : series.begin()->second.fingerprint;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ordered_json r;
      r["abscissa"] = grid[i];
      double err = 0.0;
      bool ok = true;
      for (MeanKind kind : order) {
        const char* key = kind == MeanKind::C1 ? "sigma" : kind == MeanKind::L1 ? "tau" : "tau2";
        const auto it = series.find(kind);
        if (it == series.end()) {
          r[key] = nullptr;
          continue;
        }
        const MeanPoint& p = it->second.points[i];
        r[key] = complex_json(p.value, complex);
        err += p.quad_error;
        ok = ok && p.converged;
      }
      r["quad_err"] = err;
      r["converged"] = ok;
      rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    result.files.push_back(main_output(cfg, dump(j)));
    return result;
  }

  CsvWriter csv;
  axis_comment(csv, grid, in);
  if (!unconverged.empty()) {
    std::string list;
    for (double x : unconverged) list += (list.empty() ? "" : " ") + format_number(x);
    csv.comment("unconverged quadrature at abscissa " + list);
  }
  std::vector<std::string> header = {"abscissa", "sigma", "tau", "tau2", "quad_err"};
  if (complex) {
    header.insert(header.end(), {"sigma_im", "tau_im", "tau2_im"});
  }
  csv.header(header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> re, im;
    double err = 0.0;
    for (MeanKind kind : order) {
      const auto it = series.find(kind);
      if (it == series.end()) {
        re.emplace_back();
        im.emplace_back();
        continue;
      }
      const MeanPoint& p = it->second.points[i];
      re.push_back(format_number(p.value.real()));
      im.push_back(format_number(p.value.imag()));
      err += p.quad_error;
    }
    std::vector<std::string> row = {format_number(grid[i])};
    row.insert(row.end(), re.begin(), re.end());
    row.push_back(format_number(err));
    if (complex) row.insert(row.end(), im.begin(), im.end());
    csv.row(row);
  }
  result.files.push_back(main_output(cfg, csv.str()));
  return result;
}

namespace {

struct NamedRows {
  std::string name;
  const std::vector<ProfileRow>* rows;
};

struct NamedModulus {
  std::string name;
  const std::vector<ModulusRow>* rows;
};

std::string wide_matrix(const std::vector<ProfileRow>& rows, const Grid& grid,
                        bool imag_part) {
  CsvWriter csv;
  std::vector<std::string> header = {"lambda"};
  for (double x : grid.points()) header.push_back(format_number(x));
  csv.header(header);
  for (const ProfileRow& r : rows) {
    std::vector<std::string> row = {format_number(r.lambda)};
    for (const ProfileCell& c : r.cells) {
      row.push_back(c.empty ? std::string()
                            : format_number(imag_part ? c.value.imag() : c.value.real()));
    }
    csv.row(row);
  }
  return csv.str();
}

std::string wide_matrix(const std::vector<ModulusRow>& rows, const Grid& grid) {
  CsvWriter csv;
  std::vector<std::string> header = {"lambda"};
  for (double x : grid.points()) header.push_back(format_number(x));
  csv.header(header);
  for (const ModulusRow& r : rows) {
    std::vector<std::string> row = {format_number(r.lambda)};
    for (const auto& c : r.cells) row.push_back(c ? format_number(*c) : std::string());
    csv.row(row);
  }
  return csv.str();
}

ordered_json rows_json(const std::vector<ProfileRow>& rows, bool complex) {
  ordered_json out = ordered_json::array();
  for (const ProfileRow& r : rows) {
    ordered_json cells = ordered_json::array();
    ordered_json errs = ordered_json::array();
    for (const ProfileCell& c : r.cells) {
      cells.push_back(c.empty ? ordered_json(nullptr) : complex_json(c.value, complex));
      errs.push_back(c.quad_error);
    }
    out.push_back({{"lambda", r.lambda},
                   {"cells", std::move(cells)},
                   {"quad_err", std::move(errs)},
                   {"tail_inf", opt_json(r.tail_inf)},
                   {"tail_sup_abs", opt_json(r.tail_sup_abs)}});
  }
  return out;
}

ordered_json modulus_json(const std::vector<ModulusRow>& rows) {
  ordered_json out = ordered_json::array();
  for (const ModulusRow& r : rows) {
    ordered_json cells = ordered_json::array();
    for (const auto& c : r.cells) cells.push_back(opt_json(c));
    out.push_back({{"lambda", r.lambda},
                   {"cells", std::move(cells)},
                   {"tail_inf", opt_json(r.tail_inf)},
                   {"tail_sup", opt_json(r.tail_sup)}});
  }
  return out;
}

}  // namespace

CommandResult cmd_tauber(const RunConfig& cfg) {
  const ResolvedInput in = resolve_input(cfg, axis_hint(cfg));
  const Grid grid = resolve_grid(cfg, in);
  ProfileOptions opts;
  opts.lambdas_upper = cfg.lambdas_upper;
  opts.lambdas_lower = cfg.lambdas_lower;
  opts.tail = cfg.tail;
  opts.quad = cfg.quad;
  const TauberianReport report = condition_profile(in.spec, grid, opts);

  CommandResult result;
  std::size_t unconverged = 0;
  for (const auto* rows : {&report.upper, &report.lower}) {
    for (const ProfileRow& r : *rows) {
      for (const ProfileCell& c : r.cells) unconverged += c.converged ? 0 : 1;
    }
  }
  if (unconverged > 0) {
    result.exit_code = exit_soft_quadrature_failure;
    result.notes.push_back(std::to_string(unconverged) +
                           " window cell(s) with unconverged quadrature");
  }

  std::vector<NamedRows> matrices = {{"upper", &report.upper}, {"lower", &report.lower}};
  if (report.discrete) {
    matrices.push_back({"upper_literal", &report.upper_literal});
    matrices.push_back({"lower_literal", &report.lower_literal});
  }
  const std::vector<NamedModulus> moduli = {{"sd_margin", &report.sd_margin},
                                            {"so_modulus", &report.so_modulus}};

  if (cfg.format == Format::json) {
    ordered_json j;
    j["command"] = "tauber";
    j["input"] = in.description;
    j["discrete"] = report.discrete;
    j["complex"] = report.is_complex;
    j["abscissa"] = axis_name(grid.axis());
    j["abscissae"] = report.abscissae;
    j["tail"] = report.tail;
    ordered_json m;
    for (const NamedRows& nr : matrices) m[nr.name] = rows_json(*nr.rows, report.is_complex);
    for (const NamedModulus& nm : moduli) m[nm.name] = modulus_json(*nm.rows);
    j["matrices"] = std::move(m);
    ordered_json verdict = ordered_json::array();
    for (const ConditionTrend& t : report.verdict) {
      ordered_json entries = ordered_json::array();
      for (const VerdictEntry& e : t.entries) {
        entries.push_back({{"lambda", e.lambda}, {"aggregate", opt_json(e.aggregate)}});
      }
      verdict.push_back({{"condition", t.condition},
                         {"entries", std::move(entries)},
                         {"improves_toward_one", t.improves_toward_one},
                         {"summary", t.summary}});
    }
    j["verdict"] = std::move(verdict);
    result.files.push_back(main_output(cfg, dump(j)));
    return result;
  }

  // Long table of every matrix cell, plot-ready.
  CsvWriter tidy;
  axis_comment(tidy, grid, in);
  tidy.header({"matrix", "lambda", "abscissa", "value", "value_im", "quad_err", "empty"});
  for (const NamedRows& nr : matrices) {
    for (const ProfileRow& r : *nr.rows) {
      for (const ProfileCell& c : r.cells) {
        tidy.row({nr.name, format_number(r.lambda), format_number(c.abscissa),
                  c.empty ? "" : format_number(c.value.real()),
                  c.empty ? "" : format_number(c.value.imag()), format_number(c.quad_error),
                  c.empty ? "1" : "0"});
      }
    }
  }
  for (const NamedModulus& nm : moduli) {
    for (const ModulusRow& r : *nm.rows) {
      for (std::size_t i = 0; i < r.cells.size(); ++i) {
        const auto& c = r.cells[i];
        tidy.row({nm.name, format_number(r.lambda), format_number(grid[i]),
                  c ? format_number(*c) : "", "", "0", c ? "0" : "1"});
      }
    }
  }

  CsvWriter verdict;
  verdict.header({"condition", "lambda", "aggregate", "improves_toward_one"});
  for (const ConditionTrend& t : report.verdict) {
    for (const VerdictEntry& e : t.entries) {
      verdict.row({t.condition, format_number(e.lambda),
                   e.aggregate ? format_number(*e.aggregate) : "",
                   t.improves_toward_one ? "1" : "0"});
    }
  }
  for (const ConditionTrend& t : report.verdict) result.notes.push_back(t.summary);

  if (!cfg.out_path) {
    std::string text = tidy.str();
    text += verdict.str().empty() ? "" : "\n" + verdict.str();
    result.files.push_back({"", text});
    return result;
  }
  const std::string& out = *cfg.out_path;
  result.files.push_back({out, tidy.str()});
  for (const NamedRows& nr : matrices) {
    result.files.push_back(
        {sibling_path(out, nr.name, ".csv"), wide_matrix(*nr.rows, grid, false)});
    if (report.is_complex) {
      result.files.push_back(
          {sibling_path(out, nr.name + "_im", ".csv"), wide_matrix(*nr.rows, grid, true)});
    }
  }
  for (const NamedModulus& nm : moduli) {
    result.files.push_back({sibling_path(out, nm.name, ".csv"), wide_matrix(*nm.rows, grid)});
  }
  result.files.push_back({sibling_path(out, "verdict", ".csv"), verdict.str()});
  return result;
}

CommandResult cmd_identity(const RunConfig& cfg) {
  const ResolvedInput in = resolve_input(cfg, axis_hint(cfg));
  const Grid grid = resolve_grid(cfg, in);
  for (double l : cfg.identity_lambdas) {
    if (!(l > 0.0) || l == 1.0 || !std::isfinite(l)) {
      throw ConfigError("identity lambdas must be positive and different from 1");
    }
  }
  const bool seq = std::holds_alternative<SeqSpec>(in.spec);
  if (seq) {
    grid.require_above(1.0, "a discrete identity");
  } else if (grid.is_log()) {
    grid.require_above(0.0, "a continuous identity");
  } else {
    grid.require_above(1.0, "a continuous identity");
  }
  const bool complex = is_complex(in.spec);

  struct Cell {
    IdentityResidual r;
    bool empty = false;
  };
  const std::size_t nl = cfg.identity_lambdas.size();
  std::vector<Cell> cells(grid.size() * nl);
  parallel_for(cells.size(), [&](std::size_t idx) {
    const double x = grid[idx / nl];
    const double lambda = cfg.identity_lambdas[idx % nl];
    Cell& c = cells[idx];
    if (seq) {
      const auto n = static_cast<std::int64_t>(x);
      if (DiscreteWindow::of(n, lambda).empty()) {
        c.empty = true;
        c.r.abscissa = x;
        c.r.lambda = lambda;
        return;
      }
      c.r = lemma2_residual(std::get<SeqSpec>(in.spec), n, lambda);
    } else {
      const LogPoint log_t = grid.is_log() ? LogPoint{x, 0.0} : LogPoint::of_u(x);
      c.r = lemma1_residual(std::get<FuncSpec>(in.spec), log_t, lambda, cfg.quad);
      c.r.abscissa = x;
    }
  });

  CommandResult result;
  std::size_t exceeded = 0, unverified = 0;
  for (const Cell& c : cells) {
    if (c.empty) continue;
    exceeded += c.r.status == IdentityStatus::exceeded;
    unverified += c.r.status == IdentityStatus::unverified;
  }
  if (exceeded > 0) {
    result.exit_code = exit_identity_budget;
    result.notes.push_back(std::to_string(exceeded) + " residual(s) exceed their budget");
  } else if (unverified > 0) {
    result.exit_code = exit_soft_quadrature_failure;
  }
  if (unverified > 0) {
    result.notes.push_back(std::to_string(unverified) +
                           " residual(s) unverified (quadrature did not converge)");
  }

  if (cfg.format == Format::json) {
    ordered_json j;
    j["command"] = "identity";
    j["input"] = in.description;
    j["abscissa"] = axis_name(grid.axis());
    ordered_json rows = ordered_json::array();
    for (const Cell& c : cells) {
      ordered_json r;
      r["abscissa"] = c.r.abscissa;
      r["lambda"] = c.r.lambda;
      if (c.empty) {
        r["status"] = "empty_window";
      } else {
        r["lhs"] = complex_json(c.r.lhs, complex);
        r["rhs"] = complex_json(c.r.rhs, complex);
        r["residual"] = c.r.residual;
        r["budget"] = c.r.budget;
        r["status"] = std::string(to_string(c.r.status));
      }
      rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    result.files.push_back(main_output(cfg, dump(j)));
    return result;
  }

  CsvWriter csv;
  axis_comment(csv, grid, in);
  std::vector<std::string> header = {"abscissa", "lambda", "lhs", "rhs", "residual", "status"};
  if (complex) header.insert(header.end(), {"lhs_im", "rhs_im"});
  csv.header(header);
  for (const Cell& c : cells) {
    std::vector<std::string> row = {format_number(c.r.abscissa), format_number(c.r.lambda)};
    if (c.empty) {
      row.insert(row.end(), {"", "", "", "empty_window"});
      if (complex) row.insert(row.end(), {"", ""});
    } else {
      row.insert(row.end(), {format_number(c.r.lhs.real()), format_number(c.r.rhs.real()),
                             format_number(c.r.residual), std::string(to_string(c.r.status))});
      if (complex) {
        row.insert(row.end(), {format_number(c.r.lhs.imag()), format_number(c.r.rhs.imag())});
      }
    }
    csv.row(row);
  }
  result.files.push_back(main_output(cfg, csv.str()));
  return result;
}

CommandResult cmd_counterexample(const RunConfig& cfg) {
  if (cfg.m_max < 1 || cfg.m_max > 1000) {
    throw ConfigError("counterexample m_max must lie in [1, 1000]");
  }
  CommandResult result;
  struct Row {
    int m;
    double log_t, tau, tau_end, bound, spike;
  };
  std::vector<Row> rows;
  for (int m = 1; m <= cfg.m_max; ++m) {
    const double log_t = std::ldexp(1.0, m);
    rows.push_back({m, log_t, thm3_tau_closed_form(log_t), thm3_tau_plateau_end(m),
                    thm3_block_bound(m), thm3_sigma_spike(m)});
  }
  if (cfg.format == Format::json) {
    ordered_json j;
    j["command"] = "counterexample";
    j["abscissa"] = "log_t";
    ordered_json arr = ordered_json::array();
    for (const Row& r : rows) {
      arr.push_back({{"m", r.m},
                     {"log_t", r.log_t},
                     {"tau_closed_form", r.tau},
                     {"tau_plateau_end", r.tau_end},
                     {"block_bound", r.bound},
                     {"sigma_spike", r.spike}});
    }
    j["rows"] = std::move(arr);
    result.files.push_back(main_output(cfg, dump(j)));
    return result;
  }
  CsvWriter csv;
  csv.comment(
      "thm3 plateau function; abscissa log_t = 2^m (t = e^(2^m)); tau_closed_form at "
      "log_t, tau_plateau_end just after plateau m, block_bound = m(m-1)/2^m");
  csv.header({"m", "log_t", "tau_closed_form", "tau_plateau_end", "block_bound",
              "sigma_spike"});
  for (const Row& r : rows) {
    csv.row({std::to_string(r.m), format_number(r.log_t), format_number(r.tau),
             format_number(r.tau_end), format_number(r.bound), format_number(r.spike)});
  }
  result.files.push_back(main_output(cfg, csv.str()));
  return result;
}

CommandResult cmd_catalog_list(const RunConfig& cfg) {
  CommandResult result;
  const auto list = catalog_list();
  if (cfg.format == Format::json) {
    ordered_json arr = ordered_json::array();
    for (const CatalogListing& e : list) {
      arr.push_back({{"name", e.name},
                     {"kind", std::string(to_string(e.kind))},
                     {"truth", e.truth},
                     {"notes", e.notes}});
    }
    result.files.push_back(main_output(cfg, dump(arr)));
    return result;
  }
  CsvWriter csv;
  csv.header({"name", "kind", "truth", "notes"});
  for (const CatalogListing& e : list) {
    csv.row({csv_field(e.name), csv_field(to_string(e.kind)), csv_field(e.truth),
             csv_field(e.notes)});
  }
  result.files.push_back(main_output(cfg, csv.str()));
  return result;
}

}  // namespace logtauber::cli
