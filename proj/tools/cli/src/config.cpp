#include "logtauber_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace logtauber::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, where));
  return out;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + " must be a string");
  return j.get<std::string>();
}

std::vector<std::pair<double, std::string>> segment_list(const json& j,
                                                         const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + " must be a non-empty array of [start, expression]");
  }
  std::vector<std::pair<double, std::string>> out;
  for (const auto& seg : j) {
    if (seg.is_array() && seg.size() == 2) {
      out.emplace_back(number(seg[0], where + " start"), text(seg[1], where + " body"));
    } else if (seg.is_object()) {
      check_keys(seg, {"start", "expr"}, where);
      if (!seg.contains("start") || !seg.contains("expr")) {
        throw ConfigError(where + " entries need 'start' and 'expr'");
      }
      out.emplace_back(number(seg["start"], where + " start"),
                       text(seg["expr"], where + " expr"));
    } else {
      throw ConfigError(where + " entries must be [start, expression]");
    }
  }
  return out;
}

Var parse_var(const std::string& v) {
  if (v == "u") return Var::u;
  if (v == "k") return Var::k;
  throw ConfigError("input var must be 'u' or 'k', got '" + v + "'");
}

void parse_input(const json& j, InputConfig& in) {
  check_keys(j,
             {"catalog", "expr", "list", "segments", "integrand", "random", "var",
              "domain_start", "imag", "integral_mode"},
             "input");
  int sources = 0;
  for (const char* key : {"catalog", "expr", "list", "segments", "integrand", "random"}) {
    if (j.contains(key)) ++sources;
  }
  if (sources != 1) {
    throw ConfigError("input needs exactly one of catalog, expr, list, segments, "
                      "integrand, random");
  }
  if (j.contains("var")) in.var = parse_var(text(j["var"], "input.var"));
  if (j.contains("domain_start")) {
    in.domain_start = number(j["domain_start"], "input.domain_start");
  }
  if (j.contains("imag")) in.imag = text(j["imag"], "input.imag");
  if (j.contains("integral_mode")) {
    if (!j["integral_mode"].is_boolean()) {
      throw ConfigError("input.integral_mode must be a boolean");
    }
    if (!j.contains("integrand")) {
      throw ConfigError("input.integral_mode applies to an integrand only");
    }
    in.integral_mode = j["integral_mode"].get<bool>();
  }

  if (j.contains("catalog")) {
    in.source = Source::catalog;
    in.catalog = text(j["catalog"], "input.catalog");
  } else if (j.contains("expr")) {
    in.source = Source::expr;
    in.expr = text(j["expr"], "input.expr");
  } else if (j.contains("list")) {
    in.source = Source::list;
    in.list = numbers(j["list"], "input.list");
    if (in.list.empty()) throw ConfigError("input.list must not be empty");
  } else if (j.contains("segments")) {
    in.source = Source::segments;
    in.segments = segment_list(j["segments"], "input.segments");
  } else if (j.contains("integrand")) {
    in.source = Source::integrand;
    const json& f = j["integrand"];
    if (f.is_string()) {
      in.integrand = {{in.domain_start, f.get<std::string>()}};
    } else {
      in.integrand = segment_list(f, "input.integrand");
    }
  } else {
    in.source = Source::random;
    if (!j["random"].is_boolean() || !j["random"].get<bool>()) {
      throw ConfigError("input.random must be true");
    }
  }
  if (!in.imag.empty() &&
      (in.source == Source::catalog || in.source == Source::list ||
       in.source == Source::random)) {
    throw ConfigError("input.imag applies to expression, segment and integrand inputs");
  }
}

GridConfig parse_grid(const json& j) {
  check_keys(j, {"decades", "log", "points", "axis"}, "grid");
  GridConfig g;
  int kinds = 0;
  if (j.contains("decades")) {
    ++kinds;
    const auto v = numbers(j["decades"], "grid.decades");
    if (v.size() != 2) throw ConfigError("grid.decades needs [start, stop]");
    g.kind = GridConfig::Kind::decades;
    g.start = v[0];
    g.stop = v[1];
  }
  if (j.contains("log")) {
    ++kinds;
    const auto v = numbers(j["log"], "grid.log");
    if (v.size() != 3 || !(v[2] >= 1.0) || v[2] != std::floor(v[2])) {
      throw ConfigError("grid.log needs [start, stop, count]");
    }
    g.kind = GridConfig::Kind::log;
    g.start = v[0];
    g.stop = v[1];
    g.count = static_cast<std::size_t>(v[2]);
  }
  if (j.contains("points")) {
    ++kinds;
    g.kind = GridConfig::Kind::points;
    g.points = numbers(j["points"], "grid.points");
  }
  if (kinds != 1) throw ConfigError("grid needs exactly one of decades, log, points");
  if (j.contains("axis")) g.axis = parse_axis(text(j["axis"], "grid.axis"));
  return g;
}

std::vector<double> lambda_list(const json& j, const std::string& where) {
  auto v = numbers(j, where);
  if (v.empty()) throw ConfigError(where + " must not be empty");
  return v;
}

}  // namespace

Grid::Axis parse_axis(const std::string& t) {
  if (t == "n") return Grid::Axis::integer;
  if (t == "t") return Grid::Axis::real;
  if (t == "logt") return Grid::Axis::log_t;
  throw ConfigError("grid axis must be n, t or logt, got '" + t + "'");
}

std::string axis_name(Grid::Axis axis) {
  switch (axis) {
    case Grid::Axis::integer:
      return "n";
    case Grid::Axis::real:
      return "t";
    case Grid::Axis::log_t:
      return "log_t";
  }
  return "?";
}

GridConfig parse_grid_text(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("grid must look like decades:A:B, log:A:B:N or points:x,y,...");
  }
  const std::string kind = spec.substr(0, colon);
  std::vector<double> v;
  std::string rest = spec.substr(colon + 1);
  std::replace(rest.begin(), rest.end(), ':', ',');
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), x);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
      throw ConfigError("bad number '" + item + "' in grid '" + spec + "'");
    }
    v.push_back(x);
  }
  json j;
  if (kind == "decades" || kind == "log" || kind == "points") {
    j[kind] = v;
  } else {
    throw ConfigError("unknown grid kind '" + kind + "'");
  }
  return parse_grid(j);
}

MeanKind parse_kind(const std::string& k) {
  if (k == "C1" || k == "sigma") return MeanKind::C1;
  if (k == "L1" || k == "tau") return MeanKind::L1;
  if (k == "L2" || k == "tau2") return MeanKind::L2;
  throw ConfigError("unknown mean kind '" + k + "'");
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root,
             {"input", "grid", "means", "tauber", "identity", "counterexample", "quad",
              "output", "seed"},
             "config");
  RunConfig cfg;
  if (root.contains("input")) parse_input(root["input"], cfg.input);
  if (root.contains("grid")) cfg.grid = parse_grid(root["grid"]);
  if (root.contains("means")) {
    const json& m = root["means"];
    check_keys(m, {"kinds"}, "means");
    if (m.contains("kinds")) {
      if (!m["kinds"].is_array() || m["kinds"].empty()) {
        throw ConfigError("means.kinds must be a non-empty array");
      }
      cfg.kinds.clear();
      for (const auto& k : m["kinds"]) cfg.kinds.push_back(parse_kind(text(k, "means.kinds")));
    }
  }
  if (root.contains("tauber")) {
    const json& t = root["tauber"];
    check_keys(t, {"lambdas_upper", "lambdas_lower", "tail"}, "tauber");
    if (t.contains("lambdas_upper")) {
      cfg.lambdas_upper = lambda_list(t["lambdas_upper"], "tauber.lambdas_upper");
    }
    if (t.contains("lambdas_lower")) {
      cfg.lambdas_lower = lambda_list(t["lambdas_lower"], "tauber.lambdas_lower");
    }
    if (t.contains("tail")) {
      if (!t["tail"].is_number_unsigned()) {
        throw ConfigError("tauber.tail must be a non-negative integer");
      }
      cfg.tail = t["tail"].get<std::size_t>();
    }
  }
  if (root.contains("identity")) {
    const json& i = root["identity"];
    check_keys(i, {"lambdas"}, "identity");
    if (i.contains("lambdas")) cfg.identity_lambdas = lambda_list(i["lambdas"], "identity.lambdas");
  }
  if (root.contains("counterexample")) {
    const json& c = root["counterexample"];
    check_keys(c, {"m_max"}, "counterexample");
    if (c.contains("m_max")) {
      if (!c["m_max"].is_number_integer()) {
        throw ConfigError("counterexample.m_max must be an integer");
      }
      cfg.m_max = c["m_max"].get<int>();
    }
  }
  if (root.contains("quad")) {
    const json& q = root["quad"];
    check_keys(q, {"abs_tol", "rel_tol", "max_depth", "max_panels"}, "quad");
    if (q.contains("abs_tol")) cfg.quad.abs_tol = number(q["abs_tol"], "quad.abs_tol");
    if (q.contains("rel_tol")) cfg.quad.rel_tol = number(q["rel_tol"], "quad.rel_tol");
    if (q.contains("max_depth")) {
      if (!q["max_depth"].is_number_integer()) throw ConfigError("quad.max_depth must be an integer");
      cfg.quad.max_depth = q["max_depth"].get<int>();
    }
    if (q.contains("max_panels")) {
      if (!q["max_panels"].is_number_integer()) throw ConfigError("quad.max_panels must be an integer");
      cfg.quad.max_panels = q["max_panels"].get<std::int64_t>();
    }
  }
  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) cfg.out_path = text(o["path"], "output.path");
    if (o.contains("format")) {
      const std::string f = text(o["format"], "output.format");
      if (f == "csv") {
        cfg.format = Format::csv;
      } else if (f == "json") {
        cfg.format = Format::json;
      } else {
        throw ConfigError("output.format must be csv or json");
      }
    }
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ResolvedInput resolve_input(const RunConfig& cfg, std::optional<Grid::Axis> axis) {
  const InputConfig& in = cfg.input;
  ResolvedInput out;
  const auto with_imag_f = [&](FuncSpec f, double start) {
    if (in.imag.empty()) return f;
    return f.with_imag(FuncSpec::of_expr(in.imag, start));
  };
  switch (in.source) {
    case Source::none:
      throw ConfigError("no input given (use a config 'input' section, --catalog or --expr)");
    case Source::catalog: {
      CatalogEntry e = catalog_get(in.catalog);
      const bool want_seq = axis == Grid::Axis::integer;
      if (want_seq && e.sequence) {
        out.spec = *e.sequence;
      } else if (axis && !want_seq && e.function) {
        out.spec = *e.function;
      } else if (axis) {
        throw ConfigError("catalog entry '" + e.name + "' has no " +
                          (want_seq ? "sequence" : "function") + " form for axis " +
                          axis_name(*axis));
      } else {
        out.spec = e.function ? Spec(*e.function) : Spec(*e.sequence);
      }
      out.description = "catalog:" + e.name;
      out.log_abscissa = e.log_abscissa && std::holds_alternative<FuncSpec>(out.spec);
      out.entry = std::move(e);
      return out;
    }
    case Source::expr:
      if (in.var == Var::k) {
        SeqSpec s = SeqSpec::of_expr(in.expr);
        if (!in.imag.empty()) s = s.with_imag(SeqSpec::of_expr(in.imag));
        out.spec = s;
      } else {
        out.spec = with_imag_f(FuncSpec::of_expr(in.expr, in.domain_start), in.domain_start);
      }
      out.description = describe(out.spec);
      return out;
    case Source::list:
      out.spec = SeqSpec::of_list(in.list, "list[" + std::to_string(in.list.size()) + "]");
      out.description = describe(out.spec);
      return out;
    case Source::segments:
      out.spec = with_imag_f(FuncSpec::piecewise(in.segments), in.segments.front().first);
      out.description = describe(out.spec);
      return out;
    case Source::integrand: {
      const double start = in.integrand.front().first;
      FuncSpec f = with_imag_f(FuncSpec::piecewise(in.integrand), start);
      out.spec = in.integral_mode ? integral_mode(f, cfg.quad) : f;
      out.description = describe(out.spec);
      return out;
    }
    case Source::random:
      if (in.var == Var::k) {
        out.spec = random_sequence(cfg.seed);
      } else {
        out.spec = FuncSpec::of_expr(random_expression(cfg.seed, Var::u), in.domain_start);
      }
      out.description = "random(seed=" + std::to_string(cfg.seed) + "):" + describe(out.spec);
      return out;
  }
  throw ConfigError("unhandled input source");
}

Grid resolve_grid(const RunConfig& cfg, const ResolvedInput& input) {
  const bool seq = std::holds_alternative<SeqSpec>(input.spec);
  const Grid::Axis fallback = seq                  ? Grid::Axis::integer
                              : input.log_abscissa ? Grid::Axis::log_t
                                                   : Grid::Axis::real;
  if (!cfg.grid) {
    if (seq) return Grid::decades(10.0, 1e4, Grid::Axis::integer);
    if (input.log_abscissa) {
      std::vector<double> pts;
      for (int m = 1; m <= 9; ++m) pts.push_back(std::ldexp(1.0, m));
      return Grid::explicit_points(pts, Grid::Axis::log_t);
    }
    return Grid::decades(10.0, 1e6, Grid::Axis::real);
  }
  const GridConfig& g = *cfg.grid;
  const Grid::Axis axis = g.axis.value_or(fallback);
  if (seq && axis != Grid::Axis::integer) {
    throw ConfigError("sequence inputs need an integer grid (axis n)");
  }
  switch (g.kind) {
    case GridConfig::Kind::decades:
      return Grid::decades(g.start, g.stop, axis);
    case GridConfig::Kind::log:
      return Grid::log_spaced(g.start, g.stop, g.count, axis);
    case GridConfig::Kind::points:
      return Grid::explicit_points(g.points, axis);
  }
  throw ConfigError("unhandled grid kind");
}

}  // namespace logtauber::cli
