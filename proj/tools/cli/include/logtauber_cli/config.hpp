#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "logtauber/catalog.hpp"
#include "logtauber/expr.hpp"
#include "logtauber/grid.hpp"
#include "logtauber/means.hpp"
#include "logtauber/quadrature.hpp"
#include "logtauber/spec.hpp"
#include "logtauber/tauberian.hpp"

namespace logtauber::cli {

/// Malformed or inconsistent configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

enum class Source { none, catalog, expr, list, segments, integrand, random };

struct InputConfig {
  Source source = Source::none;
  std::string catalog;
  std::string expr;
  Var var = Var::u;
  double domain_start = 1.0;
  std::vector<double> list;
  std::vector<std::pair<double, std::string>> segments;
  /// Integrand pieces; a single piece starting at domain_start for an
  /// expression integrand.
  std::vector<std::pair<double, std::string>> integrand;
  bool integral_mode = true;
  /// Optional imaginary channel (expression in the same variable).
  std::string imag;
};

struct GridConfig {
  enum class Kind { decades, log, points };
  Kind kind = Kind::decades;
  double start = 10.0;
  double stop = 1e4;
  std::size_t count = 0;
  std::vector<double> points;
  std::optional<Grid::Axis> axis;
};

struct RunConfig {
  InputConfig input;
  std::optional<GridConfig> grid;
  std::vector<MeanKind> kinds = {MeanKind::C1, MeanKind::L1, MeanKind::L2};
  std::vector<double> lambdas_upper = ProfileOptions{}.lambdas_upper;
  std::vector<double> lambdas_lower = ProfileOptions{}.lambdas_lower;
  std::size_t tail = 0;
  std::vector<double> identity_lambdas = {1.1, 1.5, 2.0, 0.5, 0.9};
  int m_max = 20;
  QuadConfig quad;
  std::uint64_t seed = 0;
  std::optional<std::string> out_path;
  Format format = Format::csv;
};

/// Parses a JSON configuration document. Unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// "n", "t" or "logt".
Grid::Axis parse_axis(const std::string& text);
std::string axis_name(Grid::Axis axis);
/// "decades:10:1e4", "log:2:100:8" or "points:1,2,3".
GridConfig parse_grid_text(const std::string& text);
MeanKind parse_kind(const std::string& text);

/// The input after catalog lookup and parsing.
struct ResolvedInput {
  Spec spec;
  std::string description;
  bool log_abscissa = false;
  std::optional<CatalogEntry> entry;
};

/// Builds the spec. `axis` selects between the function and sequence form
/// of catalog entries that carry both.
ResolvedInput resolve_input(const RunConfig& cfg, std::optional<Grid::Axis> axis);

/// The configured grid, or a default suited to the input.
Grid resolve_grid(const RunConfig& cfg, const ResolvedInput& input);

}  // namespace logtauber::cli
