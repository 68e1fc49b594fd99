#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace logtauber {

/// Strictly increasing evaluation abscissae.
///
/// A grid is either real (t-values), integer (n-values), or log-domain
/// (points hold log t, for inputs whose interesting range lies past the
/// largest representable double).
class Grid {
 public:
  enum class Axis { real, integer, log_t };

  Grid() = default;
  static Grid explicit_points(std::vector<double> points, Axis axis = Axis::real);
  static Grid log_spaced(double start, double stop, std::size_t count,
                         Axis axis = Axis::real);
  /// start, 10*start, 100*start, ... up to and including stop.
  static Grid decades(double start, double stop, Axis axis = Axis::integer);

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  Axis axis() const noexcept { return axis_; }
  bool is_integer() const noexcept { return axis_ == Axis::integer; }
  bool is_log() const noexcept { return axis_ == Axis::log_t; }
  double operator[](std::size_t i) const { return points_[i]; }

  /// Throws InvalidArgument if any point is <= lower_exclusive (in the grid's
  /// own coordinate).
  void require_above(double lower_exclusive, const std::string& what) const;

  std::string describe() const;

 private:
  Grid(std::vector<double> points, Axis axis);

  std::vector<double> points_;
  Axis axis_ = Axis::real;
};

}  // namespace logtauber
