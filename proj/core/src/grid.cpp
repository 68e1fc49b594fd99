#include "logtauber/grid.hpp"

#include <charconv>
#include <cmath>

#include "logtauber/errors.hpp"

namespace logtauber {

Grid::Grid(std::vector<double> points, Axis axis)
    : points_(std::move(points)), axis_(axis) {
  if (points_.empty()) throw InvalidArgument("grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) {
      throw InvalidArgument("grid points must be finite");
    }
    if (axis_ == Axis::integer && points_[i] != std::floor(points_[i])) {
      throw InvalidArgument("integer grid contains a non-integer point");
    }
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw InvalidArgument("grid points must be strictly increasing");
    }
  }
}

Grid Grid::explicit_points(std::vector<double> points, Axis axis) {
  return Grid(std::move(points), axis);
}

Grid Grid::log_spaced(double start, double stop, std::size_t count, Axis axis) {
  if (!(start > 0.0) || !(stop > start) || count < 2) {
    throw InvalidArgument("log_spaced needs 0 < start < stop and count >= 2");
  }
  std::vector<double> pts;
  const double ls = std::log(start);
  const double step = (std::log(stop) - ls) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    double p = i + 1 == count ? stop : std::exp(ls + step * static_cast<double>(i));
    if (i == 0) p = start;
    if (axis == Axis::integer) {
      p = std::round(p);
      if (!pts.empty() && p <= pts.back()) continue;
    }
    pts.push_back(p);
  }
  return Grid(std::move(pts), axis);
}

Grid Grid::decades(double start, double stop, Axis axis) {
  if (!(start > 0.0) || !(stop >= start)) {
    throw InvalidArgument("decades needs 0 < start <= stop");
  }
  std::vector<double> pts;
  // Powers of ten are generated by repeated exact multiplication from start
  // so that 10, 100, ... stay integral.
  for (double p = start; p <= stop * (1.0 + 1e-12); p *= 10.0) {
    pts.push_back(axis == Axis::integer ? std::round(p) : p);
  }
  return Grid(std::move(pts), axis);
}

void Grid::require_above(double lower_exclusive, const std::string& what) const {
  if (!(points_.front() > lower_exclusive)) {
    throw InvalidArgument("grid point outside the domain of " + what);
  }
}

std::string Grid::describe() const {
  std::string out = axis_ == Axis::integer ? "n:" : axis_ == Axis::log_t ? "logt:" : "t:";
  char buf[32];
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i) out += ',';
    const auto res = std::to_chars(buf, buf + sizeof buf, points_[i]);
    out.append(buf, res.ptr);
  }
  return out;
}

}  // namespace logtauber
