#include <cmath>

#include "doctest.h"
#include "logtauber/errors.hpp"
#include "logtauber/grid.hpp"

using namespace logtauber;

TEST_CASE("decades") {
  const Grid g = Grid::decades(10, 1e6);
  REQUIRE(g.size() == 6);
  CHECK(g[0] == 10.0);
  CHECK(g[5] == 1e6);
  CHECK(g.is_integer());
}

TEST_CASE("log spacing hits both ends") {
  const Grid g = Grid::log_spaced(2, 512, 9, Grid::Axis::log_t);
  REQUIRE(g.size() == 9);
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[8] == doctest::Approx(512.0));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(2.0));
  CHECK(g.is_log());
}

TEST_CASE("explicit points must increase") {
  CHECK_NOTHROW(Grid::explicit_points({1, 2, 3}));
  CHECK_THROWS_AS(Grid::explicit_points({1, 3, 2}), InvalidArgument);
  CHECK_THROWS_AS(Grid::explicit_points({}), InvalidArgument);
}

TEST_CASE("require_above") {
  const Grid g = Grid::explicit_points({2, 3});
  CHECK_NOTHROW(g.require_above(1.0, "t"));
  CHECK_THROWS_AS(g.require_above(2.0, "t"), InvalidArgument);
}
