#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "tcsim/output.hpp"

using namespace tcsim;

TEST_CASE("shortest round-trip number format") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV and JSON carry the same table") {
  Table t;
  t.meta = {{"preset", "experiment"}, {"levels", "5"}};
  t.columns = {"flux_phi0", "zz_mhz"};
  t.rows = {{0.0, 0.41}, {0.25, std::nan("")}, {0.5, -44.125}};

  std::ostringstream csv;
  write_csv(csv, t);
  CHECK(csv.str() == "# preset: experiment\n# levels: 5\nflux_phi0,zz_mhz\n0,0.41\n0.25,nan\n0.5,-44.125\n");

  const auto j = table_json(t);
  CHECK(j["meta"]["preset"] == "experiment");
  CHECK(j["columns"].size() == 2);
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][1][1].is_null());
  for (std::size_t r : {0, 2})
    for (std::size_t c = 0; c < 2; ++c) CHECK(j["rows"][r][c].get<double>() == t.rows[r][c]);
  CHECK(j.dump() == table_json(t).dump());
}
