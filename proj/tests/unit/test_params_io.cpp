#include <doctest.h>

#include <sstream>

#include "tcsim/params_io.hpp"

using namespace tcsim;

namespace {

std::string dump(const CircuitParams& p) {
  std::ostringstream s;
  write_params(s, p, "header\nsecond line");
  return s.str();
}

CircuitParams parse(const std::string& text) {
  std::istringstream in(text);
  return parse_params(in);
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("round trip is exact") {
  const auto p = CircuitParams::experiment();
  const auto q = parse(dump(p));
  CHECK(q.josephson_energies == p.josephson_energies);
  CHECK(q.c26 == p.c26);
  CHECK(q.c35 == p.c35);
  CHECK(dump(q) == dump(p));
}

TEST_CASE("preset files match the built-in values") {
  const auto d = load_params(TCSIM_PRESETS "/design.params");
  const auto e = load_params(TCSIM_PRESETS "/experiment.params");
  CHECK(d.josephson_energies == CircuitParams::design().josephson_energies);
  CHECK(e.josephson_energies == CircuitParams::experiment().josephson_energies);
  CHECK(e.c4 == CircuitParams::experiment().c4);
}

TEST_CASE("format errors") {
  const std::string good = dump(CircuitParams::design());
  CHECK_THROWS_WITH_AS(parse(replace(good, "EJ3 = ", "EJX = ")), doctest::Contains("unknown key"),
                       ParamsFormatError);
  CHECK_THROWS_WITH_AS(parse(replace(good, "C23 = 9 fF", "C23 = 9 pF")), doctest::Contains("needs unit fF"),
                       ParamsFormatError);
  CHECK_THROWS_WITH_AS(parse(replace(good, "C23 = 9 fF", "C23 = nine fF")), doctest::Contains("malformed"),
                       ParamsFormatError);
  CHECK_THROWS_WITH_AS(parse(replace(good, "C23 = 9 fF", "# gone")), doctest::Contains("missing key 'C23'"),
                       ParamsFormatError);
  CHECK_THROWS_WITH_AS(parse(good + "C23 = 9 fF\n"), doctest::Contains("duplicate"), ParamsFormatError);
  CHECK_THROWS_WITH_AS(parse(replace(good, "C23 = 9 fF", "C23 = -9 fF")), doctest::Contains("C23"),
                       ParamsFormatError);
  CHECK_THROWS_AS(load_params("/nonexistent/file.params"), ParamsFormatError);
}
