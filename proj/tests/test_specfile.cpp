#include <cmath>

#include "doctest.h"
#include "ssb/analysis.hpp"
#include "ssb/error.hpp"
#include "ssb/render.hpp"
#include "ssb/report.hpp"
#include "ssb/specfile.hpp"

using namespace ssb;

TEST_CASE("gallery specs round trip through text") {
  for (const auto& name : gallery_names()) {
    const SpecFile s = gallery(name);
    CAPTURE(name);
    CHECK(parse_spec(serialize_spec(s)) == s);
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SpecFile s = random_digit_set(seed);
    CHECK(parse_spec(serialize_spec(s)) == s);
  }
}

TEST_CASE("gallery fixtures") {
  CHECK(gallery("square4").maps.size() == 4);
  for (const auto& m : gallery("square4").maps) CHECK(m.scale == 0.5);
  CHECK(gallery("l1-schief").ifs().size() == 3);
  CHECK(gallery("l1-schief").ifs().r_max() == 0.5);
  const IfsSpec koch = gallery("koch").ifs();
  CHECK(koch.size() == 4);
  CHECK(similarity_dimension(koch.ratios()) == doctest::Approx(std::log(4) / std::log(3)));
  CHECK_THROWS_AS(gallery("nope"), std::invalid_argument);
}

TEST_CASE("parse errors carry line numbers") {
  const std::string head = "ifs t dim 2 backend euclidean\n";
  auto line_of = [](const std::string& text) {
    try {
      parse_spec(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("hello\n") == 1);
  CHECK(line_of(head + "\nmap scale 1 rotate 0 translate 0 0\n") == 3);
  CHECK(line_of(head + "map scale 1/2 rotate 0 translate 0\n") == 2);
  CHECK(line_of(head + "map scale 1/2 matrix 1 1 0 1 translate 0 0\n") == 2);
  CHECK(line_of(head + "depth -1\n") == 2);
  CHECK(line_of("ifs t dim 0 backend sequence\nmap scale 1/2 kind sideways\n") == 2);
  CHECK(line_of("ifs t dim 0 backend sequence\nmap scale 1/3 kind affine-first\n") == 2);
  CHECK(line_of(head + "map scale 1/2 kind affine-first\n") == 2);
  try {
    parse_spec(head + "map scale 1 rotate 0 translate 0 0\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("not a strict contraction") != std::string::npos);
  }
}

TEST_CASE("parsed values and comments") {
  const SpecFile s = parse_spec(
      "# a comment\n"
      "ifs demo dim 2 backend euclidean\n"
      "map scale 1/3 rotate 60 translate 0 0   # trailing\n"
      "map scale 0.5 rotate 0 translate 1/2 0 about 0.5 0.5\n"
      "depth 5\ntol 0.01\ngrid 0.02\nbudget 1000\nseed 9\n");
  CHECK(s.name == "demo");
  CHECK(s.maps.size() == 2);
  CHECK(s.maps[0].scale == doctest::Approx(1.0 / 3));
  CHECK(s.maps[1].about.has_value());
  CHECK(s.depth == 5);
  CHECK(*s.tol == 0.01);
  CHECK(*s.grid == 0.02);
  CHECK(s.budget == 1000);
  CHECK(s.seed == 9);
}

TEST_CASE("report formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(2) == "2");
  Report r;
  r.section("a");
  r.put("x", 1.5);
  r.put("flag", true);
  r.section("b");
  r.put("n", std::size_t{3});
  CHECK(r.str() == "[a]\nx = 1.5\nflag = true\n\n[b]\nn = 3\n");
}

TEST_CASE("commands produce deterministic reports") {
  RunOptions o;
  o.depth = 4;
  const auto a = run_command("battery", gallery("sierpinski"), o);
  const auto b = run_command("battery", gallery("sierpinski"), o);
  CHECK(a.report == b.report);
  CHECK(a.report.find("[condition.7]") != std::string::npos);
  CHECK(run_command("dim", gallery("l1-schief"), o).report.find("alpha = 1.58496250072") != std::string::npos);
  CHECK_THROWS_AS(run_command("fly", gallery("koch"), o), std::invalid_argument);
  o.depth = 30;
  CHECK_THROWS_AS(run_command("attractor", gallery("koch"), o), BudgetExceeded);
}

TEST_CASE("svg rendering") {
  const IfsSpec koch = gallery("koch").ifs();
  const AttractorApprox a = approximate(koch, 4);
  const BoundaryApprox b = similarity_boundary(koch, a, default_tolerance(koch, 4));
  const std::string with = render_svg(a, &b);
  CHECK(with == render_svg(a, &b));
  CHECK(with.find("id=\"boundary\"") != std::string::npos);
  const std::string without = render_svg(a);
  CHECK(without.find("id=\"boundary\"") == std::string::npos);
  std::size_t dots = 0;
  for (std::size_t p = without.find("<circle"); p != std::string::npos; p = without.find("<circle", p + 1)) ++dots;
  CHECK(dots == 256);
  const BoundaryApprox none;
  CHECK(render_svg(a, &none).find("id=\"boundary\"") == std::string::npos);
  CHECK_THROWS_AS(render_svg(approximate(gallery("l1-schief").ifs(), 2)), Unsupported);
  CHECK_THROWS_AS(render_svg(approximate(gallery("cantor2").ifs(), 2)), Unsupported);
}
