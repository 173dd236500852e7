#include <cmath>
#include <random>

#include "doctest.h"
#include "ssb/error.hpp"
#include "ssb/spaces.hpp"
#include "ssb/spatial_hash.hpp"

using namespace ssb;

TEST_CASE("dyadic arithmetic is exact and normalized") {
  const Dyadic half(1, 1);
  const Dyadic quarter(2, 3);
  CHECK(quarter.numerator() == 1);
  CHECK(quarter.exponent() == 2);
  CHECK(half + quarter == Dyadic(3, 2));
  CHECK(half - half == Dyadic());
  CHECK((half - Dyadic(1)).sign() == -1);
  CHECK(Dyadic(3, 2).scaled(1) == Dyadic(3, 3));
  CHECK(Dyadic(3, 2).to_double() == 0.75);
  CHECK(Dyadic(1, 3) < Dyadic(1, 2));
}

TEST_CASE("dyadic overflow throws instead of wrapping") {
  const Dyadic big(std::int64_t{1} << 62);
  CHECK_THROWS_AS(big + big, std::overflow_error);
}

TEST_CASE("planar map with 60 degrees and scale 1/3") {
  const Similitude f = Similitude::planar(1.0 / 3, 60, 0, 0);
  const auto& m = f.euclidean_map();
  const double c = std::cos(M_PI / 3), s = std::sin(M_PI / 3);
  CHECK(m.q[0] == doctest::Approx(c));
  CHECK(m.q[1] == doctest::Approx(-s));
  CHECK(m.q[2] == doctest::Approx(s));
  CHECK(m.q[3] == doctest::Approx(c));
  const Point p = apply(f, Point::euclidean({3, 0}));
  CHECK(p.coords()[0] == doctest::Approx(c));
  CHECK(p.coords()[1] == doctest::Approx(s));
}

TEST_CASE("quarter turns are exact") {
  const auto q = rotation_matrix(90);
  CHECK(q[0] == 0.0);
  CHECK(q[1] == -1.0);
  CHECK(q[2] == 1.0);
  CHECK(q[3] == 0.0);
  CHECK(rotation_matrix(180)[0] == -1.0);
}

TEST_CASE("invalid similitudes are rejected") {
  CHECK_THROWS(Similitude::planar(1.0, 0, 0, 0));
  CHECK_THROWS(Similitude::planar(0.0, 0, 0, 0));
  CHECK_THROWS(Similitude::euclidean(0.5, {1, 0.1, 0, 1}, {0, 0}));
  const Similitude bad = Similitude::euclidean_unchecked(0.5, {1, 0.5, 0, 1}, {0, 0});
  CHECK_FALSE(validate_similitude(bad, 32, 7).pass);
  CHECK(validate_similitude(Similitude::planar(0.5, 33, 1, 2), 32, 7).pass);
}

TEST_CASE("euclidean inverse, composition and fixed point") {
  const Similitude f = Similitude::planar(0.4, 30, 1, -2);
  const Similitude g = Similitude::planar(0.5, -75, 0.25, 3);
  const Point x = Point::euclidean({0.3, -1.7});
  const Point y = invert(f, apply(f, x));
  CHECK(distance(x, y) < 1e-12);
  CHECK(distance(apply(compose(f, g), x), apply(f, apply(g, x))) < 1e-12);
  const Point c = fixed_point(f);
  CHECK(distance(apply(f, c), c) < 1e-12);
  CHECK(compose(f, g).ratio() == doctest::Approx(0.2));
}

TEST_CASE("similitude ratio property on random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  const Similitude f = Similitude::planar(0.3, 123, 4, -1);
  for (int k = 0; k < 200; ++k) {
    const Point a = Point::euclidean({u(rng), u(rng)});
    const Point b = Point::euclidean({u(rng), u(rng)});
    CHECK(distance(apply(f, a), apply(f, b)) == doctest::Approx(0.3 * distance(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("mixed backends throw") {
  const Point e = Point::euclidean({0, 0});
  const Point s = Point::sequence({{0, Dyadic(1)}});
  CHECK_THROWS_AS(distance(e, s), BackendMismatch);
  CHECK_THROWS_AS(distance(e, Point::euclidean({0, 0, 0})), DimensionMismatch);
}

TEST_CASE("sequence maps: l1 distances are exact") {
  SparseSequence none;
  const Similitude odd = Similitude::sequence(1, 2, 1, none);
  const Point p = Point::sequence({{0, Dyadic(1)}, {3, Dyadic(-1, 2)}});
  const Point q = apply(odd, p);
  // index k goes to 2k+1, values halve
  CHECK(q.sequence_data().at(1) == Dyadic(1, 1));
  CHECK(q.sequence_data().at(7) == Dyadic(-1, 3));
  CHECK(distance_exact(p, Point::origin(Backend::sequence, 0)) == Dyadic(5, 2));
  CHECK(distance_exact(q, Point::origin(Backend::sequence, 0)) == Dyadic(5, 3));
  CHECK(invert(odd, q) == p);
  CHECK_THROWS_AS(invert(odd, Point::sequence({{2, Dyadic(1)}})), OutsideImage);
}

TEST_CASE("sequence ratio property holds exactly") {
  SparseSequence t;
  t.entries.push_back({0, Dyadic(1, 1)});
  const Similitude f = Similitude::sequence(1, 1, 0, t);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> v(-8, 8), ix(0, 12);
  for (int k = 0; k < 100; ++k) {
    std::vector<std::pair<std::int64_t, Dyadic>> ea, eb;
    for (int i = 0; i < 4; ++i) {
      ea.push_back({i * 20 + ix(rng), Dyadic(v(rng), 2)});
      eb.push_back({i * 20 + ix(rng), Dyadic(v(rng), 3)});
    }
    const Point a = Point::sequence(ea), b = Point::sequence(eb);
    CHECK(distance_exact(apply(f, a), apply(f, b)) == distance_exact(a, b).scaled(1));
  }
  CHECK(validate_similitude(f, 16, 5).pass);
}

TEST_CASE("spatial hash queries match brute force") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(Point::euclidean({u(rng), u(rng)}));
  const SpatialHash h(pts, 0.05);
  for (int k = 0; k < 50; ++k) {
    const Point q = Point::euclidean({u(rng), u(rng)});
    std::vector<std::size_t> expect;
    std::size_t best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (distance(q, pts[i]) <= 0.08) expect.push_back(i);
      if (distance(q, pts[i]) < distance(q, pts[best])) best = i;
    }
    CHECK(h.within(q, 0.08) == expect);
    CHECK(h.nearest(q).first == best);
  }
}
