#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "ssb/analysis.hpp"
#include "ssb/boundary.hpp"
#include "ssb/error.hpp"
#include "ssb/spatial_hash.hpp"
#include "ssb/specfile.hpp"

using namespace ssb;

TEST_CASE("hashed overlap detection equals the all-pairs oracle") {
  for (const auto& name : gallery_names()) {
    const IfsSpec ifs = gallery(name).ifs();
    for (int depth = 1; depth <= 4; ++depth) {
      const AttractorApprox a = approximate(ifs, depth);
      const double tau = default_tolerance(ifs, depth);
      CAPTURE(name);
      CAPTURE(depth);
      CHECK(all_overlap_pairs(a, tau) == brute_overlaps(a, tau));
    }
  }
}

TEST_CASE("single pair query is the slice of the full list") {
  const IfsSpec ifs = gallery("sierpinski").ifs();
  const AttractorApprox a = approximate(ifs, 4);
  const double tau = default_tolerance(ifs, 4);
  std::vector<OverlapWitness> slice;
  for (const auto& w : all_overlap_pairs(a, tau)) {
    if (w.j == 2 && w.k == 3) slice.push_back(w);
  }
  CHECK_FALSE(slice.empty());
  CHECK(overlap_pairs(a, 2, 3, tau) == slice);
}

TEST_CASE("cantor set has an empty boundary") {
  const IfsSpec ifs = gallery("cantor2").ifs();
  const BoundaryApprox b = similarity_boundary(ifs, 8, default_tolerance(ifs, 8));
  CHECK(b.empty());
  CHECK(cluster_witnesses(b).empty());
}

TEST_CASE("segment halves meet in one point, boundary is both ends") {
  const IfsSpec ifs = gallery("segment2").ifs();
  const int depth = 8;
  const double tau = default_tolerance(ifs, depth);
  const AttractorApprox a = approximate(ifs, depth);
  const BoundaryApprox b = similarity_boundary(ifs, a, tau);
  const auto clusters = cluster_witnesses(b);
  REQUIRE(clusters.size() == 2);
  std::vector<double> ends = {clusters[0].lo[0], clusters[1].lo[0]};
  std::sort(ends.begin(), ends.end());
  CHECK(ends[0] == doctest::Approx(0).epsilon(0).scale(1).epsilon(2 * tau));
  CHECK(std::abs(ends[1] - 1) <= 2 * tau);
  CHECK(check_inverse_invariance(ifs, b, a, tau).status == Verdict::invariant);
}

TEST_CASE("koch boundary is the two endpoints") {
  const IfsSpec ifs = gallery("koch").ifs();
  const int depth = 7;
  const double tau = default_tolerance(ifs, depth);
  const BoundaryApprox b = similarity_boundary(ifs, depth, tau);
  CHECK(b.certified);
  const auto clusters = cluster_witnesses(b);
  REQUIRE(clusters.size() == 2);
  for (const auto& c : clusters) {
    const double x = c.lo[0] < 0.5 ? 0.0 : 1.0;
    CHECK(std::abs(c.lo[0] - x) < 1e-2);
    CHECK(std::abs(c.hi[0] - x) < 1e-2);
    CHECK(std::abs(c.hi[1]) < 1e-2);
  }
}

TEST_CASE("witnesses are preimages of overlap points") {
  const IfsSpec ifs = gallery("sierpinski").ifs();
  const AttractorApprox a = approximate(ifs, 5);
  const double tau = default_tolerance(ifs, 5);
  const BoundaryApprox b = similarity_boundary(ifs, a, tau);
  REQUIRE_FALSE(b.empty());
  for (const auto& w : b.witnesses) {
    const auto& f = ifs.map(static_cast<std::size_t>(w.source.j - 1));
    CHECK(distance(apply(f, w.point), a.point(w.source.index_i)) < 1e-12);
    CHECK(w.radius == doctest::Approx(a.radius(w.source.index_i) / f.ratio()));
  }
}

TEST_CASE("inverse invariance verdicts on the squares") {
  for (const auto& [name, expect] : {std::pair{"square4", Verdict::invariant}, std::pair{"square4-rotated", Verdict::violated}}) {
    const IfsSpec ifs = gallery(name).ifs();
    const int depth = 7;
    const double tau = default_tolerance(ifs, depth);
    const AttractorApprox a = approximate(ifs, depth);
    const BoundaryApprox b = similarity_boundary(ifs, a, tau);
    const InvarianceVerdict v = check_inverse_invariance(ifs, b, a, tau);
    CAPTURE(name);
    CHECK(v.status == expect);
    if (expect == Verdict::violated) {
      REQUIRE(v.preimage);
      CHECK(v.map >= 1);
      CHECK(v.preimage_gap > v.tau_prime);
    }
  }
}

TEST_CASE("complement U avoids every witness") {
  const IfsSpec ifs = gallery("koch").ifs();
  const AttractorApprox a = approximate(ifs, 6);
  const double tau = default_tolerance(ifs, 6);
  const BoundaryApprox b = similarity_boundary(ifs, a, tau);
  const auto u = complement_U(a, b, tau);
  CHECK(u.size() < a.size());
  CHECK(u.size() > a.size() / 2);
  for (auto i : u) {
    for (const auto& w : b.witnesses) CHECK(distance(a.point(i), w.point) > tau);
  }
}

TEST_CASE("pointwise U agrees with K minus B near the witnesses only") {
  for (const char* name : {"koch", "square4", "sierpinski"}) {
    const IfsSpec ifs = gallery(name).ifs();
    const int depth = 5;
    const double tau = default_tolerance(ifs, depth);
    const AttractorApprox a = approximate(ifs, depth);
    const BoundaryApprox b = similarity_boundary(ifs, a, tau);
    const auto u1 = complement_U(a, b, tau);
    const auto u2 = complement_U_pointwise(ifs, a, tau);
    std::vector<std::size_t> diff;
    std::set_symmetric_difference(u1.begin(), u1.end(), u2.begin(), u2.end(), std::back_inserter(diff));
    const auto wp = b.points();
    const SpatialHash h(wp, tau);
    CAPTURE(name);
    for (auto i : diff) {
      CHECK(h.nearest(a.point(i)).second <= 2 * tau + a.radius(i) + b.max_radius + tau / ifs.r_min());
    }
  }
}

TEST_CASE("SOSC_K candidates on the Koch curve") {
  const IfsSpec ifs = gallery("koch").ifs();
  const int depth = 6;
  const double tau = default_tolerance(ifs, depth);
  const AttractorApprox a = approximate(ifs, depth);
  const BoundaryApprox b = similarity_boundary(ifs, a, tau);

  const auto u = complement_U(a, b, tau);
  CHECK(sosc_k_witness(ifs, a, u, tau, b.points()).pass);

  // K minus a neighbourhood of the origin only: (1, 0) stays in U and f_1(1, 0) = (1/3, 0) lies in K_2
  const Point origin = Point::euclidean({0, 0});
  std::vector<std::size_t> u0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (distance(a.point(i), origin) > tau + a.radius(i) + b.max_radius) u0.push_back(i);
  }
  const SoscResult r = sosc_k_witness(ifs, a, u0, tau, {origin});
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.clause_disjoint);
}

TEST_CASE("tile raster boundary against the similarity boundary") {
  const int depth = 6;
  {
    const IfsSpec ifs = gallery("square4").ifs();
    const double tau = default_tolerance(ifs, depth);
    const auto cmp = compare_boundaries(similarity_boundary(ifs, depth, tau), tile_topological_boundary(ifs, depth), tau);
    CHECK(cmp.containment);
    CHECK(cmp.equality);
  }
  {
    const IfsSpec ifs = gallery("square4-rotated").ifs();
    const double tau = default_tolerance(ifs, depth);
    const auto cmp = compare_boundaries(similarity_boundary(ifs, depth, tau), tile_topological_boundary(ifs, depth), tau);
    CHECK(cmp.containment);
    CHECK_FALSE(cmp.equality);
  }
  CHECK_THROWS_AS(tile_topological_boundary(gallery("koch").ifs(), 4), NotATile);
  CHECK_THROWS_AS(tile_topological_boundary(gallery("l1-schief").ifs(), 4), Unsupported);
}

TEST_CASE("l1 example: exact dyadic witnesses at the origin") {
  const IfsSpec ifs = gallery("l1-schief").ifs();
  const int depth = 6;
  const double tau = default_tolerance(ifs, depth);
  const AttractorApprox a = approximate(ifs, depth);
  CHECK(overlap_pairs(a, 3, 1, tau).empty());
  CHECK(overlap_pairs(a, 3, 2, tau).empty());
  const BoundaryApprox b = similarity_boundary(ifs, a, tau);
  REQUIRE_FALSE(b.empty());
  CHECK(cluster_witnesses(b).size() == 1);
  const Point origin = Point::origin(Backend::sequence, 0);
  for (const auto& w : b.witnesses) {
    CHECK(w.point.backend() == Backend::sequence);
    // a true contact lies within tau + 2 e_max of p_I; pulled back by f_j^-1
    CHECK(distance_exact(w.point, origin).to_double() <= (tau + 2 * a.max_radius()) / ifs.r_min() + w.radius);
  }
}

TEST_CASE("all of the square is not an SOSC_K candidate") {
  const IfsSpec ifs = gallery("square4").ifs();
  const AttractorApprox a = approximate(ifs, 4);
  std::vector<std::size_t> all(a.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const SoscResult r = sosc_k_witness(ifs, a, all, default_tolerance(ifs, 4));
  CHECK_FALSE(r.clause_disjoint);
}

TEST_CASE("pruning keeps true contacts and drops separated pairs") {
  const IfsSpec ifs = gallery("square4").ifs();
  const int depth = 5;
  const double tau = default_tolerance(ifs, depth);
  const AttractorApprox a = approximate(ifs, depth);
  const BoundaryApprox raw = similarity_boundary(ifs, a, tau, 0);
  const BoundaryApprox kept = similarity_boundary(ifs, a, tau);
  CHECK(raw.pruned == 0);
  CHECK(kept.pruned > 0);
  CHECK(kept.witnesses.size() < raw.witnesses.size());
  // every edge point of the square is still close to a kept witness
  for (int s = 0; s <= 40; ++s) {
    const Point q = Point::euclidean({s / 40.0, 0.0});
    double best = 1e9;
    for (const auto& w : kept.witnesses) best = std::min(best, distance(q, w.point));
    CHECK(best <= tau);
  }
}
