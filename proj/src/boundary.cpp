#include "ssb/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <stdexcept>

#include "ssb/analysis.hpp"
#include "ssb/error.hpp"
#include "ssb/spatial_hash.hpp"

namespace ssb {

double default_tolerance(const IfsSpec& ifs, int depth) {
  return 4.0 * std::pow(ifs.r_max(), depth) * invariant_ball(ifs).radius;
}

std::vector<OverlapWitness> all_overlap_pairs(const AttractorApprox& a, double tau) {
  std::vector<OverlapWitness> out;
  if (a.depth() == 0) return out;
  const SpatialHash hash(a.points(), tau);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int bi = a.branch(i);
    hash.for_each_candidate(a.point(i), tau, [&](std::size_t n) {
      const int bn = a.branch(n);
      if (bn == bi) return;
      const double gap = distance(a.point(i), a.point(n));
      if (gap > tau) return;
      out.push_back({bi, bn, i, n, gap, a.radius(i) + a.radius(n) <= tau});
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<OverlapWitness> overlap_pairs(const AttractorApprox& a, int j, int k, double tau) {
  if (j == k) throw std::invalid_argument("overlap_pairs needs distinct branches");
  if (j < 1 || k < 1 || static_cast<std::size_t>(std::max(j, k)) > a.n_maps()) {
    throw std::out_of_range("branch symbol out of range");
  }
  std::vector<OverlapWitness> out;
  if (a.depth() == 0) return out;
  const std::span<const Point> all = a.points();
  const std::size_t kb = a.branch_begin(k);
  const SpatialHash hash(all.subspan(kb, a.branch_size()), tau);
  for (std::size_t i = a.branch_begin(j); i < a.branch_end(j); ++i) {
    hash.for_each_candidate(a.point(i), tau, [&](std::size_t local) {
      const std::size_t n = kb + local;
      const double gap = distance(a.point(i), a.point(n));
      if (gap <= tau) out.push_back({j, k, i, n, gap, a.radius(i) + a.radius(n) <= tau});
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> BoundaryApprox::points() const {
  std::vector<Point> out;
  out.reserve(witnesses.size());
  for (const auto& w : witnesses) out.push_back(w.point);
  return out;
}

BoundaryApprox similarity_boundary(const IfsSpec& ifs, const AttractorApprox& a, double tau, int refine) {
  if (!(tau > 0)) throw std::invalid_argument("tolerance must be positive");
  BoundaryApprox b;
  b.depth = a.depth();
  b.tau = tau;
  const auto pairs = all_overlap_pairs(a, tau);
  b.pair_count = pairs.size();
  std::optional<CellRefiner> refiner;
  if (refine > 0 && a.depth() > 0) refiner.emplace(ifs, refine);
  std::unordered_map<std::size_t, Similitude> maps;
  auto map_of = [&](std::size_t index) -> const Similitude& {
    auto it = maps.find(index);
    if (it == maps.end()) it = maps.emplace(index, address_map(ifs, a.address(index))).first;
    return it->second;
  };
  std::map<std::size_t, OverlapWitness> first;
  for (const auto& p : pairs) {
    if (first.count(p.index_i)) continue;
    if (refiner && !refiner->may_intersect(map_of(p.index_i), map_of(p.index_j))) {
      ++b.pruned;
      continue;
    }
    b.certified = b.certified && p.certified;
    first.emplace(p.index_i, p);
  }
  b.witnesses.reserve(first.size());
  for (const auto& [index, src] : first) {
    const Similitude& f = ifs.map(static_cast<std::size_t>(src.j - 1));
    const double radius = a.radius(index) / f.ratio();
    b.witnesses.push_back({invert(f, a.point(index)), radius, src});
    b.max_radius = std::max(b.max_radius, radius);
  }
  return b;
}

BoundaryApprox similarity_boundary(const IfsSpec& ifs, int depth, double tau, std::uint64_t budget, int refine) {
  return similarity_boundary(ifs, approximate(ifs, depth, budget), tau, refine);
}

namespace {

std::size_t hull_axes(const Point& p) {
  return p.backend() == Backend::euclidean ? p.dim() : 3;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
};

}  // namespace

std::vector<WitnessCluster> cluster_witnesses(const BoundaryApprox& b, double link) {
  if (link <= 0) link = 2 * b.tau;
  const std::vector<Point> pts = b.points();
  std::vector<WitnessCluster> out;
  if (pts.empty()) return out;
  DisjointSets sets(pts.size());
  const SpatialHash hash(pts, link);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    hash.for_each_candidate(pts[i], link, [&](std::size_t n) {
      if (n > i && distance(pts[i], pts[n]) <= link) sets.unite(i, n);
    });
  }
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t root = sets.find(i);
    auto [it, fresh] = slot.try_emplace(root, out.size());
    if (fresh) {
      const std::size_t axes = hull_axes(pts[i]);
      out.push_back({{}, std::vector<double>(axes, std::numeric_limits<double>::infinity()),
                     std::vector<double>(axes, -std::numeric_limits<double>::infinity())});
    }
    WitnessCluster& c = out[it->second];
    c.members.push_back(i);
    for (std::size_t ax = 0; ax < c.lo.size(); ++ax) {
      c.lo[ax] = std::min(c.lo[ax], pts[i].axis(ax));
      c.hi[ax] = std::max(c.hi[ax], pts[i].axis(ax));
    }
  }
  return out;
}

std::vector<std::size_t> complement_U(const AttractorApprox& a, const BoundaryApprox& b, double tau) {
  std::vector<std::size_t> out;
  const std::vector<Point> wpts = b.points();
  const SpatialHash hash(wpts, tau);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a.radius(i);
    bool near = false;
    hash.for_each_candidate(a.point(i), tau + e + b.max_radius, [&](std::size_t w) {
      if (!near && distance(a.point(i), wpts[w]) <= tau + e + b.witnesses[w].radius) near = true;
    });
    if (!near) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> complement_U_pointwise(const IfsSpec& ifs, const AttractorApprox& a, double tau) {
  std::vector<std::size_t> out;
  if (a.depth() == 0) {
    out.resize(a.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  const SpatialHash hash(a.points(), tau);
  for (std::size_t m = 0; m < a.size(); ++m) {
    bool dropped = false;
    for (std::size_t i = 0; i < ifs.size() && !dropped; ++i) {
      const Point q = apply(ifs.map(i), a.point(m));
      const double reach = ifs.map(i).ratio() * tau;
      const int own = static_cast<int>(i) + 1;
      hash.for_each_candidate(q, reach, [&](std::size_t n) {
        if (!dropped && a.branch(n) != own && distance(q, a.point(n)) <= reach) dropped = true;
      });
    }
    if (!dropped) out.push_back(m);
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::invariant:
      return "invariant";
    case Verdict::violated:
      return "violated";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "?";
}

InvarianceVerdict check_inverse_invariance(const IfsSpec& ifs, const BoundaryApprox& b, const AttractorApprox& a,
                                           double tau) {
  InvarianceVerdict v;
  v.tau_prime = tau * (1 + 1 / (ifs.r_min() * ifs.r_min()));
  const double in_band = a.max_radius() + tau;
  const double out_band = 3 * in_band;
  const std::vector<Point> wpts = b.points();
  const SpatialHash khash(a.points(), in_band);
  const SpatialHash whash(wpts, v.tau_prime);
  bool undecided_far = false;

  for (std::size_t w = 0; w < wpts.size(); ++w) {
    for (std::size_t i = 0; i < ifs.size(); ++i) {
      Point x;
      try {
        x = invert(ifs.map(i), wpts[w]);
      } catch (const OutsideImage&) {
        ++v.outside;
        continue;
      }
      double nearest = std::numeric_limits<double>::infinity();
      khash.for_each_candidate(x, out_band, [&](std::size_t n) { nearest = std::min(nearest, distance(x, a.point(n))); });
      if (nearest >= out_band) {
        ++v.outside;
        continue;
      }
      const bool in_k = nearest <= in_band;
      if (in_k) {
        ++v.in_k;
      } else {
        ++v.undecided;
      }
      double gap = std::numeric_limits<double>::infinity();
      whash.for_each_candidate(x, v.tau_prime, [&](std::size_t n) { gap = std::min(gap, distance(x, wpts[n])); });
      if (gap <= v.tau_prime) continue;
      if (!in_k) {
        ++v.undecided_far;
        undecided_far = true;
        continue;
      }
      if (v.status != Verdict::violated) {
        v.status = Verdict::violated;
        v.map = static_cast<int>(i) + 1;
        v.witness = w;
        v.preimage = x;
        // the true gap may exceed tau'; the nearest witness overall is what gets reported
        double far = std::numeric_limits<double>::infinity();
        for (const auto& p : wpts) far = std::min(far, distance(x, p));
        v.preimage_gap = far;
      }
    }
  }
  if (v.status != Verdict::violated) v.status = undecided_far ? Verdict::indeterminate : Verdict::invariant;
  return v;
}

TileBoundary tile_topological_boundary(const IfsSpec& ifs, int depth, double h, std::uint64_t budget) {
  if (ifs.backend() != Backend::euclidean) throw Unsupported("raster unavailable: tile mode needs the euclidean backend");
  const double alpha = similarity_dimension(ifs.ratios());
  const double n = static_cast<double>(ifs.dim());
  if (std::abs(alpha - n) > 1e-9) {
    throw NotATile("similarity dimension " + std::to_string(alpha) + " differs from ambient dimension " +
                   std::to_string(ifs.dim()));
  }
  const AttractorApprox a = approximate(ifs, depth, budget);
  if (h <= 0) h = 2 * a.max_radius();
  if (h < 2 * a.max_radius()) throw std::invalid_argument("cell size must be at least twice the largest cell radius");
  const CellCover cover = cell_cover(a, h);
  TileBoundary out;
  out.h = h;
  for (const auto& cell : cover.cells) {
    bool edge = false;
    auto probe = cell;
    for (std::size_t ax = 0; ax < cover.dim && !edge; ++ax) {
      for (int s : {-1, 1}) {
        probe[ax] = cell[ax] + s;
        if (!cover.contains(probe)) edge = true;
        probe[ax] = cell[ax];
      }
    }
    if (!edge) continue;
    std::vector<double> c(cover.dim);
    for (std::size_t ax = 0; ax < cover.dim; ++ax) c[ax] = (static_cast<double>(cell[ax]) + 0.5) * h;
    out.centers.push_back(Point::euclidean(std::move(c)));
  }
  return out;
}

BoundaryComparison compare_boundaries(const BoundaryApprox& sim, const TileBoundary& topo, double tau) {
  BoundaryComparison c;
  c.tolerance = tau + sim.max_radius + topo.h;
  const std::vector<Point> spts = sim.points();
  if (spts.empty() || topo.centers.empty()) {
    c.sim_to_topo = spts.empty() ? 0 : std::numeric_limits<double>::infinity();
    c.topo_to_sim = topo.centers.empty() ? 0 : std::numeric_limits<double>::infinity();
  } else {
    c.sim_to_topo = directed_hausdorff(spts, topo.centers);
    c.topo_to_sim = directed_hausdorff(topo.centers, spts);
  }
  c.containment = c.sim_to_topo <= c.tolerance;
  c.equality = c.containment && c.topo_to_sim <= c.tolerance;
  return c;
}

}  // namespace ssb
