#include "ssb/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "ssb/error.hpp"
#include "ssb/spatial_hash.hpp"

namespace ssb {

InvariantBall invariant_ball(const IfsSpec& ifs) {
  InvariantBall ball{fixed_point(ifs.map(0)), 0.0};
  for (const auto& f : ifs.maps()) {
    ball.radius = std::max(ball.radius, distance(apply(f, ball.center), ball.center) / (1.0 - f.ratio()));
  }
  for (const auto& f : ifs.maps()) {
    const double reach = distance(apply(f, ball.center), ball.center) + f.ratio() * ball.radius;
    if (reach > ball.radius * (1 + 1e-12) + 1e-300) throw Error("internal: invariant ball containment failed");
  }
  return ball;
}

int AttractorApprox::branch(std::size_t i) const {
  if (depth_ == 0) return 0;
  return static_cast<int>(i / branch_size()) + 1;
}

std::size_t AttractorApprox::branch_begin(int symbol) const {
  if (depth_ == 0) return 0;
  return static_cast<std::size_t>(symbol - 1) * branch_size();
}

AttractorApprox approximate(const IfsSpec& ifs, int depth, std::uint64_t budget) {
  checked_count(ifs.size(), depth, budget);
  const InvariantBall ball = invariant_ball(ifs);

  AttractorApprox a;
  a.depth_ = depth;
  a.n_maps_ = ifs.size();
  a.center_ = ball.center;
  a.ball_radius_ = ball.radius;
  a.points_ = {ball.center};
  a.radii_ = {ball.radius};
  // level k+1 lists f_1(level k), f_2(level k), ... so index order is lexicographic in the address
  for (int k = 0; k < depth; ++k) {
    std::vector<Point> next;
    std::vector<double> next_r;
    next.reserve(a.points_.size() * ifs.size());
    next_r.reserve(a.points_.size() * ifs.size());
    for (const auto& f : ifs.maps()) {
      for (std::size_t m = 0; m < a.points_.size(); ++m) {
        next.push_back(apply(f, a.points_[m]));
        next_r.push_back(f.ratio() * a.radii_[m]);
      }
    }
    a.points_ = std::move(next);
    a.radii_ = std::move(next_r);
  }
  a.max_radius_ = *std::max_element(a.radii_.begin(), a.radii_.end());
  return a;
}

double directed_hausdorff(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff distance of an empty set");
  if (std::max(a.size(), b.size()) < 2000) {
    double worst = 0;
    for (const auto& p : a) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : b) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  }
  const std::size_t axes = b.front().backend() == Backend::euclidean ? std::min<std::size_t>(b.front().dim(), 3) : 3;
  double extent = 0;
  for (std::size_t ax = 0; ax < axes; ++ax) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& q : b) {
      lo = std::min(lo, q.axis(ax));
      hi = std::max(hi, q.axis(ax));
    }
    extent = std::max(extent, hi - lo);
  }
  const double cell = extent > 0 ? extent / std::pow(static_cast<double>(b.size()), 1.0 / static_cast<double>(axes)) : 1.0;
  const SpatialHash hash(b, cell);
  double worst = 0;
  for (const auto& p : a) worst = std::max(worst, hash.nearest(p).second);
  return worst;
}

double hausdorff_distance(std::span<const Point> a, std::span<const Point> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double hausdorff_distance_brute(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff distance of an empty set");
  auto directed = [](std::span<const Point> x, std::span<const Point> y) {
    double worst = 0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double self_consistency(const IfsSpec& ifs, int depth, std::uint64_t budget) {
  const AttractorApprox coarse = approximate(ifs, depth, budget);
  const AttractorApprox fine = approximate(ifs, depth + 1, budget);
  return hausdorff_distance(coarse.points(), fine.points());
}

bool CellCover::contains(const std::vector<std::int64_t>& cell) const {
  return std::binary_search(cells.begin(), cells.end(), cell);
}

CellCover cell_cover(std::span<const Point> points, double h) {
  if (!(h > 0)) throw std::invalid_argument("cell size must be positive");
  CellCover cover;
  cover.h = h;
  if (points.empty()) return cover;
  if (points.front().backend() != Backend::euclidean) {
    throw Unsupported("raster unavailable: cell covers need the euclidean backend");
  }
  cover.dim = points.front().dim();
  cover.cells.reserve(points.size());
  for (const auto& p : points) {
    std::vector<std::int64_t> key(cover.dim);
    for (std::size_t k = 0; k < cover.dim; ++k) key[k] = static_cast<std::int64_t>(std::floor(p.coords()[k] / h));
    cover.cells.push_back(std::move(key));
  }
  std::sort(cover.cells.begin(), cover.cells.end());
  cover.cells.erase(std::unique(cover.cells.begin(), cover.cells.end()), cover.cells.end());
  return cover;
}

CellCover cell_cover(const AttractorApprox& a, double h) {
  if (a.backend() != Backend::euclidean) throw Unsupported("raster unavailable: cell covers need the euclidean backend");
  return cell_cover(a.points(), h);
}

namespace {

// apart from rounding, two representatives at this distance are the same point of K
constexpr double kSamePoint = 1e-12;

// pairs kept per refinement level before giving up and answering "may intersect"
constexpr std::size_t kPairCap = 4096;

}  // namespace

Similitude address_map(const IfsSpec& ifs, const Address& a) {
  if (a.empty()) throw std::invalid_argument("the empty address has no map");
  check_symbols(a, ifs.size());
  Similitude f = ifs.map(static_cast<std::size_t>(a[0] - 1));
  for (std::size_t k = 1; k < a.size(); ++k) f = compose(f, ifs.map(static_cast<std::size_t>(a[k] - 1)));
  return f;
}

CellRefiner::CellRefiner(const IfsSpec& ifs, int levels, std::uint64_t budget) : n_maps_(ifs.size()) {
  if (levels < 0) throw std::invalid_argument("refine must be non-negative");
  for (int l = 0; l <= levels; ++l) levels_.push_back(approximate(ifs, l, budget));
}

bool CellRefiner::may_intersect(const Similitude& f, const Similitude& g) const {
  const std::size_t n = n_maps_;
  const double rf = f.ratio();
  const double rg = g.ratio();
  // per level caches of sub-cell centers f(p_M), g(p_M)
  std::vector<std::vector<std::optional<Point>>> fc(levels_.size());
  std::vector<std::vector<std::optional<Point>>> gc(levels_.size());
  auto center = [&](std::vector<std::vector<std::optional<Point>>>& cache, const Similitude& h, std::size_t l,
                    std::size_t idx) -> const Point& {
    if (cache[l].empty()) cache[l].resize(levels_[l].size());
    auto& slot = cache[l][idx];
    if (!slot) slot = apply(h, levels_[l].point(idx));
    return *slot;
  };

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  {
    const double d = distance(center(fc, f, 0, 0), center(gc, g, 0, 0));
    if (d > (rf + rg) * levels_[0].radius(0)) return false;
    if (d <= kSamePoint) return true;
    pairs.push_back({0, 0});
  }
  for (std::size_t l = 1; l < levels_.size(); ++l) {
    std::vector<std::pair<std::size_t, std::size_t>> next;
    const AttractorApprox& lv = levels_[l];
    for (const auto& [a, b] : pairs) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ca = a * n + i;
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t cb = b * n + j;
          const double d = distance(center(fc, f, l, ca), center(gc, g, l, cb));
          if (d > rf * lv.radius(ca) + rg * lv.radius(cb)) continue;
          if (d <= kSamePoint) return true;
          next.push_back({ca, cb});
        }
      }
    }
    if (next.empty()) return false;
    if (next.size() > kPairCap) return true;
    pairs = std::move(next);
  }
  return true;
}

}  // namespace ssb
