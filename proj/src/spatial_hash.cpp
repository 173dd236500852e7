#include "ssb/spatial_hash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssb {

SpatialHash::SpatialHash(std::span<const Point> points, double cell_size)
    : points_(points), cell_(cell_size > 0 && std::isfinite(cell_size) ? cell_size : 1.0) {
  axes_ = 3;
  if (!points_.empty() && points_.front().backend() == Backend::euclidean) {
    axes_ = std::min<std::size_t>(points_.front().dim(), 3);
  }
  lo_.fill(std::numeric_limits<std::int64_t>::max());
  hi_.fill(std::numeric_limits<std::int64_t>::min());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Key k = key_of(points_[i]);
    buckets_[k].push_back(i);
    for (std::size_t a = 0; a < 3; ++a) {
      lo_[a] = std::min(lo_[a], k[a]);
      hi_[a] = std::max(hi_[a], k[a]);
    }
  }
}

double hash_coordinate(const Point& p, std::size_t a) {
  if (p.backend() == Backend::euclidean) return p.axis(a);
  // a signed sum of coordinates is still 1-Lipschitz for l1, and it separates points
  // that only differ far out in the sequence
  double s = 0;
  for (const auto& [k, v] : p.sequence_data().entries) {
    std::uint64_t z = static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ull + (a + 1) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 31)) * 0x94D049BB133111EBull;
    z ^= z >> 29;
    s += (z & 1) ? v.to_double() : -v.to_double();
  }
  return s;
}

SpatialHash::Key SpatialHash::key_of(const Point& p) const {
  Key k{0, 0, 0};
  for (std::size_t a = 0; a < axes_; ++a) {
    const double v = std::floor(hash_coordinate(p, a) / cell_);
    k[a] = static_cast<std::int64_t>(std::clamp(v, -4.0e18, 4.0e18));
  }
  return k;
}

std::vector<std::size_t> SpatialHash::within(const Point& q, double radius) const {
  std::vector<std::size_t> out;
  for_each_candidate(q, radius, [&](std::size_t i) {
    if (distance(q, points_[i]) <= radius) out.push_back(i);
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool SpatialHash::any_within(const Point& q, double radius) const {
  bool found = false;
  for_each_candidate(q, radius, [&](std::size_t i) {
    if (!found && distance(q, points_[i]) <= radius) found = true;
  });
  return found;
}

std::pair<std::size_t, double> SpatialHash::nearest(const Point& q) const {
  if (points_.empty()) return {0, std::numeric_limits<double>::infinity()};
  double radius = cell_;
  for (;;) {
    std::size_t best = points_.size();
    double best_d = std::numeric_limits<double>::infinity();
    std::size_t seen = 0;
    for_each_candidate(q, radius, [&](std::size_t i) {
      ++seen;
      const double d = distance(q, points_[i]);
      if (d < best_d || (d == best_d && i < best)) {
        best_d = d;
        best = i;
      }
    });
    // every point at distance <= radius was a candidate, so a hit inside the radius is exact
    if (best_d <= radius || seen == points_.size()) return {best, best_d};
    radius *= 2;
  }
}

}  // namespace ssb
