#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ssb/spaces.hpp"

namespace ssb {

/// Bucketing coordinate: the plain coordinate for euclidean points, a fixed signed
/// sum of all entries for sequences. Both are 1-Lipschitz for the backend's metric.
double hash_coordinate(const Point& p, std::size_t axis);

/// Uniform bucket grid over the first (up to) three coordinates of a point set.
///
/// Both metrics dominate every hash_coordinate difference, so a point within
/// distance `radius` of a query is always in a bucket whose key differs by at most
/// ceil(radius / cell) per axis. Candidates are then filtered with the true metric.
/// Non-owning: the point span must outlive the hash.
class SpatialHash {
 public:
  SpatialHash(std::span<const Point> points, double cell_size);

  double cell_size() const noexcept { return cell_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// Calls visit(index) for every point that may lie within `radius` of q (superset).
  template <class Visit>
  void for_each_candidate(const Point& q, double radius, Visit&& visit) const;

  /// Indices with distance(q, p) <= radius, ascending.
  std::vector<std::size_t> within(const Point& q, double radius) const;
  bool any_within(const Point& q, double radius) const;
  /// (index, distance) of a nearest point; ties go to the lowest index.
  std::pair<std::size_t, double> nearest(const Point& q) const;

 private:
  using Key = std::array<std::int64_t, 3>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = 1469598103934665603ull;
      for (auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ull;
      return static_cast<std::size_t>(h);
    }
  };

  Key key_of(const Point& p) const;

  std::span<const Point> points_;
  double cell_;
  std::size_t axes_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> buckets_;
  Key lo_{};
  Key hi_{};
};

template <class Visit>
void SpatialHash::for_each_candidate(const Point& q, double radius, Visit&& visit) const {
  if (buckets_.empty()) return;
  const Key k = key_of(q);
  // one spare step absorbs rounding in the bucket coordinates
  const double steps = std::floor(radius / cell_) + 1;
  const auto reach = steps > 1e12 ? std::int64_t{1} << 40 : static_cast<std::int64_t>(steps);
  Key from{};
  Key to{};
  double volume = 1;
  for (std::size_t a = 0; a < 3; ++a) {
    from[a] = std::max(lo_[a], k[a] - reach);
    to[a] = std::min(hi_[a], k[a] + reach);
    if (from[a] > to[a]) return;
    volume *= static_cast<double>(to[a] - from[a] + 1);
  }
  if (volume > static_cast<double>(buckets_.size())) {
    for (const auto& [key, ids] : buckets_) {
      bool inside = true;
      for (std::size_t a = 0; a < 3; ++a) inside = inside && key[a] >= from[a] && key[a] <= to[a];
      if (inside) {
        for (auto id : ids) visit(id);
      }
    }
    return;
  }
  Key c{};
  for (c[0] = from[0]; c[0] <= to[0]; ++c[0]) {
    for (c[1] = from[1]; c[1] <= to[1]; ++c[1]) {
      for (c[2] = from[2]; c[2] <= to[2]; ++c[2]) {
        auto it = buckets_.find(c);
        if (it == buckets_.end()) continue;
        for (auto id : it->second) visit(id);
      }
    }
  }
}

}  // namespace ssb
