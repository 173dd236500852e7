#pragma once

// Certified finite approximations of the attractor K.
//
// A depth-n approximation holds p_I = f_I(c) for every |I| = n, where c is the
// fixed point of f_1 and ball(c, R) is mapped into itself by every f_i. Hence
// K_I = f_I(K) lies in ball(p_I, r_I R) for every I.

#include <cstdint>
#include <span>
#include <vector>

#include "ssb/codespace.hpp"
#include "ssb/spaces.hpp"

namespace ssb {

struct InvariantBall {
  Point center;
  double radius = 0;
};

InvariantBall invariant_ball(const IfsSpec& ifs);

class AttractorApprox {
 public:
  int depth() const noexcept { return depth_; }
  std::size_t n_maps() const noexcept { return n_maps_; }
  Backend backend() const noexcept { return center_.backend(); }
  const Point& center() const noexcept { return center_; }
  /// Invariant-ball radius R.
  double ball_radius() const noexcept { return ball_radius_; }

  std::size_t size() const noexcept { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const noexcept { return points_; }
  double radius(std::size_t i) const { return radii_[i]; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  double max_radius() const noexcept { return max_radius_; }

  Address address(std::size_t i) const { return address_from_index(i, depth_, n_maps_); }
  /// First symbol of the address at i (1-based); 0 at depth 0.
  int branch(std::size_t i) const;
  /// Indices of branch `symbol` form the half-open range [branch_begin, branch_end).
  std::size_t branch_begin(int symbol) const;
  std::size_t branch_end(int symbol) const { return branch_begin(symbol) + branch_size(); }
  std::size_t branch_size() const noexcept { return depth_ == 0 ? points_.size() : points_.size() / n_maps_; }

 private:
  friend AttractorApprox approximate(const IfsSpec& ifs, int depth, std::uint64_t budget);

  int depth_ = 0;
  std::size_t n_maps_ = 0;
  Point center_;
  double ball_radius_ = 0;
  double max_radius_ = 0;
  std::vector<Point> points_;
  std::vector<double> radii_;
};

AttractorApprox approximate(const IfsSpec& ifs, int depth, std::uint64_t budget = kDefaultBudget);

/// f_I = f_{i1} o ... o f_{ik}; the address must be nonempty.
Similitude address_map(const IfsSpec& ifs, const Address& a);

/// Disjointness test for two cells K_F = F(K), K_G = G(K) by refining both a few levels.
class CellRefiner {
 public:
  CellRefiner(const IfsSpec& ifs, int levels, std::uint64_t budget = kDefaultBudget);

  int levels() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  /// Depth-l approximation of K: the sub-cell pattern reused for every pair.
  const AttractorApprox& level(std::size_t l) const { return levels_.at(l); }

  /// False only when K_F and K_G are certainly disjoint. Gives up (true) past a pair cap.
  bool may_intersect(const Similitude& f, const Similitude& g) const;

 private:
  std::size_t n_maps_;
  std::vector<AttractorApprox> levels_;
};

/// Hausdorff distance between finite point sets; spatial hash above ~2000 points, brute force below.
double hausdorff_distance(std::span<const Point> a, std::span<const Point> b);
/// All-pairs reference implementation.
double hausdorff_distance_brute(std::span<const Point> a, std::span<const Point> b);
/// sup over a of the distance to the nearest point of b.
double directed_hausdorff(std::span<const Point> a, std::span<const Point> b);

/// D(A_n, A_{n+1}); converges like r_max^n R.
double self_consistency(const IfsSpec& ifs, int depth, std::uint64_t budget = kDefaultBudget);

/// Occupied cells of the grid of size h (euclidean backend only).
struct CellCover {
  double h = 0;
  std::size_t dim = 0;
  std::vector<std::vector<std::int64_t>> cells;  // sorted, unique

  std::size_t size() const noexcept { return cells.size(); }
  bool contains(const std::vector<std::int64_t>& cell) const;
};

CellCover cell_cover(const AttractorApprox& a, double h);
CellCover cell_cover(std::span<const Point> points, double h);

}  // namespace ssb
