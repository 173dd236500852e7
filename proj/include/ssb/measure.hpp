#pragma once

// Interval bounds for the image measure mu = nu o g^-1 on K.
//
// A depth-n cylinder C_L carries mass nu(C_L) = r_L^alpha and g(C_L) = K_L lies in
// ball(p_L, e_L). Lower bounds only count cells certainly inside a region; upper bounds
// add every cell that may meet it. "May meet" refines both cells a few extra levels and
// drops a pair once every pair of sub-balls is disjoint.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ssb/attractor.hpp"
#include "ssb/boundary.hpp"
#include "ssb/codespace.hpp"
#include "ssb/spaces.hpp"
#include "ssb/spatial_hash.hpp"

namespace ssb {

struct IntervalEstimate {
  double lower = 0;
  double upper = 0;
  int depth = 0;
  std::string region;
  bool clamped = false;        // lower was raised by the a-priori bound r_i^alpha
  double geometric_lower = 0;  // lower before any clamp

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

enum class Classification { inside, outside, straddles };

/// Conservative three-valued test of ball(point, radius) against a region.
struct RegionPredicate {
  std::string name;
  std::function<Classification(const Point&, double)> classify;

  static RegionPredicate everything();
  static RegionPredicate nothing();
  /// Closed axis-aligned box (euclidean).
  static RegionPredicate box(std::vector<double> lo, std::vector<double> hi);
  /// Closed metric ball (either backend).
  static RegionPredicate ball(Point center, double radius);
};

class MeasureContext {
 public:
  MeasureContext(const IfsSpec& ifs, int depth, int refine = 3, std::uint64_t budget = kDefaultBudget);

  const IfsSpec& ifs() const noexcept { return ifs_; }
  int depth() const noexcept { return approx_.depth(); }
  int refine() const noexcept { return refine_; }
  const AttractorApprox& approx() const noexcept { return approx_; }
  const RatioTable& ratios() const noexcept { return ratios_; }
  double alpha() const noexcept { return ratios_.alpha(); }
  /// nu(C_L) for the depth-n cell with index L.
  double mass(std::size_t index) const { return masses_[index]; }

  /// Depth-l approximation (l <= refine) and nu(C_M) for its cells: the sub-cell pattern.
  const AttractorApprox& level(std::size_t l) const { return refiner_.level(l); }
  double level_mass(std::size_t l, std::size_t index) const { return level_masses_.at(l)[index]; }

  /// f_L for the depth-n cell with index L.
  Similitude cell_map(std::size_t index) const;

  /// False only when K_F and K_G are certainly disjoint (cells given by their maps F, G).
  bool cells_may_intersect(const Similitude& f, const Similitude& g) const;
  bool cells_may_intersect(std::size_t a, std::size_t b) const;

  /// Flags, per depth-n cell, "inside [lo, hi) or may meet a cell of [lo, hi)".
  std::vector<char> may_meet(std::size_t lo, std::size_t hi) const;

  /// Does K_F possibly meet a cell of [lo, hi)?
  bool map_may_meet(const Similitude& f, std::size_t lo, std::size_t hi) const;

  /// Largest mu_branch width over all branches (computed once).
  double max_branch_width() const;

 private:
  IfsSpec ifs_;
  int refine_;
  RatioTable ratios_;
  AttractorApprox approx_;
  CellRefiner refiner_;
  std::vector<std::vector<double>> level_masses_;
  std::vector<double> masses_;
  std::unique_ptr<SpatialHash> hash_;
  mutable std::optional<double> branch_width_;
};

/// (f_I(fixed_point(f_tail)), r_I R): the address map on I followed by tail, tail, ...
std::pair<Point, double> address_point(const Address& prefix, int tail, const IfsSpec& ifs);

IntervalEstimate mu_region(const RegionPredicate& pred, const MeasureContext& ctx);
IntervalEstimate mu_region(const RegionPredicate& pred, const IfsSpec& ifs, int depth);
/// mu(K_J); needs depth >= |J|.
IntervalEstimate mu_cell(const MeasureContext& ctx, const Address& cell);
IntervalEstimate mu_branch(const MeasureContext& ctx, int i);
IntervalEstimate mu_overlap(const MeasureContext& ctx, int i, int j);
/// Cells near the inflated witnesses that also pass the forward test f_j(K_L) ∩ K_k possibly nonempty.
IntervalEstimate mu_boundary(const MeasureContext& ctx, const BoundaryApprox& b);

enum class ScalingStatus { pass, fail, indeterminate };
std::string to_string(ScalingStatus s);

struct ScalingCheck {
  ScalingStatus status = ScalingStatus::indeterminate;
  IntervalEstimate image;   // mu(f_I(K_J))
  IntervalEstimate source;  // mu(K_J)
  double factor = 1;        // r_I^alpha
};

/// mu(f_I(K_J)) against r_I^alpha mu(K_J). Indeterminate when some branch width exceeds `branch_width`.
ScalingCheck check_scaling(const MeasureContext& ctx, const Address& prefix, const Address& cell,
                           double branch_width = 0.05);

}  // namespace ssb
