#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssb/attractor.hpp"
#include "ssb/boundary.hpp"
#include "ssb/measure.hpp"
#include "ssb/spaces.hpp"

namespace ssb {

/// The alpha with sum r_i^alpha = 1, by bisection.
double similarity_dimension(std::span<const double> ratios);
inline double similarity_dimension(const std::vector<double>& ratios) {
  return similarity_dimension(std::span<const double>(ratios));
}

struct CoverSample {
  double h = 0;
  std::size_t count = 0;
};

struct BoxCountingFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // rms of the log-log fit
};

/// Least squares of log(count) against log(1/h). Needs >= 4 scales with h strictly decreasing.
BoxCountingFit box_counting_dimension(std::span<const CoverSample> series);

/// Cover counts of depth-k approximations at h = r_max^k, k in [first, last].
/// Euclidean: occupied grid cells. Sequence: greedy h-net size (exact l1 distances).
std::vector<CoverSample> cover_series(const IfsSpec& ifs, int first, int last, std::uint64_t budget = kDefaultBudget);

/// Size of a maximal subset with pairwise distances > h, chosen greedily in index order.
std::size_t greedy_net_size(std::span<const Point> points, double h);

struct SoscResult {
  bool pass = false;
  bool clause_invariance = false;  // f_i(U) inside U, up to tolerance
  bool clause_disjoint = false;    // f_i(U) misses K_j for j != i
  std::size_t candidate_size = 0;
  double worst_invariance = 0;  // most negative d(f_i p, core) - (r_i d(p, core) - slack)
  double worst_disjoint = 0;    // smallest d(f_i p, branch j) - e_max
};

/// Checks both clauses for the candidate set U given as representative indices of `a`.
/// U is read as "K minus a neighbourhood of `core`" (for K \ B the core is the witness set);
/// an empty core means the excluded representatives themselves. The first clause is tested
/// as d(f_i p, core) >= r_i d(p, core) - (1 + r_i) tau / r_min.
SoscResult sosc_k_witness(const IfsSpec& ifs, const AttractorApprox& a, const std::vector<std::size_t>& candidate,
                          double tau, const std::vector<Point>& core = {});

enum class Status { supported, refuted, indeterminate };
std::string to_string(Status s);

struct ConditionEntry {
  int id = 0;
  Status status = Status::indeterminate;
  std::string note;
  std::vector<std::pair<std::string, double>> evidence;
};

struct BatteryConfig {
  int depth = 6;
  double tau = 0;  // <= 0: default_tolerance
  double dimension_tolerance = 0.05;
  double measure_tolerance = 0.05;
  int box_scales = 4;
  int refine = 3;
  std::uint64_t budget = kDefaultBudget;
};

struct BatteryReport {
  std::string name;
  int depth = 0;
  double tau = 0;
  double alpha = 0;
  bool coincident_maps = false;
  InvarianceVerdict precondition;
  std::array<ConditionEntry, 7> conditions;
  bool applicable = false;  // precondition invariant
  bool consistent = true;   // non-indeterminate statuses agree (checked when applicable)
  std::optional<std::pair<int, int>> disagreement;
  std::string banner;
};

BatteryReport condition_battery(const IfsSpec& ifs, const BatteryConfig& cfg);

}  // namespace ssb
