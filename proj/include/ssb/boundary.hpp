#pragma once

// Similarity boundary B = union over j != k of f_j^-1(K_j ∩ K_k), its complement U = K \ B,
// inverse invariance of B, and the raster boundary of tiles.

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ssb/attractor.hpp"
#include "ssb/codespace.hpp"
#include "ssb/spaces.hpp"

namespace ssb {

/// 4 r_max^depth R: twice the largest two-cell error sum.
double default_tolerance(const IfsSpec& ifs, int depth);

struct OverlapWitness {
  int j = 0;
  int k = 0;
  std::size_t index_i = 0;  // approximation index of I (first symbol j)
  std::size_t index_j = 0;  // approximation index of J (first symbol k)
  double gap = 0;           // d(p_I, p_J)
  bool certified = false;   // e_I + e_J <= tau: a true contact of K_I and K_J cannot be missed

  auto operator<=>(const OverlapWitness& o) const {
    return std::tie(j, k, index_i, index_j) <=> std::tie(o.j, o.k, o.index_i, o.index_j);
  }
  bool operator==(const OverlapWitness& o) const {
    return j == o.j && k == o.k && index_i == o.index_i && index_j == o.index_j;
  }
};

/// Pairs (I, J), I in branch j, J in branch k, with d(p_I, p_J) <= tau. Sorted by (I, J).
std::vector<OverlapWitness> overlap_pairs(const AttractorApprox& a, int j, int k, double tau);
/// Every ordered pair j != k at once from one shared hash, sorted by (j, k, I, J).
std::vector<OverlapWitness> all_overlap_pairs(const AttractorApprox& a, double tau);

struct BoundaryWitness {
  Point point;    // f_j^-1(p_I)
  double radius;  // e_I / r_j
  OverlapWitness source;
};

struct WitnessCluster {
  std::vector<std::size_t> members;  // witness indices, ascending
  std::vector<double> lo;            // hull box over the leading coordinates
  std::vector<double> hi;
};

struct BoundaryApprox {
  int depth = 0;
  double tau = 0;
  double max_radius = 0;  // largest witness radius
  bool certified = true;  // every reported pair satisfied e_I + e_J <= tau
  std::size_t pair_count = 0;  // pairs within tau
  std::size_t pruned = 0;      // of which the cells were certified disjoint by refinement
  std::vector<BoundaryWitness> witnesses;  // one per source address I, ascending

  bool empty() const noexcept { return witnesses.empty(); }
  std::vector<Point> points() const;
};

/// Witnesses from overlap pairs within tau. A pair is dropped when refining both cells `refine`
/// more levels shows K_I and K_J disjoint; such a pair contains no point of K_j ∩ K_k.
BoundaryApprox similarity_boundary(const IfsSpec& ifs, const AttractorApprox& a, double tau, int refine = 3);
BoundaryApprox similarity_boundary(const IfsSpec& ifs, int depth, double tau, std::uint64_t budget = kDefaultBudget,
                                   int refine = 3);

/// Single linkage at distance `link` (2 tau by default), clusters ordered by first member.
std::vector<WitnessCluster> cluster_witnesses(const BoundaryApprox& b, double link = -1);

/// Indices of representatives p with d(p, w) > tau + e_p + e_w for every witness w.
std::vector<std::size_t> complement_U(const AttractorApprox& a, const BoundaryApprox& b, double tau);

/// U computed pointwise: p is dropped when some f_i(p) comes within r_i tau of a branch-j point, j != i.
std::vector<std::size_t> complement_U_pointwise(const IfsSpec& ifs, const AttractorApprox& a, double tau);

enum class Verdict { invariant, violated, indeterminate };
std::string to_string(Verdict v);

struct InvarianceVerdict {
  Verdict status = Verdict::indeterminate;
  // violating triple when status == violated
  int map = 0;
  std::size_t witness = 0;
  std::optional<Point> preimage;
  double preimage_gap = 0;  // distance from the violating preimage to the nearest witness

  double tau_prime = 0;
  std::size_t in_k = 0;
  std::size_t outside = 0;
  std::size_t undecided = 0;      // indeterminate classifications, all
  std::size_t undecided_far = 0;  // ... of which not near any witness (these decide the status)
};

InvarianceVerdict check_inverse_invariance(const IfsSpec& ifs, const BoundaryApprox& b, const AttractorApprox& a,
                                           double tau);

struct TileBoundary {
  double h = 0;
  std::vector<Point> centers;
};

/// Requires similarity dimension = ambient dimension (1e-9) and h >= 2 max cell radius; h <= 0 picks 2 max radius.
TileBoundary tile_topological_boundary(const IfsSpec& ifs, int depth, double h = 0,
                                       std::uint64_t budget = kDefaultBudget);

struct BoundaryComparison {
  bool containment = false;  // similarity boundary inside the raster boundary
  bool equality = false;
  double sim_to_topo = 0;
  double topo_to_sim = 0;
  double tolerance = 0;
};

BoundaryComparison compare_boundaries(const BoundaryApprox& sim, const TileBoundary& topo, double tau);

}  // namespace ssb
