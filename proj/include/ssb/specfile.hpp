#pragma once

// Line-oriented IFS description files and the built-in gallery.
//
//   ifs <name> dim <n> backend <euclidean|sequence>
//   map scale <r> rotate <deg> translate <x> <y> [about <cx> <cy>]      (2D)
//   map scale <r> matrix <n*n row-major> translate <n values>          (any n)
//   map scale 1/2 kind <interleave-odd|interleave-even|affine-first>   (sequence)
//   depth <n> | tol <r> | grid <h> | budget <n> | seed <n>
//
// Reals accept p/q. '#' starts a comment. The sequence backend writes dim 0.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssb/codespace.hpp"
#include "ssb/spaces.hpp"

namespace ssb {

struct MapSpec {
  enum class Form { planar, matrix, sequence };
  Form form = Form::planar;
  double scale = 0;
  double degrees = 0;
  std::vector<double> matrix;
  std::vector<double> translate;
  std::optional<std::vector<double>> about;
  std::string kind;  // sequence form

  bool operator==(const MapSpec&) const = default;
};

struct SpecFile {
  std::string name;
  std::size_t dim = 2;
  Backend backend = Backend::euclidean;
  std::vector<MapSpec> maps;
  int depth = 6;
  std::optional<double> tol;
  std::optional<double> grid;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 1;

  bool operator==(const SpecFile&) const = default;

  IfsSpec ifs() const;
};

Similitude build_map(const MapSpec& m, std::size_t dim, Backend backend);

/// Throws ParseError with the offending line number.
SpecFile parse_spec(const std::string& text);
std::string serialize_spec(const SpecFile& spec);

const std::vector<std::string>& gallery_names();
/// Throws std::invalid_argument for unknown names.
SpecFile gallery(const std::string& name);

/// A random planar digit set: ratio 1/m (m in 2..4), 2..m^2 distinct translations d/m with d
/// from the grid {0..m-1}^2, and the largest depth with N^depth <= max_points.
SpecFile random_digit_set(std::uint64_t seed, std::uint64_t max_points = 20000);

}  // namespace ssb
