#pragma once

// Points and contracting similitudes for the two ambient backends:
//   euclidean  - R^n with the l2 metric, f(x) = r Q x + t with Q orthogonal;
//   sequence   - finitely supported dyadic sequences with the l1 metric, modeling l_1.
//
// Sequence indices are 0-based: index 0 is the first coordinate x_1.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ssb/dyadic.hpp"

namespace ssb {

enum class Backend { euclidean, sequence };

std::string to_string(Backend b);

/// Sorted (index, value) pairs with nonzero values.
struct SparseSequence {
  std::vector<std::pair<std::int64_t, Dyadic>> entries;

  Dyadic at(std::int64_t index) const;
  bool operator==(const SparseSequence&) const = default;
};

class Point {
 public:
  Point() : data_(std::vector<double>{}) {}

  static Point euclidean(std::vector<double> coords);
  /// Entries may be unsorted or contain zeros; they are normalized. Duplicate indices throw.
  static Point sequence(std::vector<std::pair<std::int64_t, Dyadic>> entries);
  static Point origin(Backend b, std::size_t dim);

  Backend backend() const noexcept {
    return std::holds_alternative<std::vector<double>>(data_) ? Backend::euclidean : Backend::sequence;
  }
  /// Euclidean dimension; 0 for the sequence backend.
  std::size_t dim() const noexcept;

  const std::vector<double>& coords() const;
  const SparseSequence& sequence_data() const;

  /// Coordinate `axis` as a real, used for spatial bucketing (both backends).
  double axis(std::size_t axis) const;

  bool operator==(const Point&) const = default;
  std::string to_string() const;

 private:
  std::variant<std::vector<double>, SparseSequence> data_;
};

/// l2 (euclidean) or exact l1 (sequence) distance.
double distance(const Point& p, const Point& q);
/// Sequence backend only: the exact l1 distance.
Dyadic distance_exact(const Point& p, const Point& q);

struct EuclideanMap {
  double ratio = 0;
  std::size_t dim = 0;
  std::vector<double> q;  // row-major dim x dim, orthogonal
  std::vector<double> t;
};

/// x -> relocate(x) * 2^-shift + translation, with relocation sending index k to stride*k + offset.
struct SequenceMap {
  int shift = 1;
  std::int64_t stride = 1;
  std::int64_t offset = 0;
  SparseSequence translation;

  bool in_image_pattern(std::int64_t index) const {
    return index >= offset && (index - offset) % stride == 0;
  }
};

class Similitude {
 public:
  /// Validates 0 < ratio < 1 and orthogonality: deviation <= 1e-12 accepted as is,
  /// (1e-12, 1e-8] re-orthonormalized (polar factor), larger rejected.
  static Similitude euclidean(double ratio, std::vector<double> q, std::vector<double> t);
  /// No orthogonality check; lets validate_similitude see deliberately broken maps.
  static Similitude euclidean_unchecked(double ratio, std::vector<double> q, std::vector<double> t);
  /// 2D convenience: f(x) = ratio * R(degrees) x + t.
  static Similitude planar(double ratio, double degrees, double tx, double ty);
  static Similitude sequence(int shift, std::int64_t stride, std::int64_t offset, SparseSequence translation);

  Backend backend() const noexcept {
    return std::holds_alternative<EuclideanMap>(map_) ? Backend::euclidean : Backend::sequence;
  }
  double ratio() const noexcept;
  std::size_t dim() const noexcept;

  const EuclideanMap& euclidean_map() const;
  const SequenceMap& sequence_map() const;

 private:
  Similitude() = default;
  friend Similitude compose(const Similitude& f, const Similitude& g);
  std::variant<EuclideanMap, SequenceMap> map_;
};

/// Max |Q^T Q - I| entry.
double orthogonality_deviation(std::span<const double> q, std::size_t dim);
/// 2x2 rotation matrix, exact for multiples of 90 degrees.
std::vector<double> rotation_matrix(double degrees);

Point apply(const Similitude& f, const Point& p);
/// The unique q with f(q) = p. Sequence backend throws OutsideImage when p is not in f's image.
Point invert(const Similitude& f, const Point& p);
/// compose(f, g) = f o g.
Similitude compose(const Similitude& f, const Similitude& g);
Point fixed_point(const Similitude& f);
/// Exact equality for the sequence backend, 1e-12 relative for euclidean.
bool maps_coincide(const Similitude& f, const Similitude& g);

struct ValidationReport {
  bool pass = false;
  double max_deviation = 0;  // max |d(fx,fy)/d(x,y) - r| / r
  std::size_t pairs = 0;
};

ValidationReport validate_similitude(const Similitude& f, std::size_t samples, std::uint64_t seed);

class IfsSpec {
 public:
  IfsSpec(std::vector<Similitude> maps, std::string name = {});

  std::size_t size() const noexcept { return maps_.size(); }
  const Similitude& map(std::size_t i) const { return maps_.at(i); }
  const std::vector<Similitude>& maps() const noexcept { return maps_; }
  const std::string& name() const noexcept { return name_; }
  Backend backend() const noexcept { return maps_.front().backend(); }
  std::size_t dim() const noexcept { return maps_.front().dim(); }

  std::vector<double> ratios() const;
  double r_max() const;
  double r_min() const;

 private:
  std::vector<Similitude> maps_;
  std::string name_;
};

}  // namespace ssb
