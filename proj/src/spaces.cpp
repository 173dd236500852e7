#include "ssb/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "ssb/error.hpp"

namespace ssb {

namespace {

using MatX = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const MatX> as_matrix(std::span<const double> q, std::size_t dim) {
  return Eigen::Map<const MatX>(q.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

void check_ratio(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("ratio " + std::to_string(ratio) + " is not a strict contraction");
  }
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " has a non-finite entry");
  }
}

SparseSequence add(const SparseSequence& a, const SparseSequence& b, bool subtract) {
  SparseSequence out;
  out.entries.reserve(a.entries.size() + b.entries.size());
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() || ib != b.entries.end()) {
    if (ib == b.entries.end() || (ia != a.entries.end() && ia->first < ib->first)) {
      out.entries.push_back(*ia++);
    } else if (ia == a.entries.end() || ib->first < ia->first) {
      out.entries.emplace_back(ib->first, subtract ? -ib->second : ib->second);
      ++ib;
    } else {
      Dyadic v = subtract ? ia->second - ib->second : ia->second + ib->second;
      if (!v.is_zero()) out.entries.emplace_back(ia->first, v);
      ++ia;
      ++ib;
    }
  }
  return out;
}

SparseSequence relocate(const SequenceMap& m, const SparseSequence& x) {
  SparseSequence out;
  out.entries.reserve(x.entries.size());
  for (const auto& [k, v] : x.entries) {
    out.entries.emplace_back(m.stride * k + m.offset, v.scaled(m.shift));
  }
  return out;
}

void require_same(const Point& p, const Point& q) {
  if (p.backend() != q.backend()) throw BackendMismatch();
  if (p.dim() != q.dim()) throw DimensionMismatch(p.dim(), q.dim());
}

void require_same(const Similitude& f, const Point& p) {
  if (f.backend() != p.backend()) throw BackendMismatch();
  if (f.dim() != p.dim()) throw DimensionMismatch(f.dim(), p.dim());
}

}  // namespace

std::string to_string(Backend b) { return b == Backend::euclidean ? "euclidean" : "sequence"; }

Dyadic SparseSequence::at(std::int64_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, std::int64_t i) { return e.first < i; });
  return (it != entries.end() && it->first == index) ? it->second : Dyadic{};
}

Point Point::euclidean(std::vector<double> coords) {
  check_finite(coords, "point");
  Point p;
  p.data_ = std::move(coords);
  return p;
}

Point Point::sequence(std::vector<std::pair<std::int64_t, Dyadic>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseSequence s;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first < 0) throw std::invalid_argument("negative sequence index");
    if (i > 0 && entries[i].first == entries[i - 1].first) throw std::invalid_argument("duplicate sequence index");
    if (!entries[i].second.is_zero()) s.entries.push_back(entries[i]);
  }
  Point p;
  p.data_ = std::move(s);
  return p;
}

Point Point::origin(Backend b, std::size_t dim) {
  return b == Backend::euclidean ? euclidean(std::vector<double>(dim, 0.0)) : sequence({});
}

std::size_t Point::dim() const noexcept {
  if (auto* v = std::get_if<std::vector<double>>(&data_)) return v->size();
  return 0;
}

const std::vector<double>& Point::coords() const {
  if (auto* v = std::get_if<std::vector<double>>(&data_)) return *v;
  throw BackendMismatch();
}

const SparseSequence& Point::sequence_data() const {
  if (auto* s = std::get_if<SparseSequence>(&data_)) return *s;
  throw BackendMismatch();
}

double Point::axis(std::size_t a) const {
  if (auto* v = std::get_if<std::vector<double>>(&data_)) return a < v->size() ? (*v)[a] : 0.0;
  return std::get<SparseSequence>(data_).at(static_cast<std::int64_t>(a)).to_double();
}

std::string Point::to_string() const {
  std::ostringstream os;
  os.precision(17);
  if (auto* v = std::get_if<std::vector<double>>(&data_)) {
    os << '(';
    for (std::size_t i = 0; i < v->size(); ++i) os << (i ? ", " : "") << (*v)[i];
    os << ')';
  } else {
    os << '{';
    bool first = true;
    for (const auto& [k, x] : std::get<SparseSequence>(data_).entries) {
      os << (first ? "" : ", ") << k << ": " << x.to_string();
      first = false;
    }
    os << '}';
  }
  return os.str();
}

double distance(const Point& p, const Point& q) {
  require_same(p, q);
  if (p.backend() == Backend::sequence) return distance_exact(p, q).to_double_upper();
  const auto& a = p.coords();
  const auto& b = q.coords();
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Dyadic distance_exact(const Point& p, const Point& q) {
  if (p.backend() != Backend::sequence || q.backend() != Backend::sequence) throw BackendMismatch();
  const auto& a = p.sequence_data().entries;
  const auto& b = q.sequence_data().entries;
  Dyadic sum;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      sum += a[i++].second.abs();
    } else if (i == a.size() || b[j].first < a[i].first) {
      sum += b[j++].second.abs();
    } else {
      sum += (a[i++].second - b[j++].second).abs();
    }
  }
  return sum;
}

double orthogonality_deviation(std::span<const double> q, std::size_t dim) {
  const auto m = as_matrix(q, dim);
  const MatX g = m.transpose() * m - MatX::Identity(m.rows(), m.cols());
  return g.cwiseAbs().maxCoeff();
}

std::vector<double> rotation_matrix(double degrees) {
  double c = 0;
  double s = 0;
  if (std::fmod(degrees, 90.0) == 0.0) {
    const long quarter = ((std::lround(degrees / 90.0) % 4) + 4) % 4;
    constexpr double cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    c = cs[quarter][0];
    s = cs[quarter][1];
  } else {
    const double rad = degrees * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
  }
  return {c, -s, s, c};
}

Similitude Similitude::euclidean_unchecked(double ratio, std::vector<double> q, std::vector<double> t) {
  check_ratio(ratio);
  const std::size_t n = t.size();
  if (n == 0) throw std::invalid_argument("euclidean map needs dimension >= 1");
  if (q.size() != n * n) throw DimensionMismatch(q.size(), n * n);
  check_finite(q, "matrix");
  check_finite(t, "translation");
  Similitude f;
  f.map_ = EuclideanMap{ratio, n, std::move(q), std::move(t)};
  return f;
}

Similitude Similitude::euclidean(double ratio, std::vector<double> q, std::vector<double> t) {
  Similitude f = euclidean_unchecked(ratio, std::move(q), std::move(t));
  auto& m = std::get<EuclideanMap>(f.map_);
  const double dev = orthogonality_deviation(m.q, m.dim);
  if (dev > 1e-8) {
    throw std::invalid_argument("matrix is not orthogonal (deviation " + std::to_string(dev) + ")");
  }
  if (dev > 1e-12) {
    // nearest orthogonal matrix: the polar factor U V^T
    const MatX a = as_matrix(m.q, m.dim);
    Eigen::JacobiSVD<MatX> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const MatX polar = svd.matrixU() * svd.matrixV().transpose();
    std::copy(polar.data(), polar.data() + polar.size(), m.q.begin());
  }
  return f;
}

Similitude Similitude::planar(double ratio, double degrees, double tx, double ty) {
  return euclidean(ratio, rotation_matrix(degrees), {tx, ty});
}

Similitude Similitude::sequence(int shift, std::int64_t stride, std::int64_t offset, SparseSequence translation) {
  if (shift < 1) throw std::invalid_argument("sequence map ratio must be 2^-k with k >= 1");
  if (stride < 1 || offset < 0) throw std::invalid_argument("sequence relocation must be injective (stride >= 1, offset >= 0)");
  Similitude f;
  f.map_ = SequenceMap{shift, stride, offset, Point::sequence(std::move(translation.entries)).sequence_data()};
  return f;
}

double Similitude::ratio() const noexcept {
  if (auto* e = std::get_if<EuclideanMap>(&map_)) return e->ratio;
  return std::ldexp(1.0, -std::get<SequenceMap>(map_).shift);
}

std::size_t Similitude::dim() const noexcept {
  if (auto* e = std::get_if<EuclideanMap>(&map_)) return e->dim;
  return 0;
}

const EuclideanMap& Similitude::euclidean_map() const {
  if (auto* e = std::get_if<EuclideanMap>(&map_)) return *e;
  throw BackendMismatch();
}

const SequenceMap& Similitude::sequence_map() const {
  if (auto* s = std::get_if<SequenceMap>(&map_)) return *s;
  throw BackendMismatch();
}

Point apply(const Similitude& f, const Point& p) {
  require_same(f, p);
  if (f.backend() == Backend::sequence) {
    const auto& m = f.sequence_map();
    return Point::sequence(add(relocate(m, p.sequence_data()), m.translation, false).entries);
  }
  const auto& m = f.euclidean_map();
  const auto& x = p.coords();
  std::vector<double> y(m.dim);
  for (std::size_t i = 0; i < m.dim; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < m.dim; ++j) s += m.q[i * m.dim + j] * x[j];
    y[i] = m.ratio * s + m.t[i];
  }
  return Point::euclidean(std::move(y));
}

Point invert(const Similitude& f, const Point& p) {
  require_same(f, p);
  if (f.backend() == Backend::sequence) {
    const auto& m = f.sequence_map();
    const SparseSequence y = add(p.sequence_data(), m.translation, true);
    std::vector<std::pair<std::int64_t, Dyadic>> out;
    out.reserve(y.entries.size());
    for (const auto& [idx, v] : y.entries) {
      if (!m.in_image_pattern(idx)) throw OutsideImage();
      out.emplace_back((idx - m.offset) / m.stride, v.scaled(-m.shift));
    }
    return Point::sequence(std::move(out));
  }
  const auto& m = f.euclidean_map();
  const auto& y = p.coords();
  std::vector<double> x(m.dim);
  for (std::size_t j = 0; j < m.dim; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m.dim; ++i) s += m.q[i * m.dim + j] * (y[i] - m.t[i]);
    x[j] = s / m.ratio;
  }
  return Point::euclidean(std::move(x));
}

Similitude compose(const Similitude& f, const Similitude& g) {
  if (f.backend() != g.backend()) throw BackendMismatch();
  if (f.dim() != g.dim()) throw DimensionMismatch(f.dim(), g.dim());
  if (f.backend() == Backend::sequence) {
    const auto& a = f.sequence_map();
    const auto& b = g.sequence_map();
    Similitude h;
    h.map_ = SequenceMap{a.shift + b.shift, a.stride * b.stride, a.stride * b.offset + a.offset,
                         add(relocate(a, b.translation), a.translation, false)};
    return h;
  }
  const auto& a = f.euclidean_map();
  const auto& b = g.euclidean_map();
  const std::size_t n = a.dim;
  std::vector<double> q(n * n, 0.0);
  std::vector<double> t(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < n; ++k) s += a.q[i * n + k] * b.q[k * n + j];
      q[i * n + j] = s;
    }
    double s = 0;
    for (std::size_t k = 0; k < n; ++k) s += a.q[i * n + k] * b.t[k];
    t[i] = a.ratio * s + a.t[i];
  }
  Similitude h;
  h.map_ = EuclideanMap{a.ratio * b.ratio, n, std::move(q), std::move(t)};
  return h;
}

Point fixed_point(const Similitude& f) {
  if (f.backend() == Backend::euclidean) {
    const auto& m = f.euclidean_map();
    const auto n = static_cast<Eigen::Index>(m.dim);
    const MatX a = MatX::Identity(n, n) - m.ratio * as_matrix(m.q, m.dim);
    const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(m.t.data(), n);
    Eigen::FullPivLU<MatX> lu(a);
    if (!lu.isInvertible()) throw Error("internal: I - rQ is singular");
    const Eigen::VectorXd x = lu.solve(t);
    return Point::euclidean(std::vector<double>(x.data(), x.data() + n));
  }

  const auto& m = f.sequence_map();
  Point x = Point::sequence({});
  for (int iter = 0; iter < 64; ++iter) {
    Point next = apply(f, x);
    if (next == x) return x;
    x = std::move(next);
  }
  if (m.stride == 1 && m.offset == 0) {
    // x = t / (1 - 2^-s), coordinatewise
    const std::int64_t denom = (std::int64_t{1} << m.shift) - 1;
    std::vector<std::pair<std::int64_t, Dyadic>> out;
    for (const auto& [k, v] : m.translation.entries) {
      if (v.numerator() % denom != 0) throw Error("fixed point is not a dyadic sequence");
      out.emplace_back(k, Dyadic(v.numerator() / denom, v.exponent()).scaled(-m.shift));
    }
    Point p = Point::sequence(std::move(out));
    if (apply(f, p) != p) throw Error("internal: closed-form fixed point failed verification");
    return p;
  }
  throw Error("fixed point has infinite support; not representable in the sequence backend");
}

bool maps_coincide(const Similitude& f, const Similitude& g) {
  if (f.backend() != g.backend() || f.dim() != g.dim()) return false;
  if (f.backend() == Backend::sequence) {
    const auto& a = f.sequence_map();
    const auto& b = g.sequence_map();
    return a.shift == b.shift && a.stride == b.stride && a.offset == b.offset && a.translation == b.translation;
  }
  const auto& a = f.euclidean_map();
  const auto& b = g.euclidean_map();
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + std::max(std::abs(x), std::abs(y))); };
  if (!close(a.ratio, b.ratio)) return false;
  for (std::size_t i = 0; i < a.q.size(); ++i) {
    if (!close(a.q[i], b.q[i])) return false;
  }
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    if (!close(a.t[i], b.t[i])) return false;
  }
  return true;
}

ValidationReport validate_similitude(const Similitude& f, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("validate_similitude needs at least 2 samples");
  std::mt19937_64 rng(seed);
  ValidationReport rep;
  const double r = f.ratio();

  if (f.backend() == Backend::euclidean) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_point = [&] {
      std::vector<double> v(f.dim());
      for (auto& x : v) x = u(rng);
      return Point::euclidean(std::move(v));
    };
    for (std::size_t s = 0; s < samples; ++s) {
      const Point x = random_point();
      const Point y = random_point();
      const double d = distance(x, y);
      if (d == 0) continue;
      const double dev = std::abs(distance(apply(f, x), apply(f, y)) / d - r) / r;
      rep.max_deviation = std::max(rep.max_deviation, dev);
      ++rep.pairs;
    }
    rep.pass = rep.max_deviation <= 1e-9;
    return rep;
  }

  std::uniform_int_distribution<int> count(0, 6);
  std::uniform_int_distribution<std::int64_t> index(0, 7);
  std::uniform_int_distribution<std::int64_t> num(-8, 8);
  std::uniform_int_distribution<int> expo(0, 4);
  auto random_point = [&] {
    std::vector<std::pair<std::int64_t, Dyadic>> e;
    std::vector<bool> used(8, false);
    for (int c = count(rng); c > 0; --c) {
      const auto k = index(rng);
      if (used[static_cast<std::size_t>(k)]) continue;
      used[static_cast<std::size_t>(k)] = true;
      e.emplace_back(k, Dyadic(num(rng), expo(rng)));
    }
    return Point::sequence(std::move(e));
  };
  const int shift = f.sequence_map().shift;
  rep.pass = true;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point x = random_point();
    const Point y = random_point();
    const Dyadic d = distance_exact(x, y);
    if (d.is_zero()) continue;
    const Dyadic image = distance_exact(apply(f, x), apply(f, y));
    if (image != d.scaled(shift)) {
      rep.pass = false;
      rep.max_deviation = std::max(rep.max_deviation, std::abs(image.to_double() / d.to_double() - r) / r);
    }
    ++rep.pairs;
  }
  return rep;
}

IfsSpec::IfsSpec(std::vector<Similitude> maps, std::string name) : maps_(std::move(maps)), name_(std::move(name)) {
  if (maps_.size() < 2) throw std::invalid_argument("an IFS needs at least 2 maps");
  for (const auto& f : maps_) {
    if (f.backend() != maps_.front().backend()) throw BackendMismatch();
    if (f.dim() != maps_.front().dim()) throw DimensionMismatch(f.dim(), maps_.front().dim());
  }
}

std::vector<double> IfsSpec::ratios() const {
  std::vector<double> r;
  r.reserve(maps_.size());
  for (const auto& f : maps_) r.push_back(f.ratio());
  return r;
}

double IfsSpec::r_max() const {
  const auto r = ratios();
  return *std::max_element(r.begin(), r.end());
}

double IfsSpec::r_min() const {
  const auto r = ratios();
  return *std::min_element(r.begin(), r.end());
}

}  // namespace ssb
