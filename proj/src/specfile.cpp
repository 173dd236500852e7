#include "ssb/specfile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ssb/error.hpp"

namespace ssb {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<double> parse_real(const std::string& tok) {
  auto whole = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return whole(tok);
  auto num = whole(tok.substr(0, slash));
  auto den = whole(tok.substr(slash + 1));
  if (!num || !den || *den == 0) return std::nullopt;
  return *num / *den;
}

class Line {
 public:
  Line(int number, std::vector<std::string> toks) : number_(number), toks_(std::move(toks)) {}

  bool done() const { return pos_ >= toks_.size(); }
  const std::string& word() {
    if (done()) fail("unexpected end of line");
    return toks_[pos_++];
  }
  void expect(const std::string& w) {
    const std::string& got = word();
    if (got != w) fail("expected '" + w + "', got '" + got + "'");
  }
  bool accept(const std::string& w) {
    if (!done() && toks_[pos_] == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  double real() {
    const std::string& t = word();
    auto v = parse_real(t);
    if (!v || !std::isfinite(*v)) fail("not a number: '" + t + "'");
    return *v;
  }
  std::uint64_t count() {
    const std::string& t = word();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail("not a non-negative integer: '" + t + "'");
    return v;
  }
  void finish() {
    if (!done()) fail("trailing token '" + toks_[pos_] + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(number_, msg); }
  int number() const { return number_; }

 private:
  int number_;
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

MapSpec parse_map(Line& l, const SpecFile& s) {
  MapSpec m;
  l.expect("scale");
  m.scale = l.real();
  if (s.backend == Backend::sequence) {
    m.form = MapSpec::Form::sequence;
    l.expect("kind");
    m.kind = l.word();
    if (m.kind != "interleave-odd" && m.kind != "interleave-even" && m.kind != "affine-first") {
      l.fail("unknown sequence map kind '" + m.kind + "'");
    }
  } else if (l.accept("rotate")) {
    if (s.dim != 2) l.fail("'rotate' needs dim 2; use 'matrix'");
    m.form = MapSpec::Form::planar;
    m.degrees = l.real();
    l.expect("translate");
    m.translate = {l.real(), l.real()};
    if (l.accept("about")) m.about = std::vector<double>{l.real(), l.real()};
  } else {
    l.expect("matrix");
    m.form = MapSpec::Form::matrix;
    for (std::size_t i = 0; i < s.dim * s.dim; ++i) m.matrix.push_back(l.real());
    l.expect("translate");
    for (std::size_t i = 0; i < s.dim; ++i) m.translate.push_back(l.real());
  }
  l.finish();
  return m;
}

}  // namespace

Similitude build_map(const MapSpec& m, std::size_t dim, Backend backend) {
  if (!(m.scale > 0 && m.scale < 1)) throw std::invalid_argument("ratio " + fmt(m.scale) + " is not a strict contraction");
  switch (m.form) {
    case MapSpec::Form::sequence: {
      if (backend != Backend::sequence) throw BackendMismatch();
      const int shift = static_cast<int>(std::lround(-std::log2(m.scale)));
      if (shift < 1 || std::ldexp(1.0, -shift) != m.scale) {
        throw std::invalid_argument("sequence maps need a ratio 2^-k");
      }
      SparseSequence t;
      if (m.kind == "interleave-odd") return Similitude::sequence(shift, 2, 1, t);
      if (m.kind == "interleave-even") return Similitude::sequence(shift, 2, 2, t);
      if (m.kind == "affine-first") {
        // (x + e_1) 2^-k: the first coordinate gains 2^-k
        t.entries.push_back({0, Dyadic(1, shift)});
        return Similitude::sequence(shift, 1, 0, t);
      }
      throw std::invalid_argument("unknown sequence map kind '" + m.kind + "'");
    }
    case MapSpec::Form::planar: {
      if (backend != Backend::euclidean) throw BackendMismatch();
      if (dim != 2) throw DimensionMismatch(dim, 2);
      const std::vector<double> q = rotation_matrix(m.degrees);
      std::vector<double> t = m.translate;
      if (m.about) {
        // rotation about c applied after x -> r x + t
        const auto& c = *m.about;
        const double rx = t[0] - c[0];
        const double ry = t[1] - c[1];
        t = {q[0] * rx + q[1] * ry + c[0], q[2] * rx + q[3] * ry + c[1]};
      }
      return Similitude::euclidean(m.scale, q, t);
    }
    case MapSpec::Form::matrix:
      if (backend != Backend::euclidean) throw BackendMismatch();
      if (m.translate.size() != dim) throw DimensionMismatch(m.translate.size(), dim);
      return Similitude::euclidean(m.scale, m.matrix, m.translate);
  }
  throw std::logic_error("unreachable");
}

IfsSpec SpecFile::ifs() const {
  std::vector<Similitude> fs;
  fs.reserve(maps.size());
  for (const auto& m : maps) fs.push_back(build_map(m, dim, backend));
  return IfsSpec(std::move(fs), name);
}

SpecFile parse_spec(const std::string& text) {
  SpecFile s;
  bool header = false;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> toks;
    for (std::string w; words >> w;) toks.push_back(w);
    if (toks.empty()) continue;
    Line l(number, std::move(toks));
    const std::string key = l.word();
    if (!header) {
      if (key != "ifs") l.fail("expected header 'ifs <name> dim <n> backend <euclidean|sequence>'");
      s.name = l.word();
      l.expect("dim");
      s.dim = static_cast<std::size_t>(l.count());
      l.expect("backend");
      const std::string b = l.word();
      if (b == "euclidean") {
        s.backend = Backend::euclidean;
        if (s.dim == 0) l.fail("euclidean backend needs dim >= 1");
      } else if (b == "sequence") {
        s.backend = Backend::sequence;
        s.dim = 0;
      } else {
        l.fail("unknown backend '" + b + "'");
      }
      l.finish();
      header = true;
      continue;
    }
    if (key == "map") {
      s.maps.push_back(parse_map(l, s));
      try {
        const Similitude f = build_map(s.maps.back(), s.dim, s.backend);
        if (!validate_similitude(f, 16, s.seed + s.maps.size()).pass) l.fail("map is not a similitude");
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        l.fail(e.what());
      }
    } else if (key == "depth") {
      const auto d = l.count();
      if (d > 64) l.fail("depth too large");
      s.depth = static_cast<int>(d);
      l.finish();
    } else if (key == "tol") {
      s.tol = l.real();
      if (!(*s.tol > 0)) l.fail("tol must be positive");
      l.finish();
    } else if (key == "grid") {
      s.grid = l.real();
      if (!(*s.grid > 0)) l.fail("grid must be positive");
      l.finish();
    } else if (key == "budget") {
      s.budget = l.count();
      l.finish();
    } else if (key == "seed") {
      s.seed = l.count();
      l.finish();
    } else {
      l.fail("unknown keyword '" + key + "'");
    }
  }
  if (!header) throw ParseError(number, "missing 'ifs' header");
  if (s.maps.size() < 2) throw ParseError(number, "an IFS needs at least 2 maps");
  return s;
}

std::string serialize_spec(const SpecFile& s) {
  std::ostringstream out;
  out << "ifs " << s.name << " dim " << s.dim << " backend " << to_string(s.backend) << "\n";
  for (const auto& m : s.maps) {
    out << "map scale " << fmt(m.scale);
    switch (m.form) {
      case MapSpec::Form::sequence:
        out << " kind " << m.kind;
        break;
      case MapSpec::Form::planar:
        out << " rotate " << fmt(m.degrees) << " translate " << fmt(m.translate[0]) << " " << fmt(m.translate[1]);
        if (m.about) out << " about " << fmt((*m.about)[0]) << " " << fmt((*m.about)[1]);
        break;
      case MapSpec::Form::matrix:
        out << " matrix";
        for (double v : m.matrix) out << " " << fmt(v);
        out << " translate";
        for (double v : m.translate) out << " " << fmt(v);
        break;
    }
    out << "\n";
  }
  out << "depth " << s.depth << "\n";
  if (s.tol) out << "tol " << fmt(*s.tol) << "\n";
  if (s.grid) out << "grid " << fmt(*s.grid) << "\n";
  out << "budget " << s.budget << "\n";
  out << "seed " << s.seed << "\n";
  return out.str();
}

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = {"koch",     "square4",    "square4-rotated", "cantor2",
                                                 "segment2", "sierpinski", "l1-schief"};
  return names;
}

SpecFile gallery(const std::string& name) {
  const char* text = nullptr;
  if (name == "koch") {
    text =
        "ifs koch dim 2 backend euclidean\n"
        "map scale 1/3 rotate 0 translate 0 0\n"
        "map scale 1/3 rotate 60 translate 1/3 0\n"
        "map scale 1/3 rotate -60 translate 0.5 0.28867513459481287\n"
        "map scale 1/3 rotate 0 translate 2/3 0\n"
        "depth 8\n";
  } else if (name == "square4") {
    text =
        "ifs square4 dim 2 backend euclidean\n"
        "map scale 1/2 rotate 0 translate 0 0.5\n"
        "map scale 1/2 rotate 0 translate 0.5 0.5\n"
        "map scale 1/2 rotate 0 translate 0 0\n"
        "map scale 1/2 rotate 0 translate 0.5 0\n"
        "depth 7\n";
  } else if (name == "square4-rotated") {
    text =
        "ifs square4-rotated dim 2 backend euclidean\n"
        "map scale 1/2 rotate 0 translate 0 0.5\n"
        "map scale 1/2 rotate -90 translate 0.5 0.5 about 0.75 0.75\n"
        "map scale 1/2 rotate 90 translate 0 0 about 0.25 0.25\n"
        "map scale 1/2 rotate 180 translate 0.5 0 about 0.75 0.25\n"
        "depth 7\n";
  } else if (name == "cantor2") {
    text =
        "ifs cantor2 dim 1 backend euclidean\n"
        "map scale 1/3 matrix 1 translate 0\n"
        "map scale 1/3 matrix 1 translate 2/3\n"
        "depth 10\n";
  } else if (name == "segment2") {
    text =
        "ifs segment2 dim 1 backend euclidean\n"
        "map scale 1/2 matrix 1 translate 0\n"
        "map scale 1/2 matrix 1 translate 1/2\n"
        "depth 10\n";
  } else if (name == "sierpinski") {
    text =
        "ifs sierpinski dim 2 backend euclidean\n"
        "map scale 1/2 rotate 0 translate 0 0\n"
        "map scale 1/2 rotate 0 translate 0.5 0\n"
        "map scale 1/2 rotate 0 translate 0.25 0.4330127018922193\n"
        "depth 7\n";
  } else if (name == "l1-schief") {
    text =
        "ifs l1-schief dim 0 backend sequence\n"
        "map scale 1/2 kind interleave-odd\n"
        "map scale 1/2 kind interleave-even\n"
        "map scale 1/2 kind affine-first\n"
        "depth 8\n";
  } else {
    throw std::invalid_argument("unknown gallery fixture '" + name + "'");
  }
  return parse_spec(text);
}

SpecFile random_digit_set(std::uint64_t seed, std::uint64_t max_points) {
  std::mt19937_64 rng(seed);
  const int m = std::uniform_int_distribution<int>(2, 4)(rng);
  std::vector<int> cells(static_cast<std::size_t>(m * m));
  for (int c = 0; c < m * m; ++c) cells[static_cast<std::size_t>(c)] = c;
  std::shuffle(cells.begin(), cells.end(), rng);
  const int count = std::uniform_int_distribution<int>(2, m * m)(rng);
  cells.resize(static_cast<std::size_t>(count));
  std::sort(cells.begin(), cells.end());

  SpecFile s;
  s.name = "digits-" + std::to_string(seed);
  s.dim = 2;
  s.backend = Backend::euclidean;
  s.seed = seed;
  for (int c : cells) {
    MapSpec ms;
    ms.scale = 1.0 / m;
    ms.translate = {static_cast<double>(c % m) / m, static_cast<double>(c / m) / m};
    s.maps.push_back(ms);
  }
  s.depth = 1;
  std::uint64_t n = static_cast<std::uint64_t>(count);
  while (n * static_cast<std::uint64_t>(count) <= max_points) {
    n *= static_cast<std::uint64_t>(count);
    ++s.depth;
  }
  return s;
}

}  // namespace ssb
