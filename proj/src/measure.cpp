#include "ssb/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "ssb/analysis.hpp"
#include "ssb/error.hpp"

namespace ssb {

namespace {

std::vector<double> child_masses(const std::vector<double>& prev, const RatioTable& t) {
  std::vector<double> next;
  next.reserve(prev.size() * t.size());
  for (std::size_t i = 1; i <= t.size(); ++i) {
    for (double m : prev) next.push_back(t.weight(static_cast<int>(i)) * m);
  }
  return next;
}

}  // namespace

RegionPredicate RegionPredicate::everything() {
  return {"everything", [](const Point&, double) { return Classification::inside; }};
}

RegionPredicate RegionPredicate::nothing() {
  return {"empty", [](const Point&, double) { return Classification::outside; }};
}

RegionPredicate RegionPredicate::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box corners differ in dimension");
  std::string name = "box";
  for (std::size_t k = 0; k < lo.size(); ++k) name += " [" + std::to_string(lo[k]) + "," + std::to_string(hi[k]) + "]";
  return {name, [lo = std::move(lo), hi = std::move(hi)](const Point& p, double r) {
            const auto& x = p.coords();
            if (x.size() != lo.size()) throw DimensionMismatch(x.size(), lo.size());
            bool inside = true;
            double gap2 = 0;
            for (std::size_t k = 0; k < x.size(); ++k) {
              inside = inside && lo[k] <= x[k] - r && x[k] + r <= hi[k];
              const double g = std::max({lo[k] - x[k], x[k] - hi[k], 0.0});
              gap2 += g * g;
            }
            if (inside) return Classification::inside;
            return std::sqrt(gap2) > r ? Classification::outside : Classification::straddles;
          }};
}

RegionPredicate RegionPredicate::ball(Point center, double radius) {
  return {"ball " + center.to_string() + " r=" + std::to_string(radius),
          [c = std::move(center), radius](const Point& p, double r) {
            const double d = distance(p, c);
            if (d + r <= radius) return Classification::inside;
            if (d > radius + r) return Classification::outside;
            return Classification::straddles;
          }};
}

MeasureContext::MeasureContext(const IfsSpec& ifs, int depth, int refine, std::uint64_t budget)
    : ifs_(ifs),
      refine_(refine),
      ratios_(ifs.ratios()),
      approx_(approximate(ifs, depth, budget)),
      refiner_(ifs, refine, budget) {
  std::vector<double> m{1.0};
  level_masses_.push_back(m);
  for (int l = 1; l <= refine; ++l) {
    m = child_masses(m, ratios_);
    level_masses_.push_back(m);
  }
  masses_ = {1.0};
  for (int l = 0; l < depth; ++l) masses_ = child_masses(masses_, ratios_);
  hash_ = std::make_unique<SpatialHash>(approx_.points(), std::max(2 * approx_.max_radius(), 1e-300));
}

Similitude MeasureContext::cell_map(std::size_t index) const {
  return address_map(ifs_, approx_.address(index));
}

bool MeasureContext::cells_may_intersect(const Similitude& f, const Similitude& g) const {
  return refiner_.may_intersect(f, g);
}

bool MeasureContext::cells_may_intersect(std::size_t a, std::size_t b) const {
  return cells_may_intersect(cell_map(a), cell_map(b));
}

std::vector<char> MeasureContext::may_meet(std::size_t lo, std::size_t hi) const {
  std::vector<char> flags(approx_.size(), 0);
  for (std::size_t i = lo; i < hi; ++i) flags[i] = 1;
  const double emax = approx_.max_radius();
  for (std::size_t i = lo; i < hi; ++i) {
    std::optional<Similitude> fi;
    const double ei = approx_.radius(i);
    hash_->for_each_candidate(approx_.point(i), ei + emax, [&](std::size_t l) {
      if (flags[l]) return;
      if (distance(approx_.point(i), approx_.point(l)) > ei + approx_.radius(l)) return;
      if (!fi) fi = cell_map(i);
      if (cells_may_intersect(*fi, cell_map(l))) flags[l] = 1;
    });
  }
  return flags;
}

bool MeasureContext::map_may_meet(const Similitude& f, std::size_t lo, std::size_t hi) const {
  const Point c = apply(f, refiner_.level(0).point(0));
  const double e = f.ratio() * refiner_.level(0).radius(0);
  bool hit = false;
  hash_->for_each_candidate(c, e + approx_.max_radius(), [&](std::size_t l) {
    if (hit || l < lo || l >= hi) return;
    if (distance(c, approx_.point(l)) > e + approx_.radius(l)) return;
    if (cells_may_intersect(f, cell_map(l))) hit = true;
  });
  return hit;
}

double MeasureContext::max_branch_width() const {
  if (!branch_width_) {
    double w = 0;
    for (std::size_t i = 1; i <= ifs_.size(); ++i) w = std::max(w, mu_branch(*this, static_cast<int>(i)).width());
    branch_width_ = w;
  }
  return *branch_width_;
}

std::pair<Point, double> address_point(const Address& prefix, int tail, const IfsSpec& ifs) {
  check_symbols(prefix, ifs.size());
  check_symbols(Address{tail}, ifs.size());
  Point x = fixed_point(ifs.map(static_cast<std::size_t>(tail - 1)));
  for (auto it = prefix.symbols().rbegin(); it != prefix.symbols().rend(); ++it) {
    x = apply(ifs.map(static_cast<std::size_t>(*it - 1)), x);
  }
  return {x, r_of(prefix, RatioTable(ifs.ratios())) * invariant_ball(ifs).radius};
}

namespace {

// cell masses carry rounding from r^alpha; pad outward so exact values stay inside
IntervalEstimate widened(IntervalEstimate e) {
  constexpr double pad = 1e-12;
  e.lower = std::max(0.0, e.lower * (1 - pad));
  e.upper = std::min(1.0, e.upper * (1 + pad));
  return e;
}

}  // namespace

IntervalEstimate mu_region(const RegionPredicate& pred, const MeasureContext& ctx) {
  const AttractorApprox& a = ctx.approx();
  const std::size_t n = ctx.ifs().size();
  const std::size_t deepest = static_cast<std::size_t>(ctx.refine());
  long double inside = 0;
  long double straddle = 0;
  bool any_inside = false;
  bool any_other = false;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const Classification c = pred.classify(a.point(l), a.radius(l));
    if (c == Classification::inside) {
      inside += ctx.mass(l);
      any_inside = true;
      continue;
    }
    any_other = true;
    if (c == Classification::outside) continue;
    if (deepest == 0) {
      straddle += ctx.mass(l);
      continue;
    }
    // ball nesting: sub-balls of a straddling cell may settle parts of its mass
    const Similitude f = ctx.cell_map(l);
    const double rf = f.ratio();
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};  // (level, index)
    while (!stack.empty()) {
      const auto [lv, idx] = stack.back();
      stack.pop_back();
      const AttractorApprox& sub = ctx.level(lv + 1);
      for (std::size_t i = n; i-- > 0;) {
        const std::size_t child = idx * n + i;
        const double m = ctx.mass(l) * ctx.level_mass(lv + 1, child);
        const Classification cc = pred.classify(apply(f, sub.point(child)), rf * sub.radius(child));
        if (cc == Classification::inside) {
          inside += m;
          any_inside = true;
        } else if (cc == Classification::straddles) {
          if (lv + 1 == deepest) {
            straddle += m;
          } else {
            stack.push_back({lv + 1, child});
          }
        }
      }
    }
  }
  IntervalEstimate e;
  e.depth = a.depth();
  e.region = pred.name;
  if (!any_other) {
    e.lower = e.upper = 1;
  } else if (any_inside || straddle > 0) {
    e.lower = std::min(1.0, static_cast<double>(inside));
    e.upper = std::min(1.0, static_cast<double>(inside + straddle));
  }
  e.geometric_lower = e.lower;
  return widened(e);
}

IntervalEstimate mu_region(const RegionPredicate& pred, const IfsSpec& ifs, int depth) {
  return mu_region(pred, MeasureContext(ifs, depth));
}

IntervalEstimate mu_cell(const MeasureContext& ctx, const Address& cell) {
  const std::size_t n = ctx.ifs().size();
  check_symbols(cell, n);
  if (static_cast<int>(cell.size()) > ctx.depth()) throw std::invalid_argument("cell address deeper than the context");
  std::size_t span = 1;
  for (int k = static_cast<int>(cell.size()); k < ctx.depth(); ++k) span *= n;
  const std::size_t lo = static_cast<std::size_t>(index_of(cell, n)) * span;
  const std::size_t hi = lo + span;
  const std::vector<char> flags = ctx.may_meet(lo, hi);
  long double own = 0;
  long double rest = 0;
  for (std::size_t l = 0; l < flags.size(); ++l) {
    if (!flags[l]) continue;
    (l >= lo && l < hi ? own : rest) += ctx.mass(l);
  }
  IntervalEstimate e;
  e.depth = ctx.depth();
  e.region = cell.empty() ? "K" : "K_" + cell.to_string();
  e.geometric_lower = static_cast<double>(own);
  // g(C_J) = K_J, so mu(K_J) >= nu(C_J) = r_J^alpha
  const double prior = nu_cylinder(cell, ctx.ratios());
  e.lower = std::max(e.geometric_lower, prior);
  e.clamped = prior > e.geometric_lower;
  e.upper = std::min(1.0, std::max(e.lower, static_cast<double>(own + rest)));
  if (cell.empty()) e.lower = e.upper = 1;
  return widened(e);
}

IntervalEstimate mu_branch(const MeasureContext& ctx, int i) {
  return mu_cell(ctx, Address{i});
}

IntervalEstimate mu_overlap(const MeasureContext& ctx, int i, int j) {
  const std::size_t n = ctx.ifs().size();
  if (i == j) throw std::invalid_argument("mu_overlap needs distinct branches");
  check_symbols(Address{i, j}, n);
  IntervalEstimate e;
  e.depth = ctx.depth();
  e.region = "K_" + std::to_string(i) + " ∩ K_" + std::to_string(j);
  if (ctx.depth() == 0) {
    e.upper = 1;
    return e;
  }
  const AttractorApprox& a = ctx.approx();
  const std::vector<char> fi = ctx.may_meet(a.branch_begin(i), a.branch_end(i));
  const std::vector<char> fj = ctx.may_meet(a.branch_begin(j), a.branch_end(j));
  long double up = 0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (fi[l] && fj[l]) up += ctx.mass(l);
  }
  e.upper = std::min(1.0, static_cast<double>(up));
  return widened(e);
}

IntervalEstimate mu_boundary(const MeasureContext& ctx, const BoundaryApprox& b) {
  IntervalEstimate e;
  e.depth = ctx.depth();
  e.region = "B";
  if (b.empty()) return e;
  const AttractorApprox& a = ctx.approx();
  const IfsSpec& ifs = ctx.ifs();
  const std::vector<Point> wpts = b.points();
  const SpatialHash hash(wpts, std::max(b.tau, 1e-300));
  long double up = 0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double el = a.radius(l);
    bool near = false;
    hash.for_each_candidate(a.point(l), b.tau + el + b.max_radius, [&](std::size_t w) {
      if (!near && distance(a.point(l), wpts[w]) <= b.tau + el + b.witnesses[w].radius) near = true;
    });
    if (!near) continue;
    // x in K_L ∩ B forces f_j(x) in K_jL ∩ K_k for some k != j
    bool forward = a.depth() == 0;
    if (!forward) {
      const Similitude fl = ctx.cell_map(l);
      for (std::size_t j = 0; j < ifs.size() && !forward; ++j) {
        const Similitude g = compose(ifs.map(j), fl);
        for (std::size_t k = 1; k <= ifs.size() && !forward; ++k) {
          if (k == j + 1) continue;
          const int sym = static_cast<int>(k);
          forward = ctx.map_may_meet(g, a.branch_begin(sym), a.branch_end(sym));
        }
      }
    }
    if (forward) up += ctx.mass(l);
  }
  e.upper = std::min(1.0, static_cast<double>(up));
  return widened(e);
}

std::string to_string(ScalingStatus s) {
  switch (s) {
    case ScalingStatus::pass:
      return "pass";
    case ScalingStatus::fail:
      return "fail";
    case ScalingStatus::indeterminate:
      return "indeterminate";
  }
  return "?";
}

ScalingCheck check_scaling(const MeasureContext& ctx, const Address& prefix, const Address& cell,
                           double branch_width) {
  ScalingCheck c;
  c.factor = nu_cylinder(prefix, ctx.ratios());
  c.image = mu_cell(ctx, prefix + cell);
  c.source = mu_cell(ctx, cell);
  if (ctx.max_branch_width() > branch_width) {
    c.status = ScalingStatus::indeterminate;
    return c;
  }
  // slack for the rounding of the cylinder sums
  const double slack = 1e-12 * c.factor;
  const double lo = std::max(c.image.lower, c.factor * c.source.lower);
  const double hi = std::min(c.image.upper, c.factor * c.source.upper);
  c.status = lo <= hi + slack ? ScalingStatus::pass : ScalingStatus::fail;
  return c;
}

}  // namespace ssb
