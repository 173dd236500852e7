// One line per acceptance criterion; exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "ssb/analysis.hpp"
#include "ssb/report.hpp"
#include "ssb/specfile.hpp"

using namespace ssb;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double segment_distance(const std::vector<double>& p, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  double t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / (dx * dx + dy * dy);
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - ax - t * dx, p[1] - ay - t * dy);
}

// every sample of the segment is within tol of a witness
bool segment_covered(const BoundaryApprox& b, double ax, double ay, double bx, double by, double tol) {
  for (int s = 0; s <= 200; ++s) {
    const double t = s / 200.0;
    const Point q = Point::euclidean({ax + t * (bx - ax), ay + t * (by - ay)});
    bool hit = false;
    for (const auto& w : b.witnesses) {
      if (distance(q, w.point) <= tol) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

Outcome criterion1() {
  Outcome o;
  const std::vector<std::pair<std::string, double>> cases = {
      {"koch", std::log(4.0) / std::log(3.0)}, {"square4", 2.0}, {"l1-schief", std::log(3.0) / std::log(2.0)}};
  for (const auto& [name, exact] : cases) {
    const auto ratios = gallery(name).ifs().ratios();
    const auto t0 = std::chrono::steady_clock::now();
    const double alpha = similarity_dimension(ratios);
    const double ms = seconds_since(t0) * 1e3;
    o.require(std::abs(alpha - exact) <= 1e-9, name + " alpha off by " + fmt(std::abs(alpha - exact)));
    o.require(ms < 1.0, name + " took " + fmt(ms) + " ms");
    o.detail += (o.detail.empty() ? "" : ", ") + name + " " + fmt(alpha, 12) + " in " + fmt(ms, 3) + " ms";
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const IfsSpec ifs = gallery("koch").ifs();
  const BoundaryApprox b = similarity_boundary(ifs, 8, default_tolerance(ifs, 8));
  const auto clusters = cluster_witnesses(b);
  const double s = seconds_since(t0);
  o.require(clusters.size() == 2, std::to_string(clusters.size()) + " clusters");
  bool near0 = false, near1 = false;
  for (const auto& c : clusters) {
    auto within = [&](double x) {
      return std::abs(c.lo[0] - x) <= 1e-2 && std::abs(c.hi[0] - x) <= 1e-2 && std::abs(c.lo[1]) <= 1e-2 &&
             std::abs(c.hi[1]) <= 1e-2;
    };
    near0 = near0 || within(0);
    near1 = near1 || within(1);
  }
  o.require(near0 && near1, "cluster hulls not at (0,0) and (1,0)");
  o.require(s < 10, "runtime " + fmt(s) + " s");
  if (o.pass) o.detail = "2 clusters at (0,0) and (1,0), " + std::to_string(b.witnesses.size()) + " witnesses, " + fmt(s, 3) + " s";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const int depth = 8;
  std::string info;
  {
    const IfsSpec ifs = gallery("square4").ifs();
    const double tau = default_tolerance(ifs, depth);
    const AttractorApprox a = approximate(ifs, depth);
    const BoundaryApprox b = similarity_boundary(ifs, a, tau);
    o.require(segment_covered(b, 0, 0, 1, 0, tau) && segment_covered(b, 1, 0, 1, 1, tau) &&
                  segment_covered(b, 1, 1, 0, 1, tau) && segment_covered(b, 0, 1, 0, 0, tau),
              "square4 edges not covered");
    const auto v = check_inverse_invariance(ifs, b, a, tau);
    o.require(v.status == Verdict::invariant, "square4 invariance " + to_string(v.status));
    const auto cmp = compare_boundaries(b, tile_topological_boundary(ifs, depth), tau);
    o.require(cmp.equality, "square4 tilecheck not equal");
    info += "square4 " + to_string(v.status) + (cmp.equality ? " equal" : " unequal");
  }
  {
    const IfsSpec ifs = gallery("square4-rotated").ifs();
    const double tau = default_tolerance(ifs, depth);
    const AttractorApprox a = approximate(ifs, depth);
    const BoundaryApprox b = similarity_boundary(ifs, a, tau);
    o.require(segment_covered(b, 0, 0, 1, 0, tau) && segment_covered(b, 1, 0, 1, 1, tau),
              "rotated bottom/right edges not covered");
    double stray = 0;
    for (const auto& w : b.witnesses) {
      const auto& p = w.point.coords();
      stray = std::max(stray, std::min(segment_distance(p, 0, 0, 1, 0), segment_distance(p, 1, 0, 1, 1)));
    }
    o.require(stray <= tau, "rotated witness " + fmt(stray) + " away from the two segments");
    const auto v = check_inverse_invariance(ifs, b, a, tau);
    o.require(v.status == Verdict::violated, "rotated invariance " + to_string(v.status));
    const auto cmp = compare_boundaries(b, tile_topological_boundary(ifs, depth), tau);
    o.require(cmp.containment && !cmp.equality, "rotated tilecheck containment/equality wrong");
    info += ", rotated " + to_string(v.status) + (cmp.containment ? " contained" : " not contained") +
            (cmp.equality ? " equal" : " unequal") + ", stray " + fmt(stray) + " <= tau " + fmt(tau);
  }
  if (o.pass) o.detail = info;
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const IfsSpec ifs = gallery("l1-schief").ifs();
  const int depth = 10;
  const double tau = default_tolerance(ifs, depth);
  const AttractorApprox a = approximate(ifs, depth);
  o.require(overlap_pairs(a, 3, 1, tau).empty(), "overlap (3,1) nonempty");
  o.require(overlap_pairs(a, 3, 2, tau).empty(), "overlap (3,2) nonempty");
  const BoundaryApprox b = similarity_boundary(ifs, a, tau);
  const auto clusters = cluster_witnesses(b);
  o.require(clusters.size() == 1, std::to_string(clusters.size()) + " clusters");
  const Point origin = Point::origin(Backend::sequence, 0);
  Dyadic nearest(1);
  bool exact = true;
  for (const auto& w : b.witnesses) {
    exact = exact && w.point.backend() == Backend::sequence;
    nearest = std::min(nearest, distance_exact(w.point, origin));
  }
  o.require(!b.empty() && exact, "witnesses missing or not exact");
  o.require(nearest.to_double() <= tau, "cluster not at the origin");
  const auto v = check_inverse_invariance(ifs, b, a, tau);
  o.require(v.status == Verdict::invariant, "invariance " + to_string(v.status));
  const double s = seconds_since(t0);
  o.require(s < 60, "runtime " + fmt(s) + " s");
  if (o.pass) {
    o.detail = std::to_string(b.witnesses.size()) + " exact witnesses in 1 cluster, nearest to origin " +
               nearest.to_string() + ", invariant, " + fmt(s, 3) + " s";
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (const char* name : {"koch", "l1-schief"}) {
    const IfsSpec ifs = gallery(name).ifs();
    std::vector<double> overlaps, bounds;
    double width = 0;
    bool bracket = true;
    for (int depth = 4; depth <= 8; ++depth) {
      const MeasureContext ctx(ifs, depth);
      const BoundaryApprox b = similarity_boundary(ifs, ctx.approx(), default_tolerance(ifs, depth));
      double worst = 0;
      for (int i = 1; i <= static_cast<int>(ifs.size()); ++i) {
        for (int j = i + 1; j <= static_cast<int>(ifs.size()); ++j) worst = std::max(worst, mu_overlap(ctx, i, j).upper);
      }
      overlaps.push_back(worst);
      bounds.push_back(mu_boundary(ctx, b).upper);
      if (depth == 8) {
        for (int i = 1; i <= static_cast<int>(ifs.size()); ++i) {
          const auto e = mu_branch(ctx, i);
          bracket = bracket && e.contains(ctx.ratios().weight(i));
          width = std::max(width, e.width());
        }
      }
    }
    const std::string n = name;
    o.require(bracket, n + " branch interval misses r_i^alpha");
    o.require(width <= 0.02, n + " branch width " + fmt(width));
    for (std::size_t k = 1; k < overlaps.size(); ++k) {
      o.require(overlaps[k] <= overlaps[k - 1], n + " overlap bound rises at depth " + std::to_string(4 + k));
      o.require(bounds[k] <= bounds[k - 1], n + " boundary bound rises at depth " + std::to_string(4 + k));
    }
    o.require(overlaps.back() < 0.05 && bounds.back() < 0.05, n + " final bounds not below 0.05");
    if (o.pass) {
      o.detail += (o.detail.empty() ? "" : ", ") + n + " width " + fmt(width, 3) + " overlap " + fmt(overlaps.front(), 3) +
                  "->" + fmt(overlaps.back(), 3) + " boundary " + fmt(bounds.front(), 3) + "->" + fmt(bounds.back(), 3);
    }
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(20261016);
  const int depth = 8;
  int total = 0;
  for (const auto& name : gallery_names()) {
    const IfsSpec ifs = gallery(name).ifs();
    const MeasureContext ctx(ifs, depth);
    const int n = static_cast<int>(ifs.size());
    int passed = 0;
    for (int c = 0; c < 20; ++c) {
      const int li = std::uniform_int_distribution<int>(1, 3)(rng);
      const int lj = std::uniform_int_distribution<int>(0, depth - li)(rng);
      std::vector<int> pi, pj;
      for (int k = 0; k < li; ++k) pi.push_back(std::uniform_int_distribution<int>(1, n)(rng));
      for (int k = 0; k < lj; ++k) pj.push_back(std::uniform_int_distribution<int>(1, n)(rng));
      const auto s = check_scaling(ctx, Address(pi), Address(pj));
      passed += s.status == ScalingStatus::pass ? 1 : 0;
      if (s.status != ScalingStatus::pass) {
        o.require(false, name + " " + Address(pi).to_string() + "|" + Address(pj).to_string() + " " + to_string(s.status));
      }
    }
    total += passed;
  }
  if (o.pass) o.detail = std::to_string(total) + " scaling checks passed over " + std::to_string(gallery_names().size()) + " fixtures";
  return o;
}

Outcome criterion7() {
  Outcome o;
  int applicable = 0, random_applicable = 0;
  for (const auto& name : gallery_names()) {
    const SpecFile s = gallery(name);
    BatteryConfig cfg;
    cfg.depth = s.depth;
    const BatteryReport r = condition_battery(s.ifs(), cfg);
    if (!r.applicable) continue;
    ++applicable;
    if (r.disagreement) {
      o.require(false, name + " conditions " + std::to_string(r.disagreement->first) + " and " +
                           std::to_string(r.disagreement->second) + " disagree");
    }
  }
  for (std::uint64_t k = 0; k < 50; ++k) {
    const SpecFile s = random_digit_set(1000 + k);
    BatteryConfig cfg;
    cfg.depth = s.depth;
    const BatteryReport r = condition_battery(s.ifs(), cfg);
    if (!r.applicable) continue;
    ++random_applicable;
    if (r.disagreement) {
      o.require(false, s.name + " conditions " + std::to_string(r.disagreement->first) + " and " +
                           std::to_string(r.disagreement->second) + " disagree");
    }
  }
  if (o.pass) {
    o.detail = "no disagreement: " + std::to_string(applicable) + " gallery fixtures and " +
               std::to_string(random_applicable) + " of 50 digit sets with invariant boundary";
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const double koch = box_counting_dimension(cover_series(gallery("koch").ifs(), 5, 8)).slope;
  const double square = box_counting_dimension(cover_series(gallery("square4").ifs(), 5, 8)).slope;
  o.require(std::abs(koch - 1.2619) <= 0.05, "koch estimate " + fmt(koch));
  o.require(std::abs(square - 2) <= 0.05, "square4 estimate " + fmt(square));
  if (o.pass) o.detail = "koch " + fmt(koch) + ", square4 " + fmt(square);
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::size_t compared = 0;
  for (const auto& name : gallery_names()) {
    const IfsSpec ifs = gallery(name).ifs();
    for (int depth = 1; depth <= 4; ++depth) {
      const AttractorApprox a = approximate(ifs, depth);
      const double tau = default_tolerance(ifs, depth);
      const auto hashed = all_overlap_pairs(a, tau);
      const auto brute = brute_overlaps(a, tau);
      o.require(hashed == brute, name + " depth " + std::to_string(depth) + " differs");
      compared += brute.size();
    }
  }
  if (o.pass) o.detail = "identical witness sets at depths 1-4, " + std::to_string(compared) + " pairs in total";
  return o;
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  pclose(p);
  return out;
}

Outcome criterion10() {
  Outcome o;
  const SpecFile koch = gallery("koch");
  const std::string a = run_command("battery", koch, {}).report;
  const std::string b = run_command("battery", koch, {}).report;
  o.require(a == b, "library reports differ");
#ifdef SSB_CLI_PATH
  const std::string cmd = std::string(SSB_CLI_PATH) + " battery --gallery koch";
  const std::string c1 = capture(cmd);
  const std::string c2 = capture(cmd);
  o.require(!c1.empty() && c1 == c2, "CLI reports differ");
  o.require(c1 == a, "CLI report differs from library report");
#endif
  if (o.pass) o.detail = "byte-identical battery reports (" + std::to_string(a.size()) + " bytes)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"similarity dimension", criterion1},      {"koch boundary clusters", criterion2},
      {"square fixtures", criterion3},           {"l1 example", criterion4},
      {"measure battery", criterion5},           {"scaling check", criterion6},
      {"metamorphic battery suite", criterion7}, {"box counting", criterion8},
      {"hash vs brute oracle", criterion9},      {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = seconds_since(t0);
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s  %s: %s [%.2f s]\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str(), s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
