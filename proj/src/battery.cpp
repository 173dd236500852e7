#include <algorithm>
#include <cmath>
#include <limits>

#include "ssb/analysis.hpp"
#include "ssb/spatial_hash.hpp"

namespace ssb {

SoscResult sosc_k_witness(const IfsSpec& ifs, const AttractorApprox& a, const std::vector<std::size_t>& candidate,
                          double tau, const std::vector<Point>& core) {
  SoscResult r;
  r.candidate_size = candidate.size();
  r.worst_invariance = std::numeric_limits<double>::infinity();
  r.worst_disjoint = std::numeric_limits<double>::infinity();
  if (candidate.empty() || a.depth() == 0) return r;

  std::vector<char> in_u(a.size(), 0);
  for (auto i : candidate) in_u.at(i) = 1;
  std::vector<Point> excluded = core;
  if (core.empty()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!in_u[i]) excluded.push_back(a.point(i));
    }
  }
  const SpatialHash ehash(excluded, tau);
  const SpatialHash khash(a.points(), std::max(a.max_radius(), 1e-300));
  const double emax = a.max_radius();
  const double slack_base = tau / ifs.r_min();

  r.clause_invariance = true;
  r.clause_disjoint = true;
  for (auto p_index : candidate) {
    const Point& p = a.point(p_index);
    const double dp = excluded.empty() ? std::numeric_limits<double>::infinity() : ehash.nearest(p).second;
    for (std::size_t i = 0; i < ifs.size(); ++i) {
      const double ri = ifs.map(i).ratio();
      const Point q = apply(ifs.map(i), p);
      if (!excluded.empty()) {
        const double need = ri * dp - (1 + ri) * slack_base;
        if (need > 0) {
          double dq = std::numeric_limits<double>::infinity();
          ehash.for_each_candidate(q, need, [&](std::size_t e) { dq = std::min(dq, distance(q, excluded[e])); });
          const double margin = std::min(dq, need) - need;
          r.worst_invariance = std::min(r.worst_invariance, margin);
          if (dq < need) r.clause_invariance = false;
        }
      }
      const int own = static_cast<int>(i) + 1;
      double dj = std::numeric_limits<double>::infinity();
      khash.for_each_candidate(q, 2 * emax, [&](std::size_t n) {
        if (a.branch(n) != own) dj = std::min(dj, distance(q, a.point(n)));
      });
      r.worst_disjoint = std::min(r.worst_disjoint, std::min(dj, 2 * emax) - emax);
      if (dj <= emax) r.clause_disjoint = false;
    }
  }
  if (r.worst_invariance == std::numeric_limits<double>::infinity()) r.worst_invariance = 0;
  r.pass = r.clause_invariance && r.clause_disjoint;
  return r;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::supported:
      return "supported";
    case Status::refuted:
      return "refuted";
    case Status::indeterminate:
      return "indeterminate";
  }
  return "?";
}

namespace {

// Largest depth <= d whose smallest cells are still 8 exclusion bands wide.
int coarse_depth(const IfsSpec& ifs, int d, double radius, double band) {
  int c = 0;
  while (c < d && std::pow(ifs.r_min(), c + 1) * radius >= 8 * band) ++c;
  return c;
}

}  // namespace

BatteryReport condition_battery(const IfsSpec& ifs, const BatteryConfig& cfg) {
  BatteryReport rep;
  rep.name = ifs.name();
  rep.depth = cfg.depth;
  rep.tau = cfg.tau > 0 ? cfg.tau : default_tolerance(ifs, cfg.depth);
  rep.alpha = similarity_dimension(ifs.ratios());
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    for (std::size_t j = i + 1; j < ifs.size(); ++j) {
      rep.coincident_maps = rep.coincident_maps || maps_coincide(ifs.map(i), ifs.map(j));
    }
  }
  const double tau = rep.tau;

  const MeasureContext ctx(ifs, cfg.depth, cfg.refine, cfg.budget);
  const AttractorApprox& a = ctx.approx();
  const BoundaryApprox b = similarity_boundary(ifs, a, tau);
  rep.precondition = check_inverse_invariance(ifs, b, a, tau);
  rep.applicable = rep.precondition.status == Verdict::invariant;
  const std::vector<std::size_t> u = complement_U(a, b, tau);
  // coinciding maps give K_i = K_j exactly, which certifies the failure of every condition
  const bool certified_bad = rep.coincident_maps;

  for (int k = 0; k < 7; ++k) rep.conditions[static_cast<std::size_t>(k)].id = k + 1;
  auto& c1 = rep.conditions[0];
  auto& c2 = rep.conditions[1];
  auto& c3 = rep.conditions[2];
  auto& c4 = rep.conditions[3];
  auto& c5 = rep.conditions[4];
  auto& c6 = rep.conditions[5];
  auto& c7 = rep.conditions[6];

  // (3) U nonempty
  c3.evidence = {{"u_representatives", static_cast<double>(u.size())}, {"representatives", static_cast<double>(a.size())}};
  if (certified_bad) {
    c3.status = Status::refuted;
    c3.note = "coinciding maps: B = K";
  } else if (!u.empty()) {
    c3.status = Status::supported;
  } else {
    c3.note = "no representative clears the exclusion band at this resolution";
  }

  // (1) SOSC_K with U = K \ B
  const SoscResult sosc = sosc_k_witness(ifs, a, u, tau, b.points());
  c1.evidence = {{"clause_invariance", sosc.clause_invariance ? 1.0 : 0.0},
                 {"clause_disjoint", sosc.clause_disjoint ? 1.0 : 0.0},
                 {"worst_invariance_margin", sosc.worst_invariance},
                 {"worst_disjoint_margin", sosc.worst_disjoint}};
  if (certified_bad) {
    c1.status = Status::refuted;
    c1.note = "coinciding maps: f_i(K) = K_j for some i != j";
  } else if (sosc.pass) {
    c1.status = Status::supported;
  } else {
    c1.note = u.empty() ? "candidate U is empty" : "candidate U = K \\ B fails a clause at tolerance";
  }

  // (2) box-counting estimate against alpha
  const bool euclid = ifs.backend() == Backend::euclidean;
  c2.evidence = {{"alpha", rep.alpha}};
  if (euclid && rep.alpha > static_cast<double>(ifs.dim()) + 1e-9) {
    c2.status = Status::refuted;
    c2.note = "alpha exceeds the ambient dimension";
  } else if (certified_bad) {
    c2.status = Status::refuted;
    c2.note = "coinciding maps: K is the attractor of a smaller system";
  } else if (cfg.depth - cfg.box_scales + 1 < 1) {
    c2.note = "depth too small for the requested number of scales";
  } else {
    const auto series = cover_series(ifs, cfg.depth - cfg.box_scales + 1, cfg.depth, cfg.budget);
    const BoxCountingFit fit = box_counting_dimension(series);
    c2.evidence.push_back({"box_estimate", fit.slope});
    c2.evidence.push_back({"fit_residual", fit.residual});
    if (std::abs(fit.slope - rep.alpha) <= cfg.dimension_tolerance) {
      c2.status = Status::supported;
    } else {
      c2.note = "box-counting estimate outside tolerance";
    }
  }

  // (4) every coarse cell keeps a representative of U
  {
    const double band = tau + a.max_radius() + b.max_radius;
    const int cd = coarse_depth(ifs, cfg.depth, a.ball_radius(), band);
    std::size_t span = 1;
    for (int k = cd; k < cfg.depth; ++k) span *= ifs.size();
    std::vector<char> hit(a.size() / span, 0);
    for (auto i : u) hit[i / span] = 1;
    const auto covered = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    c4.evidence = {{"coarse_depth", static_cast<double>(cd)},
                   {"cells", static_cast<double>(hit.size())},
                   {"cells_with_u", static_cast<double>(covered)}};
    if (certified_bad) {
      c4.status = Status::refuted;
      c4.note = "coinciding maps: B = K";
    } else if (!u.empty() && covered == hit.size()) {
      c4.status = Status::supported;
    } else {
      c4.note = "some coarse cell lies inside the exclusion band";
    }
  }

  // (5) mu(K_i) = r_i^alpha
  {
    double width = 0;
    for (std::size_t i = 1; i <= ifs.size(); ++i) width = std::max(width, mu_branch(ctx, static_cast<int>(i)).width());
    c5.evidence = {{"max_branch_width", width}};
    if (certified_bad) {
      c5.status = Status::refuted;
      c5.note = "coinciding maps: mu(K_i) >= r_i^alpha + r_j^alpha";
    } else if (width <= cfg.measure_tolerance) {
      c5.status = Status::supported;
    }
  }

  // (6) mu(K_i ∩ K_j) = 0
  {
    double worst = 0;
    for (std::size_t i = 1; i <= ifs.size(); ++i) {
      for (std::size_t j = i + 1; j <= ifs.size(); ++j) {
        worst = std::max(worst, mu_overlap(ctx, static_cast<int>(i), static_cast<int>(j)).upper);
      }
    }
    c6.evidence = {{"max_overlap_upper", worst}};
    if (certified_bad) {
      c6.status = Status::refuted;
      c6.note = "coinciding maps: mu(K_i ∩ K_j) = mu(K_i) > 0";
    } else if (worst <= cfg.measure_tolerance) {
      c6.status = Status::supported;
    }
  }

  // (7) mu(B) = 0
  {
    const IntervalEstimate mb = mu_boundary(ctx, b);
    c7.evidence = {{"boundary_upper", mb.upper}};
    if (certified_bad) {
      c7.status = Status::refuted;
      c7.note = "coinciding maps: mu(B) = 1";
    } else if (mb.upper <= cfg.measure_tolerance) {
      c7.status = Status::supported;
    }
  }

  if (!rep.applicable) {
    rep.banner = "theorem not applicable: boundary is " + to_string(rep.precondition.status);
  }
  const ConditionEntry* first = nullptr;
  for (const auto& c : rep.conditions) {
    if (c.status == Status::indeterminate) continue;
    if (!first) {
      first = &c;
    } else if (c.status != first->status && !rep.disagreement) {
      rep.disagreement = std::make_pair(first->id, c.id);
    }
  }
  rep.consistent = !(rep.applicable && rep.disagreement);
  return rep;
}

}  // namespace ssb
