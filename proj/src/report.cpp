#include "ssb/report.hpp"

#include <cstdio>
#include <random>
#include <stdexcept>

#include "ssb/analysis.hpp"
#include "ssb/error.hpp"
#include "ssb/render.hpp"

namespace ssb {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Report::section(const std::string& name) {
  if (!text_.empty()) text_ += '\n';
  text_ += "[" + name + "]\n";
}

void Report::put(const std::string& key, double v) { put(key, format_real(v)); }
void Report::put(const std::string& key, int v) { put(key, std::to_string(v)); }
void Report::put(const std::string& key, std::size_t v) { put(key, std::to_string(v)); }
void Report::put(const std::string& key, bool v) { put(key, std::string(v ? "true" : "false")); }
void Report::put(const std::string& key, const std::string& v) { text_ += key + " = " + v + "\n"; }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"dim",     "attractor", "boundary",  "invariance",
                                                 "measure", "battery",   "tilecheck", "render"};
  return names;
}

namespace {

constexpr std::size_t kListedWitnesses = 64;

struct Run {
  const SpecFile& spec;
  IfsSpec ifs;
  int depth;
  std::uint64_t budget;
  std::uint64_t seed;
  double tau;

  Run(const SpecFile& s, const RunOptions& o)
      : spec(s),
        ifs(s.ifs()),
        depth(o.depth.value_or(s.depth)),
        budget(o.budget.value_or(s.budget)),
        seed(o.seed.value_or(s.seed)),
        tau(0) {
    if (depth < 0) throw std::invalid_argument("depth must be >= 0");
    tau = o.tol ? *o.tol : (s.tol ? *s.tol : default_tolerance(ifs, depth));
  }
};

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v[i]);
  return s;
}

void header(Report& r, const Run& run) {
  r.section("ifs");
  r.put("name", run.spec.name);
  r.put("backend", to_string(run.ifs.backend()));
  r.put("dim", run.ifs.dim());
  r.put("maps", run.ifs.size());
  r.put("ratios", join_reals(run.ifs.ratios()));
}

void put_interval(Report& r, const std::string& key, const IntervalEstimate& e) {
  r.put(key + ".lower", e.lower);
  r.put(key + ".upper", e.upper);
}

void boundary_section(Report& r, const BoundaryApprox& b) {
  r.section("boundary");
  r.put("depth", b.depth);
  r.put("tau", b.tau);
  r.put("pairs", b.pair_count);
  r.put("certified", b.certified);
  r.put("witnesses", b.witnesses.size());
  r.put("max_radius", b.max_radius);
  const auto clusters = cluster_witnesses(b);
  r.put("clusters", clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const std::string k = "cluster." + std::to_string(c + 1);
    r.put(k + ".members", clusters[c].members.size());
    r.put(k + ".lo", join_reals(clusters[c].lo));
    r.put(k + ".hi", join_reals(clusters[c].hi));
  }
  const std::size_t listed = std::min(b.witnesses.size(), kListedWitnesses);
  r.put("witnesses_listed", listed);
  for (std::size_t i = 0; i < listed; ++i) {
    r.put("witness." + std::to_string(i + 1), b.witnesses[i].point.to_string());
  }
}

void invariance_section(Report& r, const InvarianceVerdict& v) {
  r.section("invariance");
  r.put("status", to_string(v.status));
  r.put("tau_prime", v.tau_prime);
  r.put("in_k", v.in_k);
  r.put("outside", v.outside);
  r.put("undecided", v.undecided);
  r.put("undecided_far", v.undecided_far);
  if (v.status == Verdict::violated) {
    r.put("violation.map", v.map);
    r.put("violation.witness", v.witness);
    if (v.preimage) r.put("violation.preimage", v.preimage->to_string());
    r.put("violation.preimage_gap", v.preimage_gap);
  }
}

RunOutput cmd_dim(const Run& run) {
  Report r;
  header(r, run);
  r.section("dim");
  r.put("alpha", similarity_dimension(run.ifs.ratios()));
  return {r.str(), std::nullopt};
}

RunOutput cmd_attractor(const Run& run, bool svg) {
  const AttractorApprox a = approximate(run.ifs, run.depth, run.budget);
  Report r;
  header(r, run);
  r.section("attractor");
  r.put("depth", run.depth);
  r.put("points", a.size());
  r.put("center", a.center().to_string());
  r.put("ball_radius", a.ball_radius());
  r.put("max_radius", a.max_radius());
  if (run.ifs.backend() == Backend::euclidean && run.depth >= 1) {
    r.put("self_consistency", self_consistency(run.ifs, run.depth - 1, run.budget));
  }
  RunOutput out{r.str(), std::nullopt};
  if (svg) out.svg = render_svg(a);
  return out;
}

RunOutput cmd_boundary(const Run& run, bool svg) {
  const AttractorApprox a = approximate(run.ifs, run.depth, run.budget);
  const BoundaryApprox b = similarity_boundary(run.ifs, a, run.tau);
  Report r;
  header(r, run);
  r.section("overlaps");
  const auto pairs = all_overlap_pairs(a, run.tau);
  for (std::size_t j = 1; j <= run.ifs.size(); ++j) {
    for (std::size_t k = 1; k <= run.ifs.size(); ++k) {
      if (j == k) continue;
      std::size_t n = 0;
      for (const auto& w : pairs) n += (w.j == static_cast<int>(j) && w.k == static_cast<int>(k)) ? 1 : 0;
      r.put("pairs." + std::to_string(j) + "." + std::to_string(k), n);
    }
  }
  boundary_section(r, b);
  RunOutput out{r.str(), std::nullopt};
  if (svg) out.svg = render_svg(a, &b);
  return out;
}

RunOutput cmd_invariance(const Run& run, bool svg) {
  const AttractorApprox a = approximate(run.ifs, run.depth, run.budget);
  const BoundaryApprox b = similarity_boundary(run.ifs, a, run.tau);
  const InvarianceVerdict v = check_inverse_invariance(run.ifs, b, a, run.tau);
  Report r;
  header(r, run);
  r.section("boundary");
  r.put("depth", run.depth);
  r.put("tau", run.tau);
  r.put("witnesses", b.witnesses.size());
  r.put("clusters", cluster_witnesses(b).size());
  invariance_section(r, v);
  RunOutput out{r.str(), std::nullopt};
  if (svg) out.svg = render_svg(a, &b);
  return out;
}

RunOutput cmd_measure(const Run& run) {
  const MeasureContext ctx(run.ifs, run.depth, 3, run.budget);
  const BoundaryApprox b = similarity_boundary(run.ifs, ctx.approx(), run.tau);
  Report r;
  header(r, run);
  r.section("measure");
  r.put("depth", run.depth);
  r.put("alpha", ctx.alpha());
  r.put("tau", run.tau);
  const auto n = static_cast<int>(run.ifs.size());
  for (int i = 1; i <= n; ++i) {
    const IntervalEstimate e = mu_branch(ctx, i);
    put_interval(r, "branch." + std::to_string(i), e);
    r.put("branch." + std::to_string(i) + ".expected", ctx.ratios().weight(i));
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) put_interval(r, "overlap." + std::to_string(i) + "." + std::to_string(j), mu_overlap(ctx, i, j));
  }
  put_interval(r, "boundary", mu_boundary(ctx, b));

  r.section("scaling");
  std::mt19937_64 rng(run.seed);
  const int checks = 20;
  int passed = 0, failed = 0;
  for (int c = 0; c < checks; ++c) {
    const int li = std::uniform_int_distribution<int>(1, std::max(1, run.depth / 2))(rng);
    const int lj = std::uniform_int_distribution<int>(0, std::max(0, run.depth - li))(rng);
    std::vector<int> pi, pj;
    for (int k = 0; k < li; ++k) pi.push_back(std::uniform_int_distribution<int>(1, n)(rng));
    for (int k = 0; k < lj; ++k) pj.push_back(std::uniform_int_distribution<int>(1, n)(rng));
    const ScalingCheck s = check_scaling(ctx, Address(pi), Address(pj));
    passed += s.status == ScalingStatus::pass ? 1 : 0;
    failed += s.status == ScalingStatus::fail ? 1 : 0;
  }
  r.put("checks", checks);
  r.put("pass", passed);
  r.put("fail", failed);
  r.put("indeterminate", checks - passed - failed);
  return {r.str(), std::nullopt};
}

RunOutput cmd_battery(const Run& run) {
  BatteryConfig cfg;
  cfg.depth = run.depth;
  cfg.tau = run.tau;
  cfg.budget = run.budget;
  const BatteryReport rep = condition_battery(run.ifs, cfg);
  Report r;
  header(r, run);
  r.section("battery");
  r.put("depth", rep.depth);
  r.put("tau", rep.tau);
  r.put("alpha", rep.alpha);
  r.put("coincident_maps", rep.coincident_maps);
  r.put("precondition", to_string(rep.precondition.status));
  r.put("applicable", rep.applicable);
  r.put("consistent", rep.consistent);
  if (rep.disagreement) {
    r.put("disagreement", std::to_string(rep.disagreement->first) + " " + std::to_string(rep.disagreement->second));
  }
  if (!rep.banner.empty()) r.put("banner", rep.banner);
  for (const auto& c : rep.conditions) {
    r.section("condition." + std::to_string(c.id));
    r.put("status", to_string(c.status));
    if (!c.note.empty()) r.put("note", c.note);
    for (const auto& [k, v] : c.evidence) r.put(k, v);
  }
  return {r.str(), std::nullopt};
}

RunOutput cmd_tilecheck(const Run& run) {
  Report r;
  header(r, run);
  r.section("tilecheck");
  r.put("depth", run.depth);
  r.put("tau", run.tau);
  try {
    const double h = run.spec.grid.value_or(0);
    const TileBoundary topo = tile_topological_boundary(run.ifs, run.depth, h, run.budget);
    const BoundaryApprox b = similarity_boundary(run.ifs, run.depth, run.tau, run.budget);
    const BoundaryComparison cmp = compare_boundaries(b, topo, run.tau);
    r.put("tile", true);
    r.put("grid", topo.h);
    r.put("raster_cells", topo.centers.size());
    r.put("witnesses", b.witnesses.size());
    r.put("containment", cmp.containment);
    r.put("equality", cmp.equality);
    r.put("sim_to_topo", cmp.sim_to_topo);
    r.put("topo_to_sim", cmp.topo_to_sim);
    r.put("tolerance", cmp.tolerance);
  } catch (const NotATile& e) {
    r.put("tile", false);
    r.put("reason", e.what());
  }
  return {r.str(), std::nullopt};
}

RunOutput cmd_render(const Run& run) {
  const AttractorApprox a = approximate(run.ifs, run.depth, run.budget);
  const BoundaryApprox b = similarity_boundary(run.ifs, a, run.tau);
  RunOutput out;
  out.svg = render_svg(a, &b);
  Report r;
  header(r, run);
  r.section("render");
  r.put("depth", run.depth);
  r.put("points", a.size());
  r.put("highlighted", b.witnesses.size());
  out.report = r.str();
  return out;
}

}  // namespace

RunOutput run_command(const std::string& command, const SpecFile& spec, const RunOptions& opts) {
  const Run run(spec, opts);
  if (command == "dim") return cmd_dim(run);
  if (command == "attractor") return cmd_attractor(run, opts.svg);
  if (command == "boundary") return cmd_boundary(run, opts.svg);
  if (command == "invariance") return cmd_invariance(run, opts.svg);
  if (command == "measure") return cmd_measure(run);
  if (command == "battery") return cmd_battery(run);
  if (command == "tilecheck") return cmd_tilecheck(run);
  if (command == "render") return cmd_render(run);
  throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace ssb
