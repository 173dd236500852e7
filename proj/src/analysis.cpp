#include "ssb/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ssb/spatial_hash.hpp"

namespace ssb {

double similarity_dimension(std::span<const double> ratios) {
  if (ratios.empty()) throw std::invalid_argument("similarity dimension needs at least one ratio");
  for (double r : ratios) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("invalid ratio " + std::to_string(r) + ": must lie in (0,1)");
  }
  auto s = [&](double a) {
    double sum = 0;
    for (double r : ratios) sum += std::pow(r, a);
    return sum;
  };
  double lo = 0;
  double hi = 1;
  while (s(hi) >= 1) {
    lo = hi;
    hi *= 2;
    if (hi > 1e6) throw std::invalid_argument("similarity dimension diverges");
  }
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (s(mid) >= 1 ? lo : hi) = mid;
  }
  return std::abs(s(lo) - 1) <= std::abs(s(hi) - 1) ? lo : hi;
}

BoxCountingFit box_counting_dimension(std::span<const CoverSample> series) {
  if (series.size() < 4) throw std::invalid_argument("box counting needs at least 4 scales");
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (!(series[k].h < series[k - 1].h)) throw std::invalid_argument("box counting scales must strictly decrease");
  }
  const double n = static_cast<double>(series.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& c : series) {
    const double x = std::log(1.0 / c.h);
    const double y = std::log(static_cast<double>(c.count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  BoxCountingFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (const auto& c : series) {
    const double e = std::log(static_cast<double>(c.count)) - (fit.intercept + fit.slope * std::log(1.0 / c.h));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

std::size_t greedy_net_size(std::span<const Point> points, double h) {
  std::vector<Point> net;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto key = static_cast<std::int64_t>(std::floor(hash_coordinate(points[i], 0) / h));
    bool covered = false;
    for (std::int64_t k = key - 1; k <= key + 1 && !covered; ++k) {
      auto it = buckets.find(k);
      if (it == buckets.end()) continue;
      for (auto j : it->second) {
        if (distance(points[i], net[j]) <= h) {
          covered = true;
          break;
        }
      }
    }
    if (!covered) {
      buckets[key].push_back(net.size());
      net.push_back(points[i]);
    }
  }
  return net.size();
}

std::vector<CoverSample> cover_series(const IfsSpec& ifs, int first, int last, std::uint64_t budget) {
  std::vector<CoverSample> out;
  for (int k = first; k <= last; ++k) {
    const AttractorApprox a = approximate(ifs, k, budget);
    const double h = std::pow(ifs.r_max(), k);
    const std::size_t count = ifs.backend() == Backend::euclidean ? cell_cover(a, h).size() : greedy_net_size(a.points(), h);
    out.push_back({h, count});
  }
  return out;
}

}  // namespace ssb
