#include "ssb/render.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "ssb/error.hpp"

namespace ssb {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string render_svg(const AttractorApprox& a, const BoundaryApprox* b) {
  if (a.backend() != Backend::euclidean || a.center().dim() != 2) throw Unsupported("render unavailable");

  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& p : a.points()) {
    x0 = std::min(x0, p.coords()[0]);
    x1 = std::max(x1, p.coords()[0]);
    y0 = std::min(y0, p.coords()[1]);
    y1 = std::max(y1, p.coords()[1]);
  }
  double span = std::max(x1 - x0, y1 - y0);
  if (!(span > 0)) span = 1;
  const double margin = 0.05 * span + a.max_radius();
  x0 -= margin;
  y0 -= margin;
  x1 += margin;
  y1 += margin;
  const double width = 800;
  const double scale = width / (x1 - x0);
  const double height = (y1 - y0) * scale;
  auto sx = [&](double x) { return num((x - x0) * scale); };
  auto sy = [&](double y) { return num((y1 - y) * scale); };
  auto sr = [&](double r) { return num(std::max(r * scale, 0.4)); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<g id=\"attractor\" fill=\"#1f4e79\" fill-opacity=\"0.6\">\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& c = a.point(i).coords();
    out += "<circle cx=\"" + sx(c[0]) + "\" cy=\"" + sy(c[1]) + "\" r=\"" + sr(a.radius(i)) + "\"/>\n";
  }
  out += "</g>\n";
  if (b && !b->empty()) {
    out += "<g id=\"boundary\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1\">\n";
    for (const auto& w : b->witnesses) {
      const auto& c = w.point.coords();
      out += "<circle cx=\"" + sx(c[0]) + "\" cy=\"" + sy(c[1]) + "\" r=\"" + sr(std::max(w.radius, b->tau)) + "\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace ssb
