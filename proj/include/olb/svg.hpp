#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "olb/geometry.hpp"
#include "olb/support_oval.hpp"

namespace olb::svg {

struct Circle {
  PlanePoint center;
  double radius = 0.0;
};

struct Scene {
  std::vector<PlanePoint> boundary;
  std::vector<std::vector<PlanePoint>> polylines;
  std::vector<PlanePoint> dots;
  std::vector<Circle> circles;
};

struct Style {
  int size = 640;
  double stroke = 1.5;
};

inline std::vector<PlanePoint> boundary_points(const SupportOval& oval, std::size_t count = 720) {
  std::vector<PlanePoint> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) pts.push_back(oval.point_at(kTwoPi * static_cast<double>(k) / count));
  return pts;
}

/// Static SVG with the view box fitted to all geometry plus a 10% margin.
/// The y axis points up.
inline std::string render(const Scene& scene, const Style& style = {}) {
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  auto grow = [&](const PlanePoint& q, double r = 0.0) {
    xmin = std::min(xmin, q.x() - r);
    xmax = std::max(xmax, q.x() + r);
    ymin = std::min(ymin, q.y() - r);
    ymax = std::max(ymax, q.y() + r);
  };
  for (const auto& q : scene.boundary) grow(q);
  for (const auto& line : scene.polylines)
    for (const auto& q : line) grow(q);
  for (const auto& q : scene.dots) grow(q);
  for (const auto& c : scene.circles) grow(c.center, c.radius);
  if (!(xmax > xmin)) {
    xmin = ymin = -1.0;
    xmax = ymax = 1.0;
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double margin = 0.1 * span;
  const double vx = xmin - margin, vy = -(ymax + margin), vw = (xmax - xmin) + 2 * margin, vh = (ymax - ymin) + 2 * margin;
  const double unit = std::max(vw, vh) / style.size;
  const double sw = style.stroke * unit;

  std::ostringstream out;
  out.precision(9);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.size << "\" height=\"" << style.size
      << "\" viewBox=\"" << vx << ' ' << vy << ' ' << vw << ' ' << vh << "\">\n";
  out << "<rect x=\"" << vx << "\" y=\"" << vy << "\" width=\"" << vw << "\" height=\"" << vh << "\" fill=\"white\"/>\n";
  auto path = [&](const std::vector<PlanePoint>& pts, bool closed, const char* color) {
    if (pts.empty()) return;
    out << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << sw << "\" d=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) out << (k == 0 ? 'M' : 'L') << pts[k].x() << ',' << -pts[k].y() << ' ';
    if (closed) out << 'Z';
    out << "\"/>\n";
  };
  path(scene.boundary, true, "black");
  for (const auto& line : scene.polylines) path(line, false, "#1f5fbf");
  for (const auto& c : scene.circles)
    out << "<circle cx=\"" << c.center.x() << "\" cy=\"" << -c.center.y() << "\" r=\"" << c.radius
        << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"" << sw << "\"/>\n";
  for (const auto& q : scene.dots)
    out << "<circle cx=\"" << q.x() << "\" cy=\"" << -q.y() << "\" r=\"" << 3.0 * sw << "\" fill=\"#c0392b\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace olb::svg
