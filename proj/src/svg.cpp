#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "bskel/io.hpp"
#include "bskel/region_index.hpp"

namespace bskel {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  std::string s = buf;
  return s == "-0.000" ? "0.000" : s;
}

struct HalfPlane {
  double ax, ay, b;  // ax x + ay y <= b
};

Polygon clip(const Polygon& poly, const HalfPlane& h) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto [px, py] = poly[i];
    const auto [qx, qy] = poly[(i + 1) % n];
    const double fp = h.ax * px + h.ay * py - h.b, fq = h.ax * qx + h.ay * qy - h.b;
    if (fp <= 0) out.emplace_back(px, py);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      const double t = fp / (fp - fq);
      out.emplace_back(px + t * (qx - px), py + t * (qy - py));
    }
  }
  return out;
}

// Projection of {x : lo_k <= a_k . x <= hi_k} onto axes (ax, ay), with any
// remaining coordinate eliminated pairwise.
Polygon outline(const Box& box, const ExtendedFrame& frame, int ax, int ay) {
  const int n = frame.dim();
  int free_axis = -1;
  for (int i = 0; i < n; ++i) {
    if (i != ax && i != ay) free_axis = i;
  }
  struct Row {
    double x, y, z, b;
  };
  std::vector<Row> rows;
  for (int k = 0; k < frame.size(); ++k) {
    const Coords& a = frame.axis(k);
    const double z = free_axis < 0 ? 0.0 : a[free_axis];
    rows.push_back({a[ax], a[ay], z, box[k].hi});
    rows.push_back({-a[ax], -a[ay], -z, -box[k].lo});
  }
  std::vector<HalfPlane> planes;
  for (const auto& r : rows) {
    if (r.z == 0) planes.push_back({r.x, r.y, r.b});
  }
  for (const auto& p : rows) {
    if (p.z <= 0) continue;
    for (const auto& q : rows) {
      if (q.z >= 0) continue;
      const double s = -q.z, t = p.z;
      planes.push_back({s * p.x + t * q.x, s * p.y + t * q.y, s * p.b + t * q.b});
    }
  }
  double reach = 1;
  for (int k = 0; k < frame.size(); ++k) {
    reach = std::max({reach, std::abs(box[k].lo), std::abs(box[k].hi)});
  }
  reach *= 4;
  Polygon poly{{-reach, -reach}, {reach, -reach}, {reach, reach}, {-reach, reach}};
  for (const auto& h : planes) {
    if (poly.empty()) break;
    if (h.ax == 0 && h.ay == 0) {
      if (h.b < 0) poly.clear();
      continue;
    }
    poly = clip(poly, h);
  }
  // Drop repeated vertices left by clipping through a corner.
  Polygon out;
  for (const auto& v : poly) {
    if (out.empty() || std::abs(v.first - out.back().first) + std::abs(v.second - out.back().second) >
                           1e-12 * reach) {
      out.push_back(v);
    }
  }
  while (out.size() > 1 && std::abs(out.front().first - out.back().first) +
                                   std::abs(out.front().second - out.back().second) <=
                               1e-12 * reach) {
    out.pop_back();
  }
  return out;
}

}  // namespace

std::vector<Polygon> lens_outlines(const Lens& lens, std::pair<int, int> axes) {
  const int n = lens.c1.dim();
  if (n < 2 || n > 3) throw UnsupportedError("lens outlines need d = 2 or d = 3");
  const ExtendedFrame frame(lens.metric, n);
  const auto boxes = lens_to_boxes(lens, frame);
  const auto [ax, ay] = axes;
  std::vector<Polygon> out;
  for (const auto& box : boxes) {
    if (box.empty()) continue;
    auto poly = outline(box, frame, ax, ay);
    if (!poly.empty()) out.push_back(std::move(poly));
  }
  return out;
}

std::string render_svg(const PointSet& ps, const SkeletonGraph& g, const SvgOptions& opt) {
  const int n = ps.dim();
  if (n > 3 && !opt.axes) throw InputError("projection axes are required for d > 3");
  const auto axes = opt.axes.value_or(std::pair<int, int>{0, 1});
  if (axes.first < 0 || axes.first >= n || axes.second < 0 || axes.second >= n ||
      axes.first == axes.second) {
    throw InputError("invalid projection axes");
  }
  std::vector<Polygon> overlay;
  if (opt.lens_pair) {
    const Point *a = nullptr, *b = nullptr;
    for (const auto& p : ps) {
      if (p.id == opt.lens_pair->first) a = &p;
      if (p.id == opt.lens_pair->second) b = &p;
    }
    if (!a || !b || a == b) throw InputError("unknown lens pair");
    for (const auto& lens :
         minimal_lenses(*a, *b, g.params.beta, g.params.metric, g.params.variant)) {
      for (auto& poly : lens_outlines(lens, axes)) overlay.push_back(std::move(poly));
    }
  }
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto extend = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& p : ps) extend(p.coords[axes.first], p.coords[axes.second]);
  for (const auto& poly : overlay) {
    for (auto [x, y] : poly) extend(x, y);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double inner = opt.width - 2 * opt.margin;
  const double scale = inner / span;
  const double height = (ymax - ymin) * scale + 2 * opt.margin;
  auto sx = [&](double x) { return fmt(opt.margin + (x - xmin) * scale); };
  auto sy = [&](double y) { return fmt(height - opt.margin - (y - ymin) * scale); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(opt.width)
     << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(opt.width) << " "
     << fmt(height) << "\">\n";
  os << "<title>beta=" << fmt(g.params.beta) << " " << to_string(g.params.metric) << " "
     << to_string(g.params.variant) << "</title>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& poly : overlay) {
    os << "<polygon class=\"lens\" fill=\"#f4c36b\" fill-opacity=\"0.35\" stroke=\"#c07a00\" "
          "stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) {
      os << (i ? " " : "") << sx(poly[i].first) << "," << sy(poly[i].second);
    }
    os << "\"/>\n";
  }
  std::map<PointId, const Point*> by_id;
  for (const auto& p : ps) by_id[p.id] = &p;
  os << "<g class=\"edges\" stroke=\"#334\" stroke-width=\"1.2\">\n";
  for (const auto& e : g.edges) {
    auto ia = by_id.find(e.a), ib = by_id.find(e.b);
    if (ia == by_id.end() || ib == by_id.end()) throw InputError("edge references unknown id");
    const Coords& a = ia->second->coords;
    const Coords& b = ib->second->coords;
    os << "<line x1=\"" << sx(a[axes.first]) << "\" y1=\"" << sy(a[axes.second]) << "\" x2=\""
       << sx(b[axes.first]) << "\" y2=\"" << sy(b[axes.second]) << "\"/>\n";
  }
  os << "</g>\n<g class=\"points\" fill=\"#c0392b\">\n";
  for (const auto& [id, p] : by_id) {
    os << "<circle cx=\"" << sx(p->coords[axes.first]) << "\" cy=\"" << sy(p->coords[axes.second])
       << "\" r=\"" << fmt(opt.point_radius) << "\"/>\n";
    if (opt.labels) {
      os << "<text x=\"" << sx(p->coords[axes.first]) << "\" y=\"" << sy(p->coords[axes.second])
         << "\" dx=\"4\" dy=\"-4\" font-size=\"10\">" << id << "</text>\n";
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace bskel
