#include "bskel/family.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace bskel {

namespace {

using Bounds = std::array<Interval, 3>;
using Param = std::array<double, 2>;
using Bits = std::vector<std::uint64_t>;

bool valid(const Interval& iv) { return iv.lo <= iv.hi; }

// Tight extents of a center set along q0, q1 and q0 + q1.
Bounds tight(const LensFamily::CenterSet& s, const Bounds& b) {
  if (s.params == 1) return {b[0], Interval{}, Interval{}};
  return {Interval{std::max(b[0].lo, b[2].lo - b[1].hi), std::min(b[0].hi, b[2].hi - b[1].lo)},
          Interval{std::max(b[1].lo, b[2].lo - b[0].hi), std::min(b[1].hi, b[2].hi - b[0].lo)},
          Interval{std::max(b[2].lo, b[0].lo + b[1].lo), std::min(b[2].hi, b[0].hi + b[1].hi)}};
}

bool nonempty(const LensFamily::CenterSet& s, const Bounds& b) {
  if (s.params == 1) return valid(b[0]);
  const Bounds t = tight(s, b);
  return valid(t[0]) && valid(t[1]) && valid(t[2]);
}

bool contains(const LensFamily::CenterSet& s, const Bounds& b, const Param& q) {
  auto in = [](const Interval& iv, double x) { return iv.lo <= x && x <= iv.hi; };
  if (s.params == 1) return in(b[0], q[0]);
  return in(b[0], q[0]) && in(b[1], q[1]) && in(b[2], q[0] + q[1]);
}

Coords at(const LensFamily::CenterSet& s, const Param& q) {
  Coords c = s.o + s.a0 * q[0];
  if (s.params == 2) c += s.a1 * q[1];
  return c;
}

std::vector<Coords> set_vertices(const LensFamily::CenterSet& s) {
  const Bounds t = tight(s, s.bounds);
  if (s.params == 1) return {at(s, {t[0].lo, 0}), at(s, {t[0].hi, 0})};
  std::vector<Param> cand;
  for (double y : {t[0].lo, t[0].hi}) {
    for (double z : {t[1].lo, t[1].hi}) cand.push_back({y, z});
    for (double w : {t[2].lo, t[2].hi}) cand.push_back({y, w - y});
  }
  for (double z : {t[1].lo, t[1].hi}) {
    for (double w : {t[2].lo, t[2].hi}) cand.push_back({w - z, z});
  }
  const double tol = 1e-9 * (1 + std::abs(t[2].hi));
  Bounds wide = t;
  for (auto& iv : wide) iv = {iv.lo - tol, iv.hi + tol};
  std::vector<Coords> out;
  for (const auto& q : cand) {
    if (contains(s, wide, q)) out.push_back(at(s, q));
  }
  return out;
}

// Sorted breakpoints inside [lo, hi].
std::vector<double> breaks(const Interval& range, const std::vector<Bounds>& sets, int f) {
  std::vector<double> v{range.lo, range.hi};
  for (const auto& b : sets) {
    for (double x : {b[static_cast<std::size_t>(f)].lo, b[static_cast<std::size_t>(f)].hi}) {
      if (x > range.lo && x < range.hi) v.push_back(x);
    }
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// One parameter point inside every open cell of the arrangement cut out of
// the center set by the blocked sets.
std::vector<Param> cell_points(const LensFamily::CenterSet& s, const std::vector<Bounds>& blocked) {
  const Bounds t = tight(s, s.bounds);
  std::vector<Param> out;
  const auto ys = breaks(t[0], blocked, 0);
  if (s.params == 1) {
    if (ys.size() == 1) return {{ys[0], 0}};
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) out.push_back({(ys[i] + ys[i + 1]) / 2, 0});
    return out;
  }
  const auto zs = breaks(t[1], blocked, 1);
  const auto ws = breaks(t[2], blocked, 2);
  if (ys.size() == 1 || zs.size() == 1 || ws.size() == 1) {
    // Degenerate polygon: its vertices stand in for the cells.
    for (double y : ys) {
      for (double z : zs) {
        if (contains(s, s.bounds, {y, z})) out.push_back({y, z});
      }
    }
    return out;
  }
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    for (std::size_t j = 0; j + 1 < zs.size(); ++j) {
      const double y0 = ys[i], y1 = ys[i + 1], z0 = zs[j], z1 = zs[j + 1];
      const double wlo = y0 + z0, whi = y1 + z1;
      std::vector<double> cut{wlo};
      for (auto it = std::upper_bound(ws.begin(), ws.end(), wlo); it != ws.end() && *it < whi; ++it) {
        cut.push_back(*it);
      }
      cut.push_back(whi);
      for (std::size_t k = 0; k + 1 < cut.size(); ++k) {
        const double w = (cut[k] + cut[k + 1]) / 2;
        const double ylo = std::max(y0, w - z1), yhi = std::min(y1, w - z0);
        const double y = (ylo + yhi) / 2;
        const Param q{y, w - y};
        if (contains(s, t, q)) out.push_back(q);
      }
    }
  }
  return out;
}

bool subset(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

bool disjoint(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & b[i]) return false;
  }
  return true;
}

// Inclusion-minimal sets of blockers over the cells of a center set.
std::vector<Bits> minimal_blocker_sets(const LensFamily::CenterSet& s,
                                       const std::vector<Bounds>& blocked) {
  const std::size_t words = (blocked.size() + 63) / 64;
  std::vector<Bits> all;
  for (const Param& q : cell_points(s, blocked)) {
    Bits b(words, 0);
    for (std::size_t p = 0; p < blocked.size(); ++p) {
      if (contains(s, blocked[p], q)) b[p / 64] |= std::uint64_t{1} << (p % 64);
    }
    all.push_back(std::move(b));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  auto pop = [](const Bits& b) {
    int c = 0;
    for (auto w : b) c += std::popcount(w);
    return c;
  };
  std::stable_sort(all.begin(), all.end(),
                   [&](const Bits& a, const Bits& b) { return pop(a) < pop(b); });
  std::vector<Bits> keep;
  for (const auto& b : all) {
    if (std::none_of(keep.begin(), keep.end(), [&](const Bits& k) { return subset(k, b); })) {
      keep.push_back(b);
    }
  }
  return keep;
}

// Intersection (or bounding box of the union) of the balls of radius r
// around the given centers.
Box ball_bounds(const std::vector<Coords>& centers, double r, const ExtendedFrame& frame,
                bool intersect) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Box box(frame.size());
  for (int k = 0; k < frame.size(); ++k) box[k] = intersect ? Interval{-inf, inf} : Interval{inf, -inf};
  for (const auto& c : centers) {
    const ExtCoords e = frame.project(c);
    for (int k = 0; k < frame.size(); ++k) {
      const double x = e[static_cast<std::size_t>(k)];
      if (intersect) {
        box[k] = {std::max(box[k].lo, x - r), std::min(box[k].hi, x + r)};
      } else {
        box[k] = {std::min(box[k].lo, x - r), std::max(box[k].hi, x + r)};
      }
    }
  }
  return box;
}

}  // namespace

std::unique_ptr<LensFamily> LensFamily::of(const Point& v1, const Point& v2, double beta, Metric m,
                                           Variant v, double eps) {
  if (m != Metric::kL1 || v1.coords.dim() != 3 || v2.coords.dim() != 3) return nullptr;
  const Regime regime = regime_of(beta, v, eps);
  const int n = 3;
  Coords sign(n), delta(n);
  for (int i = 0; i < n; ++i) {
    sign[i] = v2.coords[i] >= v1.coords[i] ? 1.0 : -1.0;
    delta[i] = std::abs(v2.coords[i] - v1.coords[i]);
  }
  const double d = distance(v1.coords, v2.coords, m);
  const double tol = eps * std::max(1.0, d);
  auto world_point = [&](const Coords& y) {
    Coords x = v1.coords;
    for (int i = 0; i < n; ++i) x[i] += sign[i] * y[i];
    return x;
  };
  auto world_dir = [&](const Coords& y) {
    Coords x(n);
    for (int i = 0; i < n; ++i) x[i] = sign[i] * y[i];
    return x;
  };
  auto unit = [&](int i) {
    Coords e(n);
    e[i] = 1;
    return e;
  };

  auto fam = std::make_unique<LensFamily>();
  fam->eps_ = eps;
  bool continuous = false;
  if (regime == Regime::kEquidistantSmall) {
    const double R = d / (2 * beta);
    fam->r_ = R;
    for (int k = 0; k < n; ++k) {
      if (delta[k] > d / 2 + tol) continue;
      const int a = k == 0 ? 1 : 0, b = k == 2 ? 1 : 2;
      // Arm k: x_k fixed, x_a + x_b = s with both inside the box.
      auto piece = [&](double s, double xk) {
        CenterSet c;
        c.params = 1;
        Coords o(n);
        o[k] = xk;
        o[b] = s;
        c.o = world_point(o);
        c.a0 = world_dir(unit(a) - unit(b));
        c.a1 = Coords(n);
        double lo = std::max(0.0, s - delta[b]), hi = std::min(delta[a], s);
        if (lo > hi) lo = hi = (lo + hi) / 2;
        c.bounds[0] = {lo, hi};
        continuous = continuous || hi - lo > tol;
        return c;
      };
      fam->pieces_.push_back(
          {piece(d / 2 - delta[k], R - d / 2 + delta[k]), piece(d / 2, d / 2 - R)});
    }
  } else if (regime == Regime::kUnit || regime == Regime::kAsymmetricMid) {
    for (int i = 0; i < n; ++i) {
      if (delta[i] <= tol) return nullptr;
    }
    const double rho = beta * d / 2, sig = d - rho;
    fam->r_ = rho;
    auto slice = [&](double s) {
      CenterSet c;
      c.params = 2;
      c.o = world_point(unit(0) * s);
      c.a0 = world_dir(unit(1) - unit(0));
      c.a1 = world_dir(unit(2) - unit(0));
      c.bounds = {Interval{0, delta[1]}, Interval{0, delta[2]}, Interval{s - delta[0], s}};
      return c;
    };
    fam->pieces_.push_back({slice(rho), slice(sig)});
    continuous = true;
  }
  if (!continuous) return nullptr;
  return fam;
}

namespace {

// Parameters of the centers whose ball (radius r) contains p.
std::optional<Bounds> blocked_by(const LensFamily::CenterSet& s, const Coords& p, double r,
                                 double eps, const ExtendedFrame& frame) {
  Bounds b = s.bounds;
  for (int l = 0; l < frame.size(); ++l) {
    const Coords& u = frame.axis(l);
    const double base = u.dot(p - s.o);
    const double g0 = u.dot(s.a0), g1 = s.params == 2 ? u.dot(s.a1) : 0.0;
    double lo = base - r - eps, hi = base + r + eps;
    int f;
    double g;
    if (g0 == 0 && g1 == 0) {
      if (lo > 0 || hi < 0) return std::nullopt;
      continue;
    } else if (g1 == 0) {
      f = 0, g = g0;
    } else if (g0 == 0) {
      f = 1, g = g1;
    } else if (g0 == g1) {
      f = 2, g = g0;
    } else {
      throw InvariantError("center set is not aligned with the frame");
    }
    lo /= g, hi /= g;
    if (g < 0) std::swap(lo, hi);
    auto& iv = b[static_cast<std::size_t>(f)];
    iv = {std::max(iv.lo, lo), std::min(iv.hi, hi)};
  }
  if (!nonempty(s, b)) return std::nullopt;
  return b;
}

bool covers(const LensFamily::CenterSet& s, const Bounds& b) {
  const Bounds t = tight(s, s.bounds);
  const int fs = s.params == 1 ? 1 : 3;
  for (int f = 0; f < fs; ++f) {
    const auto k = static_cast<std::size_t>(f);
    if (t[k].lo < b[k].lo || t[k].hi > b[k].hi) return false;
  }
  return true;
}

}  // namespace

std::vector<Coords> LensFamily::vertices() const {
  std::vector<Coords> out;
  for (const auto& pc : pieces_) {
    for (const auto* s : {&pc.x, &pc.y}) {
      for (auto& c : set_vertices(*s)) out.push_back(std::move(c));
    }
  }
  return out;
}

Box LensFamily::core_box() const { return ball_bounds(vertices(), r_, frame_, true); }

Box LensFamily::hull_box() const { return ball_bounds(vertices(), r_, frame_, false); }

bool LensFamily::blocks_any(const Coords& p) const {
  for (const auto& pc : pieces_) {
    if (blocked_by(pc.x, p, r_, eps_, frame_) && blocked_by(pc.y, p, r_, eps_, frame_)) return true;
  }
  return false;
}

// A center pair (c1, c2) of a piece is blocked by p when both balls contain
// p, so the blocked pairs of p form a product A_p x B_p.  The pairs left
// uncovered form an open set; when nonempty it meets the product of two open
// cells of the arrangements, whose blocker sets are constant.
bool LensFamily::has_empty_lens(const std::vector<Coords>& blockers) const {
  for (const auto& pc : pieces_) {
    std::vector<Bounds> as, bs;
    bool full = false;
    for (const auto& p : blockers) {
      auto a = blocked_by(pc.x, p, r_, eps_, frame_);
      if (!a) continue;
      auto b = blocked_by(pc.y, p, r_, eps_, frame_);
      if (!b) continue;
      if (covers(pc.x, *a) && covers(pc.y, *b)) {
        full = true;
        break;
      }
      as.push_back(*a);
      bs.push_back(*b);
    }
    if (full) continue;
    if (as.empty()) return true;
    const auto mx = minimal_blocker_sets(pc.x, as);
    const auto my = minimal_blocker_sets(pc.y, bs);
    for (const auto& a : mx) {
      for (const auto& b : my) {
        if (disjoint(a, b)) return true;
      }
    }
  }
  return false;
}

namespace {

using Vec2 = std::array<double, 2>;

// Convex polygon clipped to {g . x <= h}.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, const Vec2& g, double h) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double fa = g[0] * a[0] + g[1] * a[1] - h, fb = g[0] * b[0] + g[1] * b[1] - h;
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      const double t = fa / (fa - fb);
      out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
    }
  }
  return out;
}

double area(const std::vector<Vec2>& poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return std::abs(s) / 2;
}

Vec2 centroid(const std::vector<Vec2>& poly) {
  Vec2 c{0, 0};
  for (const auto& v : poly) c = {c[0] + v[0], c[1] + v[1]};
  return {c[0] / static_cast<double>(poly.size()), c[1] / static_cast<double>(poly.size())};
}

Coords patch_point(const CircleFamily::Patch& pt, const Vec2& q, int n) {
  Coords c(n);
  c[pt.axis] = pt.value;
  c[pt.t0] = q[0];
  c[pt.t1] = q[1];
  return c;
}

// Parameters t in [0, 1] of the segment a + t (b - a) whose ball contains p.
std::optional<Interval> segment_blocked(const Coords& a, const Coords& b, const Coords& p,
                                        double r, const ExtendedFrame& frame) {
  Interval iv{0, 1};
  for (int k = 0; k < frame.size(); ++k) {
    const Coords& u = frame.axis(k);
    const double c0 = u.dot(a - p), c1 = u.dot(b - a);
    // -r <= c0 + t c1 <= r
    if (c1 == 0) {
      if (std::abs(c0) > r) return std::nullopt;
      continue;
    }
    double lo = (-r - c0) / c1, hi = (r - c0) / c1;
    if (c1 < 0) std::swap(lo, hi);
    iv = {std::max(iv.lo, lo), std::min(iv.hi, hi)};
    if (iv.lo > iv.hi) return std::nullopt;
  }
  return iv;
}

bool within(const Coords& c, const Coords& p, double r, const ExtendedFrame& frame) {
  for (int k = 0; k < frame.size(); ++k) {
    if (std::abs(frame.axis(k).dot(c - p)) > r) return false;
  }
  return true;
}

// Axis rectangle of patch parameters whose ball (Linf) contains p.
std::optional<std::array<Interval, 2>> patch_blocked(const CircleFamily::Patch& pt, const Coords& p,
                                                     double r) {
  if (std::abs(pt.value - p[pt.axis]) > r) return std::nullopt;
  return std::array<Interval, 2>{Interval{p[pt.t0] - r, p[pt.t0] + r},
                                 Interval{p[pt.t1] - r, p[pt.t1] + r}};
}

bool segment_free(const Coords& a, const Coords& b, const std::vector<Coords>& blockers, double r,
                  const ExtendedFrame& frame) {
  std::vector<Interval> ivs;
  for (const auto& p : blockers) {
    if (auto iv = segment_blocked(a, b, p, r, frame)) ivs.push_back(*iv);
  }
  std::sort(ivs.begin(), ivs.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  double reach = 0;
  bool started = false;
  for (const auto& iv : ivs) {
    if (started ? iv.lo > reach : iv.lo > 0) return true;
    reach = started ? std::max(reach, iv.hi) : iv.hi;
    started = true;
  }
  return !started || reach < 1;
}

// Grid cells from the blocked rectangles; each cell meets the patch in a
// convex piece with constant coverage.
bool patch_free(const CircleFamily::Patch& pt, const std::vector<Coords>& blockers, double r) {
  std::vector<std::array<Interval, 2>> rects;
  for (const auto& p : blockers) {
    if (auto b = patch_blocked(pt, p, r)) rects.push_back(*b);
  }
  Interval bx{INFINITY, -INFINITY}, by{INFINITY, -INFINITY};
  for (const auto& v : pt.poly) {
    bx = {std::min(bx.lo, v[0]), std::max(bx.hi, v[0])};
    by = {std::min(by.lo, v[1]), std::max(by.hi, v[1])};
  }
  for (const auto& rc : rects) {
    if (rc[0].lo <= bx.lo && rc[0].hi >= bx.hi && rc[1].lo <= by.lo && rc[1].hi >= by.hi) {
      return false;
    }
  }
  auto cuts = [&](const Interval& range, int f) {
    std::vector<double> v{range.lo, range.hi};
    for (const auto& rc : rects) {
      for (double x : {rc[static_cast<std::size_t>(f)].lo, rc[static_cast<std::size_t>(f)].hi}) {
        if (x > range.lo && x < range.hi) v.push_back(x);
      }
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto xs = cuts(bx, 0), ys = cuts(by, 1);
  const double tiny = 1e-18 * std::max(1.0, (bx.hi - bx.lo) * (by.hi - by.lo));
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      auto cell = clip(pt.poly, {1, 0}, xs[i + 1]);
      cell = clip(cell, {-1, 0}, -xs[i]);
      cell = clip(cell, {0, 1}, ys[j + 1]);
      cell = clip(cell, {0, -1}, -ys[j]);
      if (cell.size() < 3 || area(cell) <= tiny) continue;
      const Vec2 q = centroid(cell);
      const bool covered = std::any_of(rects.begin(), rects.end(), [&](const auto& rc) {
        return rc[0].lo <= q[0] && q[0] <= rc[0].hi && rc[1].lo <= q[1] && q[1] <= rc[1].hi;
      });
      if (!covered) return true;
    }
  }
  return false;
}

}  // namespace

std::unique_ptr<CircleFamily> CircleFamily::of(const Point& v1, const Point& v2, double beta,
                                               Metric m, Variant v, double eps) {
  if (regime_of(beta, v, eps) != Regime::kCircleLarge) return nullptr;
  const int n = v1.coords.dim();
  if (n < 2 || n > 3 || v2.coords.dim() != n) return nullptr;
  std::unique_ptr<CircleFamily> fam(new CircleFamily(m, n));
  fam->eps_ = eps;
  const double d = distance(v1.coords, v2.coords, m);
  const double R = beta * d / 2;
  fam->r_ = R;
  const double tol = eps * std::max(1.0, d);
  Coords sign(n), delta(n);
  for (int i = 0; i < n; ++i) {
    sign[i] = v2.coords[i] >= v1.coords[i] ? 1.0 : -1.0;
    delta[i] = std::abs(v2.coords[i] - v1.coords[i]);
  }
  auto world = [&](const Coords& y) {
    Coords x = v1.coords;
    for (int i = 0; i < n; ++i) x[i] += sign[i] * y[i];
    return x;
  };
  auto add_segment = [&](ArmCenters& arm, const Coords& a, const Coords& b) {
    if (distance(a, b, m) <= tol) {
      arm.points.push_back(a);
    } else {
      arm.segments.emplace_back(a, b);
    }
  };

  if (m == Metric::kL1) {
    fam->arms_.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      if (delta[k] > d / 2 + tol) continue;
      std::vector<int> others;
      for (int j = 0; j < n; ++j) {
        if (j != k) others.push_back(j);
      }
      // Arm k: x_k fixed and the other coordinates inside the box with a
      // fixed sum.
      auto piece = [&](ArmCenters& arm, double s, double xk) {
        Coords lo(n), hi(n);
        lo[k] = hi[k] = xk;
        if (others.size() == 1) {
          lo[others[0]] = hi[others[0]] = s;
        } else {
          const int a = others[0], b = others[1];
          double t0 = std::max(0.0, s - delta[b]), t1 = std::min(delta[a], s);
          if (t0 > t1) t0 = t1 = (t0 + t1) / 2;
          lo[a] = t0, lo[b] = s - t0;
          hi[a] = t1, hi[b] = s - t1;
        }
        add_segment(arm, world(lo), world(hi));
      };
      auto& pair = fam->arms_[static_cast<std::size_t>(k)];
      piece(pair[0], d / 2 - delta[k], R - d / 2 + delta[k]);
      piece(pair[1], d / 2, d / 2 - R);
    }
    return fam;
  }

  // Linf: the centers lie on the cuboid prod [delta_i - R, R]: on its edges
  // {y_i = R, y_j = delta_j - R}, and on whole faces y_i = +-R when
  // delta_i = 0.
  struct Face {
    std::vector<std::pair<int, double>> fixed;
  };
  std::vector<Face> locus;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) locus.push_back({{{i, R}, {j, delta[j] - R}}});
    }
    if (delta[i] <= tol) {
      locus.push_back({{{i, R}}});
      locus.push_back({{{i, -R}}});
    }
  }
  const int dirs = cross_direction_count(n, m);
  fam->arms_.resize(static_cast<std::size_t>(dirs));
  const ArmRegions regions(v1.coords, v2.coords, m);
  for (const Face& f : locus) {
    // World-space box of the face.
    Coords lo(n), hi(n);
    std::vector<int> free;
    for (int i = 0; i < n; ++i) {
      double a = delta[i] - R, b = R;
      bool fixed = false;
      for (auto [axis, val] : f.fixed) {
        if (axis == i) a = b = val, fixed = true;
      }
      if (!fixed) free.push_back(i);
      const double wa = v1.coords[i] + sign[i] * a, wb = v1.coords[i] + sign[i] * b;
      lo[i] = std::min(wa, wb), hi[i] = std::max(wa, wb);
    }
    for (int k = 0; k < dirs; ++k) {
      for (int side = 0; side < 2; ++side) {
        const auto& hs = regions.halfspaces(k, side == 0 ? Side::kPlus : Side::kMinus);
        auto& arm = fam->arms_[static_cast<std::size_t>(k)][static_cast<std::size_t>(side)];
        if (free.size() <= 1) {
          Coords b = lo;
          if (free.size() == 1) b[free[0]] = hi[free[0]];
          if (auto iv = regions.clip(lo, b, k, side == 0 ? Side::kPlus : Side::kMinus, tol)) {
            add_segment(arm, lo + (b - lo) * iv->first, lo + (b - lo) * iv->second);
          }
          continue;
        }
        Patch pt;
        pt.axis = f.fixed[0].first;
        pt.value = lo[pt.axis];
        pt.t0 = free[0], pt.t1 = free[1];
        const std::vector<Vec2> rect{{lo[pt.t0], lo[pt.t1]}, {hi[pt.t0], lo[pt.t1]},
                                     {hi[pt.t0], hi[pt.t1]}, {lo[pt.t0], hi[pt.t1]}};
        // Exact clip for the patch; the relaxed clip only rescues slivers.
        auto clipped = [&](double slack) {
          auto poly = rect;
          for (const auto& h : hs) {
            if (poly.empty()) break;
            poly = clip(poly, {h.a[pt.t0], h.a[pt.t1]}, h.b + slack - h.a[pt.axis] * pt.value);
          }
          return poly;
        };
        pt.poly = clipped(0);
        if (pt.poly.size() >= 3 && area(pt.poly) > 1e-12 * std::max(1.0, R * R)) {
          arm.patches.push_back(pt);
          continue;
        }
        if (pt.poly.empty()) pt.poly = clipped(tol);
        if (pt.poly.empty()) continue;
        // A sliver: keep its two farthest vertices as a segment.
        std::size_t ia = 0, ib = 0;
        double best = -1;
        for (std::size_t a = 0; a < pt.poly.size(); ++a) {
          for (std::size_t b = a; b < pt.poly.size(); ++b) {
            const double dd = std::abs(pt.poly[a][0] - pt.poly[b][0]) +
                              std::abs(pt.poly[a][1] - pt.poly[b][1]);
            if (dd > best) best = dd, ia = a, ib = b;
          }
        }
        add_segment(arm, patch_point(pt, pt.poly[ia], n), patch_point(pt, pt.poly[ib], n));
      }
    }
  }
  return fam;
}

std::vector<Coords> CircleFamily::vertices() const {
  std::vector<Coords> out;
  const int n = frame_.dim();
  for (const auto& pair : arms_) {
    for (const auto& arm : pair) {
      out.insert(out.end(), arm.points.begin(), arm.points.end());
      for (const auto& [a, b] : arm.segments) {
        out.push_back(a);
        out.push_back(b);
      }
      for (const auto& pt : arm.patches) {
        for (const auto& q : pt.poly) out.push_back(patch_point(pt, q, n));
      }
    }
  }
  return out;
}

Box CircleFamily::core_box() const { return ball_bounds(vertices(), r_, frame_, true); }

Box CircleFamily::hull_box() const { return ball_bounds(vertices(), r_, frame_, false); }

bool CircleFamily::blocks_any(const Coords& p) const {
  const double r = r_ + eps_;
  for (const auto& pair : arms_) {
    for (const auto& arm : pair) {
      for (const auto& c : arm.points) {
        if (within(c, p, r, frame_)) return true;
      }
      for (const auto& [a, b] : arm.segments) {
        if (segment_blocked(a, b, p, r, frame_)) return true;
      }
      for (const auto& pt : arm.patches) {
        auto rc = patch_blocked(pt, p, r);
        if (!rc) continue;
        auto poly = clip(pt.poly, {1, 0}, (*rc)[0].hi);
        poly = clip(poly, {-1, 0}, -(*rc)[0].lo);
        poly = clip(poly, {0, 1}, (*rc)[1].hi);
        poly = clip(poly, {0, -1}, -(*rc)[1].lo);
        if (!poly.empty()) return true;
      }
    }
  }
  return false;
}

bool CircleFamily::arm_free(const ArmCenters& arm, const std::vector<Coords>& blockers) const {
  const double r = r_ + eps_;
  for (const auto& c : arm.points) {
    if (std::none_of(blockers.begin(), blockers.end(),
                     [&](const Coords& p) { return within(c, p, r, frame_); })) {
      return true;
    }
  }
  for (const auto& [a, b] : arm.segments) {
    if (segment_free(a, b, blockers, r, frame_)) return true;
  }
  for (const auto& pt : arm.patches) {
    if (patch_free(pt, blockers, r)) return true;
  }
  return false;
}

// A union lens is empty iff both of its balls are, and its centers may be
// chosen independently on the two arms of a direction.
bool CircleFamily::has_empty_lens(const std::vector<Coords>& blockers) const {
  for (const auto& pair : arms_) {
    if (arm_free(pair[0], blockers) && arm_free(pair[1], blockers)) return true;
  }
  return false;
}

std::unique_ptr<CenterFamily> center_family(const Point& v1, const Point& v2, double beta,
                                            Metric m, Variant v, double eps) {
  if (auto f = CircleFamily::of(v1, v2, beta, m, v, eps)) return f;
  return LensFamily::of(v1, v2, beta, m, v, eps);
}

}  // namespace bskel
