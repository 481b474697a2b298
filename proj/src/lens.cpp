#include "bskel/lens.hpp"

#include <algorithm>
#include <cmath>

#include "bskel/region_index.hpp"

namespace bskel {

std::string_view to_string(Variant v) { return v == Variant::kLensBased ? "lens" : "circle"; }

std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "lens") return Variant::kLensBased;
  if (s == "circle") return Variant::kCircleBased;
  return std::nullopt;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kEquidistantSmall: return "equidistant-small";
    case Regime::kUnit: return "unit";
    case Regime::kAsymmetricMid: return "asymmetric-mid";
    case Regime::kRng: return "rng";
    case Regime::kAsymmetricLarge: return "asymmetric-large";
    case Regime::kCircleLarge: return "circle-large";
  }
  return "?";
}

std::string_view to_string(LocusShape s) {
  switch (s) {
    case LocusShape::kCurve: return "curve";
    case LocusShape::kBand: return "band";
    case LocusShape::kSquare: return "square";
    case LocusShape::kParallelSegments: return "parallel-segments";
    case LocusShape::kParallelogram: return "parallelogram";
    case LocusShape::kPoint: return "point";
    case LocusShape::kSegment: return "segment";
    case LocusShape::kRectangle: return "rectangle";
    case LocusShape::kPolygon: return "polygon";
    case LocusShape::kUnique: return "unique";
    case LocusShape::kFaces: return "faces";
  }
  return "?";
}

Regime regime_of(double beta, Variant v, double eps) {
  if (!std::isfinite(beta) || beta <= 0) throw InputError("beta must be positive and finite");
  if (std::abs(beta - 1) <= eps) return Regime::kUnit;
  // Below 1 both families use the same equidistant lens.
  if (beta < 1) return Regime::kEquidistantSmall;
  if (v == Variant::kCircleBased) return Regime::kCircleLarge;
  if (std::abs(beta - 2) <= eps) return Regime::kRng;
  return beta < 2 ? Regime::kAsymmetricMid : Regime::kAsymmetricLarge;
}

bool point_in_lens(const Coords& p, const Lens& lens, double eps) {
  const bool in1 = distance(p, lens.c1, lens.metric) <= lens.r1 + eps;
  const bool in2 = distance(p, lens.c2, lens.metric) <= lens.r2 + eps;
  return lens.mode == LensMode::kIntersection ? in1 && in2 : in1 || in2;
}

namespace {

using Segment = std::pair<Coords, Coords>;

// v1 at the origin, v2 - v1 reflected into the nonnegative orthant.
struct Normalized {
  Coords origin;
  Coords sign;
  Coords delta;
  double d = 0;
  int n = 0;
  Metric metric = Metric::kLInf;

  Normalized(const Coords& v1, const Coords& v2, Metric m)
      : origin(v1), sign(v1.dim()), delta(v1.dim()), n(v1.dim()), metric(m) {
    if (v1.dim() != v2.dim()) throw InputError("dimension mismatch");
    if (v1 == v2) throw InputError("lens of coincident points");
    if (n < 2 || n > 3) {
      throw UnsupportedError("lens enumeration supports d = 2 and d = 3, got d = " +
                             std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
      sign[i] = v2[i] >= v1[i] ? 1.0 : -1.0;
      delta[i] = std::abs(v2[i] - v1[i]);
    }
    d = distance(v1, v2, m);
  }

  Coords world(const Coords& y) const {
    Coords x = origin;
    for (int i = 0; i < n; ++i) x[i] += sign[i] * y[i];
    return x;
  }
  Coords zero() const { return Coords(n); }
  double tol(double eps) const { return eps * std::max(1.0, d); }
};

double sq(double x) { return x * x; }

double dist2(const Coords& a, const Coords& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += sq(a[i] - b[i]);
  return s;
}

bool near(const Coords& a, const Coords& b, double tol) {
  for (int i = 0; i < a.dim(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

void add_unique(std::vector<Coords>& pts, const Coords& p, double tol) {
  for (const auto& q : pts) {
    if (near(p, q, tol)) return;
  }
  pts.push_back(p);
}

bool ties(double a, double best) { return std::abs(a - best) <= 1e-9 * std::max(1.0, best); }

// Keeps the pairs of `all` whose squared separation is extremal.
std::vector<CenterPair> extremal(const std::vector<CenterPair>& all, PairSelection sel) {
  std::vector<CenterPair> out;
  if (all.empty()) return out;
  double best = sel == PairSelection::kFarthest ? -1 : std::numeric_limits<double>::infinity();
  for (const auto& p : all) {
    double s = dist2(p.c1, p.c2);
    best = sel == PairSelection::kFarthest ? std::max(best, s) : std::min(best, s);
  }
  for (const auto& p : all) {
    if (ties(dist2(p.c1, p.c2), best)) out.push_back(p);
  }
  return out;
}

Coords lerp(const Coords& a, const Coords& b, double t) { return a + (b - a) * t; }

double project_param(const Coords& p, const Segment& s) {
  const Coords w = s.second - s.first;
  const double len2 = w.dot(w);
  if (len2 == 0) return 0;
  return std::clamp((p - s.first).dot(w) / len2, 0.0, 1.0);
}

// Candidate closest point pairs between two segments.  Parallel segments can
// tie along an interval; its two ends are among the endpoint projections.
void closest_pairs(const Segment& a, const Segment& b, std::vector<CenterPair>& out) {
  out.push_back({a.first, lerp(b.first, b.second, project_param(a.first, b))});
  out.push_back({a.second, lerp(b.first, b.second, project_param(a.second, b))});
  out.push_back({lerp(a.first, a.second, project_param(b.first, a)), b.first});
  out.push_back({lerp(a.first, a.second, project_param(b.second, a)), b.second});
  const Coords d1 = a.second - a.first, d2 = b.second - b.first, r = a.first - b.first;
  const double A = d1.dot(d1), E = d2.dot(d2), B = d1.dot(d2), C = d1.dot(r), F = d2.dot(r);
  const double den = A * E - B * B;
  if (A > 0 && E > 0 && den > 1e-12 * A * E) {
    const double s = (B * F - C * E) / den, t = (A * F - B * C) / den;
    if (s > 0 && s < 1 && t > 0 && t < 1) {
      out.push_back({lerp(a.first, a.second, s), lerp(b.first, b.second, t)});
    }
  }
}

// Arm pieces of one cross direction in normalized coordinates.
struct ArmPieces {
  std::vector<Segment> plus, minus;
};

std::vector<CenterPair> select_per_direction(const std::vector<ArmPieces>& arms,
                                             PairSelection sel) {
  std::vector<CenterPair> out;
  for (const auto& arm : arms) {
    std::vector<CenterPair> all;
    for (const auto& a : arm.plus) {
      for (const auto& b : arm.minus) {
        if (sel == PairSelection::kFarthest) {
          for (const Coords& x : {a.first, a.second}) {
            for (const Coords& y : {b.first, b.second}) all.push_back({x, y});
          }
        } else {
          closest_pairs(a, b, all);
        }
      }
    }
    for (auto& p : extremal(all, sel)) out.push_back(p);
  }
  return out;
}

// Vertices of the slice {y in prod [0, delta_j] (j in coords) : sum y = s}.
std::vector<Coords> slice_vertices(const Coords& delta, const std::vector<int>& coords, double s,
                                   int n, double tol) {
  std::vector<Coords> out;
  const int k = static_cast<int>(coords.size());
  for (int f = 0; f < k; ++f) {
    const int others = k - 1;
    for (int mask = 0; mask < (1 << others); ++mask) {
      Coords y(n);
      double rest = 0;
      for (int o = 0, bit = 0; o < k; ++o) {
        if (o == f) continue;
        const int j = coords[static_cast<std::size_t>(o)];
        y[j] = (mask >> bit++) & 1 ? delta[j] : 0.0;
        rest += y[j];
      }
      const int jf = coords[static_cast<std::size_t>(f)];
      const double v = s - rest;
      if (v < -tol || v > delta[jf] + tol) continue;
      y[jf] = std::clamp(v, 0.0, delta[jf]);
      add_unique(out, y, tol);
    }
  }
  return out;
}

LocusShape l1_equidistant_shape(const Coords& delta, double d, double tol) {
  int nonzero = 0;
  for (int i = 0; i < delta.dim(); ++i) nonzero += delta[i] > tol;
  if (nonzero == 1) return LocusShape::kSquare;
  return std::abs(d - 2 * *std::max_element(delta.begin(), delta.end())) <= tol
             ? LocusShape::kParallelSegments
             : LocusShape::kParallelogram;
}

// L1: a point of arm k has every other coordinate inside the box, so the
// equidistance equations fix x_k and the sum of the other coordinates.
CandidateSet l1_equidistant(const Normalized& nf, double R, PairSelection sel, double eps) {
  const double tol = nf.tol(eps);
  CandidateSet cs;
  cs.shape = l1_equidistant_shape(nf.delta, nf.d, tol);
  std::vector<ArmPieces> arms(static_cast<std::size_t>(nf.n));
  for (int k = 0; k < nf.n; ++k) {
    if (nf.delta[k] > nf.d / 2 + tol) continue;
    std::vector<int> others;
    for (int j = 0; j < nf.n; ++j) {
      if (j != k) others.push_back(j);
    }
    auto piece = [&](double s, double xk) {
      auto verts = slice_vertices(nf.delta, others, s, nf.n, tol);
      for (auto& v : verts) v[k] = xk;
      if (verts.size() == 1) verts.push_back(verts.front());
      return Segment{verts.at(0), verts.at(1)};
    };
    arms[static_cast<std::size_t>(k)].plus.push_back(
        piece(nf.d / 2 - nf.delta[k], R - nf.d / 2 + nf.delta[k]));
    arms[static_cast<std::size_t>(k)].minus.push_back(piece(nf.d / 2, nf.d / 2 - R));
  }
  cs.pairs = select_per_direction(arms, sel);
  return cs;
}

bool on_both_spheres(const Coords& y, const Normalized& nf, double R, double tol) {
  return std::abs(distance(y, nf.zero(), nf.metric) - R) <= tol &&
         std::abs(distance(y, nf.delta, nf.metric) - R) <= tol;
}

// Linf: the locus C(v1,R) ∩ C(v2,R) lies on the boundary of the cuboid
// D = prod [delta_i - R, R] and its intersection with the cross lies on the
// vertices and edges of D.  Each locus edge is clipped against every arm.
CandidateSet linf_equidistant(const Normalized& nf, double R, PairSelection sel, double eps) {
  const double tol = nf.tol(eps);
  const int n = nf.n;
  CandidateSet cs;
  cs.shape = LocusShape::kCurve;
  for (int i = 0; i < n; ++i) {
    if (nf.delta[i] <= tol) cs.shape = LocusShape::kBand;
  }
  auto corner = [&](int mask) {
    Coords y(n);
    for (int i = 0; i < n; ++i) y[i] = (mask >> i) & 1 ? R : nf.delta[i] - R;
    return y;
  };
  std::vector<Segment> pieces;
  for (int mask = 0; mask < (1 << n); ++mask) {
    const Coords v = corner(mask);
    if (on_both_spheres(v, nf, R, tol)) pieces.push_back({v, v});
  }
  for (int k = 0; k < n; ++k) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      if ((mask >> k) & 1) continue;
      const Coords a = corner(mask), b = corner(mask | (1 << k));
      if (on_both_spheres(lerp(a, b, 0.5), nf, R, tol)) pieces.push_back({a, b});
    }
  }
  const int ndir = cross_direction_count(n, Metric::kLInf);
  std::vector<ArmPieces> arms(static_cast<std::size_t>(ndir));
  const ArmRegions regions(nf.zero(), nf.delta, Metric::kLInf);
  for (const auto& seg : pieces) {
    for (int k = 0; k < ndir; ++k) {
      for (Side side : {Side::kPlus, Side::kMinus}) {
        auto iv = regions.clip(seg.first, seg.second, k, side, tol);
        if (!iv) continue;
        Segment part{lerp(seg.first, seg.second, iv->first),
                     lerp(seg.first, seg.second, iv->second)};
        auto& dst = side == Side::kPlus ? arms[static_cast<std::size_t>(k)].plus
                                        : arms[static_cast<std::size_t>(k)].minus;
        dst.push_back(part);
      }
    }
  }
  cs.pairs = select_per_direction(arms, sel);
  return cs;
}

// 1 <= beta < 2.  C1 = C(v1, rho) ∩ C(v2, d - rho) lies inside S; C2 is its
// reflection through the midpoint.
CandidateSet linf_mid(const Normalized& nf, double beta, double eps) {
  const double tol = nf.tol(eps);
  const double rho = beta * nf.d / 2, sig = nf.d - rho;
  CandidateSet cs;
  int free_dims = 0;
  // Per coordinate the candidate (c1_i, c2_i) values maximizing |c1_i - c2_i|.
  std::vector<std::vector<std::pair<double, double>>> options(static_cast<std::size_t>(nf.n));
  for (int i = 0; i < nf.n; ++i) {
    const double lo = nf.delta[i] - sig, hi = std::min(rho, nf.delta[i] + sig);
    if (hi - lo > tol) ++free_dims;
    const std::pair<double, double> a{lo, nf.delta[i] - lo}, b{hi, nf.delta[i] - hi};
    const double sa = std::abs(a.first - a.second), sb = std::abs(b.first - b.second);
    auto& opt = options[static_cast<std::size_t>(i)];
    if (sa >= sb - tol) opt.push_back(a);
    if (sb >= sa - tol && hi - lo > tol) opt.push_back(b);
  }
  cs.shape = free_dims == 0   ? LocusShape::kPoint
             : free_dims == 1 ? LocusShape::kSegment
                              : LocusShape::kRectangle;
  std::vector<CenterPair> all{{Coords(nf.n), Coords(nf.n)}};
  for (int i = 0; i < nf.n; ++i) {
    std::vector<CenterPair> next;
    for (const auto& p : all) {
      for (const auto& [x1, x2] : options[static_cast<std::size_t>(i)]) {
        CenterPair q = p;
        q.c1[i] = x1;
        q.c2[i] = x2;
        next.push_back(q);
      }
    }
    all = std::move(next);
  }
  cs.pairs = all;
  return cs;
}

CandidateSet l1_mid(const Normalized& nf, double beta, double eps) {
  const double tol = nf.tol(eps);
  const double rho = beta * nf.d / 2, sig = nf.d - rho;
  std::vector<int> coords;
  int nonzero = 0;
  for (int i = 0; i < nf.n; ++i) {
    coords.push_back(i);
    nonzero += nf.delta[i] > tol;
  }
  CandidateSet cs;
  cs.shape = nonzero == 1 ? LocusShape::kPoint
             : nonzero == 2 ? LocusShape::kSegment
                            : LocusShape::kPolygon;
  const auto c1 = slice_vertices(nf.delta, coords, rho, nf.n, tol);
  const auto c2 = slice_vertices(nf.delta, coords, sig, nf.n, tol);
  cs.locus_vertices = static_cast<int>(c1.size());
  std::vector<CenterPair> all;
  for (const auto& a : c1) {
    for (const auto& b : c2) all.push_back({a, b});
  }
  cs.pairs = extremal(all, PairSelection::kFarthest);
  return cs;
}

// beta > 2: the small spheres are tangent internally to the large ones and
// their intersection with the cross consists of vertices of the faces of
// C(v2, tau) that touch the far side of v2.
CandidateSet large(const Normalized& nf, double beta, double eps) {
  const double tol = nf.tol(eps);
  const double tau = (beta / 2 - 1) * nf.d;
  const int n = nf.n;
  std::vector<Coords> verts;  // offsets from v2 of the vertices of C1
  CandidateSet cs;
  cs.shape = LocusShape::kFaces;
  if (nf.metric == Metric::kLInf) {
    for (int i = 0; i < n; ++i) cs.faces += nf.delta[i] >= nf.d - tol;
    for (int mask = 0; mask < (1 << n); ++mask) {
      Coords e(n);
      bool touches = false;
      for (int i = 0; i < n; ++i) {
        e[i] = (mask >> i) & 1 ? -1.0 : 1.0;
        touches = touches || (e[i] > 0 && nf.delta[i] >= nf.d - tol);
      }
      if (touches) verts.push_back(e * tau);
    }
  } else {
    cs.faces = 1;
    for (int i = 0; i < n; ++i) {
      Coords e(n);
      e[i] = tau;
      verts.push_back(e);
      if (nf.delta[i] <= tol) {
        verts.push_back(e * -1.0);
        cs.faces *= 2;
      }
    }
  }
  const ArmRegions regions(nf.zero(), nf.delta, nf.metric);
  const int ndir = regions.directions();
  std::vector<CrossPosition> pos1, pos2;
  std::vector<Coords> c1s, c2s;
  for (const auto& e : verts) {
    c1s.push_back(nf.delta + e);
    c2s.push_back(e * -1.0);
    pos1.push_back(regions.position(c1s.back(), tol));
    pos2.push_back(regions.position(c2s.back(), tol));
  }
  for (int k = 0; k < ndir; ++k) {
    std::vector<CenterPair> all;
    for (std::size_t a = 0; a < c1s.size(); ++a) {
      for (std::size_t b = 0; b < c2s.size(); ++b) {
        for (Side s : {Side::kPlus, Side::kMinus}) {
          if (pos1[a].in_arm(k, s) && pos2[b].in_arm(k, opposite(s))) {
            all.push_back({c1s[a], c2s[b]});
            break;
          }
        }
      }
    }
    for (auto& p : extremal(all, PairSelection::kFarthest)) cs.pairs.push_back(p);
  }
  return cs;
}

Lens make_lens(const Coords& c1, const Coords& c2, double r1, double r2, Metric m, LensMode mode,
               double beta) {
  Lens l;
  l.c1 = c1;
  l.c2 = c2;
  l.r1 = r1;
  l.r2 = r2;
  l.metric = m;
  l.mode = mode;
  l.beta = beta;
  return l;
}

// Drops pairs whose lens region repeats an earlier one.
void dedupe(CandidateSet& cs, const Normalized& nf, double r1, double r2, LensMode mode,
            double eps) {
  const double tol = 16 * nf.tol(eps);
  std::size_t n = 0;
  for (const auto& p : cs.pairs) {
    bool dup = false;
    for (std::size_t i = 0; i < n && !dup; ++i) {
      const auto& q = cs.pairs[i];
      dup = (near(p.c1, q.c1, tol) && near(p.c2, q.c2, tol)) ||
            (near(p.c1, q.c2, tol) && near(p.c2, q.c1, tol));
    }
    if (!dup) cs.pairs[n++] = p;
  }
  cs.pairs.resize(n);
  if (n < 2) return;
  const ExtendedFrame frame(nf.metric, nf.n);
  std::vector<std::vector<Box>> seen;
  std::vector<CenterPair> kept;
  for (auto& p : cs.pairs) {
    auto boxes = lens_to_boxes(make_lens(p.c1, p.c2, r1, r2, nf.metric, mode, 1), frame);
    if (mode == LensMode::kUnion) {
      std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
        for (int k = 0; k < a.size(); ++k) {
          if (a[k].lo != b[k].lo) return a[k].lo < b[k].lo;
        }
        return false;
      });
    }
    bool dup = false;
    for (const auto& s : seen) {
      bool same = s.size() == boxes.size();
      for (std::size_t i = 0; same && i < s.size(); ++i) same = s[i].approx_equal(boxes[i], tol);
      if (same) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    seen.push_back(boxes);
    kept.push_back(p);
  }
  cs.pairs = std::move(kept);
}

void to_world(CandidateSet& cs, const Normalized& nf) {
  for (auto& p : cs.pairs) {
    p.c1 = nf.world(p.c1);
    p.c2 = nf.world(p.c2);
  }
}

CandidateSet asymmetric_normalized(const Normalized& nf, double beta, double eps) {
  if (!std::isfinite(beta) || beta < 1 - eps) throw InputError("asymmetric centers need beta >= 1");
  CandidateSet cs;
  if (std::abs(beta - 2) <= eps) {
    cs.shape = LocusShape::kUnique;
    cs.pairs.push_back({nf.delta, nf.zero()});
    return cs;
  }
  if (beta > 2) return large(nf, beta, eps);
  return nf.metric == Metric::kL1 ? l1_mid(nf, beta, eps) : linf_mid(nf, beta, eps);
}

double asym_r(double beta, double d) { return beta * d / 2; }

}  // namespace

CandidateSet equidistant_candidates(const Coords& v1, const Coords& v2, double R, Metric m,
                                    PairSelection sel, double eps) {
  const Normalized nf(v1, v2, m);
  const double tol = nf.tol(eps);
  if (!(R >= nf.d / 2 - tol)) throw InputError("radius below half the distance");
  CandidateSet cs;
  if (std::abs(R - nf.d / 2) <= tol) {
    cs = asymmetric_normalized(nf, 1.0, eps);
  } else {
    cs = m == Metric::kL1 ? l1_equidistant(nf, R, sel, eps) : linf_equidistant(nf, R, sel, eps);
  }
  dedupe(cs, nf, R, R,
         sel == PairSelection::kClosest ? LensMode::kUnion : LensMode::kIntersection, eps);
  to_world(cs, nf);
  return cs;
}

CandidateSet asymmetric_candidates(const Coords& v1, const Coords& v2, double beta, Metric m,
                                   double eps) {
  const Normalized nf(v1, v2, m);
  CandidateSet cs = asymmetric_normalized(nf, beta, eps);
  dedupe(cs, nf, asym_r(beta, nf.d), asym_r(beta, nf.d), LensMode::kIntersection, eps);
  to_world(cs, nf);
  return cs;
}

std::vector<Lens> minimal_lenses(const Point& v1, const Point& v2, double beta, Metric m,
                                 Variant v, double eps) {
  const Regime regime = regime_of(beta, v, eps);
  const double d = distance(v1, v2, m);
  CandidateSet cs;
  double r = 0;
  LensMode mode = LensMode::kIntersection;
  switch (regime) {
    case Regime::kEquidistantSmall:
      r = d / (2 * beta);
      cs = equidistant_candidates(v1.coords, v2.coords, r, m, PairSelection::kFarthest, eps);
      break;
    case Regime::kCircleLarge:
      r = beta * d / 2;
      mode = LensMode::kUnion;
      cs = equidistant_candidates(v1.coords, v2.coords, r, m, PairSelection::kClosest, eps);
      break;
    default:
      r = asym_r(beta, d);
      cs = asymmetric_candidates(v1.coords, v2.coords, beta, m, eps);
      break;
  }
  std::vector<Lens> out;
  for (const auto& p : cs.pairs) {
    Lens l = make_lens(p.c1, p.c2, r, r, m, mode, beta);
    l.source = {v1.id, v2.id};
    out.push_back(l);
  }
  return out;
}

}  // namespace bskel
