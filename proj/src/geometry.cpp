#include "bskel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

namespace bskel {

Coords::Coords(int dim) : dim_(dim) {
  if (dim < 0 || dim > kMaxDim) {
    throw InputError("dimension " + std::to_string(dim) + " out of range [0, " +
                     std::to_string(kMaxDim) + "]");
  }
}

Coords::Coords(std::initializer_list<double> values) : Coords(static_cast<int>(values.size())) {
  std::copy(values.begin(), values.end(), v_.begin());
}

Coords Coords::from(const std::vector<double>& values) {
  Coords c(static_cast<int>(values.size()));
  std::copy(values.begin(), values.end(), c.v_.begin());
  return c;
}

Coords& Coords::operator+=(const Coords& o) {
  for (int i = 0; i < dim_; ++i) v_[i] += o.v_[i];
  return *this;
}

Coords& Coords::operator-=(const Coords& o) {
  for (int i = 0; i < dim_; ++i) v_[i] -= o.v_[i];
  return *this;
}

Coords& Coords::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) v_[i] *= s;
  return *this;
}

bool operator==(const Coords& a, const Coords& b) {
  return a.dim_ == b.dim_ && std::equal(a.begin(), a.end(), b.begin());
}

bool operator<(const Coords& a, const Coords& b) {
  if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double Coords::dot(const Coords& o) const {
  double s = 0;
  for (int i = 0; i < dim_; ++i) s += v_[i] * o.v_[i];
  return s;
}

std::string Coords::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? ", " : "") << v_[i];
  os << ')';
  return os.str();
}

PointSet::PointSet(int dim, std::vector<Point> points) : dim_(dim), points_(std::move(points)) {
  if (dim < 1 || dim > kMaxDim) throw InputError("unsupported dimension " + std::to_string(dim));
  std::unordered_set<PointId> ids;
  std::set<Coords> seen;
  for (const auto& p : points_) {
    if (p.coords.dim() != dim) {
      throw InputError("point " + std::to_string(p.id) + " has dimension " +
                       std::to_string(p.coords.dim()) + ", expected " + std::to_string(dim));
    }
    for (double x : p.coords) {
      if (!std::isfinite(x)) throw InputError("point " + std::to_string(p.id) + " is not finite");
    }
    if (!ids.insert(p.id).second) throw InputError("duplicate id " + std::to_string(p.id));
    if (!seen.insert(p.coords).second) {
      throw InputError("duplicate coordinates " + p.coords.str() + " (id " +
                       std::to_string(p.id) + ")");
    }
  }
}

PointSet PointSet::from_coords(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InputError("empty point list");
  std::vector<Point> pts;
  pts.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pts.push_back({static_cast<PointId>(i), Coords::from(rows[i])});
  }
  return PointSet(static_cast<int>(rows.front().size()), std::move(pts));
}

std::string_view to_string(Metric m) { return m == Metric::kL1 ? "l1" : "linf"; }

std::optional<Metric> parse_metric(std::string_view s) {
  if (s == "l1" || s == "L1") return Metric::kL1;
  if (s == "linf" || s == "Linf" || s == "LInf" || s == "inf") return Metric::kLInf;
  return std::nullopt;
}

double distance(const Coords& a, const Coords& b, Metric m) {
  if (a.dim() != b.dim()) throw InputError("dimension mismatch in distance");
  double r = 0;
  for (int i = 0; i < a.dim(); ++i) {
    double t = std::abs(a[i] - b[i]);
    r = m == Metric::kL1 ? r + t : std::max(r, t);
  }
  return r;
}

bool in_shortest_path_set(const Coords& p, const Coords& v1, const Coords& v2, Metric m,
                          double eps) {
  if (v1 == v2) throw InputError("shortest path set of coincident points");
  return distance(v1, p, m) + distance(p, v2, m) - distance(v1, v2, m) <= eps;
}

bool sphere_union_decomposition_check(const Coords& v1, const Coords& v2, Metric m, int samples,
                                      std::uint64_t seed) {
  const double d = distance(v1, v2, m);
  if (d == 0) throw InputError("sphere decomposition of coincident points");
  constexpr int kSteps = 64;
  const double h = d / kSteps;
  const double tol = 1e-9 * std::max(1.0, d);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    Coords p = v1;
    for (int i = 0; i < v1.dim(); ++i) {
      long lo = -80, hi = 80;
      if (s % 2 == 0) {
        double g = (v2[i] - v1[i]) / h;
        lo = static_cast<long>(std::floor(std::min(0.0, g)));
        hi = static_cast<long>(std::ceil(std::max(0.0, g)));
      }
      p[i] += h * static_cast<double>(std::uniform_int_distribution<long>(lo, hi)(rng));
    }
    const double r1 = distance(v1, p, m), r2 = distance(v2, p, m);
    bool on_spheres = false;
    for (int k = 0; k <= kSteps && !on_spheres; ++k) {
      const double r = h * k;
      on_spheres = std::abs(r1 - r) <= tol && std::abs(r2 - (d - r)) <= tol;
    }
    if (on_spheres != in_shortest_path_set(p, v1, v2, m, tol)) return false;
  }
  return true;
}

int cross_direction_count(int dim, Metric m) {
  return m == Metric::kL1 ? dim : 1 << (dim - 1);
}

static Coords linf_direction(int dim, int index) {
  Coords u(dim);
  u[0] = 1;
  for (int j = 1; j < dim; ++j) u[j] = (index >> (dim - 1 - j)) & 1 ? -1.0 : 1.0;
  return u;
}

std::vector<Direction> cross_directions(int dim, Metric m) {
  if (dim < 2 || dim > kMaxDim) throw InputError("cross directions need 2 <= d <= 8");
  std::vector<Direction> out;
  for (int k = 0; k < cross_direction_count(dim, m); ++k) {
    Coords u(dim);
    if (m == Metric::kL1) {
      u[k] = 1;
    } else {
      u = linf_direction(dim, k);
    }
    out.push_back({k, u});
  }
  return out;
}

bool CrossPosition::in_arm(int direction, Side side) const {
  return std::find(arms.begin(), arms.end(), Arm{direction, side}) != arms.end();
}

namespace {

// Exact bounds on lambda, plus bounds relaxed by eps that decide feasibility.
struct Interval {
  double lo = 0, hi = 1;
  double slo = 0, shi = 1;
  bool empty = false;
  void require(double c0, double c1, double bound, double eps) {
    if (empty) return;
    const double rhs = bound - c0;
    if (std::abs(c1) < 1e-300) {
      if (rhs + eps < 0) empty = true;
      return;
    }
    if (c1 > 0) {
      hi = std::min(hi, rhs / c1);
      shi = std::min(shi, (rhs + eps) / c1);
    } else {
      lo = std::max(lo, rhs / c1);
      slo = std::max(slo, (rhs + eps) / c1);
    }
    if (slo > shi) empty = true;
  }
  // A range that is empty only by rounding collapses to a point.
  std::pair<double, double> range() const {
    if (lo <= hi) return {lo, hi};
    const double mid = std::clamp((lo + hi) / 2, slo, shi);
    return {mid, mid};
  }
};

void apply(Interval& iv, const std::vector<HalfSpace>& hs, const Coords& p0, const Coords& w,
           double eps) {
  for (const auto& h : hs) {
    if (iv.empty) return;
    iv.require(h.a.dot(p0), h.a.dot(w), h.b, eps);
  }
}

}  // namespace

// Linf: the line p + t u meets S iff in the rotated variables a = r + t,
// b = r - t every constraint |q_i| <= r, |q_i - delta_i| <= d - r reduces to
// a bound on a or on b alone, with q = p - v1.  This yields, for all i, j,
//   |u_i q_i - u_j (q_j - delta_j)| <= d
// and the sign of t on the meeting interval gives the side:
//   plus:  -u_i q_i - u_j (q_j - delta_j) <= d
//   minus:  u_i q_i + u_j (q_j - delta_j) <= d
std::vector<HalfSpace> arm_halfspaces(const Coords& v1, const Coords& v2, Metric m, int direction,
                                      Side side) {
  const int n = v1.dim();
  if (v2.dim() != n) throw InputError("dimension mismatch");
  if (direction < 0 || direction >= cross_direction_count(n, m)) {
    throw InputError("direction index out of range");
  }
  std::vector<HalfSpace> out;
  auto e = [n](int i, double s) {
    Coords c(n);
    c[i] = s;
    return c;
  };
  if (m == Metric::kL1) {
    for (int j = 0; j < n; ++j) {
      const double lo = std::min(v1[j], v2[j]), hi = std::max(v1[j], v2[j]);
      if (j != direction || side == Side::kPlus) out.push_back({e(j, -1), -lo});
      if (j != direction || side == Side::kMinus) out.push_back({e(j, 1), hi});
    }
    return out;
  }
  const Coords u = linf_direction(n, direction);
  const double d = distance(v1, v2, m);
  out.reserve(static_cast<std::size_t>(3 * n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Coords a = e(i, u[i]), b = e(j, u[j]);
      const double a0 = u[i] * v1[i], b0 = u[j] * v2[j];
      // For i == j these two read |v1_i - v2_i| <= d.
      if (i != j) {
        out.push_back({a - b, d + a0 - b0});
        out.push_back({b - a, d - a0 + b0});
      }
      if (side == Side::kPlus) {
        out.push_back({(a + b) * -1.0, d - a0 - b0});
      } else {
        out.push_back({a + b, d + a0 + b0});
      }
    }
  }
  return out;
}

std::optional<std::pair<double, double>> clip_to_arm(const Coords& a, const Coords& b,
                                                     const Coords& v1, const Coords& v2,
                                                     Metric m, int direction, Side side,
                                                     double eps) {
  const int n = v1.dim();
  if (a.dim() != n || b.dim() != n || v2.dim() != n) throw InputError("dimension mismatch");
  if (direction < 0 || direction >= cross_direction_count(n, m)) {
    throw InputError("direction index out of range");
  }
  Interval iv;
  apply(iv, arm_halfspaces(v1, v2, m, direction, side), a, b - a, eps);
  if (iv.empty) return std::nullopt;
  return iv.range();
}

CrossPosition in_cross(const Coords& p, const Coords& v1, const Coords& v2, Metric m, double eps) {
  if (in_shortest_path_set(p, v1, v2, m, eps)) {
    CrossPosition pos;
    pos.core = true;
    return pos;
  }
  return ArmRegions(v1, v2, m).position(p, eps);
}

ArmRegions::ArmRegions(const Coords& v1, const Coords& v2, Metric m) : v1_(v1), v2_(v2), m_(m) {
  const int dirs = cross_direction_count(v1.dim(), m);
  hs_.resize(static_cast<std::size_t>(dirs));
  for (int k = 0; k < dirs; ++k) {
    hs_[static_cast<std::size_t>(k)][0] = arm_halfspaces(v1, v2, m, k, Side::kPlus);
    hs_[static_cast<std::size_t>(k)][1] = arm_halfspaces(v1, v2, m, k, Side::kMinus);
  }
}

const std::vector<HalfSpace>& ArmRegions::halfspaces(int direction, Side side) const {
  if (direction < 0 || direction >= directions()) throw InputError("direction index out of range");
  return hs_[static_cast<std::size_t>(direction)][side == Side::kPlus ? 0 : 1];
}

std::optional<std::pair<double, double>> ArmRegions::clip(const Coords& a, const Coords& b,
                                                          int direction, Side side,
                                                          double eps) const {
  if (a.dim() != v1_.dim() || b.dim() != v1_.dim()) throw InputError("dimension mismatch");
  Interval iv;
  apply(iv, halfspaces(direction, side), a, b - a, eps);
  if (iv.empty) return std::nullopt;
  return iv.range();
}

CrossPosition ArmRegions::position(const Coords& p, double eps) const {
  CrossPosition pos;
  if (in_shortest_path_set(p, v1_, v2_, m_, eps)) {
    pos.core = true;
    return pos;
  }
  const Coords zero(p.dim());
  for (int k = 0; k < directions(); ++k) {
    for (Side side : {Side::kPlus, Side::kMinus}) {
      Interval iv;
      apply(iv, halfspaces(k, side), p, zero, eps);
      if (!iv.empty) pos.arms.push_back({k, side});
    }
  }
  return pos;
}

}  // namespace bskel
