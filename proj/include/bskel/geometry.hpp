// Points, the L1/Linf metrics, shortest-path sets and their cross-shaped
// neighbourhoods.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bskel {

inline constexpr double kDefaultEpsilon = 1e-9;
inline constexpr int kMaxDim = 8;

using PointId = std::int64_t;

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class InvariantError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-capacity coordinate vector.
class Coords {
 public:
  Coords() = default;
  explicit Coords(int dim);
  Coords(std::initializer_list<double> values);
  static Coords from(const std::vector<double>& values);

  int dim() const { return dim_; }
  double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  const double* begin() const { return v_.data(); }
  const double* end() const { return v_.data() + dim_; }
  std::vector<double> to_vector() const { return {begin(), end()}; }

  Coords& operator+=(const Coords& o);
  Coords& operator-=(const Coords& o);
  Coords& operator*=(double s);
  friend Coords operator+(Coords a, const Coords& b) { return a += b; }
  friend Coords operator-(Coords a, const Coords& b) { return a -= b; }
  friend Coords operator*(Coords a, double s) { return a *= s; }
  friend Coords operator*(double s, Coords a) { return a *= s; }
  friend bool operator==(const Coords& a, const Coords& b);
  friend bool operator<(const Coords& a, const Coords& b);

  double dot(const Coords& o) const;
  std::string str() const;

 private:
  std::array<double, kMaxDim> v_{};
  int dim_ = 0;
};

struct Point {
  PointId id = 0;
  Coords coords;
};

// Points of a single dimension with unique ids and unique coordinates.
class PointSet {
 public:
  PointSet() = default;
  // Throws InputError on dimension mismatch, duplicate ids, duplicate
  // coordinates or non-finite values.
  PointSet(int dim, std::vector<Point> points);
  static PointSet from_coords(const std::vector<std::vector<double>>& rows);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }
  const std::vector<Point>& points() const { return points_; }

 private:
  int dim_ = 0;
  std::vector<Point> points_;
};

enum class Metric { kL1, kLInf };

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view s);

double distance(const Coords& a, const Coords& b, Metric m);
inline double distance(const Point& a, const Point& b, Metric m) {
  return distance(a.coords, b.coords, m);
}

// d(v1,p) + d(p,v2) == d(v1,v2) up to eps.
bool in_shortest_path_set(const Coords& p, const Coords& v1, const Coords& v2, Metric m,
                          double eps = kDefaultEpsilon);

// Checks on a lattice of sample points that membership in the shortest path
// set agrees with membership in some sphere intersection
// C(v1, r) ∩ C(v2, d - r), r in [0, d].
bool sphere_union_decomposition_check(const Coords& v1, const Coords& v2, Metric m,
                                      int samples, std::uint64_t seed = 1);

// Directions of the arms of the cross around the shortest path set.
// Linf: sign vectors with first component +1.  L1: unit axis vectors.
struct Direction {
  int index = 0;
  Coords vector;
};

std::vector<Direction> cross_directions(int dim, Metric m);
int cross_direction_count(int dim, Metric m);

enum class Side { kPlus, kMinus };

inline Side opposite(Side s) { return s == Side::kPlus ? Side::kMinus : Side::kPlus; }

struct Arm {
  int direction = 0;
  Side side = Side::kPlus;
  friend bool operator==(const Arm&, const Arm&) = default;
};

// Position of a point relative to the cross S ∪ T.  A point on the boundary
// between arms (Linf) can belong to several arms at once.
struct CrossPosition {
  bool core = false;
  std::vector<Arm> arms;
  bool outside() const { return !core && arms.empty(); }
  bool in_arm(int direction, Side side) const;
};

// a . x <= b
struct HalfSpace {
  Coords a;
  double b = 0;
};

// The closed arm (direction, side) of T(v1, v2) as an intersection of
// half-spaces.
std::vector<HalfSpace> arm_halfspaces(const Coords& v1, const Coords& v2, Metric m, int direction,
                                      Side side);

CrossPosition in_cross(const Coords& p, const Coords& v1, const Coords& v2, Metric m,
                       double eps = kDefaultEpsilon);

// Half-spaces of every arm of T(v1, v2), computed once.
class ArmRegions {
 public:
  ArmRegions(const Coords& v1, const Coords& v2, Metric m);
  int directions() const { return static_cast<int>(hs_.size()); }
  const std::vector<HalfSpace>& halfspaces(int direction, Side side) const;
  std::optional<std::pair<double, double>> clip(const Coords& a, const Coords& b, int direction,
                                                Side side, double eps = kDefaultEpsilon) const;
  CrossPosition position(const Coords& p, double eps = kDefaultEpsilon) const;

 private:
  Coords v1_, v2_;
  Metric m_;
  std::vector<std::array<std::vector<HalfSpace>, 2>> hs_;
};

// Parameter interval [lo, hi] within [0, 1] of the segment a + t (b - a)
// lying in the closed arm region S + R+ u (plus) or S - R+ u (minus).
std::optional<std::pair<double, double>> clip_to_arm(const Coords& a, const Coords& b,
                                                     const Coords& v1, const Coords& v2,
                                                     Metric m, int direction, Side side,
                                                     double eps = kDefaultEpsilon);

}  // namespace bskel
