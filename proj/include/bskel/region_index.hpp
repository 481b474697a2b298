// Lenses as axis-aligned boxes in an extended coordinate frame, and a layered
// range tree answering box counting queries.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "bskel/geometry.hpp"
#include "bskel/lens.hpp"

namespace bskel {

inline constexpr int kMaxFrameAxes = 4;

using ExtCoords = std::array<double, kMaxFrameAxes>;

// Linf: the coordinate functionals.  L1: the functionals p -> s . p over the
// 2^(d-1) sign vectors s with s_0 = +1.
class ExtendedFrame {
 public:
  ExtendedFrame(Metric m, int dim);
  Metric metric() const { return metric_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(axes_.size()); }
  const Coords& axis(int k) const { return axes_[static_cast<std::size_t>(k)]; }
  ExtCoords project(const Coords& p) const;

 private:
  Metric metric_;
  int dim_;
  std::vector<Coords> axes_;
};

struct Interval {
  double lo = 0, hi = 0;
};

class Box {
 public:
  Box() = default;
  explicit Box(int size) : size_(size) {}
  int size() const { return size_; }
  Interval& operator[](int k) { return iv_[static_cast<std::size_t>(k)]; }
  const Interval& operator[](int k) const { return iv_[static_cast<std::size_t>(k)]; }
  bool empty(double eps = 0) const;
  bool contains(const ExtCoords& x, double eps = kDefaultEpsilon) const;
  bool approx_equal(const Box& o, double eps) const;
  // Every point of *this lies in o (both non-empty).
  bool inside(const Box& o, double eps) const;

 private:
  std::array<Interval, kMaxFrameAxes> iv_{};
  int size_ = 0;
};

ExtCoords extended_coords(const Coords& p, const ExtendedFrame& frame);

// One box for an intersection lens, one per ball for a union lens.  The
// region of an intersection lens equals its box; a union lens is the union of
// its boxes.
std::vector<Box> lens_to_boxes(const Lens& lens, const ExtendedFrame& frame);

class RangeTree {
 public:
  RangeTree() = default;
  RangeTree(std::vector<ExtCoords> points, int axes);
  ~RangeTree();
  RangeTree(RangeTree&&) noexcept;
  RangeTree& operator=(RangeTree&&) noexcept;

  std::size_t size() const { return size_; }
  std::size_t count(const Box& box, double eps = kDefaultEpsilon) const;
  // Stops once the count reaches cap.
  std::size_t count_capped(const Box& box, std::size_t cap, double eps = kDefaultEpsilon) const;
  // Input positions of the points in the box, ascending.
  std::vector<std::uint32_t> report(const Box& box, double eps = kDefaultEpsilon) const;

 private:
  struct Layer;
  std::unique_ptr<Layer> root_;
  int axes_ = 0;
  std::size_t size_ = 0;
};

struct RangeIndex {
  ExtendedFrame frame;
  RangeTree tree;
  std::map<Coords, PointId> ids;
  std::map<PointId, Coords> coords;
  std::vector<PointId> order;  // ids in tree input order

  std::optional<PointId> find(const Coords& c) const;
  const Coords& coords_of(PointId id) const;
};

// Throws InputError on duplicate coordinates, UnsupportedError for d > 3.
RangeIndex build_index(const PointSet& points, const ExtendedFrame& frame);
RangeIndex build_index(const PointSet& points, Metric m);

std::size_t count_in_box(const RangeIndex& index, const Box& box, double eps = kDefaultEpsilon);

std::vector<PointId> report_in_box(const RangeIndex& index, const Box& box,
                                   double eps = kDefaultEpsilon);

// True when the lens contains no indexed point besides its endpoints id1, id2.
// Throws InvariantError when an intersection lens misses an endpoint.
bool lens_is_empty(const RangeIndex& index, const Lens& lens, PointId id1, PointId id2,
                   double eps = kDefaultEpsilon);

}  // namespace bskel
