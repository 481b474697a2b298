#include "bskel/region_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bskel {

ExtendedFrame::ExtendedFrame(Metric m, int dim) : metric_(m), dim_(dim) {
  if (dim < 2 || dim > 3) {
    throw UnsupportedError("extended frame supports d = 2 and d = 3, got d = " +
                           std::to_string(dim));
  }
  if (m == Metric::kLInf) {
    for (int i = 0; i < dim; ++i) {
      Coords e(dim);
      e[i] = 1;
      axes_.push_back(e);
    }
  } else {
    for (const auto& dir : cross_directions(dim, Metric::kLInf)) axes_.push_back(dir.vector);
  }
}

ExtCoords ExtendedFrame::project(const Coords& p) const {
  if (p.dim() != dim_) throw InputError("dimension mismatch with frame");
  ExtCoords x{};
  for (int k = 0; k < size(); ++k) x[static_cast<std::size_t>(k)] = axis(k).dot(p);
  return x;
}

ExtCoords extended_coords(const Coords& p, const ExtendedFrame& frame) { return frame.project(p); }

bool Box::empty(double eps) const {
  for (int k = 0; k < size_; ++k) {
    if (iv_[k].lo > iv_[k].hi + 2 * eps) return true;
  }
  return false;
}

bool Box::contains(const ExtCoords& x, double eps) const {
  for (int k = 0; k < size_; ++k) {
    if (x[k] < iv_[k].lo - eps || x[k] > iv_[k].hi + eps) return false;
  }
  return true;
}

bool Box::approx_equal(const Box& o, double eps) const {
  if (size_ != o.size_) return false;
  if (empty() && o.empty()) return true;
  for (int k = 0; k < size_; ++k) {
    if (std::abs(iv_[k].lo - o.iv_[k].lo) > eps || std::abs(iv_[k].hi - o.iv_[k].hi) > eps) {
      return false;
    }
  }
  return true;
}

bool Box::inside(const Box& o, double eps) const {
  for (int k = 0; k < size_; ++k) {
    if (iv_[k].lo < o.iv_[k].lo - eps || iv_[k].hi > o.iv_[k].hi + eps) return false;
  }
  return true;
}

namespace {

Box ball_box(const Coords& c, double r, const ExtendedFrame& frame) {
  Box b(frame.size());
  const ExtCoords x = frame.project(c);
  for (int k = 0; k < frame.size(); ++k) b[k] = {x[k] - r, x[k] + r};
  return b;
}

Box canonical_empty(int size) {
  Box b(size);
  for (int k = 0; k < size; ++k) {
    b[k] = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  }
  return b;
}

}  // namespace

std::vector<Box> lens_to_boxes(const Lens& lens, const ExtendedFrame& frame) {
  if (lens.metric != frame.metric()) throw InputError("lens metric does not match frame");
  // L1 balls are boxes in the diagonal frame: |p - c|_1 = max_s |s . (p - c)|.
  const Box b1 = ball_box(lens.c1, lens.r1, frame);
  const Box b2 = ball_box(lens.c2, lens.r2, frame);
  if (lens.mode == LensMode::kUnion) return {b1, b2};
  Box b(frame.size());
  for (int k = 0; k < frame.size(); ++k) {
    b[k] = {std::max(b1[k].lo, b2[k].lo), std::min(b1[k].hi, b2[k].hi)};
  }
  if (b.empty(kDefaultEpsilon)) return {canonical_empty(frame.size())};
  return {b};
}

// One level of the layered tree: the points sorted by `axis`, and for every
// node of a balanced tree over that order, a layer over the node's points on
// the next axis.  Small nodes are scanned directly.
struct RangeTree::Layer {
  static constexpr std::size_t kLeaf = 16;

  struct Entry {
    ExtCoords x;
    std::uint32_t index;
  };

  struct Node {
    std::size_t begin = 0, end = 0;
    int left = -1, right = -1;
    std::unique_ptr<Layer> next;
  };

  int axis = 0;
  int axes = 0;
  std::vector<Entry> pts;
  std::vector<double> keys;
  std::vector<Node> nodes;

  Layer(int axis_, int axes_, std::vector<Entry> p) : axis(axis_), axes(axes_), pts(std::move(p)) {
    std::stable_sort(pts.begin(), pts.end(), [this](const Entry& a, const Entry& b) {
      if (a.x[axis] != b.x[axis]) return a.x[axis] < b.x[axis];
      return a.x < b.x;
    });
    keys.reserve(pts.size());
    for (const auto& q : pts) keys.push_back(q.x[axis]);
    if (axis + 1 < axes && pts.size() > kLeaf) build(0, pts.size());
  }

  int build(std::size_t b, std::size_t e) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({b, e, -1, -1, nullptr});
    if (e - b > kLeaf) {
      nodes[id].next = std::make_unique<Layer>(
          axis + 1, axes, std::vector<Entry>(pts.begin() + b, pts.begin() + e));
      const std::size_t mid = b + (e - b) / 2;
      const int l = build(b, mid);
      const int r = build(mid, e);
      nodes[id].left = l;
      nodes[id].right = r;
    }
    return id;
  }

  bool inside_rest(const ExtCoords& q, const Box& box, double eps, int from) const {
    for (int k = from; k < axes; ++k) {
      if (q[k] < box[k].lo - eps || q[k] > box[k].hi + eps) return false;
    }
    return true;
  }

  // Counts up to cap points; with out set, also reports them.
  std::size_t scan(std::size_t b, std::size_t e, const Box& box, double eps, std::size_t cap,
                   std::vector<std::uint32_t>* out) const {
    std::size_t c = 0;
    for (std::size_t i = b; i < e && c < cap; ++i) {
      if (inside_rest(pts[i].x, box, eps, axis + 1)) {
        ++c;
        if (out) out->push_back(pts[i].index);
      }
    }
    return c;
  }

  std::size_t query(const Box& box, double eps, std::size_t cap,
                    std::vector<std::uint32_t>* out) const {
    const auto lo = std::lower_bound(keys.begin(), keys.end(), box[axis].lo - eps) - keys.begin();
    const auto hi = std::upper_bound(keys.begin(), keys.end(), box[axis].hi + eps) - keys.begin();
    if (lo >= hi) return 0;
    const auto b = static_cast<std::size_t>(lo), e = static_cast<std::size_t>(hi);
    if (axis + 1 == axes) {
      const std::size_t c = std::min(e - b, cap);
      if (out) {
        for (std::size_t i = b; i < b + c; ++i) out->push_back(pts[i].index);
      }
      return c;
    }
    if (nodes.empty()) return scan(b, e, box, eps, cap, out);
    std::size_t c = 0;
    visit(0, b, e, box, eps, cap, c, out);
    return c;
  }

  void visit(int id, std::size_t b, std::size_t e, const Box& box, double eps, std::size_t cap,
             std::size_t& c, std::vector<std::uint32_t>* out) const {
    if (c >= cap) return;
    const Node& nd = nodes[static_cast<std::size_t>(id)];
    if (nd.end <= b || e <= nd.begin) return;
    if (b <= nd.begin && nd.end <= e) {
      c += nd.next ? nd.next->query(box, eps, cap - c, out)
                   : scan(nd.begin, nd.end, box, eps, cap - c, out);
      return;
    }
    if (nd.left < 0) {
      c += scan(std::max(b, nd.begin), std::min(e, nd.end), box, eps, cap - c, out);
      return;
    }
    visit(nd.left, b, e, box, eps, cap, c, out);
    visit(nd.right, b, e, box, eps, cap, c, out);
  }
};

RangeTree::RangeTree(std::vector<ExtCoords> points, int axes) : axes_(axes), size_(points.size()) {
  if (axes < 1 || axes > kMaxFrameAxes) throw InputError("range tree axes out of range");
  std::vector<Layer::Entry> entries;
  entries.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    entries.push_back({points[i], static_cast<std::uint32_t>(i)});
  }
  root_ = std::make_unique<Layer>(0, axes, std::move(entries));
}

RangeTree::~RangeTree() = default;
RangeTree::RangeTree(RangeTree&&) noexcept = default;
RangeTree& RangeTree::operator=(RangeTree&&) noexcept = default;

std::size_t RangeTree::count(const Box& box, double eps) const {
  return count_capped(box, std::numeric_limits<std::size_t>::max(), eps);
}

std::size_t RangeTree::count_capped(const Box& box, std::size_t cap, double eps) const {
  if (!root_ || cap == 0) return 0;
  if (box.size() != axes_) throw InputError("box does not match the index frame");
  for (int k = 0; k < axes_; ++k) {
    if (box[k].lo > box[k].hi + 2 * eps) return 0;
  }
  return root_->query(box, eps, cap, nullptr);
}

std::vector<std::uint32_t> RangeTree::report(const Box& box, double eps) const {
  std::vector<std::uint32_t> out;
  if (!root_) return out;
  if (box.size() != axes_) throw InputError("box does not match the index frame");
  for (int k = 0; k < axes_; ++k) {
    if (box[k].lo > box[k].hi + 2 * eps) return out;
  }
  root_->query(box, eps, std::numeric_limits<std::size_t>::max(), &out);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<PointId> RangeIndex::find(const Coords& c) const {
  auto it = ids.find(c);
  if (it == ids.end()) return std::nullopt;
  return it->second;
}

const Coords& RangeIndex::coords_of(PointId id) const {
  auto it = coords.find(id);
  if (it == coords.end()) throw InputError("unknown point id " + std::to_string(id));
  return it->second;
}

RangeIndex build_index(const PointSet& points, const ExtendedFrame& frame) {
  if (points.empty()) throw InputError("cannot index an empty point set");
  if (points.dim() != frame.dim()) throw InputError("point set dimension does not match frame");
  RangeIndex idx{frame, {}, {}, {}, {}};
  std::vector<ExtCoords> ext;
  ext.reserve(points.size());
  for (const auto& p : points) {
    if (!idx.ids.emplace(p.coords, p.id).second) {
      throw InputError("duplicate coordinates " + p.coords.str());
    }
    idx.coords.emplace(p.id, p.coords);
    idx.order.push_back(p.id);
    ext.push_back(frame.project(p.coords));
  }
  idx.tree = RangeTree(std::move(ext), frame.size());
  return idx;
}

RangeIndex build_index(const PointSet& points, Metric m) {
  return build_index(points, ExtendedFrame(m, points.dim()));
}

std::size_t count_in_box(const RangeIndex& index, const Box& box, double eps) {
  return index.tree.count(box, eps);
}

std::vector<PointId> report_in_box(const RangeIndex& index, const Box& box, double eps) {
  std::vector<PointId> out;
  for (std::uint32_t i : index.tree.report(box, eps)) out.push_back(index.order[i]);
  return out;
}

bool lens_is_empty(const RangeIndex& index, const Lens& lens, PointId id1, PointId id2,
                   double eps) {
  const ExtCoords e1 = index.frame.project(index.coords_of(id1));
  const ExtCoords e2 = index.frame.project(index.coords_of(id2));
  const auto boxes = lens_to_boxes(lens, index.frame);
  if (lens.mode == LensMode::kIntersection) {
    const Box& b = boxes.front();
    if (!b.contains(e1, eps) || !b.contains(e2, eps)) {
      throw InvariantError("lens of pair (" + std::to_string(id1) + ", " + std::to_string(id2) +
                           ") does not contain its endpoints");
    }
    return index.tree.count_capped(b, 3, eps) == 2;
  }
  for (const auto& b : boxes) {
    const std::size_t ends = b.contains(e1, eps) + b.contains(e2, eps);
    if (index.tree.count_capped(b, ends + 1, eps) > ends) return false;
  }
  return true;
}

}  // namespace bskel
