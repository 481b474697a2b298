// Exact edge decisions for center families that have no constant set of
// minimal lenses.
//
// Lens-based, L1, d = 3, beta < 1 and 1 <= beta < 2 (all gaps nonzero): the
// lenses of the family are pairwise incomparable, so emptiness of the
// returned lenses alone can miss edges.  Circle-based, beta > 1: a union lens
// is empty iff both balls are, and balls of equal radius never nest.
#pragma once

#include <array>
#include <memory>
#include <vector>

#include "bskel/geometry.hpp"
#include "bskel/lens.hpp"
#include "bskel/region_index.hpp"

namespace bskel {

class CenterFamily {
 public:
  virtual ~CenterFamily() = default;
  // Points inside the core box lie in every lens of the family; every lens
  // lies inside the hull box.
  virtual Box core_box() const = 0;
  virtual Box hull_box() const = 0;
  // p lies in some lens of the family.
  virtual bool blocks_any(const Coords& p) const = 0;
  // Some lens of the family contains none of the blockers.
  virtual bool has_empty_lens(const std::vector<Coords>& blockers) const = 0;
};

// Null when the minimal lenses decide every edge on their own.
std::unique_ptr<CenterFamily> center_family(const Point& v1, const Point& v2, double beta,
                                            Metric m, Variant v, double eps = kDefaultEpsilon);

class LensFamily : public CenterFamily {
 public:
  // Centers {o + q0 a0 + q1 a1} with q constrained by intervals on the
  // functionals q0, q1 and q0 + q1 (one parameter: q0 only).
  struct CenterSet {
    int params = 1;
    Coords o, a0, a1;
    std::array<Interval, 3> bounds{};
  };
  struct Piece {
    CenterSet x, y;
  };

  static std::unique_ptr<LensFamily> of(const Point& v1, const Point& v2, double beta, Metric m,
                                        Variant v, double eps = kDefaultEpsilon);

  Box core_box() const override;
  Box hull_box() const override;
  bool blocks_any(const Coords& p) const override;
  bool has_empty_lens(const std::vector<Coords>& blockers) const override;

  const std::vector<Piece>& pieces() const { return pieces_; }
  double radius() const { return r_; }

 private:
  std::vector<Coords> vertices() const;

  std::vector<Piece> pieces_;  // in world coordinates
  double r_ = 0;
  double eps_ = kDefaultEpsilon;
  ExtendedFrame frame_{Metric::kL1, 3};
};

class CircleFamily : public CenterFamily {
 public:
  // Centers on a planar patch: coordinate `axis` equals `value` and the
  // coordinates (t0, t1) range over a convex polygon.
  struct Patch {
    int axis = 0, t0 = 1, t1 = 2;
    double value = 0;
    std::vector<std::array<double, 2>> poly;
  };
  // Centers of one arm.
  struct ArmCenters {
    std::vector<Coords> points;
    std::vector<std::pair<Coords, Coords>> segments;
    std::vector<Patch> patches;
  };

  static std::unique_ptr<CircleFamily> of(const Point& v1, const Point& v2, double beta,
                                          Metric m, Variant v, double eps = kDefaultEpsilon);

  Box core_box() const override;
  Box hull_box() const override;
  bool blocks_any(const Coords& p) const override;
  bool has_empty_lens(const std::vector<Coords>& blockers) const override;

  // Per cross direction, the centers of its two arms.
  const std::vector<std::array<ArmCenters, 2>>& arms() const { return arms_; }
  double radius() const { return r_; }

 private:
  CircleFamily(Metric m, int dim) : frame_(m, dim) {}
  bool arm_free(const ArmCenters& a, const std::vector<Coords>& blockers) const;
  std::vector<Coords> vertices() const;

  std::vector<std::array<ArmCenters, 2>> arms_;
  double r_ = 0;
  double eps_ = kDefaultEpsilon;
  ExtendedFrame frame_;
};

}  // namespace bskel
