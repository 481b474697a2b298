// Independent oracles for the test suites: dense sampling of the center
// locus from sphere faces, and linear scans.
#pragma once

#include <utility>
#include <vector>

#include "bskel/geometry.hpp"
#include "bskel/lens.hpp"
#include "bskel/region_index.hpp"

namespace oracle {

using bskel::Coords;
using bskel::Metric;

// Points of C(a, ra) ∩ C(b, rb), from pairwise intersections of sphere faces.
// `per_unit` samples per unit length along segments, and per unit area on
// coplanar patches (as a grid spacing of 1 / per_unit).
std::vector<Coords> sphere_intersection(const Coords& a, double ra, const Coords& b, double rb,
                                        Metric m, double per_unit);

// Arm membership by direct search along each arm direction.
bskel::CrossPosition arm_position(const Coords& p, const Coords& v1, const Coords& v2, Metric m);

struct Family {
  std::vector<Coords> c1, c2;
  // Valid pairs as indices into c1 and c2.
  std::vector<std::pair<int, int>> pairs;
  double r = 0;
  bskel::LensMode mode = bskel::LensMode::kIntersection;
};

// Sampled center pairs of the lens family of (v1, v2) for beta.
Family dense_family(const Coords& v1, const Coords& v2, double beta, Metric m, bskel::Variant v,
                    double per_unit);

bskel::Lens family_lens(const Family& f, const std::pair<int, int>& pr, Metric m, double beta);

// Some sampled lens of the family holds no point of ps except v1 and v2.
bool dense_edge(const bskel::PointSet& ps, const bskel::Point& v1, const bskel::Point& v2,
                double beta, Metric m, bskel::Variant v, double per_unit);

std::size_t linear_count(const std::vector<bskel::ExtCoords>& pts, const bskel::Box& box,
                         double eps = bskel::kDefaultEpsilon);

bskel::PointSet random_points(int n, int dim, int lattice, std::uint64_t seed);

}  // namespace oracle
