// Minimal lenses of a pair of points: the center pairs whose lens is empty
// of other points exactly when the pair is a skeleton edge.
#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "bskel/geometry.hpp"

namespace bskel {

enum class Variant { kLensBased, kCircleBased };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view s);

enum class Regime {
  kEquidistantSmall,  // lens-based, beta < 1
  kUnit,              // beta == 1
  kAsymmetricMid,     // lens-based, 1 < beta < 2
  kRng,               // lens-based, beta == 2
  kAsymmetricLarge,   // lens-based, beta > 2
  kCircleLarge,       // circle-based, beta > 1
};

std::string_view to_string(Regime r);

Regime regime_of(double beta, Variant v, double eps = kDefaultEpsilon);

enum class LensMode { kIntersection, kUnion };

struct Lens {
  Coords c1, c2;
  double r1 = 0, r2 = 0;
  Metric metric = Metric::kLInf;
  LensMode mode = LensMode::kIntersection;
  std::pair<PointId, PointId> source{0, 0};
  double beta = 1;
};

bool point_in_lens(const Coords& p, const Lens& lens, double eps = kDefaultEpsilon);

struct CenterPair {
  Coords c1, c2;
};

// Shape of the locus the centers are chosen from.
enum class LocusShape {
  kCurve,              // Linf equidistant, no zero gap
  kBand,               // Linf equidistant, some zero gap
  kSquare,             // L1 equidistant, one nonzero gap
  kParallelSegments,   // L1 equidistant, largest gap equals the sum of the others
  kParallelogram,      // L1 equidistant, otherwise
  kPoint,              // 1 <= beta < 2, locus is a point
  kSegment,            // 1 <= beta < 2, locus is a segment
  kRectangle,          // Linf 1 <= beta < 2, locus is a rectangle
  kPolygon,            // L1 1 <= beta < 2, locus is a polygon (a hexagon generically)
  kUnique,             // beta == 2
  kFaces,              // beta > 2, union of cube or cross-polytope faces
};

std::string_view to_string(LocusShape s);

struct CandidateSet {
  LocusShape shape = LocusShape::kPoint;
  int faces = 0;          // kFaces: number of faces of the locus
  int locus_vertices = 0; // L1 1 <= beta < 2: vertices of the locus polygon
  std::vector<CenterPair> pairs;
};

enum class PairSelection { kFarthest, kClosest };

// Centers at distance R from both v1 and v2 (R >= d/2), grouped by cross
// direction from opposite arms, keeping the farthest or closest pairs per
// direction.  R == d/2 yields the beta == 1 candidates.
CandidateSet equidistant_candidates(const Coords& v1, const Coords& v2, double R, Metric m,
                                    PairSelection sel = PairSelection::kFarthest,
                                    double eps = kDefaultEpsilon);

// Lens-based centers for beta >= 1: c1 at distance beta d / 2 from v1 and
// |1 - beta / 2| d from v2, c2 symmetric.
CandidateSet asymmetric_candidates(const Coords& v1, const Coords& v2, double beta, Metric m,
                                   double eps = kDefaultEpsilon);

// Throws UnsupportedError for d outside {2, 3}.
std::vector<Lens> minimal_lenses(const Point& v1, const Point& v2, double beta, Metric m,
                                 Variant v, double eps = kDefaultEpsilon);

}  // namespace bskel
