#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "visopt/free_space.hpp"

namespace visopt {

enum class SegmentKind { TypeI, TypeII };

/// A line segment in free space across which the anchor set changes.
struct InflectionSegment {
  std::size_t id;
  SegmentKind kind;
  /// TypeI: the single reflex generator. TypeII: (near vertex, far vertex) —
  /// the ray starts at the first and points away from the second.
  std::vector<std::size_t> generators;
  std::size_t origin_vertex;  ///< vertex the ray starts from
  Point2 a;                   ///< ray origin
  Point2 b;                   ///< first boundary hit
  /// Reflex vertex whose anchor status flips across the segment; empty for a
  /// TypeII ray along which the far vertex stays hidden on both sides.
  std::optional<std::size_t> anchor_delta;
};

struct PartitionFace {
  std::size_t id;
  Polygon polygon;                      ///< convex, counter-clockwise
  std::vector<std::size_t> anchor_set;  ///< sorted vertex ids
  Point2 sample;                        ///< deep interior point used for labelling
};

/// Edge of the planar arrangement (boundary pieces and segment pieces).
struct ArrangementEdge {
  Point2 a;
  Point2 b;
  bool on_boundary;
  std::vector<std::size_t> segments;  ///< contributing inflection segments
  std::optional<std::size_t> left_face;
  std::optional<std::size_t> right_face;
};

struct FaceAdjacency {
  std::size_t face_a;
  std::size_t face_b;
  std::vector<std::size_t> segments;
};

struct CriticalStructure {
  std::vector<InflectionSegment> segments;
  std::vector<PartitionFace> faces;
  std::vector<FaceAdjacency> adjacency;
  std::vector<ArrangementEdge> edges;
  double eps = 0.0;
};

std::vector<InflectionSegment> inflection_segments(const FreeSpace& fs);

/// 4·n_r + 2·C(n_r, 2).
std::size_t segment_count_bound(std::size_t n_reflex);

CriticalStructure build_partition(const FreeSpace& fs, const std::vector<InflectionSegment>& segs);
CriticalStructure build_critical_structure(const FreeSpace& fs);

struct FaceHit {
  std::size_t face;
};
struct SegmentHit {
  std::vector<std::size_t> segments;
};
using Location = std::variant<FaceHit, SegmentHit>;

Location locate(const CriticalStructure& cs, Point2 x);

/// Faces whose closed polygon contains x within tol.
std::vector<std::size_t> faces_touching(const CriticalStructure& cs, Point2 x, double tol);

}  // namespace visopt
