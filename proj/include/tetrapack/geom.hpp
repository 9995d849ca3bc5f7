// Geometry kernel: rotations, small convex hulls, volumes and signed
// separation between convex polytopes.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tetrapack::geom {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Incidence and touching decisions.
inline constexpr double kTol = 1e-9;
// Closed-form algebraic checks.
inline constexpr double kExactTol = 1e-12;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;

  double signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }
};

// Convex polytope with merged (possibly non-triangular) faces.  Face cycles
// run counterclockwise when seen from outside.
struct ConvexBody {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;
  std::vector<std::array<int, 2>> edges;
  std::vector<Vec3> face_normals;
  // Index of each vertex in the point list the hull was built from.
  std::vector<int> source_index;

  int support_index(const Vec3& dir) const;
  double support(const Vec3& dir) const { return vertices[support_index(dir)].dot(dir); }
  double min_along(const Vec3& dir) const;
  Vec3 centroid() const;
  double bounding_radius(const Vec3& center) const;
  bool contains(const Vec3& p, double tol = kTol) const;

  ConvexBody translated(const Vec3& t) const;
  // Applies x -> m x + t.  Reflections reverse the face cycles so they stay
  // counterclockwise from outside.
  ConvexBody transformed(const Mat3& m, const Vec3& t) const;
};

Vec3 rotate_about_line(const Vec3& p, const Vec3& axis_point, const Vec3& axis_dir,
                       double angle);

ConvexBody convex_hull(std::span<const Vec3> points, double tol = kTol);

double body_volume(const ConvexBody& body);

enum class AxisKind { face_a, face_b, edge_edge };

// A direction n with the offset h = max_A n.a - min_B n.b.  For the pair
// (A, B + t) the separation along n equals n.t - h, which is linear in t.
struct SeparatingAxis {
  Vec3 normal;
  double offset = 0.0;
  AxisKind kind = AxisKind::face_a;
  int feature_a = -1;
  int feature_b = -1;

  double gap(const Vec3& t) const { return normal.dot(t) - offset; }
};

std::vector<SeparatingAxis> candidate_axes(const ConvexBody& a, const ConvexBody& b);

struct AxisGap {
  double gap = 0.0;
  int axis = -1;
};

// Largest separation over the axes for body B shifted by t.  This is the
// exact signed distance when the bodies overlap and a lower bound otherwise.
AxisGap best_axis(std::span<const SeparatingAxis> axes, const Vec3& t);

struct Separation {
  double gap = 0.0;
  Plane witness;
  Vec3 point_a = Vec3::Zero();
  Vec3 point_b = Vec3::Zero();
};

Separation signed_separation(const ConvexBody& a, const ConvexBody& b);

struct DistanceResult {
  double distance = 0.0;
  Vec3 point_a = Vec3::Zero();
  Vec3 point_b = Vec3::Zero();
  bool intersecting = false;
  bool converged = false;
};

// Euclidean distance between disjoint bodies through support queries.
DistanceResult gjk_distance(const ConvexBody& a, const ConvexBody& b);

enum class RingKind { edge, vertex };

RingKind parse_ring_kind(std::string_view name);

struct SolidAngle {
  double total = 0.0;
  double local_density = 0.0;
};

SolidAngle ring_solid_angle(RingKind kind, int count);

}  // namespace tetrapack::geom
