// The nine-tetrahedron cluster: a central tetrahedron with two swiveling
// chains of four wrapped around its opposite edges.
#pragma once

#include "tetrapack/geom.hpp"

#include <array>
#include <string_view>
#include <utility>
#include <vector>

namespace tetrapack::cluster {

using geom::Mat3;
using geom::Vec3;

// The chain touches the central tetrahedron at |param| = 1/9.
inline constexpr double kParamLimit = 1.0 / 9.0;

enum class Side { upper, lower };

std::string_view side_name(Side side);

struct SwivelParams {
  double u = 0.0;
  double v = 0.0;
  double theta_u = 0.0;
  double theta_v = 0.0;

  // Validates the range and fills in the swivel angles (u = sqrt(3) sin theta).
  static SwivelParams from_uv(double u, double v);
};

struct Tetra {
  std::array<Vec3, 4> vertices;

  double volume() const;
};

struct RimVertices {
  Vec3 o, p, q, r, s;
};

struct HalfCluster {
  Side side = Side::upper;
  double param = 0.0;
  // Central tetrahedron first, then the chain in wrapping order.
  std::array<Tetra, 5> tetrahedra;
  RimVertices rim;
  // Shared edge (2), the opposite central edge (2), then rim s,r,q,p,o.
  std::array<Vec3, 9> points;
  geom::ConvexBody hull;
  Vec3 apex;
};

struct Cluster {
  SwivelParams params;
  HalfCluster upper;
  HalfCluster lower;
  int orientation = 1;
  // Point reflections of the two half hulls, used by the opposite coset.
  geom::ConvexBody reflected_upper;
  geom::ConvexBody reflected_lower;

  const HalfCluster& half(Side side) const { return side == Side::upper ? upper : lower; }
  const geom::ConvexBody& reflected(Side side) const {
    return side == Side::upper ? reflected_upper : reflected_lower;
  }
  // The nine tetrahedra: central, upper chain, lower chain.
  std::vector<Tetra> tetrahedra() const;
};

Tetra base_tetra();

HalfCluster build_chain(Side side, double param);

Cluster build_cluster(const SwivelParams& params, int orientation = 1);

// Height of the chain apex; negative for the lower chain.
double apex_height(double param, Side side = Side::upper);

// Symmetries of the centred cluster, generated by a quarter turn about z
// composed with a z flip (P) and the y,z flip (Q).
struct IsometryGroup {
  std::array<Mat3, 8> elements;
  std::array<std::string_view, 8> names;
  // Signed swap of (u, v) induced by each element.
  std::array<Eigen::Matrix2d, 8> param_action;

  static const IsometryGroup& instance();
};

std::array<std::pair<double, double>, 8> param_orbit(const SwivelParams& params);

}  // namespace tetrapack::cluster
