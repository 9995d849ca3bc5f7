#include "tetrapack/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tetrapack::cluster {

std::string_view side_name(Side side) { return side == Side::upper ? "upper" : "lower"; }

namespace {

void check_param(double param, const char* name) {
  if (!std::isfinite(param) || std::abs(param) > kParamLimit + geom::kExactTol) {
    throw std::out_of_range(std::string("swivel parameter ") + name +
                            " outside [-1/9, 1/9]: " + std::to_string(param));
  }
}

double swivel_angle(double param) {
  const double s = std::clamp(param / std::sqrt(3.0), -1.0, 1.0);
  return std::asin(s);
}

Tetra make_tetra(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return Tetra{{a, b, c, d}};
}

}  // namespace

SwivelParams SwivelParams::from_uv(double u, double v) {
  check_param(u, "u");
  check_param(v, "v");
  return {u, v, swivel_angle(u), swivel_angle(v)};
}

double Tetra::volume() const {
  const Vec3& a = vertices[0];
  return std::abs((vertices[1] - a).dot((vertices[2] - a).cross(vertices[3] - a))) / 6.0;
}

Tetra base_tetra() {
  return make_tetra(Vec3(1, 1, 1), Vec3(-1, -1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1));
}

HalfCluster build_chain(Side side, double param) {
  check_param(param, "param");
  const Tetra b1 = base_tetra();
  const auto& bv = b1.vertices;
  const bool upper = side == Side::upper;
  // Shared edge, the far edge of the central tetrahedron, and the starting
  // face vertex that the wrap rotates away from.
  const Vec3 e1 = upper ? bv[0] : bv[2];
  const Vec3 e2 = upper ? bv[1] : bv[3];
  const Vec3 f1 = upper ? bv[2] : bv[0];
  const Vec3 f2 = upper ? bv[3] : bv[1];
  const Vec3 mid = 0.5 * (e1 + e2);
  const Vec3 axis = (e2 - e1).normalized();

  const double dihedral = std::acos(1.0 / 3.0);
  // Half of the angular gap left by five tetrahedra around an edge.
  const double half_gap = 0.5 * (2.0 * std::numbers::pi - 5.0 * dihedral);
  const double theta = swivel_angle(param);

  std::array<Vec3, 5> ring;
  for (int k = 0; k < 5; ++k) {
    ring[k] = geom::rotate_about_line(f1, mid, axis, half_gap + k * dihedral - theta);
  }

  HalfCluster h;
  h.side = side;
  h.param = param;
  h.tetrahedra[0] = b1;
  for (int k = 0; k < 4; ++k) h.tetrahedra[k + 1] = make_tetra(e1, e2, ring[k], ring[k + 1]);
  h.rim = {ring[4], ring[3], ring[2], ring[1], ring[0]};
  h.points = {e1, e2, f1, f2, ring[0], ring[1], ring[2], ring[3], ring[4]};
  h.apex = h.rim.q;
  h.hull = geom::convex_hull(h.points);
  return h;
}

double apex_height(double param, Side side) {
  check_param(param, "param");
  const double h = 1.0 + std::sqrt(6.0 - 2.0 * param * param);
  return side == Side::upper ? h : -h;
}

Cluster build_cluster(const SwivelParams& params, int orientation) {
  if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +1 or -1");
  Cluster c;
  c.params = SwivelParams::from_uv(params.u, params.v);
  c.upper = build_chain(Side::upper, params.u);
  c.lower = build_chain(Side::lower, params.v);
  c.orientation = orientation;
  if (orientation == -1) {
    for (HalfCluster* h : {&c.upper, &c.lower}) {
      for (Tetra& t : h->tetrahedra)
        for (Vec3& p : t.vertices) p = -p;
      for (Vec3* p : {&h->rim.o, &h->rim.p, &h->rim.q, &h->rim.r, &h->rim.s}) *p = -*p;
      for (Vec3& p : h->points) p = -p;
      h->apex = -h->apex;
      h->hull = h->hull.transformed(-Mat3::Identity(), Vec3::Zero());
    }
  }
  c.reflected_upper = c.upper.hull.transformed(-Mat3::Identity(), Vec3::Zero());
  c.reflected_lower = c.lower.hull.transformed(-Mat3::Identity(), Vec3::Zero());
  return c;
}

std::vector<Tetra> Cluster::tetrahedra() const {
  std::vector<Tetra> out(upper.tetrahedra.begin(), upper.tetrahedra.end());
  out.insert(out.end(), lower.tetrahedra.begin() + 1, lower.tetrahedra.end());
  return out;
}

const IsometryGroup& IsometryGroup::instance() {
  static const IsometryGroup group = [] {
    IsometryGroup g;
    Mat3 p;
    p << 0, -1, 0, 1, 0, 0, 0, 0, -1;
    const Mat3 q = Eigen::Vector3d(1, -1, -1).asDiagonal();
    const Mat3 id = Mat3::Identity();
    g.elements = {id, p, p * p, p * p * p, q, q * p, q * p * p, q * p * p * p};
    g.names = {"I", "P", "P2", "P3", "Q", "QP", "QP2", "QP3"};
    auto m = [](double a, double b, double c, double d) {
      Eigen::Matrix2d r;
      r << a, b, c, d;
      return r;
    };
    g.param_action = {m(1, 0, 0, 1),  m(0, -1, 1, 0),  m(-1, 0, 0, -1), m(0, 1, -1, 0),
                      m(0, 1, 1, 0),  m(1, 0, 0, -1),  m(0, -1, -1, 0), m(-1, 0, 0, 1)};
    return g;
  }();
  return group;
}

std::array<std::pair<double, double>, 8> param_orbit(const SwivelParams& params) {
  const auto& g = IsometryGroup::instance();
  std::array<std::pair<double, double>, 8> out;
  for (int k = 0; k < 8; ++k) {
    const Eigen::Vector2d uv = g.param_action[k] * Eigen::Vector2d(params.u, params.v);
    out[k] = {uv.x(), uv.y()};
  }
  return out;
}

}  // namespace tetrapack::cluster
