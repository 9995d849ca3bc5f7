#include "tetrapack/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tetrapack::geom {

int ConvexBody::support_index(const Vec3& dir) const {
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    double value = vertices[i].dot(dir);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  return best;
}

double ConvexBody::min_along(const Vec3& dir) const {
  double lo = std::numeric_limits<double>::infinity();
  for (const Vec3& v : vertices) lo = std::min(lo, v.dot(dir));
  return lo;
}

Vec3 ConvexBody::centroid() const {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& v : vertices) sum += v;
  return sum / static_cast<double>(vertices.size());
}

double ConvexBody::bounding_radius(const Vec3& center) const {
  double r = 0.0;
  for (const Vec3& v : vertices) r = std::max(r, (v - center).norm());
  return r;
}

bool ConvexBody::contains(const Vec3& p, double tol) const {
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (face_normals[f].dot(p - vertices[faces[f][0]]) > tol) return false;
  }
  return true;
}

ConvexBody ConvexBody::translated(const Vec3& t) const {
  ConvexBody out = *this;
  for (Vec3& v : out.vertices) v += t;
  return out;
}

ConvexBody ConvexBody::transformed(const Mat3& m, const Vec3& t) const {
  ConvexBody out = *this;
  for (Vec3& v : out.vertices) v = m * v + t;
  const bool flips = m.determinant() < 0.0;
  for (std::size_t f = 0; f < out.faces.size(); ++f) {
    if (flips) std::reverse(out.faces[f].begin() + 1, out.faces[f].end());
    // Normals transform by the inverse transpose; m is orthogonal here in
    // practice but the general form costs nothing.
    Vec3 n = m.inverse().transpose() * face_normals[f];
    out.face_normals[f] = n.normalized();
  }
  return out;
}

Vec3 rotate_about_line(const Vec3& p, const Vec3& axis_point, const Vec3& axis_dir,
                       double angle) {
  if (std::abs(axis_dir.norm() - 1.0) > kExactTol) {
    throw std::invalid_argument("rotate_about_line: axis direction must be a unit vector");
  }
  const Eigen::AngleAxisd rotation(angle, axis_dir);
  return axis_point + rotation * (p - axis_point);
}

namespace {

// Corners of a planar point set in counterclockwise order about `normal`,
// collinear boundary points dropped (monotone chain).
std::vector<int> planar_hull(const std::vector<Vec3>& pts, const std::vector<int>& ids,
                             const Vec3& normal, double tol) {
  Vec3 u = normal.unitOrthogonal();
  Vec3 w = normal.cross(u);
  struct P2 {
    double x, y;
    int id;
  };
  std::vector<P2> q;
  q.reserve(ids.size());
  for (int id : ids) q.push_back({pts[id].dot(u), pts[id].dot(w), id});
  std::sort(q.begin(), q.end(), [](const P2& l, const P2& r) {
    return l.x < r.x || (l.x == r.x && l.y < r.y);
  });
  auto cross = [](const P2& o, const P2& a, const P2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<P2> hull(2 * q.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], q[i]) <= tol) --k;
    hull[k++] = q[i];
  }
  for (std::size_t i = q.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], q[i]) <= tol) --k;
    hull[k++] = q[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  std::vector<int> out;
  out.reserve(hull.size());
  for (const P2& p : hull) out.push_back(p.id);
  return out;
}

// Best-conditioned normal through a coplanar subset.
Vec3 fit_normal(const std::vector<Vec3>& pts, const std::vector<int>& ids) {
  Vec3 best = Vec3::Zero();
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      for (std::size_t k = j + 1; k < ids.size(); ++k) {
        Vec3 n = (pts[ids[j]] - pts[ids[i]]).cross(pts[ids[k]] - pts[ids[i]]);
        if (n.squaredNorm() > best.squaredNorm()) best = n;
      }
  return best.normalized();
}

}  // namespace

ConvexBody convex_hull(std::span<const Vec3> points, double tol) {
  if (points.size() < 4) throw GeometryError("convex_hull: need at least 4 points");

  // Collapse duplicates, keeping the first occurrence.
  std::vector<Vec3> pts;
  std::vector<int> origin;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) throw GeometryError("convex_hull: non-finite point");
    bool dup = false;
    for (const Vec3& p : pts) dup = dup || (p - points[i]).norm() <= tol;
    if (!dup) {
      pts.push_back(points[i]);
      origin.push_back(static_cast<int>(i));
    }
  }
  const int n = static_cast<int>(pts.size());

  // Degeneracy: the largest triangle must have area and something off its plane.
  double best_area = 0.0;
  Vec3 best_normal = Vec3::Zero();
  int base = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Vec3 c = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        if (c.norm() > best_area) {
          best_area = c.norm();
          best_normal = c;
          base = i;
        }
      }
  if (best_area <= tol) throw GeometryError("convex_hull: points are collinear");
  best_normal.normalize();
  double thickness = 0.0;
  for (const Vec3& p : pts) thickness = std::max(thickness, std::abs(best_normal.dot(p - pts[base])));
  if (thickness <= tol) throw GeometryError("convex_hull: points are coplanar");

  struct Facet {
    Vec3 normal;
    double offset;
    std::vector<int> ids;
  };
  std::vector<Facet> facets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Vec3 c = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        const double scale = (pts[j] - pts[i]).norm() * (pts[k] - pts[i]).norm();
        if (c.norm() <= 1e-10 * scale) continue;
        c.normalize();
        double lo = 0.0, hi = 0.0;
        for (const Vec3& p : pts) {
          const double s = c.dot(p - pts[i]);
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
        if (hi > tol && lo < -tol) continue;
        if (hi > tol) c = -c;
        const double offset = c.dot(pts[i]);
        bool seen = false;
        for (const Facet& f : facets) {
          if (f.normal.dot(c) > 1.0 - 1e-9 && std::abs(f.offset - offset) <= 10 * tol) {
            seen = true;
            break;
          }
        }
        if (seen) continue;
        Facet f{c, offset, {}};
        for (int m = 0; m < n; ++m)
          if (std::abs(c.dot(pts[m]) - offset) <= tol) f.ids.push_back(m);
        Vec3 refit = fit_normal(pts, f.ids);
        if (refit.dot(c) < 0) refit = -refit;
        f.normal = refit;
        f.offset = refit.dot(pts[f.ids.front()]);
        facets.push_back(std::move(f));
      }

  // Hull vertices keep input order; faces are remapped onto them.
  std::vector<std::vector<int>> cycles;
  std::vector<bool> used(n, false);
  for (const Facet& f : facets) {
    std::vector<int> cyc = planar_hull(pts, f.ids, f.normal, 1e-12);
    if (cyc.size() < 3) continue;
    for (int id : cyc) used[id] = true;
    cycles.push_back(std::move(cyc));
  }
  std::vector<int> remap(n, -1);
  ConvexBody body;
  for (int i = 0; i < n; ++i) {
    if (!used[i]) continue;
    remap[i] = static_cast<int>(body.vertices.size());
    body.vertices.push_back(pts[i]);
    body.source_index.push_back(origin[i]);
  }
  for (std::size_t f = 0; f < cycles.size(); ++f) {
    std::vector<int> face;
    for (int id : cycles[f]) face.push_back(remap[id]);
    body.faces.push_back(std::move(face));
  }
  for (std::size_t f = 0; f < cycles.size(); ++f) {
    const auto& face = body.faces[f];
    Vec3 newell = Vec3::Zero();
    for (std::size_t i = 0; i < face.size(); ++i) {
      newell += body.vertices[face[i]].cross(body.vertices[face[(i + 1) % face.size()]]);
    }
    body.face_normals.push_back(newell.normalized());
  }
  for (const auto& face : body.faces) {
    for (std::size_t i = 0; i < face.size(); ++i) {
      int p = face[i], q = face[(i + 1) % face.size()];
      std::array<int, 2> e{std::min(p, q), std::max(p, q)};
      if (std::find(body.edges.begin(), body.edges.end(), e) == body.edges.end()) {
        body.edges.push_back(e);
      }
    }
  }
  std::sort(body.edges.begin(), body.edges.end());
  const auto euler = static_cast<long>(body.vertices.size()) - static_cast<long>(body.edges.size()) +
                     static_cast<long>(body.faces.size());
  if (euler != 2) throw GeometryError("convex_hull: inconsistent face structure");
  return body;
}

double body_volume(const ConvexBody& body) {
  const Vec3 c = body.centroid();
  double vol = 0.0;
  for (const auto& face : body.faces) {
    const Vec3 p0 = body.vertices[face[0]] - c;
    for (std::size_t i = 1; i + 1 < face.size(); ++i) {
      vol += p0.dot((body.vertices[face[i]] - c).cross(body.vertices[face[i + 1]] - c));
    }
  }
  return std::max(0.0, vol / 6.0);
}

std::vector<SeparatingAxis> candidate_axes(const ConvexBody& a, const ConvexBody& b) {
  std::vector<SeparatingAxis> axes;
  axes.reserve(a.faces.size() + b.faces.size() + 2 * a.edges.size() * b.edges.size());
  auto push = [&](const Vec3& n, AxisKind kind, int fa, int fb) {
    axes.push_back({n, a.support(n) - b.min_along(n), kind, fa, fb});
  };
  for (std::size_t f = 0; f < a.faces.size(); ++f) {
    push(a.face_normals[f], AxisKind::face_a, static_cast<int>(f), -1);
  }
  for (std::size_t f = 0; f < b.faces.size(); ++f) {
    push(-b.face_normals[f], AxisKind::face_b, -1, static_cast<int>(f));
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const Vec3 ea = a.vertices[a.edges[i][1]] - a.vertices[a.edges[i][0]];
    for (std::size_t j = 0; j < b.edges.size(); ++j) {
      const Vec3 eb = b.vertices[b.edges[j][1]] - b.vertices[b.edges[j][0]];
      Vec3 n = ea.cross(eb);
      if (n.norm() <= 1e-9 * ea.norm() * eb.norm()) continue;
      n.normalize();
      push(n, AxisKind::edge_edge, static_cast<int>(i), static_cast<int>(j));
      push(-n, AxisKind::edge_edge, static_cast<int>(i), static_cast<int>(j));
    }
  }
  return axes;
}

AxisGap best_axis(std::span<const SeparatingAxis> axes, const Vec3& t) {
  AxisGap best{-std::numeric_limits<double>::infinity(), -1};
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const double g = axes[k].gap(t);
    if (g > best.gap) best = {g, static_cast<int>(k)};
  }
  return best;
}

namespace {

struct SimplexPoint {
  Vec3 w;
  int ia;
  int ib;
};

// Closest point of conv(simplex) to the origin.  Enumerates sub-simplices and
// keeps the nearest affine projection that falls inside its own face.
bool closest_on_simplex(std::vector<SimplexPoint>& simplex, std::vector<double>& weights,
                        Vec3& closest) {
  const int m = static_cast<int>(simplex.size());
  double best_norm = std::numeric_limits<double>::infinity();
  int best_mask = 0;
  std::vector<double> best_lambda;
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) idx.push_back(i);
    const int k = static_cast<int>(idx.size());
    std::vector<double> lambda(k, 1.0);
    if (k > 1) {
      const Vec3 w0 = simplex[idx[0]].w;
      Eigen::MatrixXd g(k - 1, k - 1);
      Eigen::VectorXd rhs(k - 1);
      for (int r = 0; r < k - 1; ++r) {
        const Vec3 dr = simplex[idx[r + 1]].w - w0;
        rhs(r) = -dr.dot(w0);
        for (int c = 0; c < k - 1; ++c) g(r, c) = dr.dot(simplex[idx[c + 1]].w - w0);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
      lu.setThreshold(1e-13);
      if (lu.rank() < k - 1) continue;
      Eigen::VectorXd mu = lu.solve(rhs);
      double sum = 0.0;
      bool inside = true;
      for (int r = 0; r < k - 1; ++r) {
        lambda[r + 1] = mu(r);
        sum += mu(r);
        inside = inside && mu(r) > 0.0;
      }
      lambda[0] = 1.0 - sum;
      inside = inside && lambda[0] > 0.0;
      if (!inside) continue;
    }
    Vec3 p = Vec3::Zero();
    for (int r = 0; r < k; ++r) p += lambda[r] * simplex[idx[r]].w;
    if (p.norm() < best_norm) {
      best_norm = p.norm();
      best_mask = mask;
      best_lambda = lambda;
      closest = p;
    }
  }
  if (best_mask == 0) return false;
  std::vector<SimplexPoint> kept;
  weights.clear();
  for (int i = 0, r = 0; i < m; ++i) {
    if (best_mask & (1 << i)) {
      kept.push_back(simplex[i]);
      weights.push_back(best_lambda[r++]);
    }
  }
  simplex = std::move(kept);
  return true;
}

}  // namespace

DistanceResult gjk_distance(const ConvexBody& a, const ConvexBody& b) {
  DistanceResult result;
  std::vector<SimplexPoint> simplex;
  std::vector<double> weights;
  Vec3 v = a.vertices[0] - b.vertices[0];
  simplex.push_back({v, 0, 0});
  weights.push_back(1.0);
  for (int iter = 0; iter < 128; ++iter) {
    const double vv = v.squaredNorm();
    if (vv <= 1e-24) {
      result.intersecting = true;
      result.converged = true;
      break;
    }
    const int ia = a.support_index(-v);
    const int ib = b.support_index(v);
    const Vec3 w = a.vertices[ia] - b.vertices[ib];
    bool repeated = false;
    for (const auto& s : simplex) repeated = repeated || (s.ia == ia && s.ib == ib);
    if (repeated || vv - v.dot(w) <= 1e-13 * vv) {
      result.converged = true;
      break;
    }
    simplex.push_back({w, ia, ib});
    if (!closest_on_simplex(simplex, weights, v)) break;
    if (simplex.size() == 4) {
      result.intersecting = true;
      result.converged = true;
      break;
    }
  }
  result.point_a = Vec3::Zero();
  result.point_b = Vec3::Zero();
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    result.point_a += weights[i] * a.vertices[simplex[i].ia];
    result.point_b += weights[i] * b.vertices[simplex[i].ib];
  }
  result.distance = result.intersecting ? 0.0 : (result.point_b - result.point_a).norm();
  return result;
}

Separation signed_separation(const ConvexBody& a, const ConvexBody& b) {
  const auto axes = candidate_axes(a, b);
  const AxisGap best = best_axis(axes, Vec3::Zero());
  const Vec3 n = axes[best.axis].normal;
  Separation sep;
  sep.gap = best.gap;
  sep.witness.normal = n;
  sep.witness.offset = 0.5 * (a.support(n) + b.min_along(n));
  sep.point_a = a.vertices[a.support_index(n)];
  sep.point_b = b.vertices[b.support_index(-n)];
  if (best.gap < kTol) return sep;

  // Disjoint: the axis bound can undershoot the Euclidean distance.
  const DistanceResult d = gjk_distance(a, b);
  if (!d.converged || d.intersecting || d.distance < best.gap - kTol) return sep;
  const Vec3 dir = (d.point_b - d.point_a) / d.distance;
  // Closest points always certify a plane; keep it only if it truly separates.
  if (a.support(dir) > dir.dot(d.point_a) + kTol || b.min_along(dir) < dir.dot(d.point_b) - kTol) {
    return sep;
  }
  sep.gap = std::max(d.distance, best.gap);
  sep.witness.normal = dir;
  sep.witness.offset = 0.5 * dir.dot(d.point_a + d.point_b);
  sep.point_a = d.point_a;
  sep.point_b = d.point_b;
  return sep;
}

RingKind parse_ring_kind(std::string_view name) {
  if (name == "edge") return RingKind::edge;
  if (name == "vertex") return RingKind::vertex;
  throw std::invalid_argument("unknown ring kind: " + std::string(name));
}

SolidAngle ring_solid_angle(RingKind kind, int count) {
  if (count < 0) throw std::invalid_argument("ring_solid_angle: negative count");
  const double dihedral = std::acos(1.0 / 3.0);
  const double per = kind == RingKind::edge ? 2.0 * dihedral : -std::numbers::pi + 3.0 * dihedral;
  const double total = count * per;
  return {total, total / (4.0 * std::numbers::pi)};
}

}  // namespace tetrapack::geom
