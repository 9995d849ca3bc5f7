#include "tetrapack/contacts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace tetrapack::contacts {

using cluster::Side;
using packing::Coset;
using packing::HalfPair;

std::string_view kind_name(ContactKind kind) {
  switch (kind) {
    case ContactKind::edge_edge: return "edge_edge";
    case ContactKind::face_face: return "face_face";
    case ContactKind::vertex_face: return "vertex_face";
    default: return "other";
  }
}

ContactSolution edge_edge_gap(const Segment& ea, const Segment& eb, const Vec3& w,
                              const Vec3* hint) {
  // A(s) = p1 + s (p0 - p1), B(t) = q1 + w + t (q0 - q1).
  const Vec3 da = ea.p0 - ea.p1;
  const Vec3 db = eb.p0 - eb.p1;
  Vec3 n = da.cross(db);
  if (n.norm() <= 1e-12 * da.norm() * db.norm()) {
    throw ContactError("edge_edge_gap: parallel edges have no transverse contact");
  }
  n.normalize();
  const Vec3 r = (eb.p1 + w) - ea.p1;
  const double aa = da.dot(da), ab = da.dot(db), bb = db.dot(db);
  const double ra = r.dot(da), rb = r.dot(db);
  const double det = aa * bb - ab * ab;
  ContactSolution sol;
  sol.s = (ra * bb - rb * ab) / det;
  sol.t = (ra * ab - rb * aa) / det;
  const Vec3 pa = ea.p1 + sol.s * da;
  const Vec3 pb = eb.p1 + w + sol.t * db;
  if (hint != nullptr ? n.dot(*hint) < 0.0 : n.dot(pb - pa) < 0.0) n = -n;
  sol.point = 0.5 * (pa + pb);
  sol.gap = n.dot(pb - pa);
  return sol;
}

namespace {

Vec3 newell_normal(std::span<const Vec3> poly) {
  Vec3 n = Vec3::Zero();
  for (std::size_t i = 0; i < poly.size(); ++i) n += poly[i].cross(poly[(i + 1) % poly.size()]);
  return n;
}

}  // namespace

ContactSolution face_face_gap(std::span<const Vec3> fa, std::span<const Vec3> fb, const Vec3& w) {
  if (fa.size() < 3 || fb.empty()) throw ContactError("face_face_gap: need a face and a facet");
  const Vec3 na = newell_normal(fa);
  if (na.norm() <= geom::kExactTol) throw ContactError("face_face_gap: degenerate face");
  const Vec3 n = na.normalized();
  if (fb.size() >= 3) {
    const Vec3 nb = newell_normal(fb);
    if (nb.norm() <= geom::kExactTol || n.cross(nb.normalized()).norm() > 1e-6) {
      throw ContactError("face_face_gap: facets are not parallel");
    }
  }
  ContactSolution best;
  double best_quality = -std::numeric_limits<double>::infinity();
  for (std::size_t tri = 1; tri + 1 < fa.size(); ++tri) {
    const Vec3& a = fa[0];
    const Vec3 e1 = fa[tri] - a;
    const Vec3 e2 = fa[tri + 1] - a;
    const double g11 = e1.dot(e1), g12 = e1.dot(e2), g22 = e2.dot(e2);
    const double det = g11 * g22 - g12 * g12;
    for (const Vec3& vertex : fb) {
      const Vec3 q = vertex + w;
      const Vec3 r = q - a;
      const double r1 = r.dot(e1), r2 = r.dot(e2);
      const double s = (r1 * g22 - r2 * g12) / det;
      const double t = (r2 * g11 - r1 * g12) / det;
      const double quality = std::min({s, t, 1.0 - s - t});
      if (quality > best_quality) {
        best_quality = quality;
        best = {s, t, q, n.dot(r)};
      }
    }
  }
  return best;
}

std::vector<std::string> ContactSet::labels() const {
  std::vector<std::string> out;
  for (const auto& c : constraints) out.push_back(c.label);
  return out;
}

const ContactConstraint* ContactSet::find(std::string_view label) const {
  for (const auto& c : constraints)
    if (c.label == label) return &c;
  return nullptr;
}

namespace {

std::string subscript(int i, int j) {
  if (i == 0 && j == 0) return "0";
  if (j == 0) return "a";
  if (i == 0) return "b";
  if (i == j) return "a+b";
  if (i == -j) return "a-b";
  return std::to_string(i) + "a" + (j > 0 ? "+" : "") + std::to_string(j) + "b";
}

}  // namespace

std::string contact_label(const HalfPair& p) {
  const std::string sub = subscript(p.coords.i, p.coords.j);
  if (p.coset == Coset::positive && p.coords.k == 0) {
    if (p.side_a == p.side_b) return "G" + sub + "^0";
    return "H" + sub;
  }
  if (p.coset == Coset::negative && p.side_a == p.side_b) {
    if (p.side_a == Side::upper && p.coords.k == 0) return "G" + sub + "^+";
    if (p.side_a == Side::lower && p.coords.k == -1) return "G" + sub + "^-";
  }
  return "X[" + packing::describe(p) + "]";
}

const std::vector<std::string>& g_labels() {
  static const std::vector<std::string> labels = {"G0^+", "Ga^+", "Gb^+", "G0^-", "Ga^-",
                                                  "Gb^-", "Ga^0", "Gb^0", "Ga+b^0", "Ga-b^0"};
  return labels;
}

const std::vector<std::string>& h_labels() {
  static const std::vector<std::string> labels = {"Ha", "Hb"};
  return labels;
}

bool has_canonical_labels(const ContactSet& set) {
  std::vector<std::string> want = g_labels();
  want.insert(want.end(), h_labels().begin(), h_labels().end());
  std::vector<std::string> got = set.labels();
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  return want == got;
}

std::array<Vec3, 9> coset_points(const cluster::Cluster& c, Side side, Coset coset) {
  std::array<Vec3, 9> pts = c.half(side).points;
  if (coset == Coset::negative)
    for (Vec3& p : pts) p = -p;
  return pts;
}

namespace {

// Named points within `tol` of the supporting plane, coincident duplicates
// collapsed onto the first name.
std::vector<int> supporting_set(const std::array<Vec3, 9>& pts, const Vec3& n, double level,
                                double tol, const Vec3& shift) {
  std::vector<int> out;
  for (int i = 0; i < 9; ++i) {
    if (std::abs(n.dot(pts[i] + shift) - level) > tol) continue;
    bool dup = false;
    for (int j : out) dup = dup || (pts[j] - pts[i]).norm() <= geom::kTol;
    if (!dup) out.push_back(i);
  }
  return out;
}

// Face of `body` with outward normal closest to `dir`, as named indices in
// counterclockwise order.
std::vector<int> face_towards(const geom::ConvexBody& body, const Vec3& dir) {
  int best = 0;
  for (std::size_t f = 1; f < body.faces.size(); ++f)
    if (body.face_normals[f].dot(dir) > body.face_normals[best].dot(dir)) best = static_cast<int>(f);
  std::vector<int> out;
  for (int v : body.faces[best]) out.push_back(body.source_index[v]);
  return out;
}

double inside_margin(const ContactSolution& s) { return std::min({s.s, s.t, 1.0 - s.s - s.t}); }

// A partial face overlap written three ways: a vertex of B inside A's face,
// a vertex of A inside B's face, or two face edges crossing.  The most
// interior representation wins.
ContactSolution face_contact_solution(const std::array<Vec3, 9>& pa, const std::array<Vec3, 9>& pb,
                                      const std::vector<int>& face_a, const std::vector<int>& face_b,
                                      const Vec3& t, const Vec3& n) {
  std::vector<Vec3> fa, fb;
  for (int i : face_a) fa.push_back(pa[i]);
  for (int i : face_b) fb.push_back(pb[i] + t);
  ContactSolution best = face_face_gap(fa, fb, Vec3::Zero());
  double quality = inside_margin(best);
  const ContactSolution reverse = face_face_gap(fb, fa, Vec3::Zero());
  if (inside_margin(reverse) > quality) {
    best = reverse;
    quality = inside_margin(reverse);
  }
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const Segment ea{fa[i], fa[(i + 1) % fa.size()]};
    for (std::size_t j = 0; j < fb.size(); ++j) {
      const Segment eb{fb[j], fb[(j + 1) % fb.size()]};
      const Vec3 da = ea.p1 - ea.p0, db = eb.p1 - eb.p0;
      if (da.cross(db).norm() <= 1e-9 * da.norm() * db.norm()) continue;
      const ContactSolution e = edge_edge_gap(ea, eb, Vec3::Zero(), &n);
      const double q = std::min({e.s, 1.0 - e.s, e.t, 1.0 - e.t});
      if (q > quality) {
        best = e;
        quality = q;
      }
    }
  }
  return best;
}

}  // namespace

ContactSolution classify_pair(const cluster::Cluster& c, const packing::LatticeBasis& basis,
                              const HalfPair& pair, ContactConstraint& con, double tol) {
  const geom::ConvexBody& a = c.half(pair.side_a).hull;
  const geom::ConvexBody& b = packing::pair_shape(c, pair.side_b, pair.coset);
  const Vec3 t = packing::translation(basis, pair.coset, pair.coords);
  const auto axes = geom::candidate_axes(a, b);
  const geom::AxisGap best = geom::best_axis(axes, t);
  const double feature_tol = std::max(10.0 * tol, 1e-7);

  const Vec3 n = axes[best.axis].normal;
  const auto pa = coset_points(c, pair.side_a, Coset::positive);
  const auto pb = coset_points(c, pair.side_b, pair.coset);
  const auto sa = supporting_set(pa, n, a.support(n), feature_tol, Vec3::Zero());
  const auto sb = supporting_set(pb, n, b.min_along(n) + n.dot(t), feature_tol, t);

  con = ContactConstraint{};
  con.pair = pair;
  con.normal = n;
  con.offset = packing::describe_offset(pair.coset, pair.coords);
  con.label = contact_label(pair);
  ContactSolution sol;
  if (sa.size() >= 3 && sb.size() >= 3) {
    con.kind = ContactKind::face_face;
    con.feature_a = face_towards(a, n);
    con.feature_b = face_towards(b, -n);
    sol = face_contact_solution(pa, pb, con.feature_a, con.feature_b, t, n);
  } else if (sa.size() == 2 && sb.size() == 2) {
    con.kind = ContactKind::edge_edge;
    con.feature_a = sa;
    con.feature_b = sb;
    sol = edge_edge_gap({pa[sa[0]], pa[sa[1]]}, {pb[sb[0]], pb[sb[1]]}, t, &n);
  } else if (sa.size() == 1 && sb.size() >= 3) {
    con.kind = ContactKind::vertex_face;
    con.feature_a = sa;
    con.feature_b = face_towards(b, -n);
    std::vector<Vec3> fb;
    for (int i : con.feature_b) fb.push_back(pb[i] + t);
    const Vec3 va[] = {pa[sa[0]]};
    sol = face_face_gap(fb, va, Vec3::Zero());
  } else if (sa.size() >= 3 && sb.size() == 1) {
    con.kind = ContactKind::vertex_face;
    con.feature_a = face_towards(a, n);
    con.feature_b = sb;
    std::vector<Vec3> fa;
    for (int i : con.feature_a) fa.push_back(pa[i]);
    const Vec3 vb[] = {pb[sb[0]]};
    sol = face_face_gap(fa, vb, t);
  } else {
    con.kind = ContactKind::other;
    con.feature_a = sa;
    con.feature_b = sb;
    sol.point = 0.5 * (a.vertices[a.support_index(n)] + b.vertices[b.support_index(-n)] + t);
  }
  sol.gap = best.gap;
  return sol;
}

ContactSet classify_active(const cluster::Cluster& c, const packing::LatticeBasis& basis,
                           double tol) {
  ContactSet set;
  std::map<std::tuple<Side, Side, Coset>, std::vector<geom::SeparatingAxis>> axis_cache;
  std::map<std::string, int> seen;

  for (const HalfPair& pair : packing::near_pairs(c, basis, 1.0)) {
    const geom::ConvexBody& a = c.half(pair.side_a).hull;
    const geom::ConvexBody& b = packing::pair_shape(c, pair.side_b, pair.coset);
    auto key = std::make_tuple(pair.side_a, pair.side_b, pair.coset);
    auto it = axis_cache.find(key);
    if (it == axis_cache.end()) it = axis_cache.emplace(key, geom::candidate_axes(a, b)).first;
    const Vec3 t = packing::translation(basis, pair.coset, pair.coords);
    if (std::abs(geom::best_axis(it->second, t).gap) > tol) continue;

    ContactConstraint con;
    const ContactSolution sol = classify_pair(c, basis, pair, con, tol);
    if (int& count = seen[con.label]; ++count > 1) con.label += "#" + std::to_string(count);
    set.constraints.push_back(std::move(con));
    set.solutions.push_back(sol);
  }
  return set;
}

LinearGap contact_equation(const ContactConstraint& con, const cluster::Cluster& c) {
  const auto pa = coset_points(c, con.pair.side_a, Coset::positive);
  const auto pb = coset_points(c, con.pair.side_b, con.pair.coset);
  const auto jac = packing::translation_jacobian(con.pair.coset, con.pair.coords);
  Vec3 n, base;
  if (con.kind == ContactKind::edge_edge) {
    n = (pa[con.feature_a[1]] - pa[con.feature_a[0]]).cross(pb[con.feature_b[1]] - pb[con.feature_b[0]]);
    if (n.norm() <= geom::kExactTol) throw ContactError("contact_equation: edges became parallel");
    n.normalize();
    if (n.dot(con.normal) < 0.0) n = -n;
    base = pb[con.feature_b[0]] - pa[con.feature_a[0]];
  } else if (con.kind == ContactKind::face_face || con.kind == ContactKind::vertex_face) {
    if (con.feature_a.size() >= 3) {
      const Vec3& a0 = pa[con.feature_a[0]];
      n = (pa[con.feature_a[1]] - a0).cross(pa[con.feature_a[2]] - a0).normalized();
    } else {
      // B's outward normal faces A.
      const Vec3& b0 = pb[con.feature_b[0]];
      n = -(pb[con.feature_b[1]] - b0).cross(pb[con.feature_b[2]] - b0).normalized();
    }
    base = pb[con.feature_b[0]] - pa[con.feature_a[0]];
  } else {
    throw ContactError("contact_equation: contact has no frozen form");
  }
  LinearGap eq;
  eq.row = n.transpose() * jac;
  eq.constant = n.dot(base);
  return eq;
}

}  // namespace tetrapack::contacts
