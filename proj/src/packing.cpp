#include "tetrapack/packing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tetrapack::packing {

BasisVector LatticeBasis::to_vector() const {
  BasisVector x;
  x << a, b, c, d;
  return x;
}

LatticeBasis LatticeBasis::from_vector(const BasisVector& x) {
  return {x.segment<3>(0), x.segment<3>(3), x.segment<3>(6), x.segment<3>(9)};
}

LatticeBasis LatticeBasis::scaled(double factor) const {
  return {factor * a, factor * b, factor * c, factor * d};
}

geom::Mat3 LatticeBasis::generator_matrix() const {
  geom::Mat3 m;
  m.col(0) = 2.0 * a;
  m.col(1) = 2.0 * b;
  m.col(2) = c - d;
  return m;
}

LatticeBasis image_basis(const geom::Mat3& g, const LatticeBasis& basis) {
  LatticeBasis out{g * basis.a, g * basis.b, g * basis.c, g * basis.d};
  if (out.c.z() < out.d.z()) std::swap(out.c, out.d);
  if (lattice_det(out) < 0.0) std::swap(out.a, out.b);
  return out;
}

SymCoefficients sym_coefficients() {
  // Evaluated in extended precision so the closed forms hold to the last bit.
  const long double r6 = std::sqrt(6.0L);
  return {static_cast<double>((-168.0L + 106.0L * r6) / 71.0L),
          static_cast<double>((-88.0L + 42.0L * r6) / 71.0L),
          static_cast<double>((-262.0L + 238.0L * r6) / 71.0L)};
}

LatticeBasis sym_basis() {
  const auto [i, j, k] = sym_coefficients();
  return {Vec3(i, j, 0), Vec3(-j, i, 0), Vec3(i, j, k), Vec3(-j, i, -k)};
}

Vec3 translation(const LatticeBasis& basis, Coset coset, const LatticeCoord& n) {
  Vec3 t = 2.0 * n.i * basis.a + 2.0 * n.j * basis.b + n.k * (basis.c - basis.d);
  if (coset == Coset::negative) t += basis.c;
  return t;
}

Eigen::Matrix<double, 3, 12> translation_jacobian(Coset coset, const LatticeCoord& n) {
  const double shift = coset == Coset::negative ? 1.0 : 0.0;
  Eigen::Matrix<double, 3, 12> jac;
  const geom::Mat3 id = geom::Mat3::Identity();
  jac << 2.0 * n.i * id, 2.0 * n.j * id, (n.k + shift) * id, -n.k * id;
  return jac;
}

double lattice_det(const LatticeBasis& basis) { return basis.generator_matrix().determinant(); }

double lattice_volume(const LatticeBasis& basis) {
  const double det = lattice_det(basis);
  if (!(det > geom::kTol)) throw std::domain_error("degenerate or negatively oriented lattice basis");
  return det;
}

double density(double volume) {
  if (!(volume > 0.0)) throw std::domain_error("density needs a positive volume");
  // Two clusters of nine tetrahedra, each of volume 8/3, per cell.
  return 48.0 / volume;
}

namespace {

// Integer boxes containing every lattice point of norm <= radius around `base`.
template <typename Fn>
void for_each_coord(const LatticeBasis& basis, const Vec3& base, double radius, Fn&& fn) {
  const geom::Mat3 inv = basis.generator_matrix().inverse();
  int bound[3];
  for (int m = 0; m < 3; ++m) {
    bound[m] = static_cast<int>(std::ceil(inv.row(m).norm() * (radius + base.norm()))) + 1;
  }
  for (int i = -bound[0]; i <= bound[0]; ++i)
    for (int j = -bound[1]; j <= bound[1]; ++j)
      for (int k = -bound[2]; k <= bound[2]; ++k) fn(LatticeCoord{i, j, k});
}

bool lex_positive(const LatticeCoord& n) { return n > LatticeCoord{0, 0, 0}; }

}  // namespace

std::vector<Neighbor> enumerate_neighbors(const LatticeBasis& basis, double cutoff) {
  lattice_volume(basis);
  std::vector<Neighbor> out;
  if (cutoff <= 0.0) return out;
  for (Coset coset : {Coset::positive, Coset::negative}) {
    const Vec3 base = coset == Coset::negative ? basis.c : Vec3::Zero();
    for_each_coord(basis, base, cutoff, [&](const LatticeCoord& n) {
      if (coset == Coset::positive && n == LatticeCoord{}) return;
      const Vec3 t = translation(basis, coset, n);
      if (t.norm() <= cutoff) out.push_back({coset, t, n});
    });
  }
  return out;
}

double cluster_circumradius(const cluster::Cluster& c) {
  double r = 0.0;
  for (const auto* h : {&c.upper, &c.lower})
    for (const Vec3& p : h->points) r = std::max(r, p.norm());
  return r;
}

double default_cutoff(const cluster::Cluster& c) { return 2.5 * cluster_circumradius(c); }

std::vector<PlacedHalfCluster> instantiate(const cluster::Cluster& c, const LatticeBasis& basis,
                                           double cutoff) {
  std::vector<PlacedHalfCluster> out;
  const cluster::Cluster negated = cluster::build_cluster(c.params, -c.orientation);
  auto place = [&](Coset coset, const LatticeCoord& n, const Vec3& t) {
    const cluster::Cluster& src = coset == Coset::positive ? c : negated;
    for (Side side : {Side::upper, Side::lower}) {
      PlacedHalfCluster p;
      p.source = side;
      p.orientation = src.orientation;
      p.coset = coset;
      p.coords = n;
      p.translation = t;
      p.hull = src.half(side).hull.translated(t);
      p.half = src.half(side);
      for (auto& tet : p.half.tetrahedra)
        for (Vec3& v : tet.vertices) v += t;
      for (Vec3& v : p.half.points) v += t;
      for (Vec3* v : {&p.half.rim.o, &p.half.rim.p, &p.half.rim.q, &p.half.rim.r, &p.half.rim.s})
        *v += t;
      p.half.apex += t;
      p.half.hull = p.hull;
      out.push_back(std::move(p));
    }
  };
  place(Coset::positive, LatticeCoord{}, Vec3::Zero());
  for (const Neighbor& n : enumerate_neighbors(basis, cutoff)) place(n.coset, n.coords, n.offset);
  return out;
}

bool operator==(const HalfPair& l, const HalfPair& r) {
  return l.side_a == r.side_a && l.side_b == r.side_b && l.coset == r.coset && l.coords == r.coords;
}

std::string describe_offset(Coset coset, const LatticeCoord& n) {
  std::string out;
  auto term = [&out](int coef, const char* name, bool doubled) {
    if (coef == 0) return;
    if (coef < 0) out += "-";
    else if (!out.empty()) out += "+";
    const int mag = std::abs(coef) * (doubled ? 2 : 1);
    if (mag != 1) out += std::to_string(mag);
    out += name;
  };
  if (coset == Coset::negative) {
    // c + k(c-d) reads as c for k = 0 and d for k = -1.
    if (n.k == 0) out = "c";
    else if (n.k == -1) out = "d";
    else {
      out = "c";
      term(n.k, "(c-d)", false);
    }
  } else {
    term(n.k, "(c-d)", false);
  }
  term(n.i, "a", true);
  term(n.j, "b", true);
  return out.empty() ? "0" : out;
}

std::string describe(const HalfPair& pair) {
  std::string out(cluster::side_name(pair.side_a));
  out += pair.coset == Coset::negative ? "/-" : "/+";
  out += cluster::side_name(pair.side_b);
  out += "@" + describe_offset(pair.coset, pair.coords);
  return out;
}

const geom::ConvexBody& pair_shape(const cluster::Cluster& c, Side side, Coset coset) {
  return coset == Coset::positive ? c.half(side).hull : c.reflected(side);
}

geom::ConvexBody placed_body(const cluster::Cluster& c, const LatticeBasis& basis,
                             const HalfPair& pair) {
  return pair_shape(c, pair.side_b, pair.coset).translated(translation(basis, pair.coset, pair.coords));
}

std::vector<HalfPair> near_pairs(const cluster::Cluster& c, const LatticeBasis& basis,
                                 double margin) {
  lattice_volume(basis);
  const double r_up = c.upper.hull.bounding_radius(Vec3::Zero());
  const double r_lo = c.lower.hull.bounding_radius(Vec3::Zero());
  auto radius = [&](Side s) { return s == Side::upper ? r_up : r_lo; };
  const double reach = 2.0 * std::max(r_up, r_lo) + margin;

  std::vector<HalfPair> out;
  for (Coset coset : {Coset::positive, Coset::negative}) {
    const Vec3 base = coset == Coset::negative ? basis.c : Vec3::Zero();
    for_each_coord(basis, base, reach, [&](const LatticeCoord& n) {
      const Vec3 t = translation(basis, coset, n);
      for (Side sa : {Side::upper, Side::lower}) {
        for (Side sb : {Side::upper, Side::lower}) {
          if (t.norm() > radius(sa) + radius(sb) + margin) continue;
          if (coset == Coset::positive) {
            if (sa == sb && !lex_positive(n)) continue;      // w and -w coincide
            if (sa == Side::lower && sb == Side::upper) continue;  // mirrors upper/lower at -w
            if (sa != sb && n == LatticeCoord{}) continue;  // same cluster
          } else if (sa == Side::lower && sb == Side::upper) {
            continue;  // point reflection about t/2 maps it onto upper vs -lower
          }
          out.push_back({sa, sb, coset, n});
        }
      }
    });
  }
  return out;
}

std::vector<HalfLayerCount> half_layer_census(const cluster::Cluster& c,
                                              const LatticeBasis& basis, double shell) {
  struct Layer {
    const char* name;
    Side side;
    Coset coset;
    int k;
  };
  // Layer above is the negative coset through c, the one below through d.
  const Layer layers[] = {
      {"upper-above", Side::lower, Coset::negative, 0},
      {"lower-above", Side::upper, Coset::negative, 0},
      {"upper-central", Side::upper, Coset::positive, 0},
      {"lower-central", Side::lower, Coset::positive, 0},
      {"upper-below", Side::lower, Coset::negative, -1},
      {"lower-below", Side::upper, Coset::negative, -1},
  };
  std::vector<HalfLayerCount> out;
  const double reach = 2.0 * cluster_circumradius(c) + shell;
  for (Side origin : {Side::upper, Side::lower}) {
    const geom::ConvexBody& a = c.half(origin).hull;
    for (const Layer& layer : layers) {
      int count = 0;
      const Vec3 base = layer.coset == Coset::negative ? basis.c : Vec3::Zero();
      for_each_coord(basis, base, reach, [&](const LatticeCoord& n) {
        if (n.k != layer.k) return;
        if (layer.coset == Coset::positive && n == LatticeCoord{}) return;
        const Vec3 t = translation(basis, layer.coset, n);
        if (t.norm() > reach) return;
        const auto b = pair_shape(c, layer.side, layer.coset).translated(t);
        if (geom::signed_separation(a, b).gap <= shell) ++count;
      });
      out.push_back({origin, layer.name, count});
    }
  }
  return out;
}

}  // namespace tetrapack::packing
