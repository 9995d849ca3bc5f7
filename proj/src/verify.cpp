#include "tetrapack/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tetrapack::verify {

using cluster::Side;
using packing::Coset;

namespace {

struct Extent {
  double max_a = -std::numeric_limits<double>::infinity();
  double min_b = std::numeric_limits<double>::infinity();
};

// The nine named points of a half, as placed by the pair.  A hull is the
// convex hull of these, so plane tests on them decide the hull.
std::array<Vec3, 9> placed_points(const cluster::Cluster& c, Side side, Coset coset,
                                  const Vec3& shift) {
  std::array<Vec3, 9> pts = c.half(side).points;
  for (Vec3& p : pts) p = (coset == Coset::negative ? -p : p) + shift;
  return pts;
}

Extent extent_along(const cluster::Cluster& c, const packing::LatticeBasis& basis,
                    const packing::HalfPair& pair, const Vec3& n) {
  Extent e;
  for (const Vec3& p : placed_points(c, pair.side_a, Coset::positive, Vec3::Zero()))
    e.max_a = std::max(e.max_a, n.dot(p));
  const Vec3 t = packing::translation(basis, pair.coset, pair.coords);
  for (const Vec3& p : placed_points(c, pair.side_b, pair.coset, t)) e.min_b = std::min(e.min_b, n.dot(p));
  return e;
}

}  // namespace

CertificationReport certify(const cluster::Cluster& c, const packing::LatticeBasis& basis,
                            double cutoff, double tol) {
  CertificationReport rep;
  rep.params = c.params;
  rep.basis = basis;
  rep.cutoff = cutoff;
  rep.tol = tol;
  rep.volume = packing::lattice_volume(basis);
  rep.density = packing::density(rep.volume);

  for (const packing::HalfPair& pair : packing::near_pairs(c, basis, cutoff)) {
    const Vec3 t = packing::translation(basis, pair.coset, pair.coords);
    if (t.norm() > cutoff) continue;
    const geom::ConvexBody b = packing::placed_body(c, basis, pair);
    const geom::Separation sep = geom::signed_separation(c.half(pair.side_a).hull, b);
    const Vec3 n = sep.witness.normal;
    const Extent e = extent_along(c, basis, pair, n);

    Certificate cert;
    cert.pair = pair;
    cert.plane.normal = n;
    cert.plane.offset = 0.5 * (e.max_a + e.min_b);
    cert.margin_a = cert.plane.offset - e.max_a;
    cert.margin_b = cert.plane.offset - e.min_b;
    if (e.min_b - e.max_a < -tol) rep.failures.push_back(rep.certificates.size());
    rep.certified_shell = std::max(rep.certified_shell, t.norm());
    rep.certificates.push_back(cert);
  }
  return rep;
}

Recheck recheck(const Certificate& cert, const cluster::Cluster& c,
                const packing::LatticeBasis& basis, double tol) {
  const Vec3& n = cert.plane.normal;
  Recheck out;
  if (std::abs(n.norm() - 1.0) > 1e-9) return out;
  const Extent e = extent_along(c, basis, cert.pair, n);
  out.margin_a = cert.plane.offset - e.max_a;
  out.margin_b = cert.plane.offset - e.min_b;
  // Each side may eat half the tolerance, so together they stay within it.
  out.ok = out.margin_a >= -0.5 * tol && out.margin_b <= 0.5 * tol &&
           std::abs(out.margin_a - cert.margin_a) <= 1e-9 &&
           std::abs(out.margin_b - cert.margin_b) <= 1e-9;
  return out;
}

SymPacking build_sym_packing() {
  SymPacking s;
  const long double r6 = std::sqrt(6.0L);
  s.i = (-168.0L + 106.0L * r6) / 71.0L;
  s.j = (-88.0L + 42.0L * r6) / 71.0L;
  s.k = (-262.0L + 238.0L * r6) / 71.0L;
  s.volume_closed = (-730200320.0L + 307139840.0L * r6) / 357911.0L;
  s.density_closed = (1711407.0L + 719859.0L * r6) / 4477040.0L;
  s.basis = packing::sym_basis();
  s.volume = packing::lattice_volume(s.basis);
  s.density = packing::density(s.volume);
  return s;
}

std::vector<NamedConstant> reference_constants() {
  const auto e5 = geom::ring_solid_angle(geom::RingKind::edge, 5);
  const auto v20 = geom::ring_solid_angle(geom::RingKind::vertex, 20);
  const SymPacking sym = build_sym_packing();
  // The tetrahelix ratio uses 3^11 = 177147 in the denominator.
  return {
      {"groemer", "0.367346938775", 18.0 / 49.0},
      {"tetrahelix", "0.531273435694", std::sqrt(50000.0 / 177147.0)},
      {"hull_v20_lattice", "0.716796401602", 0.716796401602},
      {"conway_torquato", "0.7165598", 0.7165598},
      {"conway_torquato_wiggled", "0.717455", 0.717455},
      {"sphere_hcp", "0.740480489693", std::numbers::pi / std::sqrt(18.0)},
      {"e5_solid_angle", "12.309594173408", e5.total},
      {"e5_local", "0.979566380077", e5.local_density},
      {"v20_solid_angle", "11.025711968651", v20.total},
      {"v20_local", "0.877398280459", v20.local_density},
      {"e5_hull_relative", "0.973557692308", 405.0 / 416.0},
      {"sym_i", "1.290787503310", static_cast<double>(sym.i)},
      {"sym_j", "0.209557312632", static_cast<double>(sym.j)},
      {"sym_k", "4.520824771583", static_cast<double>(sym.k)},
      {"sym_volume", "61.846569901642", static_cast<double>(sym.volume_closed)},
      {"sym_density", "0.776114181859", static_cast<double>(sym.density_closed)},
      {"optimum", "0.778615700855", 0.778615700855},
  };
}

}  // namespace tetrapack::verify
