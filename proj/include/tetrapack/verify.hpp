// Independent certification of a packing by separating planes, the exact
// square-basis packing, and published reference densities.
#pragma once

#include "tetrapack/cluster.hpp"
#include "tetrapack/packing.hpp"

#include <string>
#include <vector>

namespace tetrapack::verify {

using geom::Vec3;

// Penetration beyond this fails a pair.
inline constexpr double kPenetrationTol = 1e-7;

// Plane n.x = offset with n pointing from body A to body B.  margin_a is
// -max over A of the signed distance (>= 0 when A lies behind the plane) and
// margin_b is -min over B (<= 0 when B lies in front).
struct Certificate {
  packing::HalfPair pair;
  geom::Plane plane;
  double margin_a = 0.0;
  double margin_b = 0.0;
};

struct CertificationReport {
  cluster::SwivelParams params;
  packing::LatticeBasis basis;
  double cutoff = 0.0;
  double tol = kPenetrationTol;
  double volume = 0.0;
  double density = 0.0;
  std::vector<Certificate> certificates;
  // Indices into `certificates` whose pair penetrates beyond tol.
  std::vector<std::size_t> failures;
  // Distance of the farthest certified pair translation.
  double certified_shell = 0.0;

  bool passed() const { return failures.empty(); }
};

CertificationReport certify(const cluster::Cluster& c, const packing::LatticeBasis& basis,
                            double cutoff, double tol = kPenetrationTol);

// Margins recomputed from the cluster's named points with dot products only.
struct Recheck {
  double margin_a = 0.0;
  double margin_b = 0.0;
  bool ok = false;
};
Recheck recheck(const Certificate& cert, const cluster::Cluster& c,
                const packing::LatticeBasis& basis, double tol = kPenetrationTol);

struct SymPacking {
  long double i = 0, j = 0, k = 0;
  long double volume_closed = 0, density_closed = 0;
  packing::LatticeBasis basis;
  double volume = 0.0;
  double density = 0.0;
};

SymPacking build_sym_packing();

struct NamedConstant {
  std::string name;
  // Digits as published; empty when the value has no printed counterpart.
  std::string published;
  double value = 0.0;
};

// Published comparison densities, local ring densities and the closed forms
// of the square-basis packing.
std::vector<NamedConstant> reference_constants();

}  // namespace tetrapack::verify
