// Layered double-lattice packings: positive clusters on the lattice spanned
// by 2a, 2b, c-d and point-reflected clusters on the coset through c.
#pragma once

#include "tetrapack/cluster.hpp"
#include "tetrapack/geom.hpp"

#include <compare>
#include <string>
#include <vector>

namespace tetrapack::packing {

using cluster::Side;
using geom::Vec3;

// (a, b, c, d) stacked into one vector of 12 unknowns.
using BasisVector = Eigen::Matrix<double, 12, 1>;

struct LatticeBasis {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  Vec3 c = Vec3::Zero();
  Vec3 d = Vec3::Zero();

  BasisVector to_vector() const;
  static LatticeBasis from_vector(const BasisVector& x);
  LatticeBasis scaled(double factor) const;
  // Columns 2a, 2b, c-d.
  geom::Mat3 generator_matrix() const;
};

// The same packing after the linear isometry g: vectors mapped, c kept above
// d, and a, b swapped if needed so det[2a, 2b, c-d] stays positive.
LatticeBasis image_basis(const geom::Mat3& g, const LatticeBasis& basis);

// Square-basis packing of the centred cluster:
// i = (-168+106 sqrt6)/71, j = (-88+42 sqrt6)/71, k = (-262+238 sqrt6)/71 with
// a = (i, j, 0), b = (-j, i, 0), c = (i, j, k), d = (-j, i, -k).
struct SymCoefficients {
  double i, j, k;
};
SymCoefficients sym_coefficients();
LatticeBasis sym_basis();

enum class Coset { positive, negative };

struct LatticeCoord {
  int i = 0;
  int j = 0;
  int k = 0;
  auto operator<=>(const LatticeCoord&) const = default;
};

// Offset 2i a + 2j b + k (c - d), plus c on the negative coset.
Vec3 translation(const LatticeBasis& basis, Coset coset, const LatticeCoord& coords);
// Derivative of that offset with respect to the 12 basis unknowns.
Eigen::Matrix<double, 3, 12> translation_jacobian(Coset coset, const LatticeCoord& coords);

// det[2a, 2b, c-d] without validation.
double lattice_det(const LatticeBasis& basis);
double lattice_volume(const LatticeBasis& basis);
double density(double volume);

struct Neighbor {
  Coset coset = Coset::positive;
  Vec3 offset = Vec3::Zero();
  LatticeCoord coords;
};

std::vector<Neighbor> enumerate_neighbors(const LatticeBasis& basis, double cutoff);

struct PlacedHalfCluster {
  Side source = Side::upper;
  int orientation = 1;
  Coset coset = Coset::positive;
  LatticeCoord coords;
  Vec3 translation = Vec3::Zero();
  geom::ConvexBody hull;
  cluster::HalfCluster half;
};

double cluster_circumradius(const cluster::Cluster& c);
// 2.5 times the circumradius: beyond every contact distance of interest.
double default_cutoff(const cluster::Cluster& c);

std::vector<PlacedHalfCluster> instantiate(const cluster::Cluster& c, const LatticeBasis& basis,
                                           double cutoff);

// The origin cluster's half `side_a` against a placed half `side_b`.  Pairs
// that are images of each other under the packing's symmetries are listed once.
struct HalfPair {
  Side side_a = Side::upper;
  Side side_b = Side::upper;
  Coset coset = Coset::positive;
  LatticeCoord coords;
};

bool operator==(const HalfPair& l, const HalfPair& r);
std::string describe(const HalfPair& pair);
// Offset written in the generators, e.g. "c-2a" or "2a+2b".
std::string describe_offset(Coset coset, const LatticeCoord& coords);

// Half-cluster body before translation: the half hull, negated on the
// negative coset.
const geom::ConvexBody& pair_shape(const cluster::Cluster& c, Side side, Coset coset);
geom::ConvexBody placed_body(const cluster::Cluster& c, const LatticeBasis& basis,
                             const HalfPair& pair);

// Every deduplicated pair whose bounding spheres come within `margin`.
std::vector<HalfPair> near_pairs(const cluster::Cluster& c, const LatticeBasis& basis,
                                 double margin);

struct HalfLayerCount {
  Side origin = Side::upper;
  std::string layer;
  int count = 0;
};

// Half-clusters of each adjacent half-layer lying within `shell` (Euclidean
// gap) of the origin's upper and lower halves.
std::vector<HalfLayerCount> half_layer_census(const cluster::Cluster& c,
                                              const LatticeBasis& basis, double shell);

}  // namespace tetrapack::packing
