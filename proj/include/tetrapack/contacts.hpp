// Contact equations between half-cluster hulls: transverse edge crossings and
// partially overlapping parallel faces, plus the labelled active sets.
#pragma once

#include "tetrapack/cluster.hpp"
#include "tetrapack/packing.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tetrapack::contacts {

using geom::Vec3;

// A contact is active when its gap is within this many model units of zero.
inline constexpr double kActiveTol = 1e-6;

// vertex_face: a vertex of one hull resting on a face of the other.
enum class ContactKind { edge_edge, face_face, vertex_face, other };

std::string_view kind_name(ContactKind kind);

class ContactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Segment {
  Vec3 p0;
  Vec3 p1;
};

struct ContactSolution {
  double s = 0.0;
  double t = 0.0;
  Vec3 point = Vec3::Zero();
  double gap = 0.0;
};

// Closest approach of the lines s p0 + (1-s) p1 on eA and t q0 + (1-t) q1 + w
// on eB.  The gap is measured along eA x eB, oriented to agree with `hint`
// when given and otherwise towards eB (so it is never negative).
ContactSolution edge_edge_gap(const Segment& ea, const Segment& eb, const Vec3& w,
                              const Vec3* hint = nullptr);

// Vertex of fB (shifted by w) located in a triangle of fA as a + s(b-a) + t(c-a).
// fA runs counterclockwise about its outward normal; the gap is the height of
// that vertex above fA's plane.  The vertex deepest inside fA is chosen.
ContactSolution face_face_gap(std::span<const Vec3> fa, std::span<const Vec3> fb, const Vec3& w);

struct ContactConstraint {
  ContactKind kind = ContactKind::other;
  packing::HalfPair pair;
  // Indices into the nine named points of each half-cluster (see HalfCluster).
  // Face features run counterclockwise about body A's outward normal.
  std::vector<int> feature_a;
  std::vector<int> feature_b;
  std::string label;
  std::string offset;
  // Contact normal from A towards B at classification time.
  Vec3 normal = Vec3::UnitZ();
};

struct ContactSet {
  std::vector<ContactConstraint> constraints;
  std::vector<ContactSolution> solutions;

  std::vector<std::string> labels() const;
  const ContactConstraint* find(std::string_view label) const;
  std::size_t size() const { return constraints.size(); }
};

// Label from the layer relation and in-layer direction of the pair.
std::string contact_label(const packing::HalfPair& pair);

// The ten always-active labels followed by the two extra ones.
const std::vector<std::string>& g_labels();
const std::vector<std::string>& h_labels();
bool has_canonical_labels(const ContactSet& set);

// Features of one pair read off its best separating axis, whatever the gap.
ContactSolution classify_pair(const cluster::Cluster& c, const packing::LatticeBasis& basis,
                              const packing::HalfPair& pair, ContactConstraint& constraint,
                              double tol = kActiveTol);

ContactSet classify_active(const cluster::Cluster& c, const packing::LatticeBasis& basis,
                           double tol = kActiveTol);

// Frozen contact equation: gap(x) = row . x + constant over the 12 basis
// unknowns, for the given cluster (features keep their identity as u,v move).
struct LinearGap {
  Eigen::Matrix<double, 1, 12> row;
  double constant = 0.0;

  double value(const packing::BasisVector& x) const { return row.dot(x) + constant; }
};

LinearGap contact_equation(const ContactConstraint& constraint, const cluster::Cluster& c);

// The nine named points of a half-cluster as seen on a given coset.
std::array<Vec3, 9> coset_points(const cluster::Cluster& c, cluster::Side side,
                                 packing::Coset coset);

}  // namespace tetrapack::contacts
