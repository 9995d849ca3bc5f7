#include "doctest.h"

#include "published_values.hpp"
#include "tetrapack/contacts.hpp"

#include <algorithm>
#include <cmath>

using namespace tetrapack;
using contacts::ContactKind;
using geom::Vec3;

namespace {

cluster::Cluster optimum_cluster() {
  return cluster::build_cluster(cluster::SwivelParams::from_uv(published::kU, published::kV));
}

}  // namespace

TEST_CASE("crossing edges: closest points and gap") {
  const contacts::Segment ea{Vec3(-1, 0, 0), Vec3(1, 0, 0)};
  const contacts::Segment eb{Vec3(0, -1, 0), Vec3(0, 3, 0)};
  const auto sol = contacts::edge_edge_gap(ea, eb, Vec3(0, 0, 0.25));
  // A(s) = p1 + s (p0 - p1): the crossing is halfway along A and a quarter along B.
  CHECK(sol.s == doctest::Approx(0.5));
  CHECK(sol.t == doctest::Approx(0.75));
  CHECK(sol.gap == doctest::Approx(0.25));
  CHECK((sol.point - Vec3(0, 0, 0.125)).norm() < 1e-14);

  const Vec3 hint(0, 0, -1);
  CHECK(contacts::edge_edge_gap(ea, eb, Vec3(0, 0, 0.25), &hint).gap == doctest::Approx(-0.25));
  CHECK_THROWS_AS(contacts::edge_edge_gap(ea, {Vec3(-1, 1, 0), Vec3(1, 1, 0)}, Vec3::Zero()),
                  contacts::ContactError);
}

TEST_CASE("parallel faces: vertex located in the lower face") {
  const std::vector<Vec3> fa = {Vec3(0, 0, 0), Vec3(4, 0, 0), Vec3(0, 4, 0)};
  const std::vector<Vec3> fb = {Vec3(1, 1, 0), Vec3(1, 9, 0), Vec3(9, 1, 0)};
  const auto sol = contacts::face_face_gap(fa, fb, Vec3(0, 0, 0.5));
  CHECK(sol.gap == doctest::Approx(0.5));
  CHECK(sol.s == doctest::Approx(0.25));
  CHECK(sol.t == doctest::Approx(0.25));
  const std::vector<Vec3> tilted = {Vec3(0, 0, 0), Vec3(1, 0, 1), Vec3(0, 1, 0)};
  CHECK_THROWS_AS(contacts::face_face_gap(fa, tilted, Vec3::Zero()), contacts::ContactError);
}

TEST_CASE("the square-basis packing touches in eight places") {
  const auto c = cluster::build_cluster({});
  const auto set = contacts::classify_active(c, packing::sym_basis());
  CHECK(set.size() == 8);
  int face = 0, edge = 0;
  for (const auto& k : set.constraints) {
    face += k.kind == ContactKind::face_face;
    edge += k.kind == ContactKind::edge_edge;
  }
  CHECK(edge == 4);
  CHECK(face == 4);
  // Two face contacts per half towards its adjacent layer.
  for (const char* tag : {"^+", "^-"}) {
    const auto n = std::count_if(set.constraints.begin(), set.constraints.end(), [&](const auto& k) {
      return k.kind == ContactKind::face_face && k.label.ends_with(tag);
    });
    CHECK(n == 2);
  }
}

TEST_CASE("published optimum: twelve contacts with parameters inside their features") {
  const auto c = optimum_cluster();
  const auto basis = published::basis();
  const auto set = contacts::classify_active(c, basis);
  CHECK(set.size() == 12);
  CHECK(contacts::has_canonical_labels(set));
  for (std::size_t k = 0; k < set.size(); ++k) {
    CAPTURE(set.constraints[k].label);
    CHECK(std::abs(set.solutions[k].gap) < 1e-6);
    CHECK(set.solutions[k].s >= -1e-9);
    CHECK(set.solutions[k].s <= 1 + 1e-9);
    CHECK(set.solutions[k].t >= -1e-9);
    CHECK(set.solutions[k].t <= 1 + 1e-9);
  }
  CHECK(set.find("Ha") != nullptr);
  CHECK(set.find("nope") == nullptr);
}

TEST_CASE("frozen contact equations are first-order exact") {
  const auto c = optimum_cluster();
  const auto basis = published::basis();
  const auto set = contacts::classify_active(c, basis);
  const auto x0 = basis.to_vector();
  packing::BasisVector dx;
  for (int i = 0; i < 12; ++i) dx[i] = std::sin(1.7 * i + 0.3);
  const double h = 1e-4;
  const auto moved = packing::LatticeBasis::from_vector(x0 + h * dx);
  for (const auto& con : set.constraints) {
    CAPTURE(con.label);
    const auto eq = contacts::contact_equation(con, c);
    CHECK(std::abs(eq.value(x0)) < 1e-8);
    const auto body = packing::placed_body(c, moved, con.pair);
    const double actual = geom::signed_separation(c.half(con.pair.side_a).hull, body).gap;
    // Frozen features stay the touching ones, so the mismatch is second order.
    CHECK(std::abs(eq.value(x0 + h * dx) - actual) < 1e-6);
  }
}

TEST_CASE("labels follow the layer relation and direction") {
  using packing::Coset;
  using cluster::Side;
  auto label = [](Side a, Side b, Coset c, packing::LatticeCoord n) {
    return contacts::contact_label({a, b, c, n});
  };
  CHECK(label(Side::upper, Side::upper, Coset::negative, {0, 0, 0}) == "G0^+");
  CHECK(label(Side::lower, Side::lower, Coset::negative, {1, 0, -1}) == "Ga^-");
  CHECK(label(Side::upper, Side::upper, Coset::positive, {1, -1, 0}) == "Ga-b^0");
  CHECK(label(Side::upper, Side::lower, Coset::positive, {0, 1, 0}) == "Hb");
  CHECK(label(Side::upper, Side::lower, Coset::negative, {0, 0, 0}).starts_with("X["));
  CHECK(contacts::g_labels().size() == 10);
  CHECK(contacts::h_labels().size() == 2);
}
