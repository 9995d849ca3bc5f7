#include "doctest.h"

#include "published_values.hpp"
#include "tetrapack/optimizer.hpp"

#include <cmath>
#include <random>

using namespace tetrapack;
using optimizer::Variant;

namespace {

const optimizer::ReferenceSolution& reference() {
  static const auto ref = optimizer::reference_solution();
  return ref;
}

}  // namespace

TEST_CASE("variant names round trip") {
  for (Variant v : {Variant::free, Variant::g, Variant::ga, Variant::gb, Variant::gab}) {
    CHECK(optimizer::parse_variant(optimizer::variant_name(v)) == v);
  }
  CHECK(optimizer::parse_variant("Gab") == Variant::gab);
  CHECK_THROWS_AS(optimizer::parse_variant("G0"), std::invalid_argument);
  CHECK(optimizer::forced_labels(Variant::free).empty());
  CHECK(optimizer::forced_labels(Variant::g).size() == 10);
  CHECK(optimizer::forced_labels(Variant::gab).size() == 12);
}

TEST_CASE("determinant objective equals the lattice volume") {
  const auto b = published::basis();
  CHECK(optimizer::det_objective(b.to_vector()) == doctest::Approx(packing::lattice_det(b)));
  CHECK(packing::lattice_volume(b) == doctest::Approx(published::kVolume).epsilon(1e-10));
}

TEST_CASE("determinant hessian matches differences of the gradient") {
  const auto x = packing::sym_basis().to_vector();
  const auto H = optimizer::det_hessian(x);
  const double h = 1e-6;
  for (int j = 0; j < 12; ++j) {
    packing::BasisVector e = packing::BasisVector::Zero();
    e[j] = h;
    const packing::BasisVector col =
        (optimizer::det_gradient(x + e) - optimizer::det_gradient(x - e)) / (2 * h);
    CHECK((H.col(j) - col).norm() < 1e-6 * (1 + col.norm()));
  }
  CHECK((H - H.transpose()).norm() < 1e-12);
}

TEST_CASE("reference solution: ten canonical contacts near the square basis") {
  const auto& ref = reference();
  CHECK(ref.result.report.converged);
  CHECK(ref.result.active_contacts.size() == 10);
  auto labels = ref.result.active_contacts.labels();
  std::sort(labels.begin(), labels.end());
  auto want = contacts::g_labels();
  std::sort(want.begin(), want.end());
  CHECK(labels == want);
  CHECK(ref.frozen.size() == 12);
  // A local minimum reached from the square basis cannot be sparser than it.
  CHECK(ref.result.density >= packing::density(packing::lattice_volume(packing::sym_basis())));
  CHECK(ref.result.report.max_penetration < 1e-9);
}

TEST_CASE("free solve from the published basis stays there") {
  const auto c = cluster::build_cluster(cluster::SwivelParams::from_uv(published::kU, published::kV));
  const auto res = optimizer::optimize_lattice(c, published::basis(), {});
  CHECK(res.report.converged);
  CHECK(res.report.feasible);
  CHECK(res.density == doctest::Approx(published::kDensity).epsilon(1e-9));
  CHECK((res.basis.to_vector() - published::basis().to_vector()).norm() < 1e-6);
  CHECK(res.active_contacts.size() == 12);
}

TEST_CASE("continuation and forced variants agree near the square basis") {
  const auto& ref = reference();
  const auto p = cluster::SwivelParams::from_uv(0.01, -0.01);
  const auto free = optimizer::solve_with_continuation(ref, p.u, p.v, {});
  const auto g = optimizer::virtual_density(p, Variant::g, ref, {});
  CHECK(free.report.converged);
  CHECK(g.converged);
  CHECK(g.overlap_free);
  // G alone is what the free solve keeps active here.
  CHECK(g.density == doctest::Approx(free.density).epsilon(1e-9));
  const auto actual = optimizer::actual_density(p, ref, {});
  CHECK(actual.density == doctest::Approx(free.density).epsilon(1e-9));
}

TEST_CASE("forced variants meet at the published tangency point") {
  const auto& ref = reference();
  const auto p = cluster::SwivelParams::from_uv(published::kTangentU, published::kTangentV);
  for (Variant v : {Variant::g, Variant::ga, Variant::gb, Variant::gab}) {
    CAPTURE(optimizer::variant_name(v));
    const auto s = optimizer::virtual_density(p, v, ref, {});
    CHECK(s.converged);
    CHECK(s.density == doctest::Approx(published::kTangentDensity).epsilon(1e-4));
  }
}

TEST_CASE("minimum pair gap is zero at a packing and negative when squeezed") {
  const auto c = cluster::build_cluster(cluster::SwivelParams::from_uv(published::kU, published::kV));
  CHECK(std::abs(optimizer::min_pair_gap(c, published::basis())) < 1e-9);
  CHECK(optimizer::min_pair_gap(c, published::basis().scaled(0.99)) < -1e-3);
}

TEST_CASE("bad configuration is refused") {
  optimizer::OptimizerConfig cfg;
  cfg.max_iterations = 0;
  const auto c = cluster::build_cluster({});
  CHECK_THROWS(optimizer::optimize_lattice(c, packing::sym_basis(), cfg));
  cfg = {};
  cfg.variant = Variant::gab;
  CHECK_THROWS(optimizer::optimize_lattice(c, packing::sym_basis(), cfg, nullptr));
}

TEST_CASE("small sweep: every sample converged and overlap free") {
  const auto samples = optimizer::sweep(3, Variant::free, {}, reference(), 2);
  REQUIRE(samples.size() == 9);
  for (const auto& s : samples) {
    CHECK(s.converged);
    CHECK(s.overlap_free);
    CHECK(s.density > 0.774);
    CHECK(s.density < 0.781);
  }
  // Row chains may settle in the denser two-H family, never below the square basis.
  CHECK(samples[4].density >= packing::density(packing::lattice_volume(packing::sym_basis())));
}
