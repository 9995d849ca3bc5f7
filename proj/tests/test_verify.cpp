#include "doctest.h"

#include "published_values.hpp"
#include "tetrapack/verify.hpp"

#include <cmath>
#include <numbers>

using namespace tetrapack;

TEST_CASE("square-basis closed forms in extended precision") {
  const auto s = verify::build_sym_packing();
  CHECK(std::abs(s.i - 1.290787503310L) < 1e-11L);
  CHECK(std::abs(s.j - 0.209557312632L) < 1e-11L);
  CHECK(std::abs(s.k - 4.520824771583L) < 1e-11L);
  CHECK(std::abs(s.volume_closed - 61.846569901642L) < 1e-11L);
  CHECK(std::abs(s.density_closed - 0.776114181859L) < 1e-11L);
  // The density closed form is 48 over the volume closed form.
  CHECK(std::abs(s.density_closed * s.volume_closed - 48.0L) < 1e-15L);
  CHECK(std::abs(s.density - static_cast<double>(s.density_closed)) < 1e-12);
  CHECK(std::abs(s.volume - static_cast<double>(s.volume_closed)) < 1e-10);
}

TEST_CASE("square-basis packing is certified") {
  const auto c = cluster::build_cluster({});
  const auto rep = verify::certify(c, packing::sym_basis(), packing::default_cutoff(c));
  CHECK(rep.passed());
  CHECK(rep.certificates.size() > 50);
  CHECK(rep.certified_shell <= rep.cutoff);
  for (const auto& cert : rep.certificates) {
    CHECK(cert.margin_a >= -rep.tol);
    CHECK(cert.margin_b <= rep.tol);
    CHECK(verify::recheck(cert, c, packing::sym_basis()).ok);
  }
}

TEST_CASE("a shrunk basis fails certification") {
  const auto c = cluster::build_cluster({});
  const auto rep = verify::certify(c, packing::sym_basis().scaled(0.99), packing::default_cutoff(c));
  CHECK_FALSE(rep.passed());
  CHECK(rep.volume < packing::lattice_volume(packing::sym_basis()));
}

TEST_CASE("published optimum basis passes within 1e-6") {
  const auto c = cluster::build_cluster(cluster::SwivelParams::from_uv(published::kU, published::kV));
  const auto rep = verify::certify(c, published::basis(), packing::default_cutoff(c), 1e-6);
  CHECK(rep.passed());
  CHECK(rep.volume == doctest::Approx(published::kVolume).epsilon(1e-10));
  CHECK(rep.density == doctest::Approx(published::kDensity).epsilon(1e-10));
}

TEST_CASE("recheck notices a tampered plane") {
  const auto c = cluster::build_cluster({});
  const auto basis = packing::sym_basis();
  const auto rep = verify::certify(c, basis, 6.0);
  REQUIRE_FALSE(rep.certificates.empty());
  auto cert = rep.certificates.front();
  cert.plane.offset += 0.5;
  CHECK_FALSE(verify::recheck(cert, c, basis).ok);
  cert = rep.certificates.front();
  cert.plane.normal *= 2.0;
  CHECK_FALSE(verify::recheck(cert, c, basis).ok);
}

TEST_CASE("reference constants against independent formulas") {
  const double dihedral = std::acos(1.0 / 3.0);
  for (const auto& k : verify::reference_constants()) {
    CAPTURE(k.name);
    if (!k.published.empty() && k.published.size() >= 14) {
      // Twelve printed decimals: agreement to 1e-11 allows for rounding.
      CHECK(std::abs(k.value - std::stod(k.published)) < 1e-11);
    }
    if (k.name == "groemer") CHECK(k.value == doctest::Approx(18.0 / 49.0).epsilon(1e-15));
    if (k.name == "sphere_hcp") CHECK(k.value == doctest::Approx(std::numbers::pi / std::sqrt(18.0)));
    if (k.name == "e5_local") CHECK(k.value == doctest::Approx(10 * dihedral / (4 * std::numbers::pi)));
    if (k.name == "v20_local") {
      CHECK(k.value == doctest::Approx(20 * (3 * dihedral - std::numbers::pi) / (4 * std::numbers::pi)));
    }
    if (k.name == "tetrahelix") CHECK(k.value * k.value == doctest::Approx(50000.0 / 177147.0));
  }
}

TEST_CASE("the optimum beats every reference density") {
  double best_other = 0.0;
  for (const auto& k : verify::reference_constants()) {
    if (k.name == "groemer" || k.name == "tetrahelix" || k.name == "hull_v20_lattice" ||
        k.name.starts_with("conway") || k.name == "sphere_hcp" || k.name == "sym_density") {
      best_other = std::max(best_other, k.value);
    }
  }
  CHECK(published::kDensity > best_other);
}
