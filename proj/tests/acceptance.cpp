// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when a
// blocking criterion fails.
#include "published_values.hpp"
#include "tetrapack/io.hpp"
#include "tetrapack/optimizer.hpp"
#include "tetrapack/verify.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace tetrapack;
using geom::Vec3;

namespace {

int blocking_failures = 0;

void report(int id, bool ok, const std::string& what, bool blocking = true) {
  fmt::print("[{}] criterion {:>2}: {}{}\n", ok ? "PASS" : "FAIL", id, what,
             !ok && !blocking ? " (non-blocking, known limitation)" : "");
  if (!ok && blocking) ++blocking_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Census {
  int upper_in_layer = 0, lower_in_layer = 0;
  int upper_faces = 0, lower_faces = 0;
  bool params_inside = true;
};

// Each in-layer same-side label touches two neighbours of the half (at +w
// and -w); each adjacent-layer face label touches one.
Census census(const contacts::ContactSet& set) {
  Census c;
  for (std::size_t k = 0; k < set.size(); ++k) {
    const auto& con = set.constraints[k];
    const auto& sol = set.solutions[k];
    const bool same_layer = con.pair.coset == packing::Coset::positive && con.pair.coords.k == 0;
    if (same_layer && con.pair.side_a == con.pair.side_b && con.kind == contacts::ContactKind::edge_edge) {
      (con.pair.side_a == cluster::Side::upper ? c.upper_in_layer : c.lower_in_layer) += 2;
    }
    if (con.kind == contacts::ContactKind::face_face && con.label.ends_with("^+")) ++c.upper_faces;
    if (con.kind == contacts::ContactKind::face_face && con.label.ends_with("^-")) ++c.lower_faces;
    const double eps = 1e-9;
    if (sol.s < -eps || sol.s > 1 + eps || sol.t < -eps || sol.t > 1 + eps) c.params_inside = false;
  }
  return c;
}

bool same_point_set(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double tol) {
  auto covered = [tol](const std::vector<Vec3>& x, const std::vector<Vec3>& y) {
    for (const Vec3& p : x) {
      bool found = false;
      for (const Vec3& q : y) found = found || (p - q).norm() <= tol;
      if (!found) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

}  // namespace

int main() {
  const optimizer::OptimizerConfig cfg;
  const auto ref = optimizer::reference_solution(cfg);

  // 1, 2, 8: the maximization from the default start.
  const auto t0 = std::chrono::steady_clock::now();
  const auto best = optimizer::maximize_density(cfg, ref);
  const double t_opt = seconds_since(t0);
  const auto& pk = best.packing;
  {
    const bool ok = best.converged && pk.report.converged &&
                    std::abs(pk.density - published::kDensity) <= 1e-5 &&
                    std::abs(best.u - published::kU) <= 1e-3 && std::abs(best.v - published::kV) <= 1e-3 &&
                    t_opt < 300;
    report(1, ok,
           fmt::format("optimum D={:.12f} at (u,v)=({:.12f}, {:+.12f}) in {:.1f}s", pk.density,
                       best.u, best.v, t_opt));
    report(2, std::abs(pk.volume - published::kVolume) <= 1e-3,
           fmt::format("volume V={:.12f}", pk.volume));
  }

  // 3: rim vertices at the published parameters.
  {
    const auto c = cluster::build_cluster(cluster::SwivelParams::from_uv(published::kU, published::kV));
    const auto& ru = c.upper.rim;
    const auto& rl = c.lower.rim;
    const std::array<Vec3, 10> got = {ru.o, ru.p, ru.q, ru.r, ru.s, rl.o, rl.p, rl.q, rl.r, rl.s};
    const auto up = published::upper_rim();
    const auto lo = published::lower_rim();
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      worst = std::max(worst, (got[k] - up[k]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (got[k + 5] - lo[k]).cwiseAbs().maxCoeff());
    }
    report(3, worst <= 1e-6, fmt::format("rim vertices, worst coordinate error {:.2e}", worst));
  }

  // 4: the published basis certifies.
  {
    const auto c = cluster::build_cluster(cluster::SwivelParams::from_uv(published::kU, published::kV));
    const auto rep = verify::certify(c, published::basis(), packing::default_cutoff(c), 1e-6);
    const bool ok = rep.passed() && std::abs(rep.volume - published::kVolume) <= 1e-6 &&
                    std::abs(rep.density - published::kDensity) <= 1e-6;
    report(4, ok,
           fmt::format("published basis: {} pairs, {} failures, V={:.12f} D={:.12f}",
                       rep.certificates.size(), rep.failures.size(), rep.volume, rep.density));
  }

  // 5: the square-basis packing.
  {
    const auto t = std::chrono::steady_clock::now();
    const auto s = verify::build_sym_packing();
    const auto co = packing::sym_coefficients();
    const double err = std::max({std::abs(co.i - static_cast<double>(s.i)),
                                 std::abs(co.j - static_cast<double>(s.j)),
                                 std::abs(co.k - static_cast<double>(s.k)),
                                 std::abs(s.volume - static_cast<double>(s.volume_closed)),
                                 std::abs(s.density - static_cast<double>(s.density_closed))});
    const auto c = cluster::build_cluster({});
    const auto cs = census(contacts::classify_active(c, s.basis));
    const bool ok = err <= 1e-10 && cs.upper_faces == 2 && cs.lower_faces == 2;
    report(5, ok,
           fmt::format("square basis V={:.12f} D={:.12f} (err {:.1e}), adjacent-layer faces {}+{} in {:.2f}s",
                       s.volume, s.density, err, cs.upper_faces, cs.lower_faces, seconds_since(t)));
  }

  // 6: reference constants against their printed digits.
  {
    const char* wanted[] = {"groemer", "tetrahelix", "sphere_hcp", "e5_solid_angle",
                            "e5_local", "v20_solid_angle", "v20_local"};
    double worst = 0.0;
    int found = 0;
    for (const auto& k : verify::reference_constants()) {
      for (const char* w : wanted) {
        if (k.name != w) continue;
        ++found;
        worst = std::max(worst, std::abs(k.value - std::stod(k.published)));
      }
    }
    report(6, found == 7 && worst <= 1e-11,
           fmt::format("{} reference constants, worst deviation {:.1e}", found, worst));
  }

  // 7: gapless half-cluster hull.
  {
    const auto h = cluster::build_chain(cluster::Side::upper, cluster::kParamLimit);
    const double ratio = 5.0 * (8.0 / 3.0) / geom::body_volume(h.hull);
    report(7, std::abs(ratio - 405.0 / 416.0) <= 1e-9,
           fmt::format("hull relative density {:.12f} vs 405/416", ratio));
  }

  // 8: contacts at the converged optimum.
  {
    const auto c = cluster::build_cluster(pk.params);
    const auto set = contacts::classify_active(c, pk.basis);
    const auto cs = census(set);
    const bool ok = set.size() == 12 && cs.upper_in_layer == 4 && cs.lower_in_layer == 4 &&
                    cs.upper_faces == 3 && cs.lower_faces == 3 && cs.params_inside;
    report(8, ok,
           fmt::format("{} active contacts; per half in-layer edges {}/{}, adjacent faces {}/{}, s,t in [0,1]: {}",
                       set.size(), cs.upper_in_layer, cs.lower_in_layer, cs.upper_faces,
                       cs.lower_faces, cs.params_inside ? "yes" : "no"));
  }

  // 9: the four forced variants at the tangency point.
  {
    const auto p = cluster::SwivelParams::from_uv(published::kTangentU, published::kTangentV);
    double lo = 1.0, hi = 0.0;
    bool conv = true;
    for (auto v : {optimizer::Variant::g, optimizer::Variant::ga, optimizer::Variant::gb,
                   optimizer::Variant::gab}) {
      const auto s = optimizer::virtual_density(p, v, ref, cfg);
      conv = conv && s.converged;
      lo = std::min(lo, s.density);
      hi = std::max(hi, s.density);
    }
    const bool ok = conv && hi - lo <= 1e-4 && std::abs(hi - published::kTangentDensity) <= 1e-4;
    report(9, ok, fmt::format("forced variants span [{:.12f}, {:.12f}]", lo, hi), false);
  }

  // 10: property checks in miniature (the full suites run under ctest).
  {
    bool orbit = true;
    const auto& g = cluster::IsometryGroup::instance();
    const auto c = cluster::build_cluster(cluster::SwivelParams::from_uv(0.07, -0.03));
    const auto orb = cluster::param_orbit(c.params);
    for (int k = 0; k < 8; ++k) {
      std::vector<Vec3> a, b;
      for (const auto& t : c.tetrahedra())
        for (const auto& p : t.vertices) a.push_back(g.elements[k] * p);
      const auto ic = cluster::build_cluster(cluster::SwivelParams::from_uv(orb[k].first, orb[k].second));
      for (const auto& t : ic.tetrahedra())
        for (const auto& p : t.vertices) b.push_back(p);
      orbit = orbit && same_point_set(a, b, 1e-9);
    }

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<Vec3> dirs;
    const int n_dirs = 20000;
    for (int i = 0; i < n_dirs; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n_dirs;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = i * std::numbers::pi * (3.0 - std::sqrt(5.0));
      dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    bool separation = true;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Vec3> pa, pb;
      const Vec3 shift(2.5 * U(rng), 2.5 * U(rng), 2.5 * U(rng));
      for (int i = 0; i < 8; ++i) pa.emplace_back(U(rng), U(rng), U(rng));
      for (int i = 0; i < 8; ++i) pb.push_back(shift + Vec3(U(rng), U(rng), U(rng)));
      const auto a = geom::convex_hull(pa), b = geom::convex_hull(pb);
      double sampled = -1e300;
      for (const Vec3& n : dirs) sampled = std::max(sampled, b.min_along(n) - a.support(n));
      const double gap = geom::signed_separation(a, b).gap;
      separation = separation && gap >= sampled - 1e-9 && gap - sampled < 3e-2;
    }

    bool gradient = true;
    for (int trial = 0; trial < 100; ++trial) {
      packing::BasisVector x;
      for (int i = 0; i < 12; ++i) x[i] = 2.0 * U(rng);
      const auto grad = optimizer::det_gradient(x);
      packing::BasisVector fd;
      for (int i = 0; i < 12; ++i) {
        packing::BasisVector e = packing::BasisVector::Zero();
        e[i] = 1e-6;
        fd[i] = (optimizer::det_objective(x + e) - optimizer::det_objective(x - e)) / 2e-6;
      }
      gradient = gradient && (grad - fd).norm() <= 1e-6 * std::max(1.0, grad.norm());
    }

    const auto oc = cluster::build_cluster(pk.params);
    const auto rep = verify::certify(oc, pk.basis, packing::default_cutoff(oc));
    std::stringstream cert_text;
    io::write_certificate(cert_text, rep);
    const auto parsed = io::parse_certificate(cert_text);
    const auto rc = cluster::build_cluster(parsed.params);
    bool recheck = rep.passed();
    for (const auto& cert : parsed.certificates)
      recheck = recheck && verify::recheck(cert, rc, parsed.basis, parsed.tol).ok;

    std::ostringstream r1, r2;
    io::write_result(r1, pk, "free");
    io::write_result(r2, optimizer::maximize_density(cfg, ref).packing, "free");
    const bool bytes = r1.str() == r2.str();

    report(10, orbit && separation && gradient && recheck && bytes,
           fmt::format("orbit {}, separation oracle {}, det gradient {}, certificate recheck {}, determinism {}",
                       orbit, separation, gradient, recheck, bytes));
  }

  // 11: free sweep on a 9 x 9 grid with four workers.
  {
    const auto t = std::chrono::steady_clock::now();
    const auto samples = optimizer::sweep(9, optimizer::Variant::free, cfg, ref, 4);
    const double secs = seconds_since(t);
    int converged = 0;
    bool in_range = true;
    double lo = 1.0, hi = 0.0;
    for (const auto& s : samples) {
      if (!s.converged) continue;
      ++converged;
      in_range = in_range && s.density >= 0.774 && s.density <= 0.781;
      lo = std::min(lo, s.density);
      hi = std::max(hi, s.density);
    }
    const bool ok = samples.size() == 81 && converged >= 0.95 * 81 && in_range && secs < 900;
    report(11, ok,
           fmt::format("sweep {}/{} converged, D in [{:.6f}, {:.6f}], {:.1f}s", converged,
                       samples.size(), lo, hi, secs));
  }

  fmt::print("{} blocking criteria failed\n", blocking_failures);
  return blocking_failures == 0 ? 0 : 1;
}
