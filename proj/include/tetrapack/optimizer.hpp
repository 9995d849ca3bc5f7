// Lattice optimization.  The inner problem minimizes det[2a, 2b, c-d] over the
// twelve basis unknowns with every nearby half-cluster pair kept apart; the
// outer problem searches the swivel square for the densest packing.
#pragma once

#include "tetrapack/cluster.hpp"
#include "tetrapack/contacts.hpp"
#include "tetrapack/packing.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tetrapack::optimizer {

using packing::BasisVector;
using packing::LatticeBasis;

// free: no contact forced.  The others hold the always-active set G at gap 0
// and add none, one or both of Ha, Hb; the H pairs left out are ignored.
enum class Variant { free, g, ga, gb, gab };

std::string_view variant_name(Variant variant);
Variant parse_variant(std::string_view name);
// Labels held at equality by a variant (empty for free).
std::vector<std::string> forced_labels(Variant variant);

enum class InitSource { sym_paradigm, explicit_basis };

struct OptimizerConfig {
  int max_iterations = 400;
  // Accepted iterates keep every pair gap above -constraint_tol.
  double constraint_tol = 1e-9;
  // The trust region collapsing below this ends the inner solve.
  double step_tol = 1e-12;
  double initial_radius = 0.05;
  double max_radius = 0.5;
  // Step for finite differences of the outer density surface.
  double fd_step = 1e-5;
  // Simplex size at which the outer search stops.
  double outer_tol = 1e-7;
  int outer_max_iterations = 400;
  // Extra reach beyond touching bounding spheres when listing pairs.
  double pair_margin = 1.0;
  Variant variant = Variant::free;
  InitSource init = InitSource::sym_paradigm;
  std::optional<LatticeBasis> explicit_basis;
};

struct ConvergenceReport {
  bool converged = false;
  bool feasible = false;
  int iterations = 0;
  double max_penetration = 0.0;
  std::string message;
};

struct PackingResult {
  cluster::SwivelParams params;
  LatticeBasis basis;
  double volume = 0.0;
  double density = 0.0;
  contacts::ContactSet active_contacts;
  ConvergenceReport report;
};

struct DensitySample {
  double u = 0.0;
  double v = 0.0;
  Variant variant = Variant::free;
  double density = 0.0;
  double volume = 0.0;
  bool converged = false;
  // Every pair, including H pairs a variant ignores, is free of overlap.
  bool overlap_free = false;
  std::vector<std::string> active_labels;
  LatticeBasis basis;
};

double det_objective(const BasisVector& x);
BasisVector det_gradient(const BasisVector& x);
Eigen::Matrix<double, 12, 12> det_hessian(const BasisVector& x);

// Smallest pair gap over all deduplicated pairs near the basis.
double min_pair_gap(const cluster::Cluster& c, const LatticeBasis& basis, double margin = 1.0);

// Local minimizer of the cell volume from `init`.  Forced variants need the
// frozen reference contacts.
PackingResult optimize_lattice(const cluster::Cluster& c, const LatticeBasis& init,
                               const OptimizerConfig& config,
                               const contacts::ContactSet* reference = nullptr);

// Free solve of the centred cluster held by the ten G contacts, relabelled so
// they read canonically.  `frozen` adds the two H pairs, whose features come
// from their best separating axes since they are not yet touching.
struct ReferenceSolution {
  cluster::Cluster cluster;
  PackingResult result;
  contacts::ContactSet frozen;
};

ReferenceSolution reference_solution(const OptimizerConfig& config = {});

// Free solve reached by walking the swivel parameters from the reference in
// small steps, each warm-started from the last.
PackingResult solve_with_continuation(const ReferenceSolution& ref, double u, double v,
                                      const OptimizerConfig& config, double max_step = 0.02);

DensitySample virtual_density(const cluster::SwivelParams& params, Variant variant,
                              const ReferenceSolution& ref, const OptimizerConfig& config,
                              const std::optional<LatticeBasis>& warm = std::nullopt);

// Densest overlap-free forced variant (ties go to fewer forced equations).
DensitySample actual_density(const cluster::SwivelParams& params, const ReferenceSolution& ref,
                             const OptimizerConfig& config,
                             const std::optional<LatticeBasis>& warm = std::nullopt);

struct MaximizeResult {
  double u = 0.0;
  double v = 0.0;
  PackingResult packing;
  int outer_iterations = 0;
  bool converged = false;
  // Finite-difference gradient of the searched surface at the end point.
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
};

// Density maximum over the swivel square for config.variant, starting at
// (u0, v0).  The returned packing is a free solve at the maximizer.
MaximizeResult maximize_density(const OptimizerConfig& config, const ReferenceSolution& ref,
                                double u0 = 0.0, double v0 = 0.0);

std::vector<DensitySample> sweep(int grid_n, Variant variant, const OptimizerConfig& config,
                                 const ReferenceSolution& ref, int threads = 1);

}  // namespace tetrapack::optimizer
