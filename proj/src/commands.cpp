#include "tetrapack/commands.hpp"

#include "tetrapack/io.hpp"
#include "tetrapack/verify.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace tetrapack::commands {

namespace {

using optimizer::OptimizerConfig;
using optimizer::Variant;

// Writes the rendered text to the output file, or standard output.
bool emit(const CommonOptions& common, const std::string& text, std::ostream& err) {
  if (common.out.empty()) {
    std::cout << text;
    return static_cast<bool>(std::cout.flush());
  }
  std::ofstream os(common.out, std::ios::binary);
  os << text;
  if (!os) {
    err << "error: cannot write " << common.out << "\n";
    return false;
  }
  return true;
}

void emit_manifest(const CommonOptions& common, io::Manifest m, std::ostream& err) {
  if (!common.manifest || common.out.empty()) return;
  m.config["tol"] = io::fmt_real(common.tol);
  m.config["max_iter"] = std::to_string(common.max_iter);
  m.config["threads"] = std::to_string(common.threads);
  if (common.cutoff) m.config["cutoff"] = io::fmt_real(*common.cutoff);
  m.outputs.push_back(common.out);
  const std::string path = common.out + ".manifest.json";
  std::ofstream os(path);
  io::write_manifest(os, m);
  if (!os) err << "warning: cannot write " << path << "\n";
}

OptimizerConfig make_config(const CommonOptions& common) {
  OptimizerConfig cfg;
  cfg.max_iterations = common.max_iter;
  return cfg;
}

struct LoadedPacking {
  cluster::Cluster cluster;
  packing::LatticeBasis basis;
};

LoadedPacking load_packing(const std::string& input, bool sym) {
  if (sym) return {cluster::build_cluster({}), packing::sym_basis()};
  std::ifstream is(input);
  if (!is) throw io::ParseError("cannot open " + input);
  const io::ResultDoc doc = io::parse_result(is);
  return {cluster::build_cluster(doc.params), doc.basis};
}

// Shared handling of the error classes every command can raise.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::out_of_range& e) {
    err << "range error: " << e.what() << "\n";
    return kRangeError;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  }
}

}  // namespace

int run_optimize(const CommonOptions& common, const OptimizeOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.u.has_value() != opts.v.has_value()) {
      err << "error: give both --u and --v, or neither\n";
      return static_cast<int>(kParseError);
    }
    OptimizerConfig cfg = make_config(common);
    cfg.variant = optimizer::parse_variant(opts.variant);
    // Range problems surface before the reference solve.
    std::optional<cluster::SwivelParams> params;
    if (opts.u) params = cluster::SwivelParams::from_uv(*opts.u, *opts.v);

    OptimizerConfig free_cfg = cfg;
    free_cfg.variant = Variant::free;
    const auto ref = optimizer::reference_solution(free_cfg);

    optimizer::PackingResult res;
    bool outer_ok = true;
    if (!params) {
      const auto m = optimizer::maximize_density(cfg, ref);
      res = m.packing;
      outer_ok = m.converged;
    } else if (cfg.variant == Variant::free) {
      res = optimizer::solve_with_continuation(ref, params->u, params->v, cfg);
    } else {
      res = optimizer::optimize_lattice(cluster::build_cluster(*params), ref.result.basis, cfg,
                                        &ref.frozen);
    }

    std::ostringstream os;
    io::write_result(os, res, opts.variant);
    if (!emit(common, os.str(), err)) return static_cast<int>(kParseError);
    io::Manifest m{"optimize", {{"variant", opts.variant}}, {}, {}};
    if (params) {
      m.config["u"] = io::fmt_real(params->u);
      m.config["v"] = io::fmt_real(params->v);
    }
    emit_manifest(common, m, err);

    if (!res.report.feasible) {
      err << "infeasible: " << res.report.message << "\n";
      return static_cast<int>(kInfeasible);
    }
    if (!res.report.converged || !outer_ok) {
      err << "not converged: " << res.report.message << "\n";
      return static_cast<int>(kNotConverged);
    }
    return static_cast<int>(kOk);
  });
}

int run_sweep(const CommonOptions& common, const SweepOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.grid < 2) throw std::out_of_range("grid must be at least 2");
    if (common.threads < 1) throw std::out_of_range("threads must be at least 1");
    OptimizerConfig cfg = make_config(common);
    const Variant variant = optimizer::parse_variant(opts.variant);
    const auto ref = optimizer::reference_solution(cfg);
    const auto samples = optimizer::sweep(opts.grid, variant, cfg, ref, common.threads);

    std::ostringstream os;
    io::write_sweep(os, samples);
    if (!emit(common, os.str(), err)) return static_cast<int>(kParseError);
    emit_manifest(common,
                  {"sweep", {{"grid", std::to_string(opts.grid)}, {"variant", opts.variant}}, {}, {}},
                  err);

    int converged = 0;
    for (const auto& s : samples) converged += s.converged ? 1 : 0;
    if (converged < static_cast<int>(samples.size())) {
      err << "sweep: " << samples.size() - converged << " of " << samples.size()
          << " samples did not converge\n";
    }
    return static_cast<int>(converged == 0 ? kNotConverged : kOk);
  });
}

int run_verify(const CommonOptions& common, const VerifyOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (!(opts.scale > 0.0)) throw std::out_of_range("scale must be positive");
    LoadedPacking p = load_packing(opts.input, opts.sym);
    const auto basis = p.basis.scaled(opts.scale);
    const double cutoff = common.cutoff.value_or(packing::default_cutoff(p.cluster));
    const auto rep = verify::certify(p.cluster, basis, cutoff, common.tol);

    std::ostringstream os;
    io::write_certificate(os, rep);
    if (!emit(common, os.str(), err)) return static_cast<int>(kParseError);
    io::Manifest m{"verify", {{"scale", io::fmt_real(opts.scale)}}, {}, {}};
    if (opts.sym) m.config["sym"] = "1";
    else m.inputs.push_back(opts.input);
    emit_manifest(common, m, err);

    if (!rep.passed()) {
      err << "verification failed: " << rep.failures.size() << " of " << rep.certificates.size()
          << " pairs penetrate beyond " << io::fmt_real(common.tol) << "\n";
      return static_cast<int>(kVerificationFailed);
    }
    err << "certified " << rep.certificates.size() << " pairs within " << io::fmt_real(cutoff) << "\n";
    return static_cast<int>(kOk);
  });
}

int run_export(const CommonOptions& common, const ExportOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.format != "obj") throw io::ParseError("unknown export format '" + opts.format + "'");
    if (opts.shells < 0) throw std::out_of_range("shells must be non-negative");
    LoadedPacking p = load_packing(opts.input, opts.sym);
    // One shell reaches every cluster whose bounding sphere can touch the origin's.
    const double radius = 2.0 * packing::cluster_circumradius(p.cluster) * opts.shells;
    const auto tets = io::packing_tetrahedra(p.cluster, p.basis, radius);

    std::ostringstream os;
    io::write_obj(os, tets);
    if (!emit(common, os.str(), err)) return static_cast<int>(kParseError);
    io::Manifest m{"export", {{"format", opts.format}, {"shells", std::to_string(opts.shells)}}, {}, {}};
    if (opts.sym) m.config["sym"] = "1";
    else m.inputs.push_back(opts.input);
    emit_manifest(common, m, err);
    return static_cast<int>(kOk);
  });
}

int run_reference(const CommonOptions& common, std::ostream& err) {
  return guarded(err, [&] {
    std::ostringstream os;
    io::write_reference(os, verify::reference_constants());
    if (!emit(common, os.str(), err)) return static_cast<int>(kParseError);
    emit_manifest(common, {"reference", {}, {}, {}}, err);
    return static_cast<int>(kOk);
  });
}

}  // namespace tetrapack::commands
