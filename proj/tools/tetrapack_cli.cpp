#include "tetrapack/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace cmd = tetrapack::commands;

namespace {

void add_common(CLI::App* sub, cmd::CommonOptions& common) {
  sub->add_option("--tol", common.tol, "penetration tolerance for certification");
  sub->add_option("--cutoff", common.cutoff, "certification radius (default 2.5 x circumradius)");
  sub->add_option("--max-iter", common.max_iter, "inner solver iteration limit");
  sub->add_option("--out", common.out, "output file (default: standard output)");
  sub->add_option("--threads", common.threads, "worker threads for sweeps");
  sub->add_flag("--manifest", common.manifest, "write <out>.manifest.json alongside the output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-lattice tetrahedra packings: optimize, sweep, verify and export"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tetrapack 1.0.0");

  cmd::CommonOptions common;

  cmd::OptimizeOptions opt;
  auto* optimize = app.add_subcommand("optimize", "optimize the lattice; maximize over u,v when omitted");
  add_common(optimize, common);
  optimize->add_option("--u", opt.u, "upper swivel parameter in [-1/9, 1/9]");
  optimize->add_option("--v", opt.v, "lower swivel parameter in [-1/9, 1/9]");
  optimize->add_option("--variant", opt.variant, "free, G, Ga, Gb or Gab");

  cmd::SweepOptions sw;
  auto* sweep = app.add_subcommand("sweep", "density over a grid of swivel parameters (CSV)");
  add_common(sweep, common);
  sweep->add_option("--grid", sw.grid, "samples per axis (>= 2)");
  sweep->add_option("--variant", sw.variant, "free, G, Ga, Gb or Gab");

  cmd::VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "certify a packing with separating planes");
  add_common(verify, common);
  verify->add_option("input", ver.input, "result document from optimize");
  verify->add_flag("--sym", ver.sym, "certify the square-basis packing instead");
  verify->add_option("--scale", ver.scale, "scale the basis before certifying");

  cmd::ExportOptions ex;
  auto* exp = app.add_subcommand("export", "write the placed tetrahedra as a mesh");
  add_common(exp, common);
  exp->add_option("input", ex.input, "result document from optimize");
  exp->add_flag("--sym", ex.sym, "export the square-basis packing instead");
  exp->add_option("--format", ex.format, "mesh format (obj)");
  exp->add_option("--shells", ex.shells, "neighbor shells to include (0: one cluster)");

  auto* reference = app.add_subcommand("reference", "print reference densities and closed forms");
  add_common(reference, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cmd::kParseError;
  }

  if ((verify->parsed() && ver.input.empty() && !ver.sym) ||
      (exp->parsed() && ex.input.empty() && !ex.sym)) {
    std::cerr << "error: give an input result document or --sym\n";
    return cmd::kParseError;
  }

  if (optimize->parsed()) return cmd::run_optimize(common, opt, std::cerr);
  if (sweep->parsed()) return cmd::run_sweep(common, sw, std::cerr);
  if (verify->parsed()) return cmd::run_verify(common, ver, std::cerr);
  if (exp->parsed()) return cmd::run_export(common, ex, std::cerr);
  return cmd::run_reference(common, std::cerr);
}
