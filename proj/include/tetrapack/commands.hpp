// Command implementations behind the tetrapack executable.  Each returns a
// process exit code and reports problems on the given error stream.
#pragma once

#include "tetrapack/optimizer.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace tetrapack::commands {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParseError = 2,
  kRangeError = 3,
  kInfeasible = 4,
  kNotConverged = 5,
  kVerificationFailed = 6,
};

struct CommonOptions {
  // Pair penetration tolerance for verification.
  double tol = 1e-7;
  // Certification radius; the cluster's default when absent.
  std::optional<double> cutoff;
  int max_iter = 400;
  int threads = 1;
  // Output file; standard output when empty.
  std::string out;
  // Also write a JSON run manifest next to `out`.
  bool manifest = false;
};

struct OptimizeOptions {
  std::optional<double> u;
  std::optional<double> v;
  std::string variant = "free";
};

struct SweepOptions {
  int grid = 9;
  std::string variant = "free";
};

struct VerifyOptions {
  // Result document to certify; ignored with `sym`.
  std::string input;
  bool sym = false;
  // Uniform factor applied to the basis before certifying.
  double scale = 1.0;
};

struct ExportOptions {
  std::string input;
  bool sym = false;
  std::string format = "obj";
  int shells = 0;
};

int run_optimize(const CommonOptions& common, const OptimizeOptions& opts, std::ostream& err);
int run_sweep(const CommonOptions& common, const SweepOptions& opts, std::ostream& err);
int run_verify(const CommonOptions& common, const VerifyOptions& opts, std::ostream& err);
int run_export(const CommonOptions& common, const ExportOptions& opts, std::ostream& err);
int run_reference(const CommonOptions& common, std::ostream& err);

}  // namespace tetrapack::commands
