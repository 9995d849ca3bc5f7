// Text formats: result documents, sweep tables, certificates, OBJ meshes and
// run manifests.  Floats are written with 12 significant digits.
#pragma once

#include "tetrapack/optimizer.hpp"
#include "tetrapack/verify.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tetrapack::io {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 12 significant digits, negative zero printed as zero.
std::string fmt_real(double x);
std::string fmt_vec(const geom::Vec3& v);

// Result document.  Keys follow the pipeline: parameters, rim vertices,
// contacts with their intersection parameters, basis, volume and density,
// then the convergence report.
struct ResultDoc {
  std::string variant = "free";
  cluster::SwivelParams params;
  packing::LatticeBasis basis;
  double volume = 0.0;
  double density = 0.0;
  std::vector<std::string> active_labels;
  bool converged = false;
  int iterations = 0;
  double max_penetration = 0.0;
  std::string message;
};

void write_result(std::ostream& os, const optimizer::PackingResult& result, std::string_view variant);
ResultDoc parse_result(std::istream& is);

void write_sweep(std::ostream& os, const std::vector<optimizer::DensitySample>& samples);

void write_certificate(std::ostream& os, const verify::CertificationReport& report);
verify::CertificationReport parse_certificate(std::istream& is);

struct ObjObject {
  std::string name;
  std::vector<geom::Vec3> vertices;
  // Zero-based indices into `vertices`.
  std::vector<std::array<int, 3>> triangles;
};

void write_obj(std::ostream& os, const std::vector<cluster::Tetra>& tetrahedra);
std::vector<ObjObject> parse_obj(std::istream& is);

// Every tetrahedron of the clusters placed within `radius` of the origin.
std::vector<cluster::Tetra> packing_tetrahedra(const cluster::Cluster& c,
                                               const packing::LatticeBasis& basis, double radius);

void write_reference(std::ostream& os, const std::vector<verify::NamedConstant>& constants);

struct Manifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

// JSON sidecar; carries a timestamp, so it is kept apart from the
// byte-reproducible outputs.
void write_manifest(std::ostream& os, const Manifest& manifest);

}  // namespace tetrapack::io
