#include "tetrapack/io.hpp"

#include <fmt/format.h>
#include "json.hpp"

#include <array>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tetrapack::io {

using cluster::Side;
using packing::Coset;

std::string fmt_real(double x) {
  if (x == 0.0) x = 0.0;  // folds -0
  std::string s = fmt::format("{:.12g}", x);
  return s == "-0" ? "0" : s;
}

std::string fmt_vec(const geom::Vec3& v) {
  return fmt_real(v.x()) + " " + fmt_real(v.y()) + " " + fmt_real(v.z());
}

namespace {

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ParseError("bad number for " + what + ": '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ParseError("bad integer for " + what + ": '" + s + "'");
  }
}

// Key followed by the rest of the line.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues read_key_values(std::istream& is) {
  KeyValues kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) kv.emplace_back(line, "");
    else kv.emplace_back(line.substr(0, sp), line.substr(sp + 1));
  }
  return kv;
}

const std::string& lookup(const KeyValues& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return v;
  throw ParseError("missing key '" + key + "'");
}

geom::Vec3 to_vec(const std::string& s, const std::string& what) {
  const auto parts = split(s, ' ');
  if (parts.size() != 3) throw ParseError("expected three numbers for " + what);
  return {to_real(parts[0], what), to_real(parts[1], what), to_real(parts[2], what)};
}

void write_basis(std::ostream& os, const packing::LatticeBasis& b) {
  os << "a " << fmt_vec(b.a) << "\n";
  os << "b " << fmt_vec(b.b) << "\n";
  os << "c " << fmt_vec(b.c) << "\n";
  os << "d " << fmt_vec(b.d) << "\n";
}

packing::LatticeBasis read_basis(const KeyValues& kv) {
  return {to_vec(lookup(kv, "a"), "a"), to_vec(lookup(kv, "b"), "b"), to_vec(lookup(kv, "c"), "c"),
          to_vec(lookup(kv, "d"), "d")};
}

cluster::SwivelParams read_params(const KeyValues& kv) {
  const double u = to_real(lookup(kv, "u"), "u");
  const double v = to_real(lookup(kv, "v"), "v");
  return cluster::SwivelParams::from_uv(u, v);
}

std::string side_tag(Side s) { return s == Side::upper ? "U" : "L"; }
std::string coset_tag(Coset c) { return c == Coset::positive ? "+" : "-"; }

Side parse_side(const std::string& s) {
  if (s == "U") return Side::upper;
  if (s == "L") return Side::lower;
  throw ParseError("bad side '" + s + "'");
}

Coset parse_coset(const std::string& s) {
  if (s == "+") return Coset::positive;
  if (s == "-") return Coset::negative;
  throw ParseError("bad coset '" + s + "'");
}

}  // namespace

void write_result(std::ostream& os, const optimizer::PackingResult& r, std::string_view variant) {
  os << "format tetrapack-result v1\n";
  os << "variant " << variant << "\n";
  // Swivel parameters.
  os << "u " << fmt_real(r.params.u) << "\n";
  os << "v " << fmt_real(r.params.v) << "\n";
  os << "theta_u " << fmt_real(r.params.theta_u) << "\n";
  os << "theta_v " << fmt_real(r.params.theta_v) << "\n";
  // Rim vertices of both chains.
  const auto c = cluster::build_cluster(r.params);
  const auto rim = [&os](const char* tag, const cluster::RimVertices& m) {
    os << "o_" << tag << " " << fmt_vec(m.o) << "\n";
    os << "p_" << tag << " " << fmt_vec(m.p) << "\n";
    os << "q_" << tag << " " << fmt_vec(m.q) << "\n";
    os << "r_" << tag << " " << fmt_vec(m.r) << "\n";
    os << "s_" << tag << " " << fmt_vec(m.s) << "\n";
  };
  rim("u+", c.upper.rim);
  rim("v-", c.lower.rim);
  // Intersections with their line or plane parameters.
  const auto& set = r.active_contacts;
  os << "active_labels " << join(set.labels(), ',') << "\n";
  for (std::size_t k = 0; k < set.size(); ++k) {
    const auto& con = set.constraints[k];
    const auto& sol = set.solutions[k];
    os << "contact " << con.label << " " << contacts::kind_name(con.kind) << " " << con.offset << " "
       << fmt_real(sol.s) << " " << fmt_real(sol.t) << " " << fmt_vec(sol.point) << "\n";
  }
  write_basis(os, r.basis);
  os << "V " << fmt_real(r.volume) << "\n";
  os << "D " << fmt_real(r.density) << "\n";
  os << "converged " << (r.report.converged ? 1 : 0) << "\n";
  os << "feasible " << (r.report.feasible ? 1 : 0) << "\n";
  os << "iterations " << r.report.iterations << "\n";
  os << "max_penetration " << fmt_real(r.report.max_penetration) << "\n";
  os << "message " << r.report.message << "\n";
}

ResultDoc parse_result(std::istream& is) {
  const KeyValues kv = read_key_values(is);
  if (lookup(kv, "format") != "tetrapack-result v1") throw ParseError("not a tetrapack result v1");
  ResultDoc doc;
  doc.variant = lookup(kv, "variant");
  doc.params = read_params(kv);
  doc.basis = read_basis(kv);
  doc.volume = to_real(lookup(kv, "V"), "V");
  doc.density = to_real(lookup(kv, "D"), "D");
  doc.active_labels = split(lookup(kv, "active_labels"), ',');
  doc.converged = lookup(kv, "converged") == "1";
  doc.iterations = to_int(lookup(kv, "iterations"), "iterations");
  doc.max_penetration = to_real(lookup(kv, "max_penetration"), "max_penetration");
  doc.message = lookup(kv, "message");
  return doc;
}

void write_sweep(std::ostream& os, const std::vector<optimizer::DensitySample>& samples) {
  os << "u,v,variant,D,V,converged,active_labels\n";
  for (const auto& s : samples) {
    os << fmt_real(s.u) << "," << fmt_real(s.v) << "," << optimizer::variant_name(s.variant) << ","
       << fmt_real(s.density) << "," << fmt_real(s.volume) << "," << (s.converged ? 1 : 0) << ","
       << join(s.active_labels, ';') << "\n";
  }
}

void write_certificate(std::ostream& os, const verify::CertificationReport& rep) {
  os << "tetrapack-cert v1\n";
  os << "u " << fmt_real(rep.params.u) << "\n";
  os << "v " << fmt_real(rep.params.v) << "\n";
  write_basis(os, rep.basis);
  os << "cutoff " << fmt_real(rep.cutoff) << "\n";
  os << "tol " << fmt_real(rep.tol) << "\n";
  os << "V " << fmt_real(rep.volume) << "\n";
  os << "D " << fmt_real(rep.density) << "\n";
  os << "certified_shell " << fmt_real(rep.certified_shell) << "\n";
  os << "pairs " << rep.certificates.size() << "\n";
  os << "failures " << rep.failures.size() << "\n";
  // pair side_a side_b coset i j k | normal | offset | margin_a margin_b
  for (const auto& cert : rep.certificates) {
    const auto& p = cert.pair;
    os << "pair " << side_tag(p.side_a) << " " << side_tag(p.side_b) << " " << coset_tag(p.coset) << " "
       << p.coords.i << " " << p.coords.j << " " << p.coords.k << " " << fmt_vec(cert.plane.normal) << " "
       << fmt_real(cert.plane.offset) << " " << fmt_real(cert.margin_a) << " "
       << fmt_real(cert.margin_b) << "\n";
  }
}

verify::CertificationReport parse_certificate(std::istream& is) {
  std::string first;
  if (!std::getline(is, first) || first != "tetrapack-cert v1") {
    throw ParseError("not a tetrapack-cert v1 file");
  }
  const KeyValues kv = read_key_values(is);
  verify::CertificationReport rep;
  rep.params = read_params(kv);
  rep.basis = read_basis(kv);
  rep.cutoff = to_real(lookup(kv, "cutoff"), "cutoff");
  rep.tol = to_real(lookup(kv, "tol"), "tol");
  rep.volume = to_real(lookup(kv, "V"), "V");
  rep.density = to_real(lookup(kv, "D"), "D");
  rep.certified_shell = to_real(lookup(kv, "certified_shell"), "certified_shell");
  const int declared = to_int(lookup(kv, "pairs"), "pairs");
  for (const auto& [key, value] : kv) {
    if (key != "pair") continue;
    const auto f = split(value, ' ');
    if (f.size() != 12) throw ParseError("pair record needs 12 fields");
    verify::Certificate cert;
    cert.pair.side_a = parse_side(f[0]);
    cert.pair.side_b = parse_side(f[1]);
    cert.pair.coset = parse_coset(f[2]);
    cert.pair.coords = {to_int(f[3], "i"), to_int(f[4], "j"), to_int(f[5], "k")};
    cert.plane.normal = {to_real(f[6], "normal"), to_real(f[7], "normal"), to_real(f[8], "normal")};
    cert.plane.offset = to_real(f[9], "offset");
    cert.margin_a = to_real(f[10], "margin_a");
    cert.margin_b = to_real(f[11], "margin_b");
    if (cert.margin_b - cert.margin_a > rep.tol) rep.failures.push_back(rep.certificates.size());
    rep.certificates.push_back(cert);
  }
  if (static_cast<int>(rep.certificates.size()) != declared) {
    throw ParseError("pair count does not match the header");
  }
  return rep;
}

std::vector<cluster::Tetra> packing_tetrahedra(const cluster::Cluster& c,
                                               const packing::LatticeBasis& basis, double radius) {
  std::vector<cluster::Tetra> out = c.tetrahedra();
  const auto positive = c.tetrahedra();
  for (const auto& n : packing::enumerate_neighbors(basis, radius)) {
    for (cluster::Tetra t : positive) {
      for (auto& v : t.vertices) v = (n.coset == Coset::negative ? -v : v) + n.offset;
      out.push_back(t);
    }
  }
  return out;
}

void write_obj(std::ostream& os, const std::vector<cluster::Tetra>& tets) {
  os << "# tetrapack mesh: " << tets.size() << " tetrahedra\n";
  int base = 1;
  for (std::size_t n = 0; n < tets.size(); ++n) {
    const auto& v = tets[n].vertices;
    os << "o tet_" << n << "\n";
    for (const auto& p : v) os << "v " << fmt_vec(p) << "\n";
    const geom::Vec3 centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
    constexpr int faces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    for (const auto& f : faces) {
      int a = f[0], b = f[1], cc = f[2];
      // Flip to make the face counterclockwise seen from outside.
      if ((v[b] - v[a]).cross(v[cc] - v[a]).dot(v[a] - centre) < 0.0) std::swap(b, cc);
      os << "f " << base + a << " " << base + b << " " << base + cc << "\n";
    }
    base += 4;
  }
}

std::vector<ObjObject> parse_obj(std::istream& is) {
  std::vector<ObjObject> objects;
  std::vector<geom::Vec3> all;
  std::vector<int> owner_start;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "o") {
      objects.emplace_back();
      ls >> objects.back().name;
      owner_start.push_back(static_cast<int>(all.size()));
    } else if (tag == "v") {
      geom::Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) throw ParseError("bad vertex line: " + line);
      all.push_back(p);
      if (objects.empty()) throw ParseError("vertex before any object");
      objects.back().vertices.push_back(p);
    } else if (tag == "f") {
      std::array<int, 3> f{};
      if (!(ls >> f[0] >> f[1] >> f[2])) throw ParseError("bad face line: " + line);
      if (objects.empty()) throw ParseError("face before any object");
      for (int& i : f) {
        i = i - 1 - owner_start.back();
        if (i < 0 || i >= static_cast<int>(objects.back().vertices.size())) {
          throw ParseError("face index outside its object: " + line);
        }
      }
      objects.back().triangles.push_back(f);
    } else {
      throw ParseError("unsupported OBJ record: " + line);
    }
  }
  return objects;
}

void write_reference(std::ostream& os, const std::vector<verify::NamedConstant>& constants) {
  os << "name published computed\n";
  for (const auto& c : constants) {
    os << c.name << " " << (c.published.empty() ? "-" : c.published) << " " << fmt::format("{:.12f}", c.value)
       << "\n";
  }
}

void write_manifest(std::ostream& os, const Manifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["config"] = m.config;
  j["tool_version"] = "1.0.0";
  const auto now = std::chrono::system_clock::now();
  j["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& path : m.inputs) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    inputs.push_back({{"path", path}, {"hash", fmt::format("{:016x}", std::hash<std::string>{}(ss.str()))}});
  }
  j["inputs"] = inputs;
  j["outputs"] = m.outputs;
  os << j.dump(2) << "\n";
}

}  // namespace tetrapack::io
