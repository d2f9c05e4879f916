// geoloop: validate tetrahedron specs, build loops, trace geodesics, render
// developments. Exit codes: 0 valid/exists, 1 invalid/blocked, 2 usage,
// parse or internal error.

#include <CLI11.hpp>

#include "geoloop/report.hpp"
#include "geoloop/svg.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace geoloop;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kBlocked = 1;
constexpr int kError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Tolerances tolerances() {
  Tolerances tol;
  if (const char* s = std::getenv("GEOLOOP_EPS_GEOM")) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !(v > 0.0)) throw UsageError("GEOLOOP_EPS_GEOM must be a positive number");
    tol.eps_geom = v;
  }
  return tol;
}

TetraSpec load_valid(const std::string& path, const Tolerances& tol) {
  TetraSpec spec = read_tetra_spec(path);
  for (const Violation& v : spec_violations(spec, tol))
    if (v.fatal) throw InvalidData("invalid tetrahedron: " + v.message);
  return spec;
}

VertexId vertex_arg(const std::string& s) {
  const auto v = topo::parse_vertex(s);
  if (!v) throw UsageError("unknown vertex " + s);
  return *v;
}

std::pair<int, int> pq_arg(const std::string& s) {
  int p = 0, q = 0;
  char comma = 0;
  std::istringstream in(s);
  if (!(in >> p >> comma >> q) || comma != ',' || !in.eof()) throw UsageError("--pq expects p,q");
  if (p < 0 || q < 0 || (p == 0 && q == 0) || std::gcd(p, q) != 1) throw UsageError("not coprime");
  return {p, q};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw UsageError("cannot write " + out_path);
  f << text;
}

int cmd_validate(const std::string& path) {
  const TetraSpec spec = read_tetra_spec(path);
  bool valid = true;
  for (const Violation& v : spec_violations(spec, tolerances())) {
    std::cout << violation_json(v).dump() << "\n";
    valid = valid && !v.fatal;
  }
  return valid ? kOk : kBlocked;
}

// Loop attempt that never throws; closed geodesic added on hyperbolic input.
json hyperbolic_or_flat_report(const TetraSpec& spec, VertexId v, int p, int q, bool force, const Tolerances& tol,
                               int& worst) {
  try {
    const TetraMetric& t = spec.metric;
    const bool general = t.kappa() == Curvature::Hyperbolic && !t.is_regular(1e-12) && !force;
    LoopResult r = general ? general_vertex_loop(t, p, q, v, tol) : attempt_vertex_loop(t, p, q, v, tol);
    if (r.walk.ok() && t.kappa() == Curvature::Hyperbolic && is_simple(r.loop, tol).simple)
      r.closed = closed_geodesic(t, r.sequence, false, tol);
    json rep = loop_report(spec, r, tol);
    if (rep["status"] != "exists") worst = std::max(worst, kBlocked);
    return rep;
  } catch (const GeometryError& e) {
    const bool blocked = e.kind() == ErrorKind::LoopConstructionFailed;
    // Valid input that the construction does not cover is a data outcome.
    const bool data = blocked || e.kind() == ErrorKind::HypothesesNotMet;
    worst = std::max(worst, data ? kBlocked : kError);
    json rep = error_report(spec, v, std::pair{p, q}, e.what(), tol);
    if (blocked) rep["status"] = "blocked";
    return rep;
  }
}

int cmd_loops(const std::string& path, const std::string& vertex, const std::string& pq, bool all, bool force,
              const std::string& out_dir) {
  const Tolerances tol = tolerances();
  const TetraSpec spec = load_valid(path, tol);
  const TetraMetric& t = spec.metric;
  std::vector<std::pair<std::string, json>> reports;
  int worst = kOk;

  std::vector<VertexId> vertices;
  if (all || vertex.empty()) {
    if (t.kappa() == Curvature::Spherical || all)
      for (VertexId v = 0; v < topo::kVertices; ++v) vertices.push_back(v);
    else
      vertices.push_back(0);
  } else {
    vertices.push_back(vertex_arg(vertex));
  }

  if (t.kappa() == Curvature::Spherical) {
    if (!pq.empty()) throw UsageError("--pq applies to hyperbolic and flat tetrahedra only");
    const LoopCensus census = loop_census(t, tol);
    for (VertexId v : vertices)
      for (const LoopCandidate& c : census.rows[v].candidates) {
        json rep = candidate_report(spec, c, tol);
        if (c.status != CandidateStatus::Exists) worst = std::max(worst, kBlocked);
        reports.push_back({"loop_" + topo::vertex_name(v) + "_" + topo::vertex_name(c.middle) + ".json", rep});
      }
  } else {
    if (pq.empty()) throw UsageError("--pq is required on hyperbolic and flat tetrahedra");
    const auto [p, q] = pq_arg(pq);
    for (VertexId v : vertices) {
      json rep = hyperbolic_or_flat_report(spec, v, p, q, force, tol, worst);
      reports.push_back({"loop_" + topo::vertex_name(v) + "_" + std::to_string(p) + "_" + std::to_string(q) + ".json",
                         rep});
    }
  }

  if (out_dir.empty()) {
    for (const auto& [name, rep] : reports) std::cout << rep.dump() << "\n";
  } else {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, rep] : reports) emit(rep.dump(2) + "\n", (std::filesystem::path(out_dir) / name).string());
  }
  return worst;
}

int cmd_trace(const std::string& path, const std::string& face, const std::pair<std::string, double>& edge_point,
              double angle, double max_length) {
  const Tolerances tol = tolerances();
  const TetraSpec spec = load_valid(path, tol);
  if (!(max_length > 0.0)) throw UsageError("--max-length must be positive");
  const auto f = topo::parse_face(face);
  if (!f) throw UsageError("unknown face " + face);
  const auto e = topo::parse_edge(edge_point.first);
  if (!e || !topo::face_has_edge(*f, *e)) throw UsageError("edge " + edge_point.first + " is not on face " + face);
  if (!(edge_point.second > 0.0 && edge_point.second < 1.0)) throw UsageError("edge point must lie inside the edge");
  try {
    const ShotStart s = edge_start(spec.metric, *f, *e, edge_point.second, angle);
    const SurfaceCurve c = shoot(spec.metric, s.point, s.direction, max_length, tol);
    std::cout << trace_report(c, tol).dump() << "\n";
  } catch (const GeometryError& err) {
    throw UsageError(std::string("invalid start: ") + err.what());
  }
  return kOk;
}

int cmd_render(const std::string& path, const std::string& projection, const std::string& out,
               const std::string& vertex, const std::string& middle, const std::string& pq) {
  const Tolerances tol = tolerances();
  const auto proj = parse_projection(projection);
  if (!proj) throw UsageError("unknown projection " + projection);
  const json doc = read_json_file(path);
  const bool is_report = doc.is_object() && doc.contains("tetra");
  const TetraSpec spec = parse_tetra_spec(is_report ? doc["tetra"] : doc);
  for (const Violation& v : spec_violations(spec, tol))
    if (v.fatal) throw InvalidData("invalid tetrahedron: " + v.message);
  const TetraMetric& t = spec.metric;
  if (projection_curvature(*proj) != t.kappa()) throw UsageError("projection does not match the curvature");

  std::string vname = vertex, mname = middle, pqs = pq;
  if (is_report) {
    vname = doc.value("vertex", "A1");
    if (doc.contains("middle")) mname = doc["middle"].get<std::string>();
    if (doc.contains("type") && doc["type"].is_array())
      pqs = std::to_string(doc["type"][0].get<int>()) + "," + std::to_string(doc["type"][1].get<int>());
  }
  const VertexId v = vertex_arg(vname.empty() ? "A1" : vname);

  SvgOptions opt;
  std::string svg;
  if (t.kappa() == Curvature::Spherical) {
    const VertexId m = vertex_arg(mname.empty() ? (v == 0 ? "A2" : "A1") : mname);
    if (m == v) throw UsageError("middle vertex must differ from the apex");
    LoopCandidate c;
    for (LoopCandidate& cand : enumerate_candidates(t, v, tol))
      if (cand.middle == m) c = resolve_candidate(std::move(cand), tol);
    opt.title = "apex " + topo::vertex_name(v) + ", middle " + topo::vertex_name(m);
    svg = render_svg(c.development, *proj, {c.walk}, opt);
  } else {
    if (pqs.empty()) throw UsageError("--pq is required on hyperbolic and flat tetrahedra");
    const auto [p, q] = pq_arg(pqs);
    const LoopResult r = attempt_vertex_loop(t, p, q, v, tol);
    opt.title = "D(" + std::to_string(p) + "," + std::to_string(q) + ") at " + topo::vertex_name(v);
    svg = render_svg(r.development, *proj, {r.walk}, opt);
  }
  emit(svg, out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simple geodesic loops on tetrahedra of constant curvature"};
  app.require_subcommand(1);

  std::string path, vertex, pq, middle, out, projection = "poincare", face;
  bool all = false, force = false;
  std::pair<std::string, double> edge_point;
  double angle = 0.0, max_length = 0.0;

  auto* validate = app.add_subcommand("validate", "Check a tetrahedron spec");
  validate->add_option("spec", path, "Tetrahedron JSON")->required();

  auto* loops = app.add_subcommand("loops", "Build loop reports");
  loops->add_option("spec", path, "Tetrahedron JSON")->required();
  loops->add_option("--vertex", vertex, "Loop vertex (A1..A4)");
  loops->add_option("--pq", pq, "Type p,q (hyperbolic and flat)");
  loops->add_flag("--all", all, "All vertices");
  loops->add_flag("--force", force, "Skip the angle hypotheses on irregular hyperbolic input");
  loops->add_option("--out-dir", out, "Write one file per report instead of JSON lines");

  auto* trace = app.add_subcommand("trace", "Shoot a geodesic from an edge point");
  trace->add_option("spec", path, "Tetrahedron JSON")->required();
  trace->add_option("--face", face, "Start face, e.g. A1A2A3")->required();
  trace->add_option("--edge-point", edge_point, "Edge and fraction, e.g. A1A2 0.5")->required();
  trace->add_option("--angle", angle, "Angle from the edge direction, radians")->required();
  trace->add_option("--max-length", max_length, "Length cap")->required();

  auto* render = app.add_subcommand("render", "Draw a development as SVG");
  render->add_option("input", path, "Loop report or tetrahedron JSON")->required();
  render->add_option("--projection", projection, "stereographic | poincare | plane");
  render->add_option("--out", out, "SVG file (default: standard output)");
  render->add_option("--vertex", vertex, "Loop vertex");
  render->add_option("--middle", middle, "Middle vertex (spherical)");
  render->add_option("--pq", pq, "Type p,q");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*validate) return cmd_validate(path);
    if (*loops) return cmd_loops(path, vertex, pq, all, force, out);
    if (*trace) return cmd_trace(path, face, edge_point, angle, max_length);
    if (*render) return cmd_render(path, projection, out, vertex, middle, pq);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const InvalidData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBlocked;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
