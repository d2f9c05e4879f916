#include "geoloop/report.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace geoloop {

using nlohmann::json;

namespace {

double positive_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw SchemaError(what + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x) || !(x > 0.0)) throw SchemaError(what + ": must be finite and positive");
  return x;
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw SchemaError(where + ": unknown field \"" + it.key() + "\"");
}

json optional_edge_point(const std::optional<EdgePoint>& p) { return p ? edge_point_json(*p) : json(nullptr); }

json clearance_json(const std::vector<ClearanceEntry>& entries) {
  json out = json::array();
  for (const ClearanceEntry& e : entries) {
    if (!e.applicable) continue;
    out.push_back({{"vertex", topo::vertex_name(e.vertex)},
                   {"d", e.d},
                   {"bound", e.bound},
                   {"margin", e.margin},
                   {"wrap_margin", e.wrap_margin}});
  }
  return out;
}

json base_report(const TetraSpec& spec, VertexId vertex) {
  json r;
  r["tetra"] = spec.source;
  r["vertex"] = topo::vertex_name(vertex);
  return r;
}

std::string witness_kind(WalkOutcome o) { return to_string(o); }

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

TetraSpec parse_tetra_spec(const json& doc) {
  if (!doc.is_object()) throw SchemaError("tetrahedron spec must be a JSON object");
  only_keys(doc, {"curvature", "edges", "regular"}, "spec");
  if (!doc.contains("curvature")) throw SchemaError("spec: missing \"curvature\"");
  const json& kj = doc["curvature"];
  if (!kj.is_number_integer()) throw SchemaError("curvature: expected 1, 0 or -1");
  const int k = kj.get<int>();
  if (k != 1 && k != 0 && k != -1) throw SchemaError("curvature: expected 1, 0 or -1");
  if (doc.contains("edges") == doc.contains("regular"))
    throw SchemaError("spec: exactly one of \"edges\" and \"regular\" is required");

  TetraSpec spec;
  spec.source = doc;
  spec.kappa = k == 1 ? Curvature::Spherical : k == 0 ? Curvature::Flat : Curvature::Hyperbolic;
  try {
    if (doc.contains("edges")) {
      const json& ej = doc["edges"];
      if (!ej.is_object()) throw SchemaError("edges: expected an object");
      std::array<double, 6> edges{};
      std::set<std::string> names;
      for (EdgeId e = 0; e < topo::kEdges; ++e) names.insert(topo::edge_name(e));
      only_keys(ej, names, "edges");
      for (EdgeId e = 0; e < topo::kEdges; ++e) {
        const std::string n = topo::edge_name(e);
        if (!ej.contains(n)) throw SchemaError("edges: missing \"" + n + "\"");
        edges[e] = positive_number(ej[n], "edges." + n);
      }
      spec.metric = TetraMetric(spec.kappa, edges);
    } else {
      const json& rj = doc["regular"];
      if (!rj.is_object()) throw SchemaError("regular: expected an object");
      only_keys(rj, {"face_angle", "edge"}, "regular");
      if (rj.contains("face_angle") == rj.contains("edge"))
        throw SchemaError("regular: exactly one of \"face_angle\" and \"edge\" is required");
      if (rj.contains("face_angle"))
        spec.metric = TetraMetric::regular_from_angle(spec.kappa, positive_number(rj["face_angle"], "regular.face_angle"));
      else
        spec.metric = TetraMetric::regular_from_edge(spec.kappa, positive_number(rj["edge"], "regular.edge"));
    }
  } catch (const GeometryError& e) {
    Violation v;
    v.code = to_string(e.kind());
    v.message = e.what();
    spec.construction_error = v;
  }
  return spec;
}

TetraSpec read_tetra_spec(const std::string& path) { return parse_tetra_spec(read_json_file(path)); }

std::vector<Violation> spec_violations(const TetraSpec& spec, const Tolerances& tol) {
  if (spec.construction_error) return {*spec.construction_error};
  return validate(spec.metric, tol);
}

json violation_json(const Violation& v) {
  json j{{"code", v.code}, {"message", v.message}, {"fatal", v.fatal}};
  if (v.face) j["face"] = topo::face_name(*v.face);
  if (v.vertex) j["vertex"] = topo::vertex_name(*v.vertex);
  return j;
}

json edge_point_json(const EdgePoint& p) { return {{"edge", topo::edge_name(p.edge)}, {"t", p.t}}; }

json segments_json(const SurfaceCurve& c) {
  json out = json::array();
  for (const CurveSegment& s : c.segments)
    out.push_back({{"face", topo::face_name(s.face)},
                   {"enter", optional_edge_point(s.enter)},
                   {"exit", optional_edge_point(s.exit)},
                   {"length", s.length}});
  return out;
}

json signature_json(const CrossingSignature& s) {
  json out = json::object();
  for (EdgeId e = 0; e < topo::kEdges; ++e) out[topo::edge_name(e)] = s.counts[e];
  return out;
}

json numerics_json(const Tolerances& tol, double max_residual) {
  return {{"epsilons",
           {{"norm", tol.eps_norm},
            {"geom", tol.eps_geom},
            {"trig", tol.eps_trig},
            {"vertex", tol.eps_vertex},
            {"close", tol.eps_close},
            {"antipodal", tol.eps_antipodal},
            {"class", tol.eps_class}}},
          {"max_residual", max_residual}};
}

json candidate_report(const TetraSpec& spec, const LoopCandidate& c, const Tolerances& tol) {
  json r = base_report(spec, c.apex);
  r["middle"] = topo::vertex_name(c.middle);
  r["type"] = nullptr;
  double residual = c.development.max_residual();
  if (c.status == CandidateStatus::Exists && c.curve) {
    r["status"] = "exists";
    r["witness"] = nullptr;
    r["length"] = c.curve->length();
    r["segments"] = segments_json(*c.curve);
    r["signature"] = signature_json(signature(*c.curve));
    residual = std::max(residual, junction_residual(c.development.metric(), *c.curve));
  } else {
    r["status"] = "blocked";
    json w{{"kind", c.witness}, {"margin", c.margin}};
    if (c.witness_vertex) w["vertex"] = topo::vertex_name(*c.witness_vertex);
    if (c.witness_edge) w["edge"] = topo::edge_name(*c.witness_edge);
    r["witness"] = w;
    r["length"] = nullptr;
    r["segments"] = json::array();
    r["signature"] = signature_json({});
  }
  r["clearance"] = json::array();
  r["numerics"] = numerics_json(tol, residual);
  return r;
}

json loop_report(const TetraSpec& spec, const LoopResult& res, const Tolerances& tol) {
  json r = base_report(spec, res.vertex);
  r["type"] = {res.p, res.q};
  double residual = res.development.max_residual();
  if (res.walk.ok() && !res.loop.segments.empty()) {
    const SimplicityReport s = is_simple(res.loop, tol);
    r["status"] = s.simple ? "exists" : "blocked";
    r["witness"] = s.simple ? json(nullptr) : json{{"kind", "self intersection"}, {"detail", s.reason}};
    r["length"] = res.loop.length();
    r["segments"] = segments_json(res.loop);
    r["signature"] = signature_json(res.sig);
    r["clearance"] = clearance_json(res.clearance);
    residual = std::max(residual, junction_residual(res.development.metric(), res.loop));
  } else {
    r["status"] = "blocked";
    json w{{"kind", witness_kind(res.walk.outcome)}, {"margin", res.walk.margin}};
    if (res.walk.vertex) w["vertex"] = topo::vertex_name(*res.walk.vertex);
    if (res.walk.exit_edge) w["edge"] = topo::edge_name(*res.walk.exit_edge);
    r["witness"] = w;
    r["length"] = nullptr;
    r["segments"] = json::array();
    r["signature"] = signature_json({});
    r["clearance"] = json::array();
  }
  if (res.closed) {
    const ClosedGeodesic& g = *res.closed;
    r["closed_geodesic"] = {{"length", g.curve.length()},
                            {"translation_length", g.holonomy.translation_length},
                            {"trace", g.holonomy.trace},
                            {"closure_error", g.curve.closure_error},
                            {"segments", segments_json(g.curve)},
                            {"signature", signature_json(g.sig)}};
    residual = std::max({residual, g.curve.closure_error, g.holonomy.axis_residual});
  }
  r["numerics"] = numerics_json(tol, residual);
  return r;
}

json error_report(const TetraSpec& spec, VertexId vertex, std::optional<std::pair<int, int>> type,
                  const std::string& message, const Tolerances& tol) {
  json r = base_report(spec, vertex);
  r["type"] = type ? json{type->first, type->second} : json(nullptr);
  r["status"] = "error";
  r["witness"] = {{"kind", "error"}, {"message", message}};
  r["length"] = nullptr;
  r["segments"] = json::array();
  r["signature"] = signature_json({});
  r["clearance"] = json::array();
  r["numerics"] = numerics_json(tol, 0.0);
  return r;
}

json trace_report(const SurfaceCurve& c, const Tolerances& tol) {
  json crossings = json::array();
  for (const EdgePoint& p : c.crossings()) crossings.push_back(edge_point_json(p));
  json r{{"stop", to_string(c.stop)},
         {"length", c.length()},
         {"crossings", crossings},
         {"segments", segments_json(c)},
         {"closed", c.closed},
         {"closure_error", c.closure_error}};
  r["hit_vertex"] = c.hit_vertex ? json(topo::vertex_name(*c.hit_vertex)) : json(nullptr);
  if (c.closed && !c.segments.empty()) r["signature"] = signature_json(signature(c));
  r["numerics"] = numerics_json(tol, c.closure_error);
  return r;
}

ReportCheck verify_report(const json& report, double eps) {
  ReportCheck out;
  out.status = report.value("status", "");
  const json& segs = report.at("segments");
  std::array<int, 6> recount{};
  std::optional<FaceId> prev_face;
  EdgeId prev_edge = -1;  // exit of the previous segment, -1 if none
  double prev_t = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const json& s = segs[i];
    const auto face = topo::parse_face(s.at("face").get<std::string>());
    if (!face) {
      out.chained = false;
      out.problems.push_back("segment " + std::to_string(i) + ": unknown face");
      continue;
    }
    std::optional<EdgePoint> enter;
    if (!s.at("enter").is_null()) {
      const auto e = topo::parse_edge(s["enter"].at("edge").get<std::string>());
      if (e) enter = EdgePoint{*e, s["enter"].at("t").get<double>()};
    }
    if (prev_edge >= 0) {
      const bool same = enter && enter->edge == prev_edge && std::abs(enter->t - prev_t) <= eps && prev_face &&
                        topo::across(*prev_face, prev_edge) == *face;
      if (!same) {
        out.chained = false;
        out.problems.push_back("segment " + std::to_string(i) + " does not continue segment " + std::to_string(i - 1));
      }
    }
    prev_edge = -1;
    if (!s.at("exit").is_null()) {
      const auto e = topo::parse_edge(s["exit"].at("edge").get<std::string>());
      if (e) {
        prev_edge = *e;
        prev_t = s["exit"].at("t").get<double>();
        ++recount[*e];
      } else {
        out.chained = false;
        out.problems.push_back("segment " + std::to_string(i) + ": unknown exit edge");
      }
    }
    prev_face = face;
  }
  const json& sig = report.at("signature");
  for (EdgeId e = 0; e < topo::kEdges; ++e) {
    const int claimed = sig.value(topo::edge_name(e), 0);
    if (claimed != recount[e]) {
      out.counts_match = false;
      out.problems.push_back("signature count for " + topo::edge_name(e) + " is " + std::to_string(claimed) +
                             ", recount " + std::to_string(recount[e]));
    }
  }
  return out;
}

}  // namespace geoloop
