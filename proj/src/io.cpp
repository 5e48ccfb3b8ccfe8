#include "singforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace sf {

namespace {

using nlohmann::ordered_json;

// A bare path never contains a newline, so "OFF" + newline means the mesh
// text itself was embedded in the document.
bool looks_inline_off(const std::string& text) {
  return text.rfind("OFF", 0) == 0 && text.find('\n') != std::string::npos;
}

void appendf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  out += buf;
}

}  // namespace

FieldBundle load_field_json(std::istream& in, const std::string& base_dir) {
  FieldBundle bundle;
  try {
    ordered_json doc = ordered_json::parse(in);
    std::string mesh_entry = doc.at("mesh").get<std::string>();
    std::shared_ptr<TriMesh> mesh;
    if (looks_inline_off(mesh_entry)) {
      std::istringstream off(mesh_entry);
      mesh = std::make_shared<TriMesh>(load_off(off));
    } else {
      std::string path = mesh_entry;
      if (!base_dir.empty() && !path.empty() && path[0] != '/') {
        path = base_dir + "/" + path;
      }
      mesh = std::make_shared<TriMesh>(load_off_file(path));
      bundle.mesh_ref = path;
    }
    std::vector<double> theta, mag;
    for (const auto& item : doc.at("faces")) {
      theta.push_back(item.at("theta").get<double>());
      mag.push_back(item.at("mag").get<double>());
    }
    std::vector<int> marked;
    if (doc.contains("singular")) {
      for (const auto& item : doc.at("singular")) marked.push_back(item.get<int>());
    }
    bundle.field = make_field(*mesh, std::move(theta), std::move(mag), std::move(marked));
    bundle.mesh = std::move(mesh);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field json: ") + e.what());
  }
  return bundle;
}

FieldBundle load_field_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::string dir;
  std::string::size_type slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return load_field_json(in, dir);
}

std::string field_json(const TangentField& f, const std::string& mesh_ref) {
  ordered_json doc;
  if (mesh_ref.empty()) {
    std::ostringstream off;
    save_off(*f.mesh, off);
    doc["mesh"] = off.str();
  } else {
    doc["mesh"] = mesh_ref;
  }
  ordered_json faces = ordered_json::array();
  for (std::size_t i = 0; i < f.theta.size(); ++i) {
    faces.push_back({{"theta", f.theta[i]}, {"mag", f.mag[i]}});
  }
  doc["faces"] = std::move(faces);
  doc["singular"] = f.marked;
  return doc.dump(2) + "\n";
}

std::string boundary_report_json(const BoundaryReport& report) {
  ordered_json loops = ordered_json::array();
  for (const BoundaryCensus& census : report.loops) {
    ordered_json zeros = ordered_json::array();
    for (const BoundaryZero& z : census.zeros) {
      zeros.push_back({{"vertex", z.vertex},
                       {"index", z.index},
                       {"direction",
                        z.direction == ZeroDirection::Inward ? "inward" : "outward"}});
    }
    loops.push_back({{"zeros", std::move(zeros)},
                     {"delta_plus", census.delta_plus},
                     {"delta_minus", census.delta_minus}});
  }
  ordered_json doc{{"loops", std::move(loops)},
                   {"chi", report.chi},
                   {"sum_ind", report.sum_ind},
                   {"holds", report.eq_plus_holds && report.eq_minus_holds}};
  return doc.dump(2) + "\n";
}

std::string flow_graph_json(const TangentField& f, const FlowGraph& graph,
                            const ContourReport& contour, uint64_t seed) {
  std::map<int, int> index;
  for (const SingularPoint& p : singular_set(f, seed)) index[p.vertex] = p.index;
  ordered_json nodes = ordered_json::array();
  for (int v : graph.nodes) {
    auto it = index.find(v);
    nodes.push_back({{"vertex", v}, {"index", it == index.end() ? 0 : it->second}});
  }
  ordered_json arcs = ordered_json::array();
  for (const FlowArc& a : graph.arcs) {
    arcs.push_back({{"from", a.from}, {"to", a.to}, {"length", a.witness.total_length}});
  }
  ordered_json doc{{"nodes", std::move(nodes)},
                   {"arcs", std::move(arcs)},
                   {"contour", {{"found", contour.found}, {"cycle", contour.cycle}}}};
  return doc.dump(2) + "\n";
}

std::string lyapunov_json(const ContourReport& contour, const LyapunovFunction* potential) {
  ordered_json doc;
  doc["holds"] = !contour.found;
  if (contour.found) {
    doc["contour"] = contour.cycle;
  } else {
    std::vector<std::pair<double, int>> order;
    for (const auto& entry : potential->rank) order.push_back({entry.second, entry.first});
    std::sort(order.begin(), order.end());
    ordered_json ranks = ordered_json::array();
    for (const auto& entry : order) {
      ranks.push_back({{"vertex", entry.second}, {"rank", entry.first}});
    }
    doc["ranks"] = std::move(ranks);
  }
  return doc.dump(2) + "\n";
}

std::string disk_profile_json(const AngleProfile& profile, const std::string& model,
                              int samples, bool census_holds,
                              const std::vector<EntryCheck>& entry) {
  ordered_json crossings = ordered_json::array();
  for (const LevelCrossing& c : profile.crossings) {
    crossings.push_back({{"t", c.t}, {"level", c.level}, {"increasing", c.increasing}});
  }
  ordered_json checks = ordered_json::array();
  for (const EntryCheck& e : entry) {
    checks.push_back({{"t", e.crossing.t},
                      {"level", e.crossing.level},
                      {"pass", e.pass},
                      {"worst", e.worst}});
  }
  ordered_json doc{{"model", model},
                   {"samples", samples},
                   {"k", profile.k},
                   {"census_holds", census_holds},
                   {"crossings", std::move(crossings)},
                   {"entry", std::move(checks)}};
  return doc.dump(2) + "\n";
}

namespace {

// Uniform fit of the projected mesh into a square canvas with a 5% border;
// the v axis flips because svg y grows downward.
struct View {
  Vec3 axis_u, axis_v;
  double minx = 0.0, miny = 0.0, scale = 1.0, pad = 0.0;
  int size = 0;
  bool flat = false;

  void map(const Vec3& p, double* x, double* y) const {
    *x = pad + (dot(p, axis_u) - minx) * scale;
    *y = size - pad - (dot(p, axis_v) - miny) * scale;
  }
};

View fit_view(const TriMesh& mesh, const RenderSpec& spec) {
  if (spec.canvas < 64) throw Error(ErrorCode::ConditionViolated, "canvas below 64 px");
  if (spec.density < 1) throw Error(ErrorCode::ConditionViolated, "density below 1");
  View view;
  view.size = spec.canvas;
  view.pad = 0.05 * spec.canvas;
  Vec3 n0 = mesh.normal(0);
  view.flat = true;
  for (int f = 1; f < mesh.n_faces(); ++f) {
    if (norm(cross(n0, mesh.normal(f))) > 1e-9) {
      view.flat = false;
      break;
    }
  }
  if (view.flat) {
    view.axis_u = mesh.frame_e1(0);
    view.axis_v = cross(n0, view.axis_u);
  } else {
    view.axis_u = Vec3{1.0, 0.0, 0.0};
    view.axis_v = Vec3{0.0, 1.0, 0.0};
  }
  double maxx = -1e300, maxy = -1e300;
  view.minx = 1e300;
  view.miny = 1e300;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    double u = dot(mesh.position(v), view.axis_u);
    double w = dot(mesh.position(v), view.axis_v);
    view.minx = std::min(view.minx, u);
    view.miny = std::min(view.miny, w);
    maxx = std::max(maxx, u);
    maxy = std::max(maxy, w);
  }
  double span = std::max(std::max(maxx - view.minx, maxy - view.miny), 1e-12);
  view.scale = (view.size - 2.0 * view.pad) / span;
  return view;
}

void emit_header(std::string& out, const View& view) {
  appendf(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
               "viewBox=\"0 0 %d %d\">\n",
          view.size, view.size, view.size, view.size);
  if (!view.flat) out += "<desc>orthographic fallback: mesh is not flat</desc>\n";
}

void emit_faces(std::string& out, const TriMesh& mesh, const View& view,
                const RenderSpec& spec) {
  appendf(out, "<g id=\"faces\" fill=\"#f4f1ea\" stroke=\"#8a8a8a\" stroke-width=\"%.6f\">\n",
          spec.stroke_mesh);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    out += "<polygon points=\"";
    for (int k = 0; k < 3; ++k) {
      double x, y;
      view.map(mesh.position(mesh.face(f)[k]), &x, &y);
      appendf(out, k == 0 ? "%.6f,%.6f" : " %.6f,%.6f", x, y);
    }
    out += "\"/>\n";
  }
  out += "</g>\n";
}

// Sample s = 0 sits at the barycenter; later samples step toward the
// corners, one ring of three per turn, so any density stays collision-free.
Vec3 arrow_anchor(const TriMesh& mesh, int f, int s) {
  Vec3 bc = mesh.face_centroid(f);
  if (s == 0) return bc;
  int corner = (s - 1) % 3;
  int ring = 1 + (s - 1) / 3;
  double frac = 0.75 * ring / (ring + 1.0);
  return bc + (mesh.position(mesh.face(f)[corner]) - bc) * frac;
}

void emit_arrows(std::string& out, const TangentField& f, const View& view,
                 const RenderSpec& spec) {
  const TriMesh& mesh = *f.mesh;
  appendf(out, "<g id=\"arrows\" fill=\"none\" stroke=\"#1c2833\" stroke-width=\"%.6f\">\n",
          spec.stroke_arrow);
  for (int face = 0; face < mesh.n_faces(); ++face) {
    Vec3 dir = normalized(face_vector(f, face));
    double half = 0.3 * std::sqrt(mesh.face_area(face));
    for (int s = 0; s < spec.density; ++s) {
      Vec3 anchor = arrow_anchor(mesh, face, s);
      double tx, ty, hx, hy;
      view.map(anchor - dir * half, &tx, &ty);
      view.map(anchor + dir * half, &hx, &hy);
      double dx = hx - tx, dy = hy - ty;
      double len = std::sqrt(dx * dx + dy * dy);
      if (len < 1e-6) continue;  // face seen edge-on
      double ux = dx / len, uy = dy / len;
      // barbs at 150 degrees off the shaft, 35% of its length
      double c = -0.8660254037844387 * 0.35 * len, s150 = 0.5 * 0.35 * len;
      double b1x = hx + ux * c - uy * s150, b1y = hy + uy * c + ux * s150;
      double b2x = hx + ux * c + uy * s150, b2y = hy + uy * c - ux * s150;
      appendf(out, "<path d=\"M %.6f %.6f L %.6f %.6f L %.6f %.6f M %.6f %.6f L %.6f %.6f\"/>\n",
              tx, ty, hx, hy, b1x, b1y, hx, hy, b2x, b2y);
    }
  }
  out += "</g>\n";
}

void emit_paths(std::string& out, const std::vector<Trajectory>& paths, const View& view,
                const RenderSpec& spec) {
  if (paths.empty()) return;
  appendf(out, "<g id=\"paths\" fill=\"none\" stroke=\"#7d3c98\" stroke-width=\"%.6f\">\n",
          spec.stroke_path);
  for (const Trajectory& path : paths) {
    if (path.segments.empty()) continue;
    out += "<polyline points=\"";
    double x, y;
    view.map(path.segments.front().a, &x, &y);
    appendf(out, "%.6f,%.6f", x, y);
    for (const TraceSegment& seg : path.segments) {
      view.map(seg.b, &x, &y);
      appendf(out, " %.6f,%.6f", x, y);
    }
    out += "\"/>\n";
  }
  out += "</g>\n";
}

void emit_markers(std::string& out, const TangentField& f, const View& view,
                  const RenderSpec& spec, uint64_t seed) {
  std::vector<SingularPoint> points = singular_set(f, seed);
  out += "<g id=\"singular\" stroke=\"#ffffff\" stroke-width=\"1.000000\">\n";
  for (const SingularPoint& p : points) {
    double x, y;
    view.map(f.mesh->position(p.vertex), &x, &y);
    const std::string& fill =
        p.index > 0 ? spec.positive : (p.index < 0 ? spec.negative : spec.zero);
    appendf(out, "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"4.500000\" fill=\"%s\"/>\n", x, y,
            fill.c_str());
  }
  out += "</g>\n";
  out += "<g id=\"labels\" font-family=\"monospace\" font-size=\"12\" fill=\"#111111\">\n";
  for (const SingularPoint& p : points) {
    double x, y;
    view.map(f.mesh->position(p.vertex), &x, &y);
    appendf(out, "<text x=\"%.6f\" y=\"%.6f\">%d</text>\n", x + 6.0, y - 6.0, p.index);
  }
  out += "</g>\n";
}

}  // namespace

std::string render_svg(const TriMesh& mesh, const RenderSpec& spec) {
  View view = fit_view(mesh, spec);
  std::string out;
  emit_header(out, view);
  emit_faces(out, mesh, view, spec);
  out += "</svg>\n";
  return out;
}

std::string render_svg(const TangentField& f, const RenderSpec& spec,
                       const std::vector<Trajectory>& paths, uint64_t seed) {
  View view = fit_view(*f.mesh, spec);
  std::string out;
  emit_header(out, view);
  emit_faces(out, *f.mesh, view, spec);
  emit_arrows(out, f, view, spec);
  emit_paths(out, paths, view, spec);
  emit_markers(out, f, view, spec, seed);
  out += "</svg>\n";
  return out;
}

}  // namespace sf
