#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "singforge/boundary.hpp"
#include "singforge/disk.hpp"
#include "singforge/field.hpp"
#include "singforge/flow.hpp"

namespace sf {

// Field plus the mesh it points at, as loaded from a field JSON document.
// The mesh sits behind a shared_ptr so the bundle can be moved around
// without invalidating field.mesh.
struct FieldBundle {
  std::shared_ptr<const TriMesh> mesh;
  TangentField field;
  // Resolved path of the referenced mesh file (base_dir already applied);
  // empty when the document embedded the mesh inline.
  std::string mesh_ref;
};

// Field JSON: {"mesh": path or inline OFF text, "faces": [{"theta", "mag"}
// ...] in face order, "singular": [vertex ids]}. The singular array persists
// the marked vertices (zero-index prescriptions that keep their identity);
// nonzero-index points are implied by the face data and recomputed on
// demand. Doubles round-trip bit-exactly. A mesh string counts as inline OFF
// when it starts with the OFF magic and contains a newline; relative paths
// resolve against base_dir. Throws ParseError.
FieldBundle load_field_json(std::istream& in, const std::string& base_dir);
FieldBundle load_field_json_file(const std::string& path);

// Serializes back to field JSON. Empty mesh_ref embeds the mesh inline.
std::string field_json(const TangentField& f, const std::string& mesh_ref = "");

// {"loops":[{"zeros":[{"vertex","index","direction"}], "delta_plus",
// "delta_minus"}], "chi", "sum_ind", "holds"}; holds needs both index laws.
std::string boundary_report_json(const BoundaryReport& report);

// {"nodes":[{"vertex","index"}], "arcs":[{"from","to","length"}],
// "contour":{"found","cycle"}}.
std::string flow_graph_json(const TangentField& f, const FlowGraph& graph,
                            const ContourReport& contour, uint64_t seed = 0);

// {"holds":false,"contour":[...]} when a cycle blocks the construction,
// otherwise {"holds":true,"ranks":[{"vertex","rank"}]} in rank order.
std::string lyapunov_json(const ContourReport& contour, const LyapunovFunction* potential);

// {"model","samples","k","census_holds","crossings":[{"t","level",
// "increasing"}],"entry":[{"t","level","pass","worst"}]}.
std::string disk_profile_json(const AngleProfile& profile, const std::string& model,
                              int samples, bool census_holds,
                              const std::vector<EntryCheck>& entry);

// Figure plumbing. Flat meshes (all face normals parallel) draw in their own
// plane; anything else falls back to an axis-aligned orthographic view onto
// xy and says so in a <desc> element.
struct RenderSpec {
  int canvas = 640;  // square canvas edge in px, at least 64
  int density = 1;   // arrows per face, at least 1
  double stroke_mesh = 0.4;
  double stroke_arrow = 1.0;
  double stroke_path = 1.4;
  std::string positive = "#c0392b";  // marker fill by index sign
  std::string negative = "#2471a3";
  std::string zero = "#7f8c8d";
};

// Deterministic SVG: stable element order (faces, arrows, paths, markers,
// labels), every coordinate printed with six decimals. Faces render as
// polygons, each face carries `density` arrows with the first at the
// barycenter, singular vertices as circles labeled with their index,
// trajectories as polylines. Throws ConditionViolated on a bad spec.
std::string render_svg(const TriMesh& mesh, const RenderSpec& spec);
std::string render_svg(const TangentField& f, const RenderSpec& spec,
                       const std::vector<Trajectory>& paths = {}, uint64_t seed = 0);

}  // namespace sf
