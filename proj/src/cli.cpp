#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "singforge/curve.hpp"
#include "singforge/io.hpp"
#include "singforge/surgery.hpp"

namespace sf {

namespace {

const char kSynopsis[] =
    "usage: singforge <command> [options]\n"
    "  mesh info <mesh.off>\n"
    "  synth closed <mesh.off> [--indices v:i,...]\n"
    "  synth boundary <mesh.off> [--interior v:i,...] [--inward v:i,...] [--outward v:i,...]\n"
    "  synth tangent-curve <mesh.off> --curve v,v,... --points v:b:g,... [--interior v:i,...]\n"
    "  field check <field.json>\n"
    "  field index <field.json> --vertex n\n"
    "  surgery insert-pair <field.json> --at p,q\n"
    "  surgery merge <field.json> --path v,...\n"
    "  flow graph <field.json>\n"
    "  flow lyapunov <field.json>\n"
    "  disk profile --model <m> [--samples n]\n"
    "  disk verdict --model <m>\n"
    "  render <field.json> -o out.svg [--canvas n] [--density n] [--arcs]\n"
    "common: --seed n (or SINGFORGE_SEED), -o file\n";

// Option values land here; only the active leaf reads its slice.
struct Args {
  std::string mesh_path, json_path, out_path, model;
  std::string indices, interior, inward, outward, curve, points, at, path;
  uint64_t seed = 1729;
  int vertex = -1;
  int samples = 256;
  int canvas = 640;
  int density = 1;
  bool arcs = false;
};

// Bad option payloads rank as usage errors, not domain errors.
struct UsageError {
  std::string message;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (start <= text.size()) {
    std::string::size_type end = text.find(sep, start);
    if (end == std::string::npos) end = text.size();
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

int parse_int(const std::string& text, const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw UsageError{std::string(what) + ": bad integer '" + text + "'"};
  }
  return value;
}

std::vector<int> parse_id_list(const std::string& text, const char* what) {
  std::vector<int> ids;
  if (text.empty()) return ids;
  for (const std::string& tok : split(text, ',')) ids.push_back(parse_int(tok, what));
  return ids;
}

std::map<int, int> parse_pair_list(const std::string& text, const char* what) {
  std::map<int, int> want;
  if (text.empty()) return want;
  for (const std::string& tok : split(text, ',')) {
    std::string::size_type colon = tok.find(':');
    if (colon == std::string::npos) {
      throw UsageError{std::string(what) + ": expected v:i, got '" + tok + "'"};
    }
    int v = parse_int(tok.substr(0, colon), what);
    int i = parse_int(tok.substr(colon + 1), what);
    if (want.count(v)) {
      throw UsageError{std::string(what) + ": vertex " + std::to_string(v) + " repeats"};
    }
    want[v] = i;
  }
  return want;
}

std::vector<CurvePoint> parse_curve_points(const std::string& text) {
  std::vector<CurvePoint> points;
  if (text.empty()) return points;
  for (const std::string& tok : split(text, ',')) {
    std::vector<std::string> parts = split(tok, ':');
    if (parts.size() != 3) throw UsageError{"--points: expected v:b:g, got '" + tok + "'"};
    CurvePoint p;
    p.vertex = parse_int(parts[0], "--points");
    p.beta = parse_int(parts[1], "--points");
    p.gamma = parse_int(parts[2], "--points");
    points.push_back(p);
  }
  return points;
}

// Mesh references resolve against the directory of the document that names
// them, so a document written with -o must re-anchor the (cwd-relative)
// resolved path onto its own location. Stdout documents keep the cwd view.
std::string rebase_mesh_ref(const std::string& resolved, const std::string& out_path) {
  namespace fs = std::filesystem;
  if (resolved.empty()) return resolved;  // inline mesh stays inline
  fs::path mesh = fs::path(resolved).lexically_normal();
  if (mesh.is_absolute()) return mesh.generic_string();
  fs::path dir = out_path.empty() ? fs::path() : fs::path(out_path).parent_path();
  if (dir.empty()) return mesh.generic_string();
  fs::path rel = mesh.lexically_relative(dir.lexically_normal());
  if (rel.empty()) rel = fs::absolute(mesh).lexically_normal();
  return rel.generic_string();
}

void write_doc(const std::string& doc, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << doc;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::ParseError, "cannot open " + out_path);
  file << doc;
}

int run_mesh_info(const Args& a, std::ostream& out) {
  TriMesh mesh = load_off_file(a.mesh_path);
  out << "chi=" << mesh.euler_characteristic() << " genus=" << mesh.genus()
      << " boundary_loops=" << mesh.boundary_loops().size() << "\n";
  return 0;
}

int run_synth_closed(const Args& a, std::ostream& out) {
  TriMesh mesh = load_off_file(a.mesh_path);
  TangentField f = synthesize_closed(mesh, parse_pair_list(a.indices, "--indices"), a.seed);
  write_doc(field_json(f, rebase_mesh_ref(a.mesh_path, a.out_path)), a.out_path, out);
  return 0;
}

int run_synth_boundary(const Args& a, std::ostream& out) {
  TriMesh mesh = load_off_file(a.mesh_path);
  TangentField f = synthesize_with_boundary(
      mesh, parse_pair_list(a.interior, "--interior"), parse_pair_list(a.inward, "--inward"),
      parse_pair_list(a.outward, "--outward"), a.seed);
  write_doc(field_json(f, rebase_mesh_ref(a.mesh_path, a.out_path)), a.out_path, out);
  return 0;
}

int run_synth_tangent_curve(const Args& a, std::ostream& out) {
  TriMesh mesh = load_off_file(a.mesh_path);
  EmbeddedCurve curve = make_curve(mesh, parse_id_list(a.curve, "--curve"));
  TangentField f =
      synthesize_tangent_to_curve(mesh, curve, parse_pair_list(a.interior, "--interior"),
                                  parse_curve_points(a.points), a.seed);
  write_doc(field_json(f, rebase_mesh_ref(a.mesh_path, a.out_path)), a.out_path, out);
  return 0;
}

int run_field_check(const Args& a, std::ostream& out) {
  FieldBundle b = load_field_json_file(a.json_path);
  if (b.mesh->is_closed()) {
    IndexReport r = check_poincare_hopf(b.field, a.seed);
    if (r.holds) {
      out << "total=" << r.sum << "=chi\n";
      return 0;
    }
    out << "total=" << r.sum << "!=chi=" << r.chi << "\n";
    return 1;
  }
  BoundaryReport r = check_boundary_laws(b.field, a.seed);
  write_doc(boundary_report_json(r), a.out_path, out);
  return r.eq_plus_holds && r.eq_minus_holds ? 0 : 1;
}

int run_field_index(const Args& a, std::ostream& out) {
  FieldBundle b = load_field_json_file(a.json_path);
  if (a.vertex < 0 || a.vertex >= b.mesh->n_vertices()) {
    throw Error(ErrorCode::ConditionViolated, "vertex out of range");
  }
  out << "vertex=" << a.vertex << " index=" << vertex_index(b.field, a.vertex) << "\n";
  return 0;
}

int run_surgery_insert_pair(const Args& a, std::ostream& out) {
  std::vector<int> at = parse_id_list(a.at, "--at");
  if (at.size() != 2) throw UsageError{"--at needs exactly two vertices"};
  FieldBundle b = load_field_json_file(a.json_path);
  TangentField g = insert_pair(b.field, at[0], at[1], a.seed);
  write_doc(field_json(g, rebase_mesh_ref(b.mesh_ref, a.out_path)), a.out_path, out);
  return 0;
}

int run_surgery_merge(const Args& a, std::ostream& out) {
  std::vector<int> walk = parse_id_list(a.path, "--path");
  if (walk.size() < 2) throw UsageError{"--path needs at least two vertices"};
  FieldBundle b = load_field_json_file(a.json_path);
  TangentField g = merge_singularities(b.field, walk.front(), walk.back(), a.seed);
  write_doc(field_json(g, rebase_mesh_ref(b.mesh_ref, a.out_path)), a.out_path, out);
  return 0;
}

int run_flow_graph(const Args& a, std::ostream& out) {
  FieldBundle b = load_field_json_file(a.json_path);
  FlowGraph graph = field_graph(b.field);
  ContourReport contour = has_contour(graph);
  write_doc(flow_graph_json(b.field, graph, contour, a.seed), a.out_path, out);
  return 0;
}

int run_flow_lyapunov(const Args& a, std::ostream& out) {
  FieldBundle b = load_field_json_file(a.json_path);
  FlowGraph graph = field_graph(b.field);
  ContourReport contour = has_contour(graph);
  if (contour.found) {
    write_doc(lyapunov_json(contour, nullptr), a.out_path, out);
    return 1;
  }
  LyapunovFunction potential = lyapunov(b.field, graph);
  write_doc(lyapunov_json(contour, &potential), a.out_path, out);
  return 0;
}

int run_disk_profile(const Args& a, std::ostream& out) {
  DiskField disk = parse_disk_model(a.model);
  AngleProfile profile = boundary_angle_profile(disk, a.samples);
  bool census = crossing_census_check(profile);
  std::vector<EntryCheck> entry = crossing_entry_check(disk, profile);
  write_doc(disk_profile_json(profile, disk.model, a.samples, census, entry), a.out_path, out);
  bool ok = census;
  for (const EntryCheck& e : entry) ok = ok && e.pass;
  return ok ? 0 : 1;
}

int run_disk_verdict(const Args& a, std::ostream& out) {
  GradientVerdict v = gradient_obstruction(parse_disk_model(a.model));
  out << "k=" << v.k << " gradient_possible=" << (v.gradient_possible ? "true" : "false")
      << "\n";
  out << "reason: " << v.reason << "\n";
  return v.gradient_possible ? 0 : 1;
}

int run_render(const Args& a, std::ostream& out) {
  FieldBundle b = load_field_json_file(a.json_path);
  RenderSpec spec;
  spec.canvas = a.canvas;
  spec.density = a.density;
  std::vector<Trajectory> paths;
  if (a.arcs) {
    FlowGraph graph = field_graph(b.field);
    for (const FlowArc& arc : graph.arcs) paths.push_back(arc.witness);
  }
  write_doc(render_svg(b.field, spec, paths, a.seed), a.out_path, out);
  return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"prescribed-singularity vector field toolkit", "singforge"};
  app.require_subcommand(1);

  auto add_seed = [&a](CLI::App* cmd) {
    cmd->add_option("--seed", a.seed, "construction seed")->envname("SINGFORGE_SEED");
  };
  auto add_out = [&a](CLI::App* cmd) {
    cmd->add_option("-o,--output", a.out_path, "write the document here instead of stdout");
  };

  CLI::App* mesh = app.add_subcommand("mesh", "mesh inspection");
  mesh->require_subcommand(1);
  CLI::App* mesh_info = mesh->add_subcommand("info", "print chi, genus and boundary loop count");
  mesh_info->add_option("off", a.mesh_path, "mesh in OFF format")->required();

  CLI::App* synth = app.add_subcommand("synth", "field synthesis");
  synth->require_subcommand(1);
  CLI::App* synth_closed =
      synth->add_subcommand("closed", "field on a closed surface with a prescribed singular set");
  synth_closed->add_option("off", a.mesh_path, "mesh in OFF format")->required();
  synth_closed->add_option("--indices", a.indices, "v:i,... prescription, omit for none");
  add_seed(synth_closed);
  add_out(synth_closed);
  CLI::App* synth_boundary =
      synth->add_subcommand("boundary", "bounded-surface field with a prescribed boundary census");
  synth_boundary->add_option("off", a.mesh_path, "mesh in OFF format")->required();
  synth_boundary->add_option("--interior", a.interior, "v:i,... interior prescription");
  synth_boundary->add_option("--inward", a.inward, "v:i,... inward boundary zeros");
  synth_boundary->add_option("--outward", a.outward, "v:i,... outward boundary zeros");
  add_seed(synth_boundary);
  add_out(synth_boundary);
  CLI::App* synth_tangent =
      synth->add_subcommand("tangent-curve", "field tangent to an embedded vertex cycle");
  synth_tangent->add_option("off", a.mesh_path, "mesh in OFF format")->required();
  synth_tangent->add_option("--curve", a.curve, "v,v,... closed walk of interior vertices")
      ->required();
  synth_tangent
      ->add_option("--points", a.points, "v:b:g,... curve zeros with curve and surface indices")
      ->required();
  synth_tangent->add_option("--interior", a.interior, "v:i,... prescription off the curve");
  add_seed(synth_tangent);
  add_out(synth_tangent);

  CLI::App* field = app.add_subcommand("field", "field inspection");
  field->require_subcommand(1);
  CLI::App* field_check =
      field->add_subcommand("check", "index law verdict; census report on bounded meshes");
  field_check->add_option("json", a.json_path, "field JSON document")->required();
  add_seed(field_check);
  add_out(field_check);
  CLI::App* field_index = field->add_subcommand("index", "winding index at one vertex");
  field_index->add_option("json", a.json_path, "field JSON document")->required();
  field_index->add_option("--vertex", a.vertex, "vertex id")->required();

  CLI::App* surgery = app.add_subcommand("surgery", "local field surgery");
  surgery->require_subcommand(1);
  CLI::App* surgery_insert =
      surgery->add_subcommand("insert-pair", "create a +1/-1 pair at two regular vertices");
  surgery_insert->add_option("json", a.json_path, "field JSON document")->required();
  surgery_insert->add_option("--at", a.at, "p,q target vertices")->required();
  add_seed(surgery_insert);
  add_out(surgery_insert);
  CLI::App* surgery_merge =
      surgery->add_subcommand("merge", "slide one singular point onto another");
  surgery_merge->add_option("json", a.json_path, "field JSON document")->required();
  surgery_merge
      ->add_option("--path", a.path,
                   "v,... walk; the first vertex keeps the merged point, the last is absorbed")
      ->required();
  add_seed(surgery_merge);
  add_out(surgery_merge);

  CLI::App* flow = app.add_subcommand("flow", "trajectory structure");
  flow->require_subcommand(1);
  CLI::App* flow_graph_cmd =
      flow->add_subcommand("graph", "singular points, connecting arcs and contour verdict");
  flow_graph_cmd->add_option("json", a.json_path, "field JSON document")->required();
  add_seed(flow_graph_cmd);
  add_out(flow_graph_cmd);
  CLI::App* flow_lyapunov = flow->add_subcommand("lyapunov", "monotone potential or the cycle");
  flow_lyapunov->add_option("json", a.json_path, "field JSON document")->required();
  add_seed(flow_lyapunov);
  add_out(flow_lyapunov);

  CLI::App* disk = app.add_subcommand("disk", "unit disk model analysis");
  disk->require_subcommand(1);
  CLI::App* disk_profile = disk->add_subcommand("profile", "boundary angle profile and census");
  disk_profile->add_option("--model", a.model, "z^n, conj(z)^n or grad:c0,c1,...")->required();
  disk_profile->add_option("--samples", a.samples, "circle samples, at least 64");
  add_out(disk_profile);
  CLI::App* disk_verdict = disk->add_subcommand("verdict", "gradient attainability of the index");
  disk_verdict->add_option("--model", a.model, "z^n, conj(z)^n or grad:c0,c1,...")->required();

  CLI::App* render = app.add_subcommand("render", "figure of a field JSON document");
  render->add_option("json", a.json_path, "field JSON document")->required();
  render->add_option("-o,--output", a.out_path, "SVG output file")->required();
  render->add_option("--canvas", a.canvas, "square canvas edge in px");
  render->add_option("--density", a.density, "arrows per face");
  render->add_flag("--arcs", a.arcs, "overlay the witness trajectories of the flow graph");
  add_seed(render);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "singforge: " << e.what() << "\n" << kSynopsis;
    return 2;
  }

  try {
    if (*mesh_info) return run_mesh_info(a, out);
    if (*synth_closed) return run_synth_closed(a, out);
    if (*synth_boundary) return run_synth_boundary(a, out);
    if (*synth_tangent) return run_synth_tangent_curve(a, out);
    if (*field_check) return run_field_check(a, out);
    if (*field_index) return run_field_index(a, out);
    if (*surgery_insert) return run_surgery_insert_pair(a, out);
    if (*surgery_merge) return run_surgery_merge(a, out);
    if (*flow_graph_cmd) return run_flow_graph(a, out);
    if (*flow_lyapunov) return run_flow_lyapunov(a, out);
    if (*disk_profile) return run_disk_profile(a, out);
    if (*disk_verdict) return run_disk_verdict(a, out);
    if (*render) return run_render(a, out);
  } catch (const UsageError& e) {
    err << "singforge: " << e.message << "\n" << kSynopsis;
    return 2;
  } catch (const Error& e) {
    err << "singforge: " << e.what() << "\n";
    return 3;
  }
  err << kSynopsis;
  return 2;
}

}  // namespace sf
