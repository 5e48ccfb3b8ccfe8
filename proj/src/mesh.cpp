#include "singforge/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace sf {

namespace {

int corner_of(const std::array<int, 3>& fv, int v) {
  for (int k = 0; k < 3; ++k)
    if (fv[k] == v) return k;
  return -1;
}

}  // namespace

TriMesh TriMesh::from_data(std::vector<Vec3> positions,
                           std::vector<std::array<int, 3>> faces) {
  TriMesh m;
  m.positions_ = std::move(positions);
  m.faces_ = std::move(faces);
  const int nv = m.n_vertices();
  const int nf = m.n_faces();
  if (nv == 0 || nf == 0) throw Error(ErrorCode::ParseError, "empty mesh");

  Vec3 lo = m.positions_[0], hi = m.positions_[0];
  for (const Vec3& p : m.positions_) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
  }
  m.diag_ = norm(hi - lo);

  for (int f = 0; f < nf; ++f) {
    const auto& fv = m.faces_[f];
    for (int k = 0; k < 3; ++k) {
      if (fv[k] < 0 || fv[k] >= nv)
        throw Error(ErrorCode::ParseError,
                    "face " + std::to_string(f) + " references vertex out of range");
    }
    if (fv[0] == fv[1] || fv[1] == fv[2] || fv[2] == fv[0])
      throw Error(ErrorCode::DegenerateFace,
                  "face " + std::to_string(f) + " repeats a vertex");
  }

  m.area_.resize(nf);
  m.frame_e1_.resize(nf);
  m.frame_e2_.resize(nf);
  m.normal_.resize(nf);
  const double area_floor = 1e-12 * m.diag_ * m.diag_;
  for (int f = 0; f < nf; ++f) {
    const auto& fv = m.faces_[f];
    Vec3 u = m.positions_[fv[1]] - m.positions_[fv[0]];
    Vec3 w = m.positions_[fv[2]] - m.positions_[fv[0]];
    Vec3 c = cross(u, w);
    double area = 0.5 * norm(c);
    if (!(area > area_floor))
      throw Error(ErrorCode::DegenerateFace,
                  "face " + std::to_string(f) + " has near-zero area");
    m.area_[f] = area;
    m.normal_[f] = normalized(c);
    m.frame_e1_[f] = normalized(u);
    m.frame_e2_[f] = cross(m.normal_[f], m.frame_e1_[f]);
  }

  // Edge-level checks: >2 faces per undirected edge is non-manifold; a
  // repeated *directed* edge with multiplicity <= 2 means two faces disagree
  // on orientation.
  auto ukey = [nv](int u, int v) {
    if (u > v) std::swap(u, v);
    return static_cast<long long>(u) * nv + v;
  };
  auto dkey = [nv](int u, int v) { return static_cast<long long>(u) * nv + v; };
  std::unordered_map<long long, int> undirected_count;
  undirected_count.reserve(3 * nf);
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k)
      ++undirected_count[ukey(m.faces_[f][k], m.faces_[f][(k + 1) % 3])];
  for (const auto& [key, count] : undirected_count) {
    if (count > 2)
      throw Error(ErrorCode::NonManifold, "edge shared by more than two faces");
  }
  std::unordered_map<long long, int> directed;
  directed.reserve(3 * nf);
  for (int h = 0; h < 3 * nf; ++h) {
    long long key = dkey(m.halfedge_from(h), m.halfedge_to(h));
    if (!directed.emplace(key, h).second)
      throw Error(ErrorCode::NonOrientable, "inconsistently oriented faces");
  }
  m.n_edges_ = static_cast<int>(undirected_count.size());
  m.twin_.assign(3 * nf, -1);
  for (int h = 0; h < 3 * nf; ++h) {
    auto it = directed.find(dkey(m.halfedge_to(h), m.halfedge_from(h)));
    if (it != directed.end()) m.twin_[h] = it->second;
  }

  // Vertex fans. Rotation twin(prev(h)) advances an outgoing halfedge CCW
  // around its origin; a single contiguous fan must cover every incident
  // face, otherwise the vertex joins two umbrellas.
  std::vector<int> incident_count(nv, 0);
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) ++incident_count[m.faces_[f][k]];
  std::vector<int> start_he(nv, -1);
  for (int h = 0; h < 3 * nf; ++h) {
    int v = m.halfedge_from(h);
    if (start_he[v] == -1 ||
        (m.twin_[h] == -1 && m.twin_[start_he[v]] != -1))
      start_he[v] = h;
  }
  m.boundary_vertex_.assign(nv, false);
  m.vertex_he_ = start_he;
  m.vertex_faces_.resize(nv);
  m.vertex_ring_.resize(nv);
  for (int v = 0; v < nv; ++v) {
    if (incident_count[v] == 0)
      throw Error(ErrorCode::Disconnected, "vertex " + std::to_string(v) + " unused");
    int h = start_he[v];
    std::vector<int>& fan = m.vertex_faces_[v];
    std::vector<int>& ring = m.vertex_ring_[v];
    while (true) {
      fan.push_back(halfedge_face(h));
      ring.push_back(m.halfedge_to(h));
      int p = prev_halfedge(h);
      int t = m.twin_[p];
      if (t == -1) {
        m.boundary_vertex_[v] = true;
        ring.push_back(m.halfedge_from(p));
        break;
      }
      h = t;
      if (h == start_he[v]) break;
    }
    if (static_cast<int>(fan.size()) != incident_count[v])
      throw Error(ErrorCode::NonManifold,
                  "vertex " + std::to_string(v) + " joins multiple fans");
  }

  // Face connectivity.
  {
    std::vector<char> seen(nf, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      for (int k = 0; k < 3; ++k) {
        int t = m.twin_[3 * f + k];
        if (t != -1 && !seen[halfedge_face(t)]) {
          seen[halfedge_face(t)] = 1;
          ++reached;
          q.push(halfedge_face(t));
        }
      }
    }
    if (reached != nf)
      throw Error(ErrorCode::Disconnected, "mesh has multiple components");
  }

  // Boundary loops, each rotated so its smallest vertex comes first and the
  // loop list sorted by that vertex; traversal follows halfedge direction so
  // the surface stays on the left.
  {
    std::unordered_set<int> visited;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> loops;
    for (int h0 = 0; h0 < 3 * nf; ++h0) {
      if (m.twin_[h0] != -1 || visited.count(h0)) continue;
      std::vector<int> verts, hes;
      int h = h0;
      do {
        visited.insert(h);
        verts.push_back(m.halfedge_from(h));
        hes.push_back(h);
        int candidate = next_halfedge(h);
        while (m.twin_[candidate] != -1)
          candidate = next_halfedge(m.twin_[candidate]);
        h = candidate;
      } while (h != h0);
      int best = 0;
      for (int i = 1; i < static_cast<int>(verts.size()); ++i)
        if (verts[i] < verts[best]) best = i;
      std::rotate(verts.begin(), verts.begin() + best, verts.end());
      std::rotate(hes.begin(), hes.begin() + best, hes.end());
      loops.emplace_back(std::move(verts), std::move(hes));
    }
    std::sort(loops.begin(), loops.end(),
              [](const auto& a, const auto& b) { return a.first[0] < b.first[0]; });
    for (auto& [verts, hes] : loops) {
      m.boundary_loops_.push_back(std::move(verts));
      m.boundary_loop_halfedges_.push_back(std::move(hes));
    }
  }

  return m;
}

int TriMesh::genus() const {
  return (2 - euler_characteristic() - static_cast<int>(boundary_loops_.size())) / 2;
}

int TriMesh::shared_halfedge(int f, int g) const {
  for (int k = 0; k < 3; ++k) {
    int t = twin_[3 * f + k];
    if (t != -1 && halfedge_face(t) == g) return 3 * f + k;
  }
  return -1;
}

Vec3 TriMesh::face_centroid(int f) const {
  const auto& fv = faces_[f];
  return (positions_[fv[0]] + positions_[fv[1]] + positions_[fv[2]]) / 3.0;
}

double TriMesh::angle_in_face(int f, const Vec3& d) const {
  return std::atan2(dot(d, frame_e2_[f]), dot(d, frame_e1_[f]));
}

Vec3 TriMesh::direction_in_face(int f, double angle) const {
  return frame_e1_[f] * std::cos(angle) + frame_e2_[f] * std::sin(angle);
}

double TriMesh::corner_angle(int f, int k) const {
  const auto& fv = faces_[f];
  Vec3 u = positions_[fv[(k + 1) % 3]] - positions_[fv[k]];
  Vec3 w = positions_[fv[(k + 2) % 3]] - positions_[fv[k]];
  return std::atan2(norm(cross(u, w)), dot(u, w));
}

double TriMesh::angle_defect(int v) const {
  double total = 0.0;
  for (int f : vertex_faces_[v]) total += corner_angle(f, corner_of(faces_[f], v));
  return 2.0 * M_PI - total;
}

double TriMesh::shortest_edge_at(int v) const {
  double best = diag_;
  for (int u : vertex_ring_[v]) best = std::min(best, norm(positions_[u] - positions_[v]));
  return best;
}

std::vector<int> TriMesh::path_between(int a, int b,
                                       const std::vector<int>& forbidden) const {
  const int nv = n_vertices();
  std::vector<char> blocked(nv, 0);
  for (int v : forbidden)
    if (v >= 0 && v < nv) blocked[v] = 1;
  if (a < 0 || a >= nv || b < 0 || b >= nv)
    throw Error(ErrorCode::NoPath, "endpoint out of range");
  if (blocked[a] || blocked[b])
    throw Error(ErrorCode::NoPath, "endpoint is forbidden");
  if (a == b) return {a};

  std::vector<int> parent(nv, -1);
  std::vector<char> seen(nv, 0);
  seen[a] = 1;
  std::queue<int> q;
  q.push(a);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    std::vector<int> nbrs = vertex_ring_[v];
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    for (int u : nbrs) {
      if (seen[u] || blocked[u]) continue;
      seen[u] = 1;
      parent[u] = v;
      if (u == b) {
        std::vector<int> path;
        for (int w = b; w != -1; w = parent[w]) path.push_back(w);
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push(u);
    }
  }
  throw Error(ErrorCode::NoPath,
              "no path from " + std::to_string(a) + " to " + std::to_string(b));
}

Region region_from_faces(const TriMesh& mesh, std::vector<int> faces) {
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  if (faces.empty()) throw Error(ErrorCode::InternalError, "empty region");
  if (faces.front() < 0 || faces.back() >= mesh.n_faces())
    throw Error(ErrorCode::InternalError, "region face out of range");

  std::vector<char> in_region(mesh.n_faces(), 0);
  for (int f : faces) in_region[f] = 1;

  Region r;
  r.faces = std::move(faces);
  std::unordered_set<int> closure;
  for (int f : r.faces)
    for (int v : mesh.face(f)) closure.insert(v);
  r.closure_vertices.assign(closure.begin(), closure.end());
  std::sort(r.closure_vertices.begin(), r.closure_vertices.end());
  for (int v : r.closure_vertices) {
    if (mesh.is_boundary_vertex(v)) continue;
    bool full = true;
    for (int f : mesh.faces_around(v))
      if (!in_region[f]) { full = false; break; }
    if (full) r.interior_vertices.push_back(v);
  }
  return r;
}

bool is_disk(const TriMesh& mesh, const Region& region) {
  if (region.faces.empty()) return false;
  std::vector<char> in_region(mesh.n_faces(), 0);
  for (int f : region.faces) in_region[f] = 1;

  // Edge-connected.
  {
    std::unordered_set<int> seen;
    std::queue<int> q;
    q.push(region.faces[0]);
    seen.insert(region.faces[0]);
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      for (int k = 0; k < 3; ++k) {
        int t = mesh.twin(3 * f + k);
        if (t == -1) continue;
        int g = TriMesh::halfedge_face(t);
        if (in_region[g] && !seen.count(g)) {
          seen.insert(g);
          q.push(g);
        }
      }
    }
    if (seen.size() != region.faces.size()) return false;
  }

  // No pinch points: region faces around each closure vertex form one run.
  for (int v : region.closure_vertices) {
    const std::vector<int>& fan = mesh.faces_around(v);
    int n = static_cast<int>(fan.size());
    int runs = 0;
    if (mesh.is_boundary_vertex(v)) {
      for (int i = 0; i < n; ++i) {
        bool cur = in_region[fan[i]];
        bool prev = i > 0 && in_region[fan[i - 1]];
        if (cur && !prev) ++runs;
      }
    } else {
      for (int i = 0; i < n; ++i) {
        bool cur = in_region[fan[i]];
        bool prev = in_region[fan[(i + n - 1) % n]];
        if (cur && !prev) ++runs;
      }
      if (runs == 0) runs = 1;  // full closed fan
    }
    if (runs != 1) return false;
  }

  // chi == 1.
  std::unordered_set<long long> edges;
  const long long nv = mesh.n_vertices();
  for (int f : region.faces) {
    const auto& fv = mesh.face(f);
    for (int k = 0; k < 3; ++k) {
      long long u = fv[k], w = fv[(k + 1) % 3];
      if (u > w) std::swap(u, w);
      edges.insert(u * nv + w);
    }
  }
  long long chi = static_cast<long long>(region.closure_vertices.size()) -
                  static_cast<long long>(edges.size()) +
                  static_cast<long long>(region.faces.size());
  return chi == 1;
}

Region disk_region(const TriMesh& mesh, const std::vector<int>& core,
                   const std::vector<int>& avoid) {
  if (core.empty()) throw Error(ErrorCode::CannotIsolate, "empty core");
  std::unordered_set<int> avoid_set(avoid.begin(), avoid.end());
  for (int v : core) {
    if (avoid_set.count(v))
      throw Error(ErrorCode::CannotIsolate,
                  "core vertex " + std::to_string(v) + " is excluded");
    if (mesh.is_boundary_vertex(v))
      throw Error(ErrorCode::CannotIsolate,
                  "core vertex " + std::to_string(v) + " lies on the mesh boundary");
  }

  std::vector<char> in_region(mesh.n_faces(), 0);
  std::vector<int> faces;
  for (int v : core)
    for (int f : mesh.faces_around(v))
      if (!in_region[f]) { in_region[f] = 1; faces.push_back(f); }

  while (true) {
    Region r = region_from_faces(mesh, faces);
    for (int v : r.closure_vertices)
      if (avoid_set.count(v))
        throw Error(ErrorCode::CannotIsolate,
                    "region closure reaches excluded vertex " + std::to_string(v));
    if (is_disk(mesh, r)) return r;

    // Grow by one full vertex ring.
    std::vector<int> grown = faces;
    for (int v : r.closure_vertices)
      for (int f : mesh.faces_around(v))
        if (!in_region[f]) { in_region[f] = 1; grown.push_back(f); }
    if (grown.size() == faces.size())
      throw Error(ErrorCode::CannotIsolate, "no disk neighborhood exists");
    faces = std::move(grown);
  }
}

namespace {

// Whitespace tokenizer that drops '#' comments.
bool next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) return false;
  tok.push_back(static_cast<char>(c));
  while ((c = in.get()) != EOF) {
    if (std::isspace(c) || c == '#') {
      if (c == '#') in.unget();
      break;
    }
    tok.push_back(static_cast<char>(c));
  }
  return true;
}

long parse_int(const std::string& tok, const char* what) {
  size_t pos = 0;
  long value = 0;
  try {
    value = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + tok + "'");
  }
  if (pos != tok.size())
    throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + tok + "'");
  return value;
}

double parse_double(const std::string& tok, const char* what) {
  size_t pos = 0;
  double value = 0;
  try {
    value = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + tok + "'");
  }
  if (pos != tok.size())
    throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + tok + "'");
  return value;
}

}  // namespace

TriMesh load_off(std::istream& in) {
  std::string tok;
  if (!next_token(in, tok) || tok != "OFF")
    throw Error(ErrorCode::ParseError, "missing OFF header");
  auto need = [&](const char* what) {
    if (!next_token(in, tok))
      throw Error(ErrorCode::ParseError, std::string("unexpected end of file, wanted ") + what);
    return tok;
  };
  long nv = parse_int(need("vertex count"), "vertex count");
  long nf = parse_int(need("face count"), "face count");
  parse_int(need("edge count"), "edge count");
  if (nv <= 0 || nf <= 0)
    throw Error(ErrorCode::ParseError, "empty mesh");

  std::vector<Vec3> positions(nv);
  for (long i = 0; i < nv; ++i) {
    positions[i].x = parse_double(need("coordinate"), "coordinate");
    positions[i].y = parse_double(need("coordinate"), "coordinate");
    positions[i].z = parse_double(need("coordinate"), "coordinate");
  }
  std::vector<std::array<int, 3>> faces(nf);
  for (long i = 0; i < nf; ++i) {
    long count = parse_int(need("face size"), "face size");
    if (count != 3)
      throw Error(ErrorCode::NonTriangle,
                  "face " + std::to_string(i) + " has " + std::to_string(count) + " vertices");
    for (int k = 0; k < 3; ++k)
      faces[i][k] = static_cast<int>(parse_int(need("face index"), "face index"));
  }
  return TriMesh::from_data(std::move(positions), std::move(faces));
}

TriMesh load_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return load_off(in);
}

void save_off(const TriMesh& mesh, std::ostream& out) {
  out << "OFF\n" << mesh.n_vertices() << ' ' << mesh.n_faces() << " 0\n";
  char buf[96];
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const Vec3& p = mesh.position(v);
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    out << buf;
  }
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& fv = mesh.face(f);
    out << "3 " << fv[0] << ' ' << fv[1] << ' ' << fv[2] << '\n';
  }
}

void save_off_file(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot open " + path);
  save_off(mesh, out);
}

}  // namespace sf
