#include "singforge/field.hpp"

#include <algorithm>
#include <cmath>

#include "singforge/rng.hpp"

namespace sf {

namespace {

constexpr double kWrapTol = 1e-9;       // distance from +-pi treated as ambiguous
constexpr double kIntegralTol = 1e-6;   // winding sums must be this close to 2*pi*k

double fan_step(const TangentField& f, int face, int next_face, const Vec3& edge_dir) {
  const TriMesh& m = *f.mesh;
  double r = wrap_angle(m.angle_in_face(face, edge_dir) -
                        m.angle_in_face(next_face, edge_dir));
  double step = wrap_angle(f.theta[next_face] + r - f.theta[face]);
  if (std::abs(step) > M_PI - kWrapTol)
    throw Error(ErrorCode::AmbiguousWrap,
                "anti-parallel directions between faces " + std::to_string(face) +
                    " and " + std::to_string(next_face));
  return step;
}

int index_at(const TangentField& f, int v) {
  const TriMesh& m = *f.mesh;
  if (m.is_boundary_vertex(v))
    throw Error(ErrorCode::BoundaryVertex,
                "vertex " + std::to_string(v) + " lies on the boundary");
  int h = m.vertex_halfedge(v);
  double sum = 0.0;
  int start = h;
  do {
    int p = TriMesh::prev_halfedge(h);
    int t = m.twin(p);
    Vec3 d = m.position(m.halfedge_to(p)) - m.position(m.halfedge_from(p));
    sum += fan_step(f, TriMesh::halfedge_face(h), TriMesh::halfedge_face(t), d);
    h = t;
  } while (h != start);
  double raw = (sum + m.angle_defect(v)) / (2.0 * M_PI);
  long long idx = std::llround(raw);
  if (std::abs(raw - static_cast<double>(idx)) > kIntegralTol)
    throw Error(ErrorCode::InternalError,
                "winding at vertex " + std::to_string(v) + " is not integral");
  return static_cast<int>(idx);
}

}  // namespace

TangentField make_field(const TriMesh& mesh, std::vector<double> theta,
                        std::vector<double> mag, std::vector<int> marked) {
  TangentField f;
  f.mesh = &mesh;
  f.theta = std::move(theta);
  f.mag = std::move(mag);
  f.marked = std::move(marked);
  std::sort(f.marked.begin(), f.marked.end());
  f.marked.erase(std::unique(f.marked.begin(), f.marked.end()), f.marked.end());
  validate_field(f);
  return f;
}

void validate_field(const TangentField& f) {
  if (f.mesh == nullptr) throw Error(ErrorCode::InternalError, "field without mesh");
  const TriMesh& m = *f.mesh;
  if (static_cast<int>(f.theta.size()) != m.n_faces() ||
      static_cast<int>(f.mag.size()) != m.n_faces())
    throw Error(ErrorCode::InternalError, "field size does not match mesh");
  for (int i = 0; i < m.n_faces(); ++i) {
    if (!std::isfinite(f.theta[i]) || !std::isfinite(f.mag[i]))
      throw Error(ErrorCode::InternalError, "non-finite field entry at face " + std::to_string(i));
    if (f.mag[i] <= 0.0)
      throw Error(ErrorCode::ZeroFace,
                  "face " + std::to_string(i) + " has non-positive magnitude");
  }
  for (int v : f.marked) {
    if (v < 0 || v >= m.n_vertices())
      throw Error(ErrorCode::InternalError, "marked vertex out of range");
    if (m.is_boundary_vertex(v))
      throw Error(ErrorCode::BoundaryVertex,
                  "marked vertex " + std::to_string(v) + " lies on the boundary");
  }
}

Vec3 face_vector(const TangentField& f, int face) {
  return f.mesh->direction_in_face(face, f.theta[face]) * f.mag[face];
}

double transport_angle(const TriMesh& mesh, int from_face, int to_face) {
  int h = mesh.shared_halfedge(to_face, from_face);
  if (h == -1)
    throw Error(ErrorCode::NotAdjacent,
                "faces " + std::to_string(from_face) + " and " +
                    std::to_string(to_face) + " share no edge");
  Vec3 d = mesh.position(mesh.halfedge_to(h)) - mesh.position(mesh.halfedge_from(h));
  return wrap_angle(mesh.angle_in_face(to_face, d) - mesh.angle_in_face(from_face, d));
}

int vertex_index(const TangentField& f, int v) { return index_at(f, v); }

std::vector<SingularPoint> singular_set(const TangentField& f, uint64_t seed) {
  validate_field(f);
  const TriMesh& m = *f.mesh;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const TangentField* probe = &f;
    TangentField jittered;
    if (attempt > 0) {
      jittered = f;
      for (int i = 0; i < m.n_faces(); ++i) {
        uint64_t s = seed ^ hash_u64(static_cast<uint64_t>(i) * 8191 + attempt);
        jittered.theta[i] += ((hash_u64(s) >> 11) * 0x1.0p-53 - 0.5) * 2e-6;
      }
      probe = &jittered;
    }
    try {
      std::vector<SingularPoint> out;
      size_t mark_pos = 0;
      for (int v = 0; v < m.n_vertices(); ++v) {
        bool marked = false;
        while (mark_pos < f.marked.size() && f.marked[mark_pos] < v) ++mark_pos;
        if (mark_pos < f.marked.size() && f.marked[mark_pos] == v) marked = true;
        if (m.is_boundary_vertex(v)) continue;
        int idx = index_at(*probe, v);
        if (idx != 0 || marked) out.push_back({v, idx, marked});
      }
      return out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AmbiguousWrap || attempt == 7) throw;
    }
  }
  throw Error(ErrorCode::InternalError, "unreachable");
}

TangentField gradient_field(const TriMesh& mesh, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != mesh.n_vertices())
    throw Error(ErrorCode::InternalError, "value count does not match mesh");
  std::vector<double> theta(mesh.n_faces()), mag(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& fv = mesh.face(f);
    Vec3 a = mesh.position(fv[1]) - mesh.position(fv[0]);
    Vec3 b = mesh.position(fv[2]) - mesh.position(fv[0]);
    double da = values[fv[1]] - values[fv[0]];
    double db = values[fv[2]] - values[fv[0]];
    // solve for the in-plane gradient in frame coordinates
    double a1 = dot(a, mesh.frame_e1(f)), a2 = dot(a, mesh.frame_e2(f));
    double b1 = dot(b, mesh.frame_e1(f)), b2 = dot(b, mesh.frame_e2(f));
    double det = a1 * b2 - a2 * b1;
    double gx = (da * b2 - db * a2) / det;
    double gy = (db * a1 - da * b1) / det;
    mag[f] = std::hypot(gx, gy);
    if (mag[f] == 0.0)
      throw Error(ErrorCode::ZeroFace,
                  "flat face " + std::to_string(f) + " in gradient field");
    theta[f] = std::atan2(gy, gx);
  }
  return make_field(mesh, std::move(theta), std::move(mag));
}

IndexReport check_poincare_hopf(const TangentField& f, uint64_t seed) {
  if (!f.mesh->is_closed())
    throw Error(ErrorCode::HasBoundary, "index sum law needs a closed surface");
  IndexReport report;
  report.points = singular_set(f, seed);
  for (const SingularPoint& p : report.points) report.sum += p.index;
  report.chi = f.mesh->euler_characteristic();
  report.holds = report.sum == report.chi;
  return report;
}

}  // namespace sf
