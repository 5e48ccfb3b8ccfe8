#include "singforge/curve.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "retarget.hpp"

namespace sf {

namespace {

constexpr double kTangentTol = 1e-9;

// Outgoing halfedge a -> b, or -1. a must be interior so the fan closes.
int halfedge_between(const TriMesh& m, int a, int b) {
  int h = m.vertex_halfedge(a);
  int start = h;
  do {
    if (m.halfedge_to(h) == b) return h;
    h = m.twin(TriMesh::prev_halfedge(h));
  } while (h != start);
  return -1;
}

struct CurveEdgeFrame {
  int f_left, f_right;
  Vec3 tangent;         // unit, along the walk direction
  Vec3 left_l, left_r;  // unit left-of-walk normals in each face plane
};

CurveEdgeFrame curve_edge_frame(const TriMesh& m, int h) {
  CurveEdgeFrame fr;
  fr.f_left = TriMesh::halfedge_face(h);
  fr.f_right = TriMesh::halfedge_face(m.twin(h));
  fr.tangent = normalized(m.position(m.halfedge_to(h)) - m.position(m.halfedge_from(h)));
  fr.left_l = normalized(cross(m.normal(fr.f_left), fr.tangent));
  fr.left_r = normalized(cross(m.normal(fr.f_right), fr.tangent));
  return fr;
}

}  // namespace

EmbeddedCurve make_curve(const TriMesh& mesh, std::vector<int> vertices) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3)
    throw Error(ErrorCode::ConditionViolated, "a closed curve needs at least three vertices");
  std::set<int> seen;
  for (int v : vertices) {
    if (v < 0 || v >= mesh.n_vertices())
      throw Error(ErrorCode::ConditionViolated, "curve vertex " + std::to_string(v) +
                                                    " out of range");
    if (!seen.insert(v).second)
      throw Error(ErrorCode::ConditionViolated, "curve revisits vertex " + std::to_string(v));
    if (mesh.is_boundary_vertex(v))
      throw Error(ErrorCode::BoundaryVertex,
                  "curve vertex " + std::to_string(v) + " lies on the boundary");
  }
  EmbeddedCurve c;
  c.vertices = std::move(vertices);
  c.halfedges.resize(n);
  for (int k = 0; k < n; ++k) {
    int a = c.vertices[k], b = c.vertices[(k + 1) % n];
    int h = halfedge_between(mesh, a, b);
    if (h == -1)
      throw Error(ErrorCode::NotAdjacent, "curve vertices " + std::to_string(a) + " and " +
                                              std::to_string(b) + " share no edge");
    c.halfedges[k] = h;
  }
  return c;
}

BoundaryField induce_on_curve(const TangentField& f, const EmbeddedCurve& curve) {
  validate_field(f);
  const TriMesh& m = *f.mesh;
  BoundaryField out;
  out.loop = -1;
  out.vertices = curve.vertices;
  out.phi.reserve(curve.halfedges.size());
  out.nu.reserve(curve.halfedges.size());
  for (int h : curve.halfedges) {
    CurveEdgeFrame fr = curve_edge_frame(m, h);
    Vec3 vl = face_vector(f, fr.f_left), vr = face_vector(f, fr.f_right);
    out.phi.push_back(0.5 * (dot(vl, fr.tangent) + dot(vr, fr.tangent)));
    out.nu.push_back(0.5 * (dot(vl, fr.left_l) + dot(vr, fr.left_r)));
  }
  return out;
}

bool is_tangent_to_curve(const TangentField& f, const EmbeddedCurve& curve, double tol) {
  validate_field(f);
  const TriMesh& m = *f.mesh;
  for (int h : curve.halfedges) {
    CurveEdgeFrame fr = curve_edge_frame(m, h);
    Vec3 vl = face_vector(f, fr.f_left), vr = face_vector(f, fr.f_right);
    double nu = 0.5 * (dot(vl, fr.left_l) + dot(vr, fr.left_r));
    double scale = 0.5 * (norm(vl) + norm(vr));
    if (std::abs(nu) > tol * scale) return false;
  }
  return true;
}

TangentField synthesize_tangent_to_curve(const TriMesh& mesh, const EmbeddedCurve& curve,
                                         const std::map<int, int>& interior,
                                         const std::vector<CurvePoint>& points, uint64_t seed) {
  const int n = static_cast<int>(curve.vertices.size());
  std::map<int, int> pos_of;
  for (int k = 0; k < n; ++k) pos_of[curve.vertices[k]] = k;

  std::map<int, CurvePoint> at_pos;  // curve position -> prescribed zero
  long long beta_sum = 0, total = 0;
  for (const CurvePoint& p : points) {
    if (p.beta != 1 && p.beta != -1)
      throw Error(ErrorCode::ConditionViolated, "curve zero index must be +1 or -1");
    auto it = pos_of.find(p.vertex);
    if (it == pos_of.end())
      throw Error(ErrorCode::ConditionViolated,
                  "curve point vertex " + std::to_string(p.vertex) + " is not on the curve");
    if (!at_pos.emplace(it->second, p).second)
      throw Error(ErrorCode::ConditionViolated,
                  "vertex " + std::to_string(p.vertex) + " carries two curve points");
    beta_sum += p.beta;
    total += p.gamma;
  }
  if (beta_sum != 0)
    throw Error(ErrorCode::BetaSumNonzero,
                "curve zero indices sum to " + std::to_string(beta_sum));
  if (at_pos.size() > 1) {
    std::vector<const CurvePoint*> ordered;
    for (const auto& [pos, p] : at_pos) ordered.push_back(&p);
    for (size_t k = 0; k < ordered.size(); ++k)
      if (ordered[k]->beta == ordered[(k + 1) % ordered.size()]->beta)
        throw Error(ErrorCode::BetaNotAlternating,
                    "curve zero indices must alternate around the cycle");
  }

  for (const auto& [v, idx] : interior) {
    if (v < 0 || v >= mesh.n_vertices())
      throw Error(ErrorCode::ConditionViolated,
                  "prescribed vertex " + std::to_string(v) + " out of range");
    if (pos_of.count(v))
      throw Error(ErrorCode::NotInterior,
                  "prescribed vertex " + std::to_string(v) + " sits on the curve");
    if (mesh.is_boundary_vertex(v))
      throw Error(ErrorCode::BoundaryVertex,
                  "prescribed vertex " + std::to_string(v) + " lies on the boundary");
    total += idx;
  }
  int chi = mesh.euler_characteristic();
  if (total != chi)
    throw Error(ErrorCode::ChiMismatch,
                "index sum " + std::to_string(total) + " != chi " + std::to_string(chi));

  // Edge signs realizing the zeros: a +1 zero is a + -> - flip in walk
  // order, so edges after it carry the minus sign until the next zero.
  std::vector<double> s(n, 1.0);
  for (auto it = at_pos.begin(); it != at_pos.end(); ++it) {
    auto next = std::next(it) == at_pos.end() ? at_pos.begin() : std::next(it);
    for (int k = it->first; k != next->first; k = (k + 1) % n) s[k] = -it->second.beta;
  }

  // Tangency is combinatorial: both faces flanking a curve edge point
  // parallel to it. These faces stay frozen through every later rewrite.
  std::vector<double> theta(mesh.n_faces(), 0.0), mag(mesh.n_faces(), 1.0);
  std::vector<char> assigned(mesh.n_faces(), 0);
  for (int k = 0; k < n; ++k) {
    CurveEdgeFrame fr = curve_edge_frame(mesh, curve.halfedges[k]);
    for (int g : {fr.f_left, fr.f_right}) {
      if (assigned[g])
        throw Error(ErrorCode::TooCoarse,
                    "face " + std::to_string(g) + " carries two curve edges");
      theta[g] = mesh.angle_in_face(g, fr.tangent * s[k]);
      assigned[g] = 1;
    }
  }
  std::vector<char> frozen = assigned;
  detail::fill_from_seeds(mesh, theta, assigned);
  TangentField field = make_field(mesh, std::move(theta), std::move(mag));

  // Indices at curve vertices can only move through the free wedges of
  // their fans; junk goes to off-curve ring vertices and settles later.
  std::map<int, int> have;
  for (const SingularPoint& p : singular_set(field, seed)) have[p.vertex] = p.index;
  for (int k = 0; k < n; ++k) {
    int w = curve.vertices[k];
    auto it = at_pos.find(k);
    int target = it == at_pos.end() ? 0 : it->second.gamma;
    while (have[w] != target) {
      int sg = target > have[w] ? 1 : -1;

      std::vector<int> faces, ring;
      int h = mesh.vertex_halfedge(w);
      int start = h;
      do {
        int p = TriMesh::prev_halfedge(h);
        faces.push_back(TriMesh::halfedge_face(h));
        ring.push_back(mesh.halfedge_from(p));
        h = mesh.twin(p);
      } while (h != start);
      int fan = static_cast<int>(faces.size());
      std::vector<int> donors;
      for (int pass = 2; pass >= 1; --pass) {
        for (int j = 0; j < fan; ++j) {
          int free_flanks = !frozen[faces[j]] + !frozen[faces[(j + 1) % fan]];
          if (free_flanks == pass && !pos_of.count(ring[j]) &&
              !mesh.is_boundary_vertex(ring[j]))
            donors.push_back(ring[j]);
        }
      }
      bool moved = false;
      for (int donor : donors) {
        try {
          detail::wedge_whirl(field, w, donor, sg, frozen);
          have[w] += sg;
          have[donor] -= sg;
          moved = true;
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::TooCoarse) throw;
        }
      }
      if (!moved)
        throw Error(ErrorCode::TooCoarse, "the fan at curve vertex " + std::to_string(w) +
                                              " cannot absorb the prescribed turn");
    }
  }

  std::map<int, int> want = interior;
  for (const CurvePoint& p : points) want[p.vertex] = p.gamma;
  detail::settle_indices(field, want, frozen, seed);

  if (!is_tangent_to_curve(field, curve, kTangentTol))
    throw Error(ErrorCode::InternalError, "tangency lost on the curve");
  BoundaryField ind = induce_on_curve(field, curve);
  for (int k = 0; k < n; ++k) {
    double before = ind.phi[(k + n - 1) % n], after = ind.phi[k];
    bool flips = (before > 0.0) != (after > 0.0);
    auto it = at_pos.find(k);
    bool wanted = it != at_pos.end();
    if (flips != wanted || (wanted && (before > 0.0 ? 1 : -1) != it->second.beta))
      throw Error(ErrorCode::InternalError, "curve zeros missed their prescription");
  }
  return field;
}

}  // namespace sf
