#include "singforge/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "retarget.hpp"

namespace sf {

namespace {

constexpr double kEdgeZeroTol = 1e-12;
constexpr double kTangentTol = 1e-9;

struct EdgeFrame {
  int face;
  Vec3 tangent;  // unit, along the walk direction
  Vec3 outward;  // unit, in the face plane, pointing off the surface
};

EdgeFrame edge_frame(const TriMesh& m, int h) {
  int f = TriMesh::halfedge_face(h);
  Vec3 t = normalized(m.position(m.halfedge_to(h)) - m.position(m.halfedge_from(h)));
  return {f, t, normalized(cross(t, m.normal(f)))};
}

// Hop count to the nearest boundary vertex.
std::vector<int> boundary_depth(const TriMesh& m) {
  std::vector<int> d(m.n_vertices(), -1);
  std::vector<int> frontier;
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (m.is_boundary_vertex(v)) {
      d[v] = 0;
      frontier.push_back(v);
    }
  }
  int level = 0;
  while (!frontier.empty()) {
    std::vector<int> next;
    ++level;
    for (int v : frontier) {
      for (int u : m.vertices_around(v)) {
        if (d[u] == -1) {
          d[u] = level;
          next.push_back(u);
        }
      }
    }
    frontier = std::move(next);
  }
  return d;
}

// Faces holding a boundary edge carry the pinned rim data; the settle pass
// must never rotate them.
std::vector<char> rim_pinned_faces(const TriMesh& m) {
  std::vector<char> frozen(m.n_faces(), 0);
  for (int h = 0; h < 3 * m.n_faces(); ++h)
    if (m.twin(h) == -1) frozen[TriMesh::halfedge_face(h)] = 1;
  return frozen;
}

}  // namespace

std::vector<BoundaryField> induced_boundary_field(const TangentField& f) {
  validate_field(f);
  const TriMesh& m = *f.mesh;
  if (m.is_closed()) throw Error(ErrorCode::NoBoundary, "mesh has no boundary loops");
  std::vector<BoundaryField> out;
  const auto& loops = m.boundary_loops();
  const auto& loop_hes = m.boundary_loop_halfedges();
  for (int L = 0; L < static_cast<int>(loops.size()); ++L) {
    BoundaryField bf;
    bf.loop = L;
    bf.vertices = loops[L];
    bf.phi.reserve(loops[L].size());
    bf.nu.reserve(loops[L].size());
    for (int h : loop_hes[L]) {
      EdgeFrame fr = edge_frame(m, h);
      Vec3 v = face_vector(f, fr.face);
      bf.phi.push_back(dot(v, fr.tangent));
      bf.nu.push_back(dot(v, fr.outward));
    }
    out.push_back(std::move(bf));
  }
  return out;
}

BoundaryCensus boundary_census(const BoundaryField& bf) {
  int n = static_cast<int>(bf.phi.size());
  if (n == 0 || bf.vertices.size() != bf.phi.size() || bf.nu.size() != bf.phi.size())
    throw Error(ErrorCode::InternalError, "malformed boundary field");
  for (int k = 0; k < n; ++k) {
    if (std::abs(bf.phi[k]) < kEdgeZeroTol)
      throw Error(ErrorCode::DegenerateZero,
                  "tangential component vanishes along boundary edge " + std::to_string(k) +
                      " of loop " + std::to_string(bf.loop));
  }
  BoundaryCensus c;
  for (int k = 0; k < n; ++k) {
    double before = bf.phi[(k + n - 1) % n];  // edge arriving at vertices[k]
    double after = bf.phi[k];                 // edge leaving it
    if ((before > 0.0) == (after > 0.0)) continue;
    double nu_avg = 0.5 * (bf.nu[(k + n - 1) % n] + bf.nu[k]);
    if (std::abs(nu_avg) < kTangentTol)
      throw Error(ErrorCode::TangentAtZero, "direction undecidable at boundary vertex " +
                                                std::to_string(bf.vertices[k]));
    BoundaryZero z;
    z.vertex = bf.vertices[k];
    z.index = before > 0.0 ? 1 : -1;
    z.direction = nu_avg < 0.0 ? ZeroDirection::Inward : ZeroDirection::Outward;
    c.zeros.push_back(z);
    (z.direction == ZeroDirection::Inward ? c.delta_plus : c.delta_minus) += z.index;
  }
  return c;
}

BoundaryReport check_boundary_laws(const TangentField& f, uint64_t seed) {
  const TriMesh& m = *f.mesh;
  if (m.is_closed())
    throw Error(ErrorCode::NoBoundary, "index law with deltas needs a bounded mesh");
  BoundaryReport r;
  r.chi = m.euler_characteristic();
  for (const SingularPoint& p : singular_set(f, seed)) r.sum_ind += p.index;
  for (const BoundaryField& bf : induced_boundary_field(f)) {
    BoundaryCensus c = boundary_census(bf);
    r.delta_plus += c.delta_plus;
    r.delta_minus += c.delta_minus;
    r.loops.push_back(std::move(c));
  }
  r.eq_plus_holds = r.chi == r.sum_ind - r.delta_plus;
  r.eq_minus_holds = r.chi == r.sum_ind + r.delta_minus;
  return r;
}

TangentField collar_extend(const TriMesh& mesh, const BoundaryField& u, double w_scale) {
  if (mesh.is_closed()) throw Error(ErrorCode::NoBoundary, "mesh has no boundary loops");
  if (u.loop < 0 || u.loop >= static_cast<int>(mesh.boundary_loops().size()))
    throw Error(ErrorCode::InternalError, "loop id out of range");
  const auto& loop = mesh.boundary_loops()[u.loop];
  const auto& hes = mesh.boundary_loop_halfedges()[u.loop];
  if (u.phi.size() != loop.size())
    throw Error(ErrorCode::InternalError, "prescription length differs from loop length");
  if (!(w_scale > 0.0))
    throw Error(ErrorCode::ConditionViolated, "normal scale must be positive");
  for (size_t k = 0; k < u.phi.size(); ++k) {
    if (std::abs(u.phi[k]) < kEdgeZeroTol)
      throw Error(ErrorCode::ZeroU,
                  "tangential prescription vanishes on boundary edge " + std::to_string(k));
  }

  // Depth from this loop only; the strip is every face touching depth <= 1.
  std::vector<int> d(mesh.n_vertices(), -1);
  std::vector<int> frontier;
  for (int v : loop) {
    d[v] = 0;
    frontier.push_back(v);
  }
  int level = 0;
  while (!frontier.empty() && level < 2) {
    std::vector<int> next;
    ++level;
    for (int v : frontier) {
      for (int w : mesh.vertices_around(v)) {
        if (d[w] == -1) {
          d[w] = level;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<Vec3> mid(loop.size());
  std::vector<EdgeFrame> frames(loop.size());
  for (size_t k = 0; k < loop.size(); ++k) {
    frames[k] = edge_frame(mesh, hes[k]);
    mid[k] = (mesh.position(mesh.halfedge_from(hes[k])) +
              mesh.position(mesh.halfedge_to(hes[k]))) *
             0.5;
  }

  std::vector<double> theta(mesh.n_faces(), 0.0), mag(mesh.n_faces(), 1.0);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& fv = mesh.face(f);
    int d0 = d[fv[0]], d1 = d[fv[1]], d2 = d[fv[2]];
    if (d0 != 0 && d0 != 1 && d1 != 0 && d1 != 1 && d2 != 0 && d2 != 1) continue;

    Vec3 c = mesh.face_centroid(f);
    size_t best = 0;
    double best_d2 = norm(c - mid[0]);
    for (size_t k = 1; k < loop.size(); ++k) {
      double dist = norm(c - mid[k]);
      if (dist < best_d2) {
        best_d2 = dist;
        best = k;
      }
    }

    // Strip faces only touch vertices of depth 0..2, so t runs 1/6 .. 5/6.
    double t = (d0 + d1 + d2) / 6.0;
    Vec3 n = mesh.normal(f);
    auto flatten = [&](const Vec3& v) { return v - n * dot(n, v); };
    Vec3 blend = flatten(frames[best].tangent * u.phi[best]) * t +
                 flatten(frames[best].outward * w_scale) * (1.0 - t);
    double len = norm(blend);
    if (len < 1e-9 * (std::abs(u.phi[best]) + w_scale))
      throw Error(ErrorCode::TooCoarse,
                  "collar blend degenerates on face " + std::to_string(f));
    theta[f] = mesh.angle_in_face(f, blend);
    mag[f] = len;
  }
  return make_field(mesh, std::move(theta), std::move(mag));
}

TangentField synthesize_tangent_boundary(const TriMesh& mesh, const std::map<int, int>& want,
                                         uint64_t seed) {
  if (mesh.is_closed())
    throw Error(ErrorCode::NoBoundary, "tangent-boundary synthesis needs a bounded mesh");
  long long total = 0;
  for (const auto& [v, idx] : want) {
    if (v < 0 || v >= mesh.n_vertices())
      throw Error(ErrorCode::InternalError, "prescribed vertex out of range");
    total += idx;
  }
  int chi = mesh.euler_characteristic();
  if (total != chi)
    throw Error(ErrorCode::ChiMismatch,
                "index sum " + std::to_string(total) + " != chi " + std::to_string(chi));
  std::vector<int> depth = boundary_depth(mesh);
  for (const auto& [v, idx] : want) {
    if (depth[v] < 2)
      throw Error(ErrorCode::NotInterior,
                  "prescribed vertex " + std::to_string(v) + " sits in the boundary collar");
  }

  std::vector<double> theta(mesh.n_faces(), 0.0), mag(mesh.n_faces(), 1.0);
  std::vector<char> assigned(mesh.n_faces(), 0);
  for (const auto& hes : mesh.boundary_loop_halfedges()) {
    for (int h : hes) {
      EdgeFrame fr = edge_frame(mesh, h);
      if (assigned[fr.face])
        throw Error(ErrorCode::TooCoarse, "face " + std::to_string(fr.face) +
                                              " holds two boundary edges; no tangent "
                                              "direction fits both");
      theta[fr.face] = mesh.angle_in_face(fr.face, fr.tangent);
      assigned[fr.face] = 1;
    }
  }
  detail::fill_from_seeds(mesh, theta, assigned);

  TangentField field = make_field(mesh, std::move(theta), std::move(mag));
  detail::settle_indices(field, want, rim_pinned_faces(mesh), seed);

  for (const BoundaryField& bf : induced_boundary_field(field))
    for (double nu : bf.nu)
      if (std::abs(nu) > kTangentTol)
        throw Error(ErrorCode::InternalError, "tangency lost on the boundary");
  return field;
}

TangentField synthesize_with_boundary(const TriMesh& mesh, const std::map<int, int>& interior,
                                      const std::map<int, int>& inward,
                                      const std::map<int, int>& outward, uint64_t seed) {
  if (mesh.is_closed())
    throw Error(ErrorCode::NoBoundary, "boundary-census synthesis needs a bounded mesh");
  const auto& loops = mesh.boundary_loops();
  std::map<int, std::pair<int, int>> where;  // boundary vertex -> (loop, position)
  for (int L = 0; L < static_cast<int>(loops.size()); ++L)
    for (int p = 0; p < static_cast<int>(loops[L].size()); ++p)
      where[loops[L][p]] = {L, p};

  long long sum_interior = 0;
  for (const auto& [v, idx] : interior) {
    if (v < 0 || v >= mesh.n_vertices())
      throw Error(ErrorCode::InternalError, "prescribed vertex out of range");
    if (mesh.is_boundary_vertex(v))
      throw Error(ErrorCode::NotInterior,
                  "interior prescription names boundary vertex " + std::to_string(v));
    sum_interior += idx;
  }

  struct Zero {
    int pos;
    int index;
    int dir;  // +1 outward, -1 inward
  };
  std::vector<std::vector<Zero>> per_loop(loops.size());
  long long sum_inward = 0;
  auto place = [&](const std::map<int, int>& zs, int dir) {
    for (const auto& [v, idx] : zs) {
      auto it = where.find(v);
      if (it == where.end())
        throw Error(ErrorCode::ConditionViolated,
                    "census vertex " + std::to_string(v) + " is not on the boundary");
      if (idx != 1 && idx != -1)
        throw Error(ErrorCode::ConditionViolated, "boundary zero index must be +1 or -1");
      per_loop[it->second.first].push_back({it->second.second, idx, dir});
      if (dir < 0) sum_inward += idx;
    }
  };
  place(inward, -1);
  place(outward, +1);
  for (const auto& [v, idx] : inward)
    if (outward.count(v))
      throw Error(ErrorCode::ConditionViolated,
                  "vertex " + std::to_string(v) + " listed both inward and outward");

  for (auto& zs : per_loop) {
    std::sort(zs.begin(), zs.end(), [](const Zero& x, const Zero& y) { return x.pos < y.pos; });
    if (zs.size() % 2)
      throw Error(ErrorCode::ConditionViolated, "a loop carries an odd number of zeros");
    for (size_t k = 0; k < zs.size(); ++k)
      if (zs[k].index == zs[(k + 1) % zs.size()].index)
        throw Error(ErrorCode::ConditionViolated,
                    "boundary zero indices must alternate around the loop");
  }
  int chi = mesh.euler_characteristic();
  if (chi != sum_interior - sum_inward)
    throw Error(ErrorCode::ConditionViolated,
                "chi " + std::to_string(chi) + " != interior sum " +
                    std::to_string(sum_interior) + " - inward sum " +
                    std::to_string(sum_inward));

  std::vector<double> theta(mesh.n_faces(), 0.0), mag(mesh.n_faces(), 1.0);
  std::vector<char> assigned(mesh.n_faces(), 0);
  for (int L = 0; L < static_cast<int>(loops.size()); ++L) {
    int n = static_cast<int>(loops[L].size());
    std::vector<double> phi(n, 1.0), nu(n, 0.0);
    const auto& zs = per_loop[L];
    for (size_t zi = 0; zi < zs.size(); ++zi) {
      // a +1 zero is a + -> - flip, so edges after it carry the minus sign
      double s = -zs[zi].index;
      int stop = zs[(zi + 1) % zs.size()].pos;
      for (int k = zs[zi].pos; k != stop; k = (k + 1) % n) phi[k] = s;
    }
    for (const Zero& z : zs) {
      nu[(z.pos + n - 1) % n] += z.dir;
      nu[z.pos] += z.dir;
    }
    const auto& hes = mesh.boundary_loop_halfedges()[L];
    for (int k = 0; k < n; ++k) {
      EdgeFrame fr = edge_frame(mesh, hes[k]);
      if (assigned[fr.face])
        throw Error(ErrorCode::TooCoarse, "face " + std::to_string(fr.face) +
                                              " holds two boundary edges; the census "
                                              "cannot be pinned on it");
      Vec3 v = fr.tangent * phi[k] + fr.outward * nu[k];
      theta[fr.face] = mesh.angle_in_face(fr.face, v);
      mag[fr.face] = norm(v);
      assigned[fr.face] = 1;
    }
  }
  detail::fill_from_seeds(mesh, theta, assigned);

  TangentField field = make_field(mesh, std::move(theta), std::move(mag));
  detail::settle_indices(field, interior, rim_pinned_faces(mesh), seed);

  std::vector<BoundaryField> bfs = induced_boundary_field(field);
  for (int L = 0; L < static_cast<int>(loops.size()); ++L) {
    std::vector<BoundaryZero> expect;
    for (const Zero& z : per_loop[L])
      expect.push_back({loops[L][z.pos], z.index,
                        z.dir < 0 ? ZeroDirection::Inward : ZeroDirection::Outward});
    if (boundary_census(bfs[L]).zeros != expect)
      throw Error(ErrorCode::InternalError, "boundary census missed its prescription");
  }
  return field;
}

}  // namespace sf
