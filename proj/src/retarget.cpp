#include "retarget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "singforge/rng.hpp"

namespace sf::detail {

namespace {

constexpr double kMargin = 5e-3;  // clearance kept between any step and +-pi
constexpr int kCenterSweeps = 16;

// Transition entering to_face from from_face across their shared edge, using
// the same arithmetic as the index fan walk.
double transition(const TangentField& f, int from_face, int to_face, const Vec3& edge_dir) {
  const TriMesh& m = *f.mesh;
  double r = wrap_angle(m.angle_in_face(from_face, edge_dir) -
                        m.angle_in_face(to_face, edge_dir));
  return wrap_angle(f.theta[to_face] + r - f.theta[from_face]);
}

// Index at an interior vertex without the anti-parallel ambiguity guard: the
// rotation machinery accounts in terms of whichever side of pi a step sits on.
long long raw_index(const TangentField& f, int v) {
  const TriMesh& m = *f.mesh;
  int h = m.vertex_halfedge(v);
  int start = h;
  double sum = 0.0;
  do {
    int p = TriMesh::prev_halfedge(h);
    int t = m.twin(p);
    Vec3 d = m.position(m.halfedge_to(p)) - m.position(m.halfedge_from(p));
    sum += transition(f, TriMesh::halfedge_face(h), TriMesh::halfedge_face(t), d);
    h = t;
  } while (h != start);
  double raw = (sum + m.angle_defect(v)) / (2.0 * M_PI);
  long long idx = std::llround(raw);
  if (std::abs(raw - static_cast<double>(idx)) > 1e-6)
    throw Error(ErrorCode::InternalError,
                "winding at vertex " + std::to_string(v) + " is not integral");
  return idx;
}

struct Star {
  std::vector<int> faces;    // CCW around q, the donor edge crossed last->first
  std::vector<double> step;  // transition faces[k] -> faces[(k+1)%m]
  std::vector<double> rim;   // transition outer -> faces[i]; NaN on boundary edges
};

Star collect_star(const TangentField& f, int q, int donor) {
  const TriMesh& m = *f.mesh;
  Star st;
  std::vector<int> ring;
  int h = m.vertex_halfedge(q);
  int start = h;
  do {
    int p = TriMesh::prev_halfedge(h);
    st.faces.push_back(TriMesh::halfedge_face(h));
    ring.push_back(m.halfedge_from(p));
    h = m.twin(p);
  } while (h != start);
  int n = static_cast<int>(st.faces.size());

  int cut = -1;
  for (int k = 0; k < n; ++k)
    if (ring[k] == donor) cut = k;
  if (cut == -1)
    throw Error(ErrorCode::NotAdjacent, "vertices " + std::to_string(q) + " and " +
                                            std::to_string(donor) + " share no edge");
  std::rotate(st.faces.begin(), st.faces.begin() + (cut + 1) % n, st.faces.end());
  std::rotate(ring.begin(), ring.begin() + (cut + 1) % n, ring.end());

  st.step.resize(n);
  for (int k = 0; k < n; ++k) {
    Vec3 d = m.position(q) - m.position(ring[k]);
    st.step[k] = transition(f, st.faces[k], st.faces[(k + 1) % n], d);
  }
  st.rim.resize(n);
  for (int i = 0; i < n; ++i) {
    int g = st.faces[i];
    int he = -1;
    for (int k = 0; k < 3; ++k)
      if (m.halfedge_from(3 * g + k) != q && m.halfedge_to(3 * g + k) != q) he = 3 * g + k;
    int t = m.twin(he);
    if (t == -1) {
      st.rim[i] = std::numeric_limits<double>::quiet_NaN();
    } else {
      Vec3 d = m.position(m.halfedge_to(he)) - m.position(m.halfedge_from(he));
      st.rim[i] = transition(f, TriMesh::halfedge_face(t), g, d);
    }
  }
  return st;
}

// Face rotations phi for a one-turn transfer: every transition of the star
// must land strictly inside (-pi, pi) except the donor crossing, which lands
// in (-3pi, -pi) for sign +1 (or its mirror), absorbing exactly one wrap.
// These are interval difference constraints; feasibility via Bellman-Ford and
// a few centering sweeps to maximize clearance.
std::vector<double> solve_staircase(const Star& st, int sign, int q) {
  const int n = static_cast<int>(st.faces.size());
  const double lo = -M_PI + kMargin, hi = M_PI - kMargin;
  const double jlo = sign > 0 ? -3.0 * M_PI + kMargin : M_PI + kMargin;
  const double jhi = sign > 0 ? -M_PI - kMargin : 3.0 * M_PI - kMargin;

  struct Edge {
    int u, v;
    double w;  // phi[v] - phi[u] <= w
  };
  std::vector<Edge> edges;
  for (int k = 0; k + 1 < n; ++k) {
    edges.push_back({k, k + 1, hi - st.step[k]});
    edges.push_back({k + 1, k, st.step[k] - lo});
  }
  edges.push_back({n - 1, 0, jhi - st.step[n - 1]});
  edges.push_back({0, n - 1, st.step[n - 1] - jlo});
  for (int i = 0; i < n; ++i) {
    double a = std::isnan(st.rim[i]) ? -4.0 * M_PI : lo - st.rim[i];
    double b = std::isnan(st.rim[i]) ? 4.0 * M_PI : hi - st.rim[i];
    edges.push_back({n, i, b});
    edges.push_back({i, n, -a});
  }

  std::vector<double> dist(n + 1, 0.0);
  bool changed = true;
  for (int pass = 0; pass <= n + 1 && changed; ++pass) {
    changed = false;
    for (const Edge& e : edges) {
      if (dist[e.u] + e.w < dist[e.v] - 1e-12) {
        dist[e.v] = dist[e.u] + e.w;
        changed = true;
      }
    }
  }
  if (changed)
    throw Error(ErrorCode::TooCoarse,
                "star of vertex " + std::to_string(q) + " cannot absorb another turn");

  std::vector<double> phi(n);
  for (int i = 0; i < n; ++i) phi[i] = dist[i] - dist[n];

  for (int sweep = 0; sweep < kCenterSweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      double L, U;
      if (std::isnan(st.rim[i])) {
        L = -4.0 * M_PI;
        U = 4.0 * M_PI;
      } else {
        L = lo - st.rim[i];
        U = hi - st.rim[i];
      }
      if (i > 0) {
        L = std::max(L, phi[i - 1] + lo - st.step[i - 1]);
        U = std::min(U, phi[i - 1] + hi - st.step[i - 1]);
      }
      if (i + 1 < n) {
        L = std::max(L, st.step[i] + phi[i + 1] - hi);
        U = std::min(U, st.step[i] + phi[i + 1] - lo);
      }
      if (i == 0) {
        L = std::max(L, phi[n - 1] + jlo - st.step[n - 1]);
        U = std::min(U, phi[n - 1] + jhi - st.step[n - 1]);
      }
      if (i == n - 1) {
        L = std::max(L, st.step[n - 1] + phi[0] - jhi);
        U = std::min(U, st.step[n - 1] + phi[0] - jlo);
      }
      if (L <= U) phi[i] = 0.5 * (L + U);
    }
  }

  auto clean = [&](double margin) {
    for (int k = 0; k + 1 < n; ++k) {
      double v = st.step[k] + phi[k + 1] - phi[k];
      if (std::abs(v) >= M_PI - margin) return false;
    }
    double vj = st.step[n - 1] + phi[0] - phi[n - 1];
    double wrapped = vj - (sign > 0 ? -2.0 * M_PI : 2.0 * M_PI);
    if (std::abs(wrapped) >= M_PI - margin) return false;
    for (int i = 0; i < n; ++i) {
      if (std::isnan(st.rim[i])) continue;
      if (std::abs(st.rim[i] + phi[i]) >= M_PI - margin) return false;
    }
    return true;
  };
  if (!clean(1e-9))
    throw Error(ErrorCode::TooCoarse,
                "star of vertex " + std::to_string(q) + " cannot absorb another turn");
  return phi;
}

}  // namespace

void whirl(TangentField& f, int q, int donor, int sign) {
  const TriMesh& m = *f.mesh;
  if (sign != 1 && sign != -1)
    throw Error(ErrorCode::InternalError, "turn transfer needs sign +-1");
  if (m.is_boundary_vertex(q))
    throw Error(ErrorCode::BoundaryVertex,
                "vertex " + std::to_string(q) + " lies on the boundary");
  bool donor_interior = !m.is_boundary_vertex(donor);
  long long before_q = raw_index(f, q);
  long long before_d = donor_interior ? raw_index(f, donor) : 0;

  Star st = collect_star(f, q, donor);
  std::vector<double> phi = solve_staircase(st, sign, q);
  for (size_t i = 0; i < st.faces.size(); ++i)
    f.theta[st.faces[i]] = wrap_angle(f.theta[st.faces[i]] + phi[i]);

  if (raw_index(f, q) != before_q + sign ||
      (donor_interior && raw_index(f, donor) != before_d - sign))
    throw Error(ErrorCode::InternalError, "turn transfer bookkeeping failed");
}

void wedge_whirl(TangentField& f, int q, int donor, int sign,
                 const std::vector<char>& frozen_face) {
  const TriMesh& m = *f.mesh;
  if (sign != 1 && sign != -1)
    throw Error(ErrorCode::InternalError, "turn transfer needs sign +-1");
  if (m.is_boundary_vertex(q))
    throw Error(ErrorCode::BoundaryVertex,
                "vertex " + std::to_string(q) + " lies on the boundary");

  // Cyclic fan around q: crossing k leaves faces[k] for faces[(k+1)%n] over
  // the spoke (q, ring[k]).
  std::vector<int> faces, ring;
  int h = m.vertex_halfedge(q);
  int start = h;
  do {
    int p = TriMesh::prev_halfedge(h);
    faces.push_back(TriMesh::halfedge_face(h));
    ring.push_back(m.halfedge_from(p));
    h = m.twin(p);
  } while (h != start);
  const int n = static_cast<int>(faces.size());

  bool any_frozen = false;
  for (int g : faces)
    if (frozen_face[g]) any_frozen = true;
  if (!any_frozen) {
    whirl(f, q, donor, sign);
    return;
  }

  int cut = -1;
  for (int k = 0; k < n; ++k)
    if (ring[k] == donor) cut = k;
  if (cut == -1)
    throw Error(ErrorCode::NotAdjacent, "vertices " + std::to_string(q) + " and " +
                                            std::to_string(donor) + " share no edge");
  if (frozen_face[faces[cut]] && frozen_face[faces[(cut + 1) % n]])
    throw Error(ErrorCode::TooCoarse,
                "the crossing to vertex " + std::to_string(donor) + " is pinned");

  // Maximal run of free faces around the donor crossing.
  int anchor = frozen_face[faces[cut]] ? (cut + 1) % n : cut;
  int left = anchor, right = anchor;
  while (!frozen_face[faces[(left + n - 1) % n]]) left = (left + n - 1) % n;
  while (!frozen_face[faces[(right + 1) % n]]) right = (right + 1) % n;
  const int W = (right - left + n) % n + 1;
  const int jump = (cut - left + 1 + n) % n;  // local crossing index, 0..W

  // Local crossing j sits between arc faces j-1 and j; positions -1 and W
  // stand for the pinned junction faces, whose phase stays 0. Node W is that
  // shared ground in the difference-constraint system.
  const double lo = -M_PI + kMargin, hi = M_PI - kMargin;
  const double jlo = sign > 0 ? -3.0 * M_PI + kMargin : M_PI + kMargin;
  const double jhi = sign > 0 ? -M_PI - kMargin : 3.0 * M_PI - kMargin;
  const int ground = W;

  std::vector<double> t(W + 1), rim(W);
  for (int j = 0; j <= W; ++j) {
    int c = (left - 1 + j + n) % n;
    Vec3 d = m.position(q) - m.position(ring[c]);
    t[j] = transition(f, faces[c], faces[(c + 1) % n], d);
  }
  for (int i = 0; i < W; ++i) {
    int g = faces[(left + i) % n];
    int he = -1;
    for (int k = 0; k < 3; ++k)
      if (m.halfedge_from(3 * g + k) != q && m.halfedge_to(3 * g + k) != q) he = 3 * g + k;
    int tw = m.twin(he);
    if (tw == -1) {
      rim[i] = std::numeric_limits<double>::quiet_NaN();
    } else {
      Vec3 d = m.position(m.halfedge_to(he)) - m.position(m.halfedge_from(he));
      rim[i] = transition(f, TriMesh::halfedge_face(tw), g, d);
    }
  }

  struct Edge {
    int u, v;
    double w;  // phi[v] - phi[u] <= w
  };
  std::vector<Edge> edges;
  for (int j = 0; j <= W; ++j) {
    int L = j == 0 ? ground : j - 1;
    int R = j == W ? ground : j;
    double a = j == jump ? jlo : lo, b = j == jump ? jhi : hi;
    edges.push_back({L, R, b - t[j]});
    edges.push_back({R, L, t[j] - a});
  }
  for (int i = 0; i < W; ++i) {
    double a = std::isnan(rim[i]) ? -4.0 * M_PI : lo - rim[i];
    double b = std::isnan(rim[i]) ? 4.0 * M_PI : hi - rim[i];
    edges.push_back({ground, i, b});
    edges.push_back({i, ground, -a});
  }

  std::vector<double> dist(W + 1, 0.0);
  bool changed = true;
  for (int pass = 0; pass <= W + 1 && changed; ++pass) {
    changed = false;
    for (const Edge& e : edges) {
      if (dist[e.u] + e.w < dist[e.v] - 1e-12) {
        dist[e.v] = dist[e.u] + e.w;
        changed = true;
      }
    }
  }
  if (changed)
    throw Error(ErrorCode::TooCoarse, "the pinned fan at vertex " + std::to_string(q) +
                                          " cannot absorb another turn");

  std::vector<double> phi(W + 1);
  for (int i = 0; i < W; ++i) phi[i] = dist[i] - dist[ground];
  phi[ground] = 0.0;

  for (int sweep = 0; sweep < kCenterSweeps; ++sweep) {
    for (int i = 0; i < W; ++i) {
      double L = -std::numeric_limits<double>::infinity();
      double U = std::numeric_limits<double>::infinity();
      for (const Edge& e : edges) {
        if (e.v == i) U = std::min(U, phi[e.u] + e.w);
        if (e.u == i) L = std::max(L, phi[e.v] - e.w);
      }
      if (L <= U) phi[i] = 0.5 * (L + U);
    }
  }

  auto value = [&](int j) {
    double pl = j == 0 ? 0.0 : phi[j - 1];
    double pr = j == W ? 0.0 : phi[j];
    return t[j] + pr - pl;
  };
  for (int j = 0; j <= W; ++j) {
    double v = value(j);
    if (j == jump) v -= sign > 0 ? -2.0 * M_PI : 2.0 * M_PI;
    if (std::abs(v) >= M_PI - 1e-9)
      throw Error(ErrorCode::TooCoarse, "the pinned fan at vertex " + std::to_string(q) +
                                            " cannot absorb another turn");
  }
  for (int i = 0; i < W; ++i) {
    if (std::isnan(rim[i])) continue;
    if (std::abs(rim[i] + phi[i]) >= M_PI - 1e-9)
      throw Error(ErrorCode::TooCoarse, "the pinned fan at vertex " + std::to_string(q) +
                                            " cannot absorb another turn");
  }

  bool donor_interior = !m.is_boundary_vertex(donor);
  long long before_q = raw_index(f, q);
  long long before_d = donor_interior ? raw_index(f, donor) : 0;
  for (int i = 0; i < W; ++i) {
    int g = faces[(left + i) % n];
    f.theta[g] = wrap_angle(f.theta[g] + phi[i]);
  }
  if (raw_index(f, q) != before_q + sign ||
      (donor_interior && raw_index(f, donor) != before_d - sign))
    throw Error(ErrorCode::InternalError, "turn transfer bookkeeping failed");
}

void ship_index(TangentField& f, const std::vector<int>& path, int sign) {
  if (path.size() < 2)
    throw Error(ErrorCode::InternalError, "index transport needs a two-point path");
  for (size_t k = 1; k < path.size(); ++k) whirl(f, path[k], path[k - 1], sign);
}

double theta_jitter(int f) {
  return 1e-3 * (((hash_u64(static_cast<uint64_t>(f)) >> 16) & 0xffff) / 65536.0 - 0.5);
}

void fill_from_seeds(const TriMesh& m, std::vector<double>& theta, std::vector<char>& assigned) {
  std::vector<int> frontier;
  for (int f = 0; f < m.n_faces(); ++f)
    if (assigned[f]) frontier.push_back(f);
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int f : frontier) {
      for (int k = 0; k < 3; ++k) {
        int t = m.twin(3 * f + k);
        if (t < 0) continue;
        int g = TriMesh::halfedge_face(t);
        if (assigned[g]) continue;
        theta[g] = wrap_angle(theta[f] + transport_angle(m, f, g) + theta_jitter(g));
        assigned[g] = 1;
        next.push_back(g);
      }
    }
    frontier = std::move(next);
  }
}

namespace {

int index_of(const std::vector<SingularPoint>& pts, int v) {
  for (const SingularPoint& p : pts)
    if (p.vertex == v) return p.index;
  return 0;
}

}  // namespace

void settle_indices(TangentField& field, const std::map<int, int>& want,
                    const std::vector<char>& frozen_face, uint64_t seed) {
  const TriMesh& m = *field.mesh;
  std::vector<char> clear(m.n_vertices(), 1);
  for (int v = 0; v < m.n_vertices(); ++v)
    if (m.is_boundary_vertex(v)) clear[v] = 0;
  for (int g = 0; g < m.n_faces(); ++g)
    if (frozen_face[g])
      for (int k = 0; k < 3; ++k) clear[m.face(g)[k]] = 0;

  std::vector<int> fenced;
  int pivot = -1;
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (!clear[v])
      fenced.push_back(v);
    else if (pivot == -1)
      pivot = v;
  }

  for (int guard = 0;; ++guard) {
    if (guard > 6 * (m.n_vertices() + 8))
      throw Error(ErrorCode::InternalError, "index transport failed to settle");
    std::vector<SingularPoint> pts = singular_set(field, seed);
    std::map<int, int> need;
    for (const SingularPoint& p : pts) {
      auto it = want.find(p.vertex);
      int target = it == want.end() ? 0 : it->second;
      if (target != p.index) need[p.vertex] = target - p.index;
    }
    for (const auto& [v, idx] : want)
      if (idx != 0 && index_of(pts, v) == 0 && !need.count(v)) need[v] = idx;
    if (need.empty()) break;

    int a = -1, b = -1;  // a gains index, b sheds it
    for (const auto& [v, d] : need) {
      if (d > 0 && a == -1) a = v;
      if (d < 0 && b == -1) b = v;
    }
    if (a == -1 || b == -1) throw Error(ErrorCode::InternalError, "unbalanced index surplus");

    // The path tail is a whirl center, so a receiver inside the fence instead
    // sheds a negative unit toward the pivot; the pivot's surplus resolves in
    // later rounds, where it is a legal tail.
    int head, tail, sign, amount;
    if (clear[a]) {
      head = b;
      tail = a;
      sign = 1;
      amount = std::min(need[a], -need[b]);
    } else {
      if (pivot == -1)
        throw Error(ErrorCode::TooCoarse, "no vertex clear of the pinned faces");
      head = a;
      tail = pivot;
      sign = -1;
      amount = need[a];
    }

    std::set<int> must(fenced.begin(), fenced.end());
    must.erase(head);
    std::set<int> preferred = must;
    for (const SingularPoint& p : pts) preferred.insert(p.vertex);
    preferred.erase(head);
    preferred.erase(tail);

    std::vector<int> path;
    try {
      path = m.path_between(head, tail, std::vector<int>(preferred.begin(), preferred.end()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPath) throw;
      try {
        path = m.path_between(head, tail, std::vector<int>(must.begin(), must.end()));
      } catch (const Error& e2) {
        if (e2.code() != ErrorCode::NoPath) throw;
        throw Error(ErrorCode::TooCoarse, "no transport route clear of the pinned faces from " +
                                              std::to_string(head) + " to " +
                                              std::to_string(tail));
      }
    }
    for (int t = 0; t < amount; ++t) ship_index(field, path, sign);
  }

  field.marked.clear();
  for (const auto& [v, idx] : want)
    if (idx == 0) field.marked.push_back(v);
  std::sort(field.marked.begin(), field.marked.end());

  std::map<int, int> got;
  for (const SingularPoint& p : singular_set(field, seed)) got[p.vertex] = p.index;
  if (got != want)
    throw Error(ErrorCode::InternalError, "index rewrite missed its prescription");
}

}  // namespace sf::detail
