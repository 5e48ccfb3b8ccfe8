#include "singforge/flow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>

#include "singforge/rng.hpp"
#include "singforge/surgery.hpp"

namespace sf {
namespace {

struct CaptureSet {
  std::vector<int> verts;
  std::vector<double> radius;
};

CaptureSet capture_set(const TangentField& f, double override_radius) {
  CaptureSet c;
  for (const SingularPoint& s : singular_set(f)) {
    c.verts.push_back(s.vertex);
    c.radius.push_back(override_radius > 0.0
                           ? override_radius
                           : 0.5 * f.mesh->shortest_edge_at(s.vertex));
  }
  return c;
}

// First parameter along [p, q] that enters the ball (c, r), or -1.
double ball_entry(const Vec3& p, const Vec3& q, const Vec3& c, double r) {
  Vec3 u = q - p;
  double len = norm(u);
  if (len < 1e-300) return norm(p - c) <= r ? 0.0 : -1.0;
  u = u / len;
  double b = dot(c - p, u);
  double d2 = dot(c - p, c - p) - b * b;
  double disc = r * r - d2;
  if (disc < 0.0) return -1.0;
  double t = b - std::sqrt(disc);
  if (t > len || b + std::sqrt(disc) < 0.0) return -1.0;  // ball behind or ahead
  return std::max(t, 0.0);
}

// Earliest capture on the segment among all singular vertices.
bool capture_on(const CaptureSet& cap, const TriMesh& m, const Vec3& p,
                const Vec3& q, int* vert, Vec3* hit) {
  double best = -1.0;
  for (size_t i = 0; i < cap.verts.size(); ++i) {
    double t = ball_entry(p, q, m.position(cap.verts[i]), cap.radius[i]);
    if (t < 0.0) continue;
    if (best < 0.0 || t < best) {
      best = t;
      *vert = cap.verts[i];
    }
  }
  if (best < 0.0) return false;
  Vec3 u = q - p;
  double len = norm(u);
  *hit = len < 1e-300 ? p : p + u * (best / len);
  return true;
}

// Exit of the ray p + t*d through the edges of `face`: returns the local
// edge k and the exit point, or -1 when no edge lies ahead (pinned point).
// Exits within a sliver of a corner snap onto it and report it in *corner.
int face_exit(const TriMesh& m, int face, const Vec3& p, const Vec3& d, Vec3* out,
              int* corner) {
  const std::array<int, 3>& fc = m.face(face);
  Vec3 o = m.position(fc[0]);
  const Vec3& ex = m.frame_e1(face);
  const Vec3& ey = m.frame_e2(face);
  Vec2 p2(dot(p - o, ex), dot(p - o, ey));
  Vec2 d2(dot(d, ex), dot(d, ey));
  Vec2 c2[3];
  for (int k = 0; k < 3; ++k) {
    Vec3 q = m.position(fc[k]);
    c2[k] = Vec2(dot(q - o, ex), dot(q - o, ey));
  }
  int best = -1;
  double best_t = 0.0, best_s = 0.0;
  for (int k = 0; k < 3; ++k) {
    Vec2 a = c2[k], e = c2[(k + 1) % 3] - c2[k];
    double den = cross(d2, e);
    if (std::fabs(den) < 1e-300) continue;
    double t = cross(a - p2, e) / den;
    double s = cross(a - p2, d2) / den;
    if (t <= 1e-12 || s < -1e-9 || s > 1.0 + 1e-9) continue;
    if (best < 0 || t < best_t) {
      best = k;
      best_t = t;
      best_s = s;
    }
  }
  *corner = -1;
  if (best < 0) return -1;
  if (best_s < 1e-7) {
    *corner = fc[best];
    *out = m.position(fc[best]);
  } else if (best_s > 1.0 - 1e-7) {
    *corner = fc[(best + 1) % 3];
    *out = m.position(fc[(best + 1) % 3]);
  } else {
    const Vec3& u = m.position(fc[best]);
    const Vec3& w = m.position(fc[(best + 1) % 3]);
    *out = u + (w - u) * best_s;
  }
  return best;
}

// Face around w whose own vector points into its wedge at w, by the widest
// margin; -1 when no face carries the flow onward.
int continue_face(const TangentField& f, double sgn, int w) {
  const TriMesh& m = *f.mesh;
  int best = -1;
  double best_score = 1e-10;
  for (int F : m.faces_around(w)) {
    const std::array<int, 3>& fc = m.face(F);
    int k = fc[0] == w ? 0 : fc[1] == w ? 1 : 2;
    Vec3 d = normalized(face_vector(f, F)) * sgn;
    Vec3 ea = normalized(m.position(fc[(k + 1) % 3]) - m.position(w));
    Vec3 eb = normalized(m.position(fc[(k + 2) % 3]) - m.position(w));
    double score = std::min(dot(cross(ea, d), m.normal(F)),
                            dot(cross(d, eb), m.normal(F)));
    if (score > best_score) {
      best_score = score;
      best = F;
    }
  }
  return best;
}

// Outgoing halfedge at v whose edge traps the flow: both flanking faces
// press onto it and the combined drive moves away from v. Valleys and
// ridges of piecewise height fields continue this way when no face wedge
// contains its own vector. -1 when no spoke carries the flow.
int best_spoke(const TangentField& f, double sgn, int v) {
  const TriMesh& m = *f.mesh;
  int best = -1;
  double best_drive = 1e-10;
  for (int F : m.faces_around(v)) {
    const std::array<int, 3>& fc = m.face(F);
    int k = fc[0] == v ? 0 : fc[1] == v ? 1 : 2;
    int h = 3 * F + k;  // v -> next corner; every interior spoke shows up once
    Vec3 ehat = normalized(m.position(m.halfedge_to(h)) - m.position(v));
    Vec3 dA = normalized(face_vector(f, F)) * sgn;
    if (dot(dA, cross(m.normal(F), ehat)) > 1e-10) continue;  // pulls into F
    double drive = dot(dA, ehat);
    int tw = m.twin(h);
    if (tw >= 0) {
      int B = TriMesh::halfedge_face(tw);
      Vec3 dB = normalized(face_vector(f, B)) * sgn;
      if (dot(dB, cross(m.normal(B), -ehat)) > 1e-10) continue;  // pulls into B
      drive += dot(dB, ehat);
    }
    if (drive > best_drive) {
      best_drive = drive;
      best = h;
    }
  }
  return best;
}

void push_segment(Trajectory* out, int face, const Vec3& a, const Vec3& b) {
  double len = norm(b - a);
  out->segments.push_back({face, a, b, len});
  out->total_length += len;
}

}  // namespace

Trajectory trace(const TangentField& f, int face, const Vec3& start, FlowDir dir,
                 int max_steps, double capture_radius) {
  const TriMesh& m = *f.mesh;
  CaptureSet cap = capture_set(f, capture_radius);
  for (size_t i = 0; i < cap.verts.size(); ++i)
    if (norm(start - m.position(cap.verts[i])) <= cap.radius[i])
      throw Error(ErrorCode::StartsAtSingular,
                  "start point lies in the capture ball of vertex " +
                      std::to_string(cap.verts[i]));

  double sgn = dir == FlowDir::Forward ? 1.0 : -1.0;
  Trajectory out;
  int cur = face;
  int at_vertex = -1;
  Vec3 p = start;
  while (static_cast<int>(out.segments.size()) < max_steps) {
    int cv;
    Vec3 hit;
    if (at_vertex >= 0) {
      int v = at_vertex;
      at_vertex = -1;
      int F = continue_face(f, sgn, v);
      if (F >= 0) {
        cur = F;
        p = m.position(v);
        continue;
      }
      int h = best_spoke(f, sgn, v);
      if (h < 0) {
        if (m.is_boundary_vertex(v)) out.end = TraceEnd::Escaped;
        return out;  // pinned vertex: StepLimit stands
      }
      int w = m.halfedge_to(h);
      Vec3 wp = m.position(w);
      if (capture_on(cap, m, m.position(v), wp, &cv, &hit)) {
        push_segment(&out, TriMesh::halfedge_face(h), m.position(v), hit);
        out.end = TraceEnd::Singular;
        out.end_vertex = cv;
        return out;
      }
      push_segment(&out, TriMesh::halfedge_face(h), m.position(v), wp);
      at_vertex = w;
      continue;
    }
    Vec3 d = normalized(face_vector(f, cur)) * sgn;
    Vec3 q;
    int corner;
    int k = face_exit(m, cur, p, d, &q, &corner);
    if (k < 0) return out;  // pinned: StepLimit stands
    if (capture_on(cap, m, p, q, &cv, &hit)) {
      push_segment(&out, cur, p, hit);
      out.end = TraceEnd::Singular;
      out.end_vertex = cv;
      return out;
    }
    push_segment(&out, cur, p, q);
    if (corner >= 0) {
      at_vertex = corner;
      continue;
    }
    int h = 3 * cur + k;
    int tw = m.twin(h);
    if (tw < 0) {
      out.end = TraceEnd::Escaped;
      return out;
    }
    int g = TriMesh::halfedge_face(tw);
    Vec3 dg = normalized(face_vector(f, g)) * sgn;
    Vec3 eu = m.position(m.halfedge_to(h)) - m.position(m.halfedge_from(h));
    Vec3 inward = cross(m.normal(g), normalized(-eu));
    if (dot(dg, inward) > 1e-10) {
      cur = g;
      p = q;
      continue;
    }
    // Both faces press onto the edge: slide along it to a vertex.
    Vec3 ehat = normalized(eu);
    double drive = dot(d, ehat) + dot(dg, ehat);
    if (std::fabs(drive) < 1e-10) return out;  // pinned edge point
    int wv = drive > 0.0 ? m.halfedge_to(h) : m.halfedge_from(h);
    Vec3 wp = m.position(wv);
    if (capture_on(cap, m, q, wp, &cv, &hit)) {
      push_segment(&out, g, q, hit);
      out.end = TraceEnd::Singular;
      out.end_vertex = cv;
      return out;
    }
    push_segment(&out, g, q, wp);
    at_vertex = wv;
  }
  return out;
}

namespace {

// Barycentric inside test in the face frame.
bool inside_face(const TriMesh& m, int face, const Vec3& p) {
  const std::array<int, 3>& fc = m.face(face);
  Vec3 o = m.position(fc[0]);
  const Vec3& ex = m.frame_e1(face);
  const Vec3& ey = m.frame_e2(face);
  Vec2 p2(dot(p - o, ex), dot(p - o, ey));
  Vec2 c2[3];
  for (int k = 0; k < 3; ++k) {
    Vec3 q = m.position(fc[k]);
    c2[k] = Vec2(dot(q - o, ex), dot(q - o, ey));
  }
  for (int k = 0; k < 3; ++k) {
    Vec2 e = c2[(k + 1) % 3] - c2[k];
    if (cross(e, p2 - c2[k]) < 1e-12) return false;
  }
  return true;
}

Trajectory stitch(const Trajectory& back, const Trajectory& fwd) {
  Trajectory w;
  for (int i = static_cast<int>(back.segments.size()) - 1; i >= 0; --i) {
    const TraceSegment& s = back.segments[i];
    w.segments.push_back({s.face, s.b, s.a, s.length});
    w.total_length += s.length;
  }
  for (const TraceSegment& s : fwd.segments) {
    w.segments.push_back(s);
    w.total_length += s.length;
  }
  w.end = fwd.end;
  w.end_vertex = fwd.end_vertex;
  return w;
}

}  // namespace

FlowGraph field_graph(const TangentField& f, int seeds_per_singularity) {
  const TriMesh& m = *f.mesh;
  std::vector<SingularPoint> sing = singular_set(f);
  if (sing.empty())
    throw Error(ErrorCode::InconclusiveTrace, "no singular vertices to seed");

  FlowGraph g;
  for (const SingularPoint& s : sing) g.nodes.push_back(s.vertex);

  int limit_hits = 0, total = 0;
  std::set<std::pair<int, int>> seen;
  for (const SingularPoint& s : sing) {
    int v = s.vertex;
    const std::vector<int>& fan = m.faces_around(v);
    std::vector<double> cum(fan.size());
    double tot = 0.0;
    for (size_t i = 0; i < fan.size(); ++i) {
      const std::array<int, 3>& fc = m.face(fan[i]);
      int k = fc[0] == v ? 0 : fc[1] == v ? 1 : 2;
      tot += m.corner_angle(fan[i], k);
      cum[i] = tot;
    }
    double rcap = 0.5 * m.shortest_edge_at(v);
    for (int i = 0; i < seeds_per_singularity; ++i) {
      double a = tot * (i + 0.5) / seeds_per_singularity;
      size_t fi = std::lower_bound(cum.begin(), cum.end(), a) - cum.begin();
      if (fi >= fan.size()) fi = fan.size() - 1;
      int F = fan[fi];
      const std::array<int, 3>& fc = m.face(F);
      int k = fc[0] == v ? 0 : fc[1] == v ? 1 : 2;
      double local = a - (fi > 0 ? cum[fi - 1] : 0.0);
      Vec3 e1 = normalized(m.position(fc[(k + 1) % 3]) - m.position(v));
      Vec3 e2 = cross(m.normal(F), e1);
      Vec3 dirp = e1 * std::cos(local) + e2 * std::sin(local);
      // Just outside the capture ball, shrunk until the point sits in its face.
      double r = 1.5 * rcap;
      Vec3 p = m.position(v) + dirp * r;
      while (!inside_face(m, F, p) && r > 1.05 * rcap) {
        r *= 0.8;
        p = m.position(v) + dirp * r;
      }
      if (!inside_face(m, F, p)) continue;
      Trajectory fw, bw;
      try {
        fw = trace(f, F, p, FlowDir::Forward);
        bw = trace(f, F, p, FlowDir::Backward);
      } catch (const Error&) {
        continue;  // seed fell into a neighboring capture ball
      }
      total += 2;
      limit_hits += (fw.end == TraceEnd::StepLimit) + (bw.end == TraceEnd::StepLimit);
      if (fw.end == TraceEnd::Singular && bw.end == TraceEnd::Singular &&
          seen.insert({bw.end_vertex, fw.end_vertex}).second)
        g.arcs.push_back({bw.end_vertex, fw.end_vertex, stitch(bw, fw)});
    }
  }
  if (total == 0 || 2 * limit_hits > total)
    throw Error(ErrorCode::InconclusiveTrace,
                std::to_string(limit_hits) + " of " + std::to_string(total) +
                    " traces hit the step limit");
  return g;
}

ContourReport has_contour(const FlowGraph& graph) {
  std::map<int, std::vector<int>> adj;
  for (int v : graph.nodes) adj[v];
  for (const FlowArc& a : graph.arcs) adj[a.from].push_back(a.to);

  std::map<int, int> color;  // 0 white, 1 on stack, 2 done
  std::vector<int> stack;
  ContourReport rep;

  // Iterative DFS; (node, next child index) frames.
  for (int root : graph.nodes) {
    if (color[root]) continue;
    std::vector<std::pair<int, size_t>> frames{{root, 0}};
    color[root] = 1;
    stack.push_back(root);
    while (!frames.empty()) {
      auto& [u, ci] = frames.back();
      if (ci < adj[u].size()) {
        int w = adj[u][ci++];
        if (color[w] == 1) {
          size_t at = std::find(stack.begin(), stack.end(), w) - stack.begin();
          rep.found = true;
          rep.cycle.assign(stack.begin() + at, stack.end());
          rep.cycle.push_back(w);
          return rep;
        }
        if (color[w] == 0) {
          color[w] = 1;
          stack.push_back(w);
          frames.push_back({w, 0});
        }
      } else {
        color[u] = 2;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return rep;
}

double LyapunovFunction::operator()(const TangentField& f, int face,
                                    const Vec3& p) const {
  const TriMesh& m = *f.mesh;
  for (const auto& [v, r] : rank) {
    double rc = capture_radius > 0.0 ? capture_radius : 0.5 * m.shortest_edge_at(v);
    if (norm(p - m.position(v)) <= rc) return r;
  }
  Trajectory bw = trace(f, face, p, FlowDir::Backward, max_steps, capture_radius);
  Trajectory fw = trace(f, face, p, FlowDir::Forward, max_steps, capture_radius);
  if (bw.end != TraceEnd::Singular || fw.end != TraceEnd::Singular)
    throw Error(ErrorCode::NonterminatingTrajectory,
                "a trajectory through the query fails to join singular vertices");
  double lo = rank.at(bw.end_vertex);
  double hi = rank.at(fw.end_vertex);
  double den = bw.total_length + fw.total_length;
  if (den < 1e-300) return 0.5 * (lo + hi);
  return lo + (hi - lo) * (bw.total_length / den);
}

double LyapunovFunction::at_vertex(const TangentField& f, int v) const {
  auto it = rank.find(v);
  if (it != rank.end()) return it->second;
  const TriMesh& m = *f.mesh;
  int F = m.faces_around(v)[0];
  Vec3 p = m.position(v) + (m.face_centroid(F) - m.position(v)) * 1e-6;
  return (*this)(f, F, p);
}

namespace {

// Kahn order, smallest vertex id first; empty result on a cycle.
std::vector<int> topo_order(const FlowGraph& graph) {
  std::map<int, std::vector<int>> adj;
  std::map<int, int> indeg;
  for (int v : graph.nodes) indeg[v] = 0;
  for (const FlowArc& a : graph.arcs) {
    if (a.from == a.to) return {};
    adj[a.from].push_back(a.to);
    ++indeg[a.to];
  }
  std::set<int> ready;
  for (const auto& [v, d] : indeg)
    if (d == 0) ready.insert(v);
  std::vector<int> order;
  while (!ready.empty()) {
    int v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int w : adj[v])
      if (--indeg[w] == 0) ready.insert(w);
  }
  if (order.size() != graph.nodes.size()) return {};
  return order;
}

}  // namespace

LyapunovFunction lyapunov(const TangentField& f, const FlowGraph& graph) {
  (void)f;
  ContourReport c = has_contour(graph);
  if (c.found)
    throw Error(ErrorCode::HasContour,
                "flow graph has a cycle through vertex " + std::to_string(c.cycle[0]));
  LyapunovFunction L;
  std::vector<int> order = topo_order(graph);
  for (size_t i = 0; i < order.size(); ++i)
    L.rank[order[i]] = static_cast<double>(i + 1);
  return L;
}

bool is_admissible(const std::vector<int>& indices, const TriMesh& mesh) {
  if (indices.empty()) return false;
  if (indices.front() != 1 || indices.back() != 1) return false;
  int sum = 0;
  for (int a : indices) sum += a;
  return sum == mesh.euler_characteristic();
}

int QTable::operator()(const TriMesh& mesh) const {
  return mesh.is_closed() && mesh.genus() == 0 ? sphere : other;
}

bool is_realizable(const std::vector<int>& indices, const TriMesh& mesh,
                   const QTable& q) {
  if (!is_admissible(indices, mesh))
    throw Error(ErrorCode::NotAdmissible,
                "index list is not admissible for this surface");
  return static_cast<int>(indices.size()) >= q(mesh);
}

namespace {

TangentField gradient_base(const TriMesh& m, const Vec3& tilt, uint64_t seed) {
  std::vector<double> h(m.n_vertices());
  for (int v = 0; v < m.n_vertices(); ++v) h[v] = dot(m.position(v), tilt);
  for (int attempt = 0;; ++attempt) {
    try {
      return gradient_field(m, h);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroFace || attempt >= 3) throw;
      SplitMix rng(seed ^ (0x5bd1e995ull + attempt));
      for (int v = 0; v < m.n_vertices(); ++v)
        h[v] += 1e-9 * m.bbox_diagonal() * (rng.unit() - 0.5);
    }
  }
}

// Lowest-id regular vertex at hop distance >= 3 from every singular vertex,
// paired with its lowest such neighbor.
std::pair<int, int> fresh_pair(const TriMesh& m, const std::vector<int>& singular) {
  std::vector<int> dist(m.n_vertices(), -1);
  std::vector<int> queue = singular;
  for (int v : queue) dist[v] = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int v = queue[qi];
    if (dist[v] >= 3) continue;
    for (int w : m.vertices_around(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (dist[v] >= 0 || m.is_boundary_vertex(v)) continue;
    for (int w : m.vertices_around(v))
      if (dist[w] < 0 && !m.is_boundary_vertex(w)) return {v, w};
  }
  throw Error(ErrorCode::TooCoarse, "no room left to insert a fresh pair");
}

// Reshape the unit supply of a gradient base into the prescribed nonzero
// indices; zeros in the prescription become marked vertices.
TangentField reshape(TangentField field, const TriMesh& m, const Vec3& tilt,
                     const std::vector<int>& indices, uint64_t seed) {
  int zeros = 0, need_pos = 0, need_neg = 0;
  for (int a : indices) {
    if (a == 0) ++zeros;
    if (a > 0) need_pos += a;
    if (a < 0) need_neg -= a;
  }

  std::vector<int> pos, neg;  // current unit carriers, ascending ids
  for (const SingularPoint& s : singular_set(field, seed)) {
    if (std::abs(s.index) > 1)
      throw Error(ErrorCode::TooCoarse, "height base produced a degenerate point");
    (s.index > 0 ? pos : neg).push_back(s.vertex);
  }
  // Keep one source and one sink out of the reshaping pool: the admissible
  // ends stay simple extremes. Pick the lowest and highest tilt heights.
  int lo_vertex = -1, hi_vertex = -1;
  double lo = 0.0, hi = 0.0;
  for (int v : pos) {
    double hv = dot(m.position(v), tilt);
    if (lo_vertex < 0 || hv < lo) {
      lo = hv;
      lo_vertex = v;
    }
    if (hi_vertex < 0 || hv > hi) {
      hi = hv;
      hi_vertex = v;
    }
  }
  if (lo_vertex == hi_vertex)
    throw Error(ErrorCode::TooCoarse, "height base lacks separate extremes");

  auto erase_val = [](std::vector<int>& v, int x) {
    v.erase(std::remove(v.begin(), v.end(), x), v.end());
  };
  erase_val(pos, lo_vertex);
  erase_val(pos, hi_vertex);
  need_pos -= 2;  // the two admissible ends

  // Balance the unit supply, then annihilate any surplus.
  while (static_cast<int>(pos.size()) < need_pos ||
         static_cast<int>(neg.size()) < need_neg) {
    std::vector<int> all = pos;
    all.insert(all.end(), neg.begin(), neg.end());
    all.push_back(lo_vertex);
    all.push_back(hi_vertex);
    auto [p, q] = fresh_pair(m, all);
    field = insert_pair(field, p, q, seed);
    pos.push_back(p);
    neg.push_back(q);
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
  }
  while (static_cast<int>(pos.size()) > need_pos) {
    // Closest opposite pair: a short merge path stays clear of other points.
    int p = -1, n = -1;
    double best = 0.0;
    for (int x : pos)
      for (int y : neg) {
        double d = norm(m.position(x) - m.position(y));
        if (p < 0 || d < best) {
          p = x;
          n = y;
          best = d;
        }
      }
    field = merge_singularities(field, p, n, seed);
    erase_val(pos, p);
    erase_val(neg, n);
  }

  // Group units into the prescribed carriers, nearest mergers first. Each
  // group grows at the pool member with the most room: merge regions must
  // not reach the ends, earlier groups, or units of the opposite sign.
  std::vector<int> placed{lo_vertex, hi_vertex};
  for (int a : indices) {
    if (std::abs(a) < 2) continue;
    std::vector<int>& pool = a > 0 ? pos : neg;
    const std::vector<int>& other = a > 0 ? neg : pos;
    int carrier = -1;
    double room = -1.0;
    for (int v : pool) {
      double d = 1e300;
      for (int w : other) d = std::min(d, norm(m.position(v) - m.position(w)));
      for (int w : placed) d = std::min(d, norm(m.position(v) - m.position(w)));
      if (d > room) {
        room = d;
        carrier = v;
      }
    }
    erase_val(pool, carrier);
    placed.push_back(carrier);
    for (int u = 1; u < std::abs(a); ++u) {
      int best_v = -1;
      double best_d = 0.0;
      for (int v : pool) {
        double d = norm(m.position(v) - m.position(carrier));
        if (best_v < 0 || d < best_d) {
          best_v = v;
          best_d = d;
        }
      }
      field = merge_singularities(field, carrier, best_v, seed);
      erase_val(pool, best_v);
    }
  }

  if (zeros > 0) {
    std::vector<int> marked = field.marked;
    std::vector<int> taken;
    for (const SingularPoint& s : singular_set(field, seed)) taken.push_back(s.vertex);
    for (int z = 0; z < zeros; ++z) {
      auto [p, q] = fresh_pair(m, taken);
      (void)q;
      marked.push_back(p);
      taken.push_back(p);
    }
    std::sort(marked.begin(), marked.end());
    field = make_field(m, field.theta, field.mag, marked);
  }
  return field;
}

// Kahn order steered toward the prescribed index sequence: among the ready
// nodes prefer one carrying the index the sequence expects next.
std::vector<int> topo_order_matching(const FlowGraph& graph,
                                     const std::map<int, int>& index_of,
                                     const std::vector<int>& want) {
  std::map<int, std::vector<int>> adj;
  std::map<int, int> indeg;
  for (int v : graph.nodes) indeg[v] = 0;
  for (const FlowArc& a : graph.arcs) {
    adj[a.from].push_back(a.to);
    ++indeg[a.to];
  }
  std::set<int> ready;
  for (const auto& [v, d] : indeg)
    if (d == 0) ready.insert(v);
  std::vector<int> order;
  while (!ready.empty()) {
    int pick = -1;
    if (order.size() < want.size()) {
      for (int v : ready)
        if (index_of.at(v) == want[order.size()]) {
          pick = v;
          break;
        }
    }
    if (pick < 0) pick = *ready.begin();
    ready.erase(pick);
    order.push_back(pick);
    for (int w : adj[pick])
      if (--indeg[w] == 0) ready.insert(w);
  }
  return order;
}

}  // namespace

RealizedField realize_admissible(const TriMesh& mesh, const std::vector<int>& indices,
                                 uint64_t seed) {
  if (!mesh.is_closed())
    throw Error(ErrorCode::HasBoundary, "realization needs a closed surface");
  if (!is_realizable(indices, mesh, QTable{}))
    throw Error(ErrorCode::NotAdmissible,
                "fewer points than the surface's minimal critical count");

  const Vec3 tilts[] = {{0.23, 0.11, 0.96}, {0.96, 0.23, 0.11},
                        {0.11, 0.96, 0.23}, {0.53, 0.62, 0.58}};
  std::optional<Error> last{Error(ErrorCode::TooCoarse,
                                  "no tilt produced a contour-free realization")};
  for (const Vec3& tilt : tilts) {
    try {
      TangentField field =
          reshape(gradient_base(mesh, tilt, seed), mesh, tilt, indices, seed);
      FlowGraph graph = field_graph(field);
      ContourReport c = has_contour(graph);
      if (c.found) {
        last = Error(ErrorCode::HasContour, "realized field kept a contour");
        continue;
      }
      std::map<int, int> index_of;
      for (const SingularPoint& s : singular_set(field, seed))
        index_of[s.vertex] = s.index;
      std::vector<int> order = topo_order_matching(graph, index_of, indices);
      bool match = order.size() == indices.size();
      for (size_t i = 0; match && i < order.size(); ++i)
        match = index_of.at(order[i]) == indices[i];
      if (!match) {
        last = Error(ErrorCode::TooCoarse, "realized order missed the prescription");
        continue;
      }
      RealizedField out;
      out.field = std::move(field);
      out.graph = std::move(graph);
      for (size_t i = 0; i < order.size(); ++i)
        out.potential.rank[order[i]] = static_cast<double>(i + 1);
      return out;
    } catch (const Error& e) {
      last = e;
    }
  }
  throw *last;
}

}  // namespace sf
