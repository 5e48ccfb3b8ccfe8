#include "singforge/surgery.hpp"

#include <algorithm>
#include <set>

#include "retarget.hpp"
#include "singforge/rng.hpp"

namespace sf {

namespace {

std::set<int> singular_or_marked(const TangentField& f, uint64_t seed) {
  std::set<int> s;
  for (const SingularPoint& p : singular_set(f, seed)) s.insert(p.vertex);
  return s;
}

int index_of(const std::vector<SingularPoint>& pts, int v) {
  for (const SingularPoint& p : pts)
    if (p.vertex == v) return p.index;
  return 0;
}

std::vector<int> path_avoiding(const TriMesh& m, int a, int b,
                               const std::set<int>& avoid) {
  try {
    return m.path_between(a, b, std::vector<int>(avoid.begin(), avoid.end()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoPath)
      throw Error(ErrorCode::PathHitsSingular,
                  "every path from " + std::to_string(a) + " to " + std::to_string(b) +
                      " meets another singular point");
    throw;
  }
}

std::vector<int> insertion_path(const TangentField& f, int p, int q, std::set<int>& s) {
  s = singular_or_marked(f, 0);
  if (s.count(p) || s.count(q))
    throw Error(ErrorCode::AlreadySingular,
                "insertion endpoints must be regular vertices");
  if (p == q)
    throw Error(ErrorCode::AlreadySingular, "insertion endpoints coincide");
  return path_avoiding(*f.mesh, p, q, s);
}

std::vector<int> merge_path(const TangentField& f, int x0, int x1, std::set<int>& s) {
  s = singular_or_marked(f, 0);
  if (!s.count(x0) || !s.count(x1) || x0 == x1)
    throw Error(ErrorCode::EndpointNotSingular,
                "merge endpoints must be two distinct singular points");
  s.erase(x0);
  s.erase(x1);
  return path_avoiding(*f.mesh, x0, x1, s);
}

enum class ShipOutcome { Shipped, Strand, NoRoute };

// Move one index unit from b toward a. Tiers are avoid-sets tried in order
// (tight first); a tier with no route falls through to the next. Every
// transit leaves the stars along the corridor a little more twisted, so
// interior vertices accumulate wear counts and callers bake wear thresholds
// into their tighter tiers. ship_index twists stars as it walks, so a
// saturated star mid-path leaves the unit stranded at an intermediate vertex
// (Strand); the caller's books must be re-derived from the field rather than
// decremented. A failing corridor is worn too, steering the retry elsewhere.
ShipOutcome ship_one(TangentField& field, int b, int a,
                     const std::vector<const std::set<int>*>& tiers,
                     std::map<int, int>& wear) {
  const TriMesh& m = *field.mesh;
  for (const std::set<int>* tier : tiers) {
    std::set<int> avoid = *tier;
    avoid.erase(a);
    avoid.erase(b);
    std::vector<int> path;
    try {
      path = m.path_between(b, a, std::vector<int>(avoid.begin(), avoid.end()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPath) throw;
      continue;
    }
    bool shipped = true;
    try {
      detail::ship_index(field, path, 1);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooCoarse) throw;
      shipped = false;
    }
    for (size_t i = 1; i + 1 < path.size(); ++i) ++wear[path[i]];
    return shipped ? ShipOutcome::Shipped : ShipOutcome::Strand;
  }
  return ShipOutcome::NoRoute;
}

std::set<int> worn_at(const std::map<int, int>& wear, int limit) {
  std::set<int> out;
  for (const auto& [v, n] : wear)
    if (n >= limit) out.insert(v);
  return out;
}

}  // namespace

int boundary_winding(const TangentField& f, const Region& region, uint64_t seed) {
  int sum = 0;
  for (const SingularPoint& p : singular_set(f, seed))
    if (std::binary_search(region.interior_vertices.begin(),
                           region.interior_vertices.end(), p.vertex))
      sum += p.index;
  return sum;
}

TangentField resynthesize_region(const TangentField& f, const Region& region,
                                 const std::map<int, int>& want, uint64_t seed) {
  validate_field(f);
  const TriMesh& m = *f.mesh;
  Region r = region_from_faces(m, region.faces);
  if (!is_disk(m, r))
    throw Error(ErrorCode::NotADisk, "region is not a combinatorial disk");
  for (const auto& [v, idx] : want) {
    if (!std::binary_search(r.interior_vertices.begin(), r.interior_vertices.end(), v))
      throw Error(ErrorCode::NotInterior,
                  "vertex " + std::to_string(v) + " is not interior to the region");
  }
  int have = boundary_winding(f, r, seed);
  int total = 0;
  for (const auto& [v, idx] : want) total += idx;
  if (total != have)
    throw Error(ErrorCode::WindingMismatch,
                "prescribed sum " + std::to_string(total) +
                    " != boundary winding " + std::to_string(have));

  // rotation support stays inside the region: transport paths may only use
  // vertices whose whole star lies in it
  std::set<int> fence;
  for (int v = 0; v < m.n_vertices(); ++v)
    if (!std::binary_search(r.interior_vertices.begin(), r.interior_vertices.end(), v))
      fence.insert(v);

  TangentField out = f;
  std::map<int, int> wear;
  int stall = 0, best_gross = std::numeric_limits<int>::max();
  for (int guard = 0;; ++guard) {
    if (guard > 8 * (m.n_vertices() + 8))
      throw Error(ErrorCode::InternalError, "region transport failed to settle");
    std::map<int, int> need;  // vertex -> want minus current, interior only
    for (const SingularPoint& p : singular_set(out, seed))
      if (std::binary_search(r.interior_vertices.begin(), r.interior_vertices.end(),
                             p.vertex))
        need[p.vertex] -= p.index;
    for (const auto& [v, idx] : want) need[v] += idx;
    for (auto it = need.begin(); it != need.end();)
      it = it->second == 0 ? need.erase(it) : std::next(it);
    if (need.empty()) break;

    // Strands and reroutes may tread water for a few passes; sustained lack
    // of progress means the interior really is saturated.
    int gross = 0;
    for (const auto& [v, d] : need) gross += std::abs(d);
    if (gross < best_gross) {
      best_gross = gross;
      stall = 0;
    } else if (++stall > 48) {
      throw Error(ErrorCode::TooCoarse, "region interior cannot carry the change");
    }

    // Smallest needs first: fragile one or two unit deliveries land while the
    // mesh is fresh, big flows run last when their endpoints can still absorb.
    int a = -1, b = -1;
    for (const auto& [v, d] : need) {
      if (d > 0 && (a == -1 || d < need.at(a))) a = v;
      if (d < 0 && (b == -1 || d > need.at(b))) b = v;
    }
    if (a == -1 || b == -1)
      throw Error(ErrorCode::InternalError, "unbalanced index change in region");
    std::set<int> fence1 = fence, fence2 = fence;
    for (int v : worn_at(wear, 1)) fence1.insert(v);
    for (int v : worn_at(wear, 2)) fence2.insert(v);
    if (ship_one(out, b, a, {&fence1, &fence2, &fence}, wear) == ShipOutcome::NoRoute)
      throw Error(ErrorCode::TooCoarse, "region interior cannot carry the change");
  }

  // interior marks are consumed by the rewrite; prescribed zeros become marks
  out.marked.erase(std::remove_if(out.marked.begin(), out.marked.end(),
                                  [&](int v) {
                                    return std::binary_search(
                                        r.interior_vertices.begin(),
                                        r.interior_vertices.end(), v);
                                  }),
                   out.marked.end());
  for (const auto& [v, idx] : want)
    if (idx == 0) out.marked.push_back(v);
  std::sort(out.marked.begin(), out.marked.end());
  out.marked.erase(std::unique(out.marked.begin(), out.marked.end()), out.marked.end());

  std::map<int, int> got;
  for (const SingularPoint& p : singular_set(out, seed))
    if (std::binary_search(r.interior_vertices.begin(), r.interior_vertices.end(),
                           p.vertex))
      got[p.vertex] = p.index;
  if (got != want)
    throw Error(ErrorCode::InternalError, "region rewrite missed its prescription");
  return out;
}

Region insertion_region(const TangentField& f, int p, int q) {
  std::set<int> s;
  std::vector<int> path = insertion_path(f, p, q, s);
  return disk_region(*f.mesh, path, std::vector<int>(s.begin(), s.end()));
}

TangentField insert_pair(const TangentField& f, int p, int q, uint64_t seed) {
  (void)seed;
  std::set<int> s;
  std::vector<int> path = insertion_path(f, p, q, s);
  disk_region(*f.mesh, path, std::vector<int>(s.begin(), s.end()));
  TangentField out = f;
  std::vector<int> from_q(path.rbegin(), path.rend());
  detail::ship_index(out, from_q, 1);
  return out;
}

Region merge_region(const TangentField& f, int x0, int x1) {
  std::set<int> s;
  std::vector<int> path = merge_path(f, x0, x1, s);
  return disk_region(*f.mesh, path, std::vector<int>(s.begin(), s.end()));
}

TangentField merge_singularities(const TangentField& f, int x0, int x1, uint64_t seed) {
  std::set<int> s;
  std::vector<int> path = merge_path(f, x0, x1, s);
  disk_region(*f.mesh, path, std::vector<int>(s.begin(), s.end()));
  int i1 = index_of(singular_set(f, seed), x1);
  TangentField out = f;
  std::vector<int> from_x1(path.rbegin(), path.rend());
  for (int t = 0; t < std::abs(i1); ++t)
    detail::ship_index(out, from_x1, i1 > 0 ? 1 : -1);
  // both endpoints lose any degenerate marking; x0 carries the combined index
  out.marked.erase(std::remove_if(out.marked.begin(), out.marked.end(),
                                  [&](int v) { return v == x0 || v == x1; }),
                   out.marked.end());
  return out;
}

TangentField synthesize_closed(const TriMesh& mesh, const std::map<int, int>& want,
                               uint64_t seed) {
  if (!mesh.is_closed())
    throw Error(ErrorCode::HasBoundary, "closed-surface synthesis needs a closed mesh");
  int chi = mesh.euler_characteristic();
  long long total = 0;
  for (const auto& [v, idx] : want) {
    if (v < 0 || v >= mesh.n_vertices())
      throw Error(ErrorCode::InternalError, "prescribed vertex out of range");
    total += idx;
  }
  if (total != chi)
    throw Error(ErrorCode::ChiMismatch,
                "index sum " + std::to_string(total) + " != chi " + std::to_string(chi));

  // Base: gradient of a tie-broken height, a handful of +-1 points plus
  // possibly a few low-order saddles.
  TangentField field;
  for (int salt = 0;; ++salt) {
    std::vector<double> h(mesh.n_vertices());
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      uint64_t s = hash_u64(seed ^ hash_u64(static_cast<uint64_t>(v) + salt * 1315423911ull));
      h[v] = mesh.position(v).z +
             1e-4 * mesh.bbox_diagonal() * ((s >> 11) * 0x1.0p-53 - 0.5);
    }
    try {
      field = gradient_field(mesh, h);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroFace || salt >= 7) throw;
    }
  }

  // Carry index units from a surplus vertex to a deficit vertex, one unit per
  // pass, steering successive units around the corridors earlier units wore
  // out so no star has to absorb the whole flow. Stranded units re-enter the
  // books at their stranding point on the next pass.
  std::set<int> worn;
  for (int guard = 0;; ++guard) {
    if (guard > 8 * (mesh.n_vertices() + 8))
      throw Error(ErrorCode::InternalError, "index transport failed to settle");
    std::vector<SingularPoint> pts = singular_set(field, seed);
    std::map<int, int> need;  // vertex -> remaining change
    for (const SingularPoint& p : pts) {
      auto it = want.find(p.vertex);
      int target = it == want.end() ? 0 : it->second;
      if (target != p.index) need[p.vertex] = target - p.index;
    }
    for (const auto& [v, idx] : want) {
      if (idx != 0 && index_of(pts, v) == 0 && !need.count(v)) need[v] = idx;
    }
    if (need.empty()) break;

    // Smallest needs first, same reasoning as the region transport above.
    int a = -1, b = -1;
    for (const auto& [v, d] : need) {
      if (d > 0 && (a == -1 || d < need.at(a))) a = v;
      if (d < 0 && (b == -1 || d > need.at(b))) b = v;
    }
    if (a == -1 || b == -1)
      throw Error(ErrorCode::InternalError, "unbalanced index surplus");

    // prefer fresh corridors that skirt other singular points, fall back to
    // the plain blocked route, then when boxed in allow transit through
    // simple singular points but never through tightly wound stars
    std::set<int> block, heavy;
    for (const SingularPoint& p : pts) {
      block.insert(p.vertex);
      if (std::abs(p.index) >= 2) heavy.insert(p.vertex);
    }
    block.erase(a);
    block.erase(b);
    std::set<int> block_worn = block;
    block_worn.insert(worn.begin(), worn.end());
    if (ship_one(field, b, a, {&block_worn, &block, &heavy}, worn) == ShipOutcome::NoRoute)
      throw Error(ErrorCode::TooCoarse, "no transport corridor left toward vertex " +
                                            std::to_string(a));
  }

  // Degenerate prescriptions become marked regular vertices.
  field.marked.clear();
  for (const auto& [v, idx] : want)
    if (idx == 0) field.marked.push_back(v);
  std::sort(field.marked.begin(), field.marked.end());

  std::vector<SingularPoint> final_pts = singular_set(field, seed);
  std::map<int, int> got;
  for (const SingularPoint& p : final_pts) got[p.vertex] = p.index;
  if (got != std::map<int, int>(want.begin(), want.end()))
    throw Error(ErrorCode::InternalError, "synthesis missed its prescription");
  return field;
}

}  // namespace sf
