#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "doctest.h"
#include "singforge/fixtures.hpp"
#include "singforge/mesh.hpp"

using namespace sf;
using namespace sf::fixtures;

namespace {

// Independent BFS distance over adjacency rebuilt straight from the face
// list, used as an oracle for path_between.
int bfs_distance(const TriMesh& m, int a, int b, const std::set<int>& forbidden) {
  std::map<int, std::set<int>> adj;
  for (int f = 0; f < m.n_faces(); ++f) {
    const auto& fv = m.face(f);
    for (int k = 0; k < 3; ++k) {
      adj[fv[k]].insert(fv[(k + 1) % 3]);
      adj[fv[(k + 1) % 3]].insert(fv[k]);
    }
  }
  if (forbidden.count(a) || forbidden.count(b)) return -1;
  std::map<int, int> dist;
  dist[a] = 0;
  std::queue<int> q;
  q.push(a);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == b) return dist[v];
    for (int u : adj[v]) {
      if (forbidden.count(u) || dist.count(u)) continue;
      dist[u] = dist[v] + 1;
      q.push(u);
    }
  }
  return -1;
}

double loop_signed_area_xy(const TriMesh& m, const std::vector<int>& loop) {
  double area = 0.0;
  for (size_t i = 0; i < loop.size(); ++i) {
    const Vec3& p = m.position(loop[i]);
    const Vec3& q = m.position(loop[(i + 1) % loop.size()]);
    area += 0.5 * (p.x * q.y - q.x * p.y);
  }
  return area;
}

bool adjacent(const TriMesh& m, int a, int b) {
  const auto& ring = m.vertices_around(a);
  return std::find(ring.begin(), ring.end(), b) != ring.end();
}

}  // namespace

TEST_CASE("euler characteristic and genus across the fixture family") {
  struct Row {
    TriMesh mesh;
    int chi, genus, loops;
  };
  const Row rows[] = {
      {tetrahedron(), 2, 0, 0},
      {octahedron(), 2, 0, 0},
      {icosphere(2), 2, 0, 0},
      {uv_sphere(9, 16), 2, 0, 0},
      {grid_torus(8, 8), 0, 1, 0},
      {genus2(), -2, 2, 0},
      {polar_disk(6, 24), 1, 0, 1},
      {polar_annulus(4, 24), 0, 0, 2},
  };
  for (const Row& r : rows) {
    CHECK(r.mesh.euler_characteristic() == r.chi);
    CHECK(r.mesh.genus() == r.genus);
    CHECK(static_cast<int>(r.mesh.boundary_loops().size()) == r.loops);
    CHECK(r.mesh.is_closed() == (r.loops == 0));
  }
}

TEST_CASE("fixture sizes") {
  TriMesh ico = icosphere(2);
  CHECK(ico.n_vertices() == 162);
  CHECK(ico.n_faces() == 320);
  TriMesh uv = uv_sphere(9, 16);
  CHECK(uv.n_vertices() == 146);
  CHECK(uv.n_faces() == 288);
  CHECK(uv.faces_around(0).size() == 16);
  TriMesh torus = grid_torus(8, 8);
  CHECK(torus.n_vertices() == 64);
  CHECK(torus.n_faces() == 128);
  CHECK(torus.n_edges() == 192);
  TriMesh g2 = genus2();
  CHECK(g2.n_vertices() == 64);
  CHECK(g2.is_closed());
}

TEST_CASE("halfedge connectivity invariants") {
  TriMesh m = icosphere(1);
  for (int h = 0; h < 3 * m.n_faces(); ++h) {
    CHECK(TriMesh::next_halfedge(TriMesh::prev_halfedge(h)) == h);
    int t = m.twin(h);
    REQUIRE(t != -1);  // closed mesh
    CHECK(m.twin(t) == h);
    CHECK(m.halfedge_from(h) == m.halfedge_to(t));
    CHECK(m.halfedge_to(h) == m.halfedge_from(t));
  }
}

TEST_CASE("vertex fans cover incident faces and rotate contiguously") {
  for (const TriMesh& m : {octahedron(), polar_disk(3, 12)}) {
    for (int v = 0; v < m.n_vertices(); ++v) {
      std::set<int> expected;
      for (int f = 0; f < m.n_faces(); ++f) {
        const auto& fv = m.face(f);
        if (fv[0] == v || fv[1] == v || fv[2] == v) expected.insert(f);
      }
      const auto& fan = m.faces_around(v);
      CHECK(std::set<int>(fan.begin(), fan.end()) == expected);
      // consecutive fan faces share an edge through v
      size_t pairs = m.is_boundary_vertex(v) ? fan.size() - 1 : fan.size();
      for (size_t i = 0; i < pairs; ++i) {
        int f = fan[i], g = fan[(i + 1) % fan.size()];
        int h = m.shared_halfedge(f, g);
        REQUIRE(h != -1);
        bool through_v = m.halfedge_from(h) == v || m.halfedge_to(h) == v;
        CHECK(through_v);
      }
    }
  }
}

TEST_CASE("fan rotation is counterclockwise on a planar disk") {
  TriMesh m = polar_disk(3, 12);
  // interior vertex: ring vertices must advance CCW around it (+z normal)
  int v = 1;  // first ring-1 vertex
  REQUIRE(!m.is_boundary_vertex(v));
  const auto& ring = m.vertices_around(v);
  const Vec3 c = m.position(v);
  double total = 0.0;
  for (size_t i = 0; i < ring.size(); ++i) {
    Vec3 a = m.position(ring[i]) - c;
    Vec3 b = m.position(ring[(i + 1) % ring.size()]) - c;
    total += std::atan2(cross(a, b).z, dot(a, b));
  }
  CHECK(total == doctest::Approx(2 * M_PI));
}

TEST_CASE("boundary loops are oriented with the surface on the left") {
  TriMesh disk = polar_disk(4, 16);
  REQUIRE(disk.boundary_loops().size() == 1);
  CHECK(disk.boundary_loops()[0].size() == 16);
  CHECK(loop_signed_area_xy(disk, disk.boundary_loops()[0]) > 0);

  TriMesh ann = polar_annulus(3, 16);
  REQUIRE(ann.boundary_loops().size() == 2);
  // inner loop runs clockwise (surface outside it), outer counterclockwise
  double a0 = loop_signed_area_xy(ann, ann.boundary_loops()[0]);
  double a1 = loop_signed_area_xy(ann, ann.boundary_loops()[1]);
  CHECK(std::min(a0, a1) < 0);
  CHECK(std::max(a0, a1) > 0);

  // loop halfedges run vertex i -> vertex i+1 with no twin
  const auto& loop = disk.boundary_loops()[0];
  const auto& hes = disk.boundary_loop_halfedges()[0];
  REQUIRE(hes.size() == loop.size());
  for (size_t i = 0; i < loop.size(); ++i) {
    CHECK(disk.twin(hes[i]) == -1);
    CHECK(disk.halfedge_from(hes[i]) == loop[i]);
    CHECK(disk.halfedge_to(hes[i]) == loop[(i + 1) % loop.size()]);
  }
}

TEST_CASE("construction rejects invalid complexes") {
  // three faces on one edge
  CHECK_THROWS_WITH_AS(
      TriMesh::from_data({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}},
                         {{0, 1, 2}, {0, 1, 3}, {1, 0, 4}}),
      doctest::Contains("NonManifold"), Error);
  // flipped face
  CHECK_THROWS_WITH_AS(
      TriMesh::from_data({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}},
                         {{0, 1, 2}, {1, 3, 2}, {1, 2, 3}}),
      doctest::Contains("NonManifold"), Error);
  // orientation flip without manifold violation
  CHECK_THROWS_WITH_AS(
      TriMesh::from_data({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}},
                         {{0, 1, 2}, {1, 2, 3}}),
      doctest::Contains("NonOrientable"), Error);
  // two components
  CHECK_THROWS_WITH_AS(
      TriMesh::from_data({{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                          {5, 5, 5}, {6, 5, 5}, {5, 6, 5}},
                         {{0, 1, 2}, {3, 4, 5}}),
      doctest::Contains("Disconnected"), Error);
  // unreferenced vertex
  CHECK_THROWS_WITH_AS(
      TriMesh::from_data({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {9, 9, 9}},
                         {{0, 1, 2}}),
      doctest::Contains("Disconnected"), Error);
  // degenerate: repeated vertex
  CHECK_THROWS_WITH_AS(
      TriMesh::from_data({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 1}}),
      doctest::Contains("DegenerateFace"), Error);
  // degenerate: collinear
  CHECK_THROWS_WITH_AS(
      TriMesh::from_data({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}),
      doctest::Contains("DegenerateFace"), Error);
  // bowtie vertex: two umbrellas joined at vertex 0 only
  CHECK_THROWS_WITH_AS(
      TriMesh::from_data({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}},
                         {{0, 1, 2}, {0, 3, 4}}),
      doctest::Contains("NonManifold"), Error);
}

TEST_CASE("off round trip is bit exact") {
  TriMesh m = icosphere(1);
  std::stringstream ss;
  save_off(m, ss);
  TriMesh back = load_off(ss);
  REQUIRE(back.n_vertices() == m.n_vertices());
  REQUIRE(back.n_faces() == m.n_faces());
  for (int v = 0; v < m.n_vertices(); ++v) {
    CHECK(back.position(v).x == m.position(v).x);
    CHECK(back.position(v).y == m.position(v).y);
    CHECK(back.position(v).z == m.position(v).z);
  }
  for (int f = 0; f < m.n_faces(); ++f) CHECK(back.face(f) == m.face(f));
}

TEST_CASE("off parser handles comments and rejects malformed input") {
  std::stringstream good(
      "# produced by hand\nOFF # header\n4 4 0\n"
      "1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n"
      "3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n");
  TriMesh m = load_off(good);
  CHECK(m.euler_characteristic() == 2);

  std::stringstream no_header("4 4 0\n");
  CHECK_THROWS_WITH_AS(load_off(no_header), doctest::Contains("ParseError"), Error);
  std::stringstream quad(
      "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  CHECK_THROWS_WITH_AS(load_off(quad), doctest::Contains("NonTriangle"), Error);
  std::stringstream truncated("OFF\n4 4 0\n1 1 1\n");
  CHECK_THROWS_WITH_AS(load_off(truncated), doctest::Contains("ParseError"), Error);
  std::stringstream junk("OFF\n3 1 0\n0 0 z\n1 0 0\n0 1 0\n3 0 1 2\n");
  CHECK_THROWS_WITH_AS(load_off(junk), doctest::Contains("ParseError"), Error);
}

TEST_CASE("path_between finds shortest paths with deterministic ties") {
  TriMesh octa = octahedron();
  CHECK(octa.path_between(0, 1) == std::vector<int>{0, 2, 1});
  CHECK(octa.path_between(0, 1, {2}) == std::vector<int>{0, 3, 1});
  CHECK(octa.path_between(4, 4) == std::vector<int>{4});
  CHECK_THROWS_WITH_AS(octa.path_between(0, 1, {2, 3, 4, 5}),
                       doctest::Contains("NoPath"), Error);
  CHECK_THROWS_WITH_AS(octa.path_between(0, 1, {1}),
                       doctest::Contains("NoPath"), Error);
}

TEST_CASE("path_between length matches an independent BFS oracle") {
  TriMesh disk = polar_disk(4, 10);
  std::set<int> forbidden = {3, 7, 12, 25};
  int cases = 0;
  for (int a = 0; a < disk.n_vertices(); a += 5) {
    for (int b = 1; b < disk.n_vertices(); b += 7) {
      int d = bfs_distance(disk, a, b, forbidden);
      std::vector<int> fvec(forbidden.begin(), forbidden.end());
      if (d < 0) {
        CHECK_THROWS_AS(disk.path_between(a, b, fvec), Error);
        continue;
      }
      auto path = disk.path_between(a, b, fvec);
      CHECK(static_cast<int>(path.size()) == d + 1);
      CHECK(path.front() == a);
      CHECK(path.back() == b);
      for (size_t i = 0; i + 1 < path.size(); ++i)
        CHECK(adjacent(disk, path[i], path[i + 1]));
      for (int v : path) CHECK(!forbidden.count(v));
      ++cases;
    }
  }
  CHECK(cases > 20);
}

TEST_CASE("region bookkeeping on the octahedron") {
  TriMesh octa = octahedron();
  Region r = region_from_faces(octa, {0, 1, 2, 3, 4, 5, 7});
  CHECK(r.closure_vertices == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(r.interior_vertices == std::vector<int>{0, 2, 4});
  CHECK(is_disk(octa, r));

  // full closed surface is not a disk
  CHECK(!is_disk(octa, region_from_faces(octa, {0, 1, 2, 3, 4, 5, 6, 7})));
  // two faces sharing nothing: not edge-connected
  CHECK(!is_disk(octa, region_from_faces(octa, {0, 6})));
  // two faces sharing only a vertex: not edge-connected
  CHECK(!is_disk(octa, region_from_faces(octa, {0, 2})));
  // band with two fan runs at vertex 4 (and chi 0)
  CHECK(!is_disk(octa, region_from_faces(octa, {0, 2, 4, 5, 6, 7})));
  // single face and a two-face wedge are disks
  CHECK(is_disk(octa, region_from_faces(octa, {0})));
  CHECK(is_disk(octa, region_from_faces(octa, {0, 1})));
}

TEST_CASE("disk_region grows vertex stars into a disk") {
  TriMesh octa = octahedron();
  // star of one vertex
  Region r = disk_region(octa, {4}, {5});
  CHECK(r.faces == std::vector<int>{0, 1, 2, 3});
  CHECK(r.interior_vertices == std::vector<int>{4});

  // two-edge path between near vertices: complement of one face
  Region p = disk_region(octa, {0, 4, 2}, {});
  CHECK(p.faces == std::vector<int>{0, 1, 2, 3, 4, 5, 7});
  CHECK(p.interior_vertices == std::vector<int>{0, 2, 4});

  // excluded vertex inside every candidate region
  CHECK_THROWS_WITH_AS(disk_region(octa, {4}, {2}),
                       doctest::Contains("CannotIsolate"), Error);
  // whole tetrahedron can never be a disk
  TriMesh tet = tetrahedron();
  CHECK_THROWS_WITH_AS(disk_region(tet, {0, 1, 2, 3}, {}),
                       doctest::Contains("CannotIsolate"), Error);
  CHECK_THROWS_WITH_AS(disk_region(tet, {0}, {1}),
                       doctest::Contains("CannotIsolate"), Error);
  // tetrahedron star of one vertex is the complement of a face: a disk
  Region t = disk_region(tet, {0}, {});
  CHECK(t.faces.size() == 3);
  CHECK(t.interior_vertices == std::vector<int>{0});

  // boundary vertices can never be interior
  TriMesh disk = polar_disk(3, 8);
  int boundary_v = disk.boundary_loops()[0][0];
  CHECK_THROWS_WITH_AS(disk_region(disk, {boundary_v}, {}),
                       doctest::Contains("CannotIsolate"), Error);
}

TEST_CASE("star_refine doubles valence and preserves angle and topology") {
  TriMesh ico = icosphere(1);
  int v = 12;  // a valence-6 vertex created by subdivision
  REQUIRE(ico.faces_around(v).size() == 6);
  double defect_before = ico.angle_defect(v);
  TriMesh refined = sf::fixtures::star_refine(ico, {v});
  CHECK(refined.faces_around(v).size() == 12);
  CHECK(refined.euler_characteristic() == 2);
  CHECK(refined.angle_defect(v) == doctest::Approx(defect_before).epsilon(1e-12));
}
