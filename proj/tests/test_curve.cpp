#include <cmath>
#include <algorithm>
#include <complex>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "singforge/curve.hpp"
#include "singforge/fixtures.hpp"

using namespace sf;

namespace {

// j = 0 column of the torus grid, one essential loop.
std::vector<int> torus_loop() {
  std::vector<int> v;
  for (int i = 0; i < 8; ++i) v.push_back(i * 8);
  return v;
}

// Equator ring of uv_sphere(9, 16): latitude row 5 sits at z = 0.
std::vector<int> equator() {
  std::vector<int> v;
  for (int j = 0; j < 16; ++j) v.push_back(65 + j);
  return v;
}

std::map<int, int> singular_map(const TangentField& f) {
  std::map<int, int> got;
  for (const SingularPoint& p : singular_set(f)) got[p.vertex] = p.index;
  return got;
}

}  // namespace

TEST_CASE("curve validation rejects broken cycles") {
  TriMesh oct = fixtures::octahedron();

  EmbeddedCurve eq = make_curve(oct, {0, 2, 1, 3});
  REQUIRE(eq.vertices.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(oct.halfedge_from(eq.halfedges[k]) == eq.vertices[k]);
    CHECK(oct.halfedge_to(eq.halfedges[k]) == eq.vertices[(k + 1) % 4]);
  }

  CHECK_THROWS_WITH_AS(make_curve(oct, {0, 2}), doctest::Contains("ConditionViolated"), Error);
  CHECK_THROWS_WITH_AS(make_curve(oct, {0, 2, 0, 3}), doctest::Contains("ConditionViolated"),
                       Error);
  CHECK_THROWS_WITH_AS(make_curve(oct, {0, 2, 99}), doctest::Contains("ConditionViolated"),
                       Error);
  // 0 is +x and 1 is -x, antipodal
  CHECK_THROWS_WITH_AS(make_curve(oct, {0, 1, 2}), doctest::Contains("NotAdjacent"), Error);

  TriMesh disk = fixtures::polar_disk(2, 6);
  CHECK_THROWS_WITH_AS(make_curve(disk, {7, 8, 9}), doctest::Contains("BoundaryVertex"), Error);
}

TEST_CASE("induced curve data projects onto the edge frames") {
  TriMesh disk = fixtures::polar_disk(6, 24);
  std::vector<int> circle;
  for (int v = 25; v <= 48; ++v) circle.push_back(v);  // ring 2, interior
  EmbeddedCurve c = make_curve(disk, circle);

  // Constant field (1,0): both flanking faces carry the same vector, so the
  // averages collapse to exact projections onto the edge frame.
  TangentField f = sfh::sample_planar(disk, [](std::complex<double>) {
    return std::complex<double>(1.0, 0.0);
  });
  BoundaryField ind = induce_on_curve(f, c);
  REQUIRE(ind.loop == -1);
  REQUIRE(ind.phi.size() == circle.size());
  for (size_t k = 0; k < circle.size(); ++k) {
    Vec3 a = disk.position(c.vertices[k]);
    Vec3 b = disk.position(c.vertices[(k + 1) % circle.size()]);
    Vec3 e = normalized(b - a);
    Vec3 left = cross(Vec3{0, 0, 1}, e);
    CHECK(ind.phi[k] == doctest::Approx(e.x).epsilon(1e-12));
    CHECK(ind.nu[k] == doctest::Approx(left.x).epsilon(1e-12));
    // walked counterclockwise, left of the walk points at the disk center
    CHECK(dot(left, a + b) < 0.0);
  }

  // Reversing the walk negates both components edge for edge.
  std::vector<int> rev(circle.rbegin(), circle.rend());
  std::rotate(rev.begin(), rev.end() - 1, rev.end());  // keep vertex 25 first
  BoundaryField back = induce_on_curve(f, make_curve(disk, rev));
  size_t last = circle.size() - 1;
  CHECK(back.phi[0] == doctest::Approx(-ind.phi[last]).epsilon(1e-12));
  CHECK(back.nu[0] == doctest::Approx(-ind.nu[last]).epsilon(1e-12));
}

TEST_CASE("tangency test accepts the aligned field and rejects its quarter turn") {
  TriMesh torus = fixtures::grid_torus(8, 8);
  EmbeddedCurve loop = make_curve(torus, torus_loop());
  TangentField f = synthesize_tangent_to_curve(torus, loop, {}, {});
  CHECK(is_tangent_to_curve(f, loop, 1e-9));

  std::vector<double> theta = f.theta, mag = f.mag;
  for (double& t : theta) t = wrap_angle(t + M_PI / 2.0);
  TangentField quarter = make_field(torus, std::move(theta), std::move(mag));
  CHECK(!is_tangent_to_curve(quarter, loop, 1e-3));
  for (double phi : induce_on_curve(quarter, loop).phi) CHECK(std::abs(phi) < 1e-9);
}

TEST_CASE("tangent synthesis travels the torus loop") {
  TriMesh torus = fixtures::grid_torus(8, 8);
  EmbeddedCurve loop = make_curve(torus, torus_loop());
  TangentField f = synthesize_tangent_to_curve(torus, loop, {}, {});

  CHECK(singular_set(f).empty());  // chi = 0, nowhere vanishing
  CHECK(is_tangent_to_curve(f, loop, 1e-9));
  CHECK(check_poincare_hopf(f).holds);
  for (double phi : induce_on_curve(f, loop).phi) CHECK(phi == doctest::Approx(1.0));
}

TEST_CASE("tangent synthesis pins interior singularities off the curve") {
  TriMesh torus = fixtures::grid_torus(8, 8);
  EmbeddedCurve loop = make_curve(torus, torus_loop());
  for (uint64_t seed : {0, 5, 11}) {
    CAPTURE(seed);
    TangentField f = synthesize_tangent_to_curve(torus, loop, {{27, 1}, {36, -1}}, {}, seed);
    CHECK(singular_map(f) == std::map<int, int>{{27, 1}, {36, -1}});
    CHECK(f.marked.empty());
    CHECK(is_tangent_to_curve(f, loop, 1e-9));
    CHECK(check_poincare_hopf(f).holds);
  }
}

TEST_CASE("curve zeros land where prescribed on the sphere equator") {
  // Valence 6 leaves one free face per side of an equator vertex, too few to
  // turn indices there; splitting the stars of the carriers doubles it.
  TriMesh sphere = fixtures::star_refine(fixtures::uv_sphere(9, 16), {65, 73});
  EmbeddedCurve eq = make_curve(sphere, equator());

  std::vector<CurvePoint> pts = {{65, 1, 1}, {73, -1, 1}};  // gammas add to chi = 2
  TangentField f = synthesize_tangent_to_curve(sphere, eq, {}, pts, 3);

  CHECK(singular_map(f) == std::map<int, int>{{65, 1}, {73, 1}});
  CHECK(f.marked.empty());
  CHECK(is_tangent_to_curve(f, eq, 1e-9));
  CHECK(check_poincare_hopf(f).holds);

  BoundaryField ind = induce_on_curve(f, eq);
  for (int k = 0; k < 16; ++k) {
    double want = k < 8 ? -1.0 : 1.0;  // sign flips at positions 0 and 8
    CHECK(ind.phi[k] == doctest::Approx(want).epsilon(1e-9));
    CHECK(std::abs(ind.nu[k]) < 1e-9);
  }
}

TEST_CASE("synthesis validation catches bad prescriptions") {
  TriMesh sphere = fixtures::uv_sphere(9, 16);
  EmbeddedCurve eq = make_curve(sphere, equator());
  TriMesh torus = fixtures::grid_torus(8, 8);
  EmbeddedCurve loop = make_curve(torus, torus_loop());

  CHECK_THROWS_WITH_AS(
      synthesize_tangent_to_curve(sphere, eq, {}, {{65, 1, 1}, {73, 1, 1}}),
      doctest::Contains("BetaSumNonzero"), Error);
  CHECK_THROWS_WITH_AS(
      synthesize_tangent_to_curve(
          sphere, eq, {}, {{65, 1, 1}, {69, 1, 1}, {73, -1, 0}, {77, -1, 0}}),
      doctest::Contains("BetaNotAlternating"), Error);
  CHECK_THROWS_WITH_AS(synthesize_tangent_to_curve(torus, loop, {{27, 1}}, {}),
                       doctest::Contains("ChiMismatch"), Error);
  CHECK_THROWS_WITH_AS(
      synthesize_tangent_to_curve(sphere, eq, {}, {{65, 2, 1}, {73, -2, 1}}),
      doctest::Contains("ConditionViolated"), Error);
  CHECK_THROWS_WITH_AS(synthesize_tangent_to_curve(sphere, eq, {}, {{0, 1, 1}, {73, -1, 1}}),
                       doctest::Contains("ConditionViolated"), Error);
  CHECK_THROWS_WITH_AS(
      synthesize_tangent_to_curve(sphere, eq, {}, {{65, 1, 1}, {65, -1, 1}}),
      doctest::Contains("ConditionViolated"), Error);
  CHECK_THROWS_WITH_AS(synthesize_tangent_to_curve(torus, loop, {{8, 1}, {27, -1}}, {}),
                       doctest::Contains("NotInterior"), Error);
}

TEST_CASE("index bookkeeping survives a crowded curve") {
  TriMesh torus = fixtures::star_refine(fixtures::grid_torus(8, 8), {8, 40});
  EmbeddedCurve loop = make_curve(torus, torus_loop());

  std::vector<CurvePoint> pts = {{8, 1, 0}, {40, -1, 0}};  // regular flips, kept marked
  TangentField f = synthesize_tangent_to_curve(torus, loop, {{27, 1}, {36, -1}}, pts, 7);

  std::map<int, int> got = singular_map(f);
  got.erase(8);
  got.erase(40);  // marked entries report index 0
  CHECK(got == std::map<int, int>{{27, 1}, {36, -1}});
  CHECK(f.marked == std::vector<int>{8, 40});
  CHECK(is_tangent_to_curve(f, loop, 1e-9));
  CHECK(check_poincare_hopf(f).holds);

  BoundaryField ind = induce_on_curve(f, loop);
  for (int k = 0; k < 8; ++k) {
    double want = (k >= 1 && k < 5) ? -1.0 : 1.0;  // flip at positions 1 (v8) and 5 (v40)
    CHECK(ind.phi[k] == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("wedge capacity and tight geometry report too coarse") {
  TriMesh torus = fixtures::grid_torus(8, 8);
  // 0-8-9-1 walks around one grid quad; its diagonal face carries two curve
  // edges, so no single direction can be tangent to both.
  EmbeddedCurve quad = make_curve(torus, {0, 8, 9, 1});
  CHECK_THROWS_WITH_AS(synthesize_tangent_to_curve(torus, quad, {}, {}),
                       doctest::Contains("TooCoarse"), Error);

  // Ten turns at one curve vertex outruns what its wedges can absorb.
  TriMesh fine = fixtures::star_refine(torus, {8, 40});
  EmbeddedCurve loop = make_curve(fine, torus_loop());
  CHECK_THROWS_WITH_AS(
      synthesize_tangent_to_curve(fine, loop, {}, {{8, 1, 10}, {40, -1, -10}}),
      doctest::Contains("TooCoarse"), Error);

  // One turn per side stays within capacity.
  TangentField f =
      synthesize_tangent_to_curve(fine, loop, {}, {{8, 1, 2}, {40, -1, -2}}, 1);
  CHECK(singular_map(f) == std::map<int, int>{{8, 2}, {40, -2}});
  CHECK(is_tangent_to_curve(f, loop, 1e-9));
  CHECK(check_poincare_hopf(f).holds);
}
