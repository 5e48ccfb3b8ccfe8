#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "singforge/disk.hpp"
#include "singforge/fixtures.hpp"

using namespace sf;

namespace {

const double kPi = 3.14159265358979323846;

int count_crossings(const AngleProfile& p, bool increasing) {
  int n = 0;
  for (const LevelCrossing& c : p.crossings)
    if (c.increasing == increasing) ++n;
  return n;
}

DiskField from_complex(std::complex<double> (*fn)(std::complex<double>),
                       const char* name) {
  return {[fn](double x, double y) {
            std::complex<double> w = fn({x, y});
            return Vec2(w.real(), w.imag());
          },
          name};
}

// center vertex winding of the disk field sampled onto a fan mesh
int mesh_winding(const TriMesh& fan, const DiskField& f) {
  std::vector<double> theta(fan.n_faces()), mag(fan.n_faces());
  for (int fc = 0; fc < fan.n_faces(); ++fc) {
    Vec3 c = fan.face_centroid(fc);
    Vec2 v = f.eval(c.x, c.y);
    theta[fc] = fan.angle_in_face(fc, Vec3(v.x, v.y, 0));
    mag[fc] = norm(v);
  }
  TangentField tf = make_field(fan, theta, mag);
  return vertex_index(tf, 0);
}

}  // namespace

TEST_CASE("angle profiles match the closed forms for powers") {
  // z: radial, the angle to the tangent stays at -pi/2
  AngleProfile radial = boundary_angle_profile(disk_power(1));
  CHECK(radial.k == 1);
  CHECK(radial.crossings.empty());
  for (double a : radial.alpha) CHECK(a == doctest::Approx(-kPi / 2).epsilon(1e-12));
  CHECK(crossing_census_check(radial));

  // z^2: alpha(t) = t - pi/2, two increasing passages
  AngleProfile sq = boundary_angle_profile(disk_power(2));
  CHECK(sq.k == 2);
  for (size_t i = 0; i < sq.t.size(); ++i)
    CHECK(sq.alpha[i] == doctest::Approx(sq.t[i] - kPi / 2).epsilon(1e-12));
  REQUIRE(sq.crossings.size() == 2);
  CHECK(sq.crossings[0].level == 0);
  CHECK(sq.crossings[0].increasing);
  CHECK(sq.crossings[0].t == doctest::Approx(kPi / 2));
  CHECK(sq.crossings[1].level == 1);
  CHECK(sq.crossings[1].increasing);
  CHECK(sq.crossings[1].t == doctest::Approx(3 * kPi / 2));
  CHECK(crossing_census_check(sq));

  // conj(z): alpha(t) = -2t - pi/2, four decreasing passages
  AngleProfile co = boundary_angle_profile(disk_conj_power(1));
  CHECK(co.k == -1);
  for (size_t i = 0; i < co.t.size(); ++i)
    CHECK(co.alpha[i] == doctest::Approx(-2 * co.t[i] - kPi / 2).epsilon(1e-12));
  CHECK(count_crossings(co, false) == 4);
  CHECK(count_crossings(co, true) == 0);
  CHECK(crossing_census_check(co));  // -4 == 2(k-1)

  AngleProfile co2 = boundary_angle_profile(disk_conj_power(2));
  CHECK(co2.k == -2);
  CHECK(count_crossings(co2, false) == 6);
  CHECK(crossing_census_check(co2));

  // constant field: one full backward turn relative to the tangent
  AngleProfile flat = boundary_angle_profile(disk_power(0));
  CHECK(flat.k == 0);
  CHECK(count_crossings(flat, false) == 2);
  CHECK(crossing_census_check(flat));

  for (int n = 1; n <= 4; ++n) {
    CHECK(crossing_census_check(boundary_angle_profile(disk_power(n))));
    CHECK(crossing_census_check(boundary_angle_profile(disk_conj_power(n))));
  }
}

TEST_CASE("profile guards reject what they cannot measure") {
  CHECK_THROWS_WITH_AS(boundary_angle_profile(disk_power(2), 32),
                       doctest::Contains("ConditionViolated"), Error);

  DiskField offset = from_complex([](std::complex<double> z) { return z * z - 1.0; },
                                  "offset");  // vanishes at t=0
  CHECK_THROWS_WITH_AS(boundary_angle_profile(offset),
                       doctest::Contains("ZeroOnCircle"), Error);

  // 64 samples cannot follow 39 turns; 2048 can
  CHECK_THROWS_WITH_AS(boundary_angle_profile(disk_power(40), 64),
                       doctest::Contains("UnwrapJump"), Error);
  CHECK(boundary_angle_profile(disk_power(40), 2048).k == 40);
}

TEST_CASE("entry checks hug the correct side of the circle") {
  DiskField sq = disk_power(2);
  AngleProfile p = boundary_angle_profile(sq);
  std::vector<EntryCheck> in = crossing_entry_check(sq, p);
  REQUIRE(in.size() == 2);
  for (const EntryCheck& e : in) {
    CHECK(e.crossing.increasing);
    CHECK(e.pass);
    CHECK(e.worst <= 1.0 + 1e-9);  // local arc stays in the closed disk
    CHECK(e.worst > 0.999);
  }

  DiskField co = disk_conj_power(1);
  AngleProfile q = boundary_angle_profile(co);
  std::vector<EntryCheck> out = crossing_entry_check(co, q);
  REQUIRE(out.size() == 4);
  for (const EntryCheck& e : out) {
    CHECK(!e.crossing.increasing);
    CHECK(e.pass);
    CHECK(e.worst >= 1.0 - 1e-9);  // local arc stays out of the open disk
    CHECK(e.worst < 1.001);
  }

  // rotation rides level 0 exactly: no crossings, nothing to check
  DiskField rot = from_complex(
      [](std::complex<double> z) { return std::complex<double>(0, 1) * z; }, "rot");
  AngleProfile r = boundary_angle_profile(rot);
  CHECK(r.k == 1);
  CHECK(r.crossings.empty());
  CHECK(crossing_entry_check(rot, r).empty());
}

TEST_CASE("gradient verdicts separate saddles from doubled zeros") {
  // grad(x^2 - y^2): a plain saddle is a gradient
  GradientVerdict saddle = gradient_obstruction(disk_poly_gradient({0, 0, 0, 1, 0, -1}));
  CHECK(saddle.k == -1);
  CHECK(saddle.gradient_possible);
  CHECK(saddle.returning.empty());
  CHECK(saddle.reason.find("below two") != std::string::npos);

  // grad(x^3 - 3xy^2): the monkey saddle pushes the index to -2, still fine
  GradientVerdict monkey =
      gradient_obstruction(disk_poly_gradient({0, 0, 0, 0, 0, 0, 1, 0, -3, 0}));
  CHECK(monkey.k == -2);
  CHECK(monkey.gradient_possible);

  // z^2 doubles the zero: index 2 cannot come from a gradient, and both
  // tested boundary trajectories fall back to the origin
  GradientVerdict dz = gradient_obstruction(disk_power(2));
  CHECK(dz.k == 2);
  CHECK(!dz.gradient_possible);
  CHECK(dz.reason.find("not below two") != std::string::npos);
  REQUIRE(dz.returning.size() == 2);
  for (const Vec2& p : dz.returning) CHECK(norm(p) == doctest::Approx(1.0));

  CHECK(!gradient_obstruction(disk_power(3)).gradient_possible);

  DiskField split = from_complex(
      [](std::complex<double> z) { return z * z - 0.25; }, "split");  // zeros at +-1/2
  CHECK_THROWS_WITH_AS(gradient_obstruction(split),
                       doctest::Contains("MultipleSingularities"), Error);
}

TEST_CASE("profile index matches the mesh winding at the center") {
  TriMesh fan = fixtures::polar_disk(4, 64);
  for (int n = 1; n <= 3; ++n) {
    CHECK(boundary_angle_profile(disk_power(n), 512).k == mesh_winding(fan, disk_power(n)));
    CHECK(boundary_angle_profile(disk_conj_power(n), 512).k ==
          mesh_winding(fan, disk_conj_power(n)));
  }
  CHECK(boundary_angle_profile(disk_power(0), 512).k == mesh_winding(fan, disk_power(0)));
}

TEST_CASE("grid sampling reproduces the analytic profile") {
  const int N = 41;
  std::vector<Vec2> vals(N * N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      double x = -1.0 + 2.0 * i / (N - 1), y = -1.0 + 2.0 * j / (N - 1);
      vals[j * N + i] = Vec2(x * x - y * y, 2 * x * y);
    }
  AngleProfile p = boundary_angle_profile(disk_grid(vals, N, N));
  CHECK(p.k == 2);
  CHECK(crossing_census_check(p));
  for (size_t i = 0; i < p.t.size(); ++i)
    CHECK(std::abs(p.alpha[i] - (p.t[i] - kPi / 2)) < 0.01);

  CHECK_THROWS_WITH_AS(disk_grid(vals, N, N + 1), doctest::Contains("ConditionViolated"),
                       Error);
}

TEST_CASE("model parsing round-trips") {
  DiskField sq = parse_disk_model("z^2");
  CHECK(sq.model == "z^2");
  Vec2 v = sq.eval(0.6, 0.8);
  CHECK(v.x == doctest::Approx(0.6 * 0.6 - 0.8 * 0.8));
  CHECK(v.y == doctest::Approx(2 * 0.6 * 0.8));

  DiskField one = parse_disk_model("z");
  CHECK(one.eval(0.3, -0.4).x == doctest::Approx(0.3));
  CHECK(one.eval(0.3, -0.4).y == doctest::Approx(-0.4));

  DiskField c3 = parse_disk_model("conj(z)^3");
  std::complex<double> w = std::pow(std::conj(std::complex<double>(0.5, 0.2)), 3);
  CHECK(c3.eval(0.5, 0.2).x == doctest::Approx(w.real()));
  CHECK(c3.eval(0.5, 0.2).y == doctest::Approx(w.imag()));

  DiskField g = parse_disk_model("grad:0,0,0,1,0,-1");
  CHECK(g.model == "grad:0,0,0,1,0,-1");
  CHECK(g.eval(0.3, 0.7).x == doctest::Approx(0.6));
  CHECK(g.eval(0.3, 0.7).y == doctest::Approx(-1.4));

  for (const char* bad : {"w^2", "z^", "z^-1", "zz", "grad:", "grad:1,2", "grad:1,a,0",
                          "conj(z)^", ""})
    CHECK_THROWS_WITH_AS(parse_disk_model(bad), doctest::Contains("ParseError"), Error);
}

TEST_CASE("crossing census survives zero-free perturbation") {
  SplitMix rng(99);
  int checked = 0;
  for (int draw = 0; draw < 20; ++draw) {
    int n = 1 + static_cast<int>(rng.below(4));
    bool conj = rng.below(2);
    double c[6];
    for (double& x : c) x = rng.range(-1, 1);
    DiskField base = conj ? disk_conj_power(n) : disk_power(n);
    DiskField f{[base, c](double x, double y) {
                  Vec2 v = base.eval(x, y);
                  double p1 = c[0] + c[1] * x + c[2] * y;
                  double p2 = c[3] + c[4] * x * y + c[5] * (x * x - y * y);
                  return v + Vec2(p1, p2) * 0.15;
                },
                "perturbed"};
    double minv = 1e300;
    for (int i = 0; i < 512; ++i) {
      double t = 2 * kPi * i / 512;
      minv = std::min(minv, norm(f.eval(std::cos(t), std::sin(t))));
    }
    if (minv < 0.1) continue;  // perturbation reached the circle zeros
    CHECK(crossing_census_check(boundary_angle_profile(f, 512)));
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("perturbed quadratic gradients keep a unit index") {
  // lambda * (random degree-5 polynomial) + definite or saddle quadratic:
  // the quadratic dominates, so one critical point survives near the origin
  // and the verdict must stay on the gradient side.
  SplitMix rng(7);
  for (int draw = 0; draw < 30; ++draw) {
    std::vector<double> coeffs(21);
    for (double& x : coeffs) x = rng.range(-1, 1);
    int base = static_cast<int>(rng.below(3));
    DiskField rough = disk_poly_gradient(coeffs);
    double peak = 0;
    for (int i = 0; i < 400; ++i) {
      double r = rng.range(0, 1), t = rng.range(0, 2 * kPi);
      peak = std::max(peak, norm(rough.eval(r * std::cos(t), r * std::sin(t))));
    }
    double lam = 0.2 / std::max(1.0, peak);
    for (double& x : coeffs) x *= lam;
    coeffs[3] += base == 1 ? -1 : 1;  // x^2 slot
    coeffs[5] += base == 0 ? 1 : -1;  // y^2 slot
    GradientVerdict v = gradient_obstruction(disk_poly_gradient(coeffs));
    CHECK(v.k == (base == 2 ? -1 : 1));
    CHECK(v.gradient_possible);
  }
}
