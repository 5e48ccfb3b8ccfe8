#pragma once

#include <functional>
#include <string>
#include <vector>

#include "singforge/vec3.hpp"

namespace sf {

// Planar vector field on the closed unit disk. `eval` returns the field at
// (x, y); `model` names the construction for reports.
struct DiskField {
  std::function<Vec2(double, double)> eval;
  std::string model;
};

DiskField disk_power(int n);       // z^n read as a plane field
DiskField disk_conj_power(int n);  // conj(z)^n

// Gradient of a bivariate polynomial. Coefficients come degree-major
// (1; x, y; x^2, xy, y^2; ...), so the count must be triangular; throws
// ParseError otherwise. Partials are computed analytically.
DiskField disk_poly_gradient(const std::vector<double>& coeffs);

// Bilinear interpolation of an nx-by-ny sample grid spanning [-1,1]^2,
// row-major with x fastest. Throws ConditionViolated on a size mismatch.
DiskField disk_grid(std::vector<Vec2> values, int nx, int ny);

// "z^2", "conj(z)^3", "grad:1,0,-1,...". Throws ParseError.
DiskField parse_disk_model(const std::string& text);

struct LevelCrossing {
  double t = 0.0;  // boundary parameter where alpha passes level*pi
  int level = 0;
  bool increasing = true;
};

// Angle put counterclockwise from the boundary tangent to the field vector,
// sampled at t_i = 2*pi*i/samples (endpoint included) and unwrapped. The
// total turn determines the index k of the enclosed singularity, and every
// passage of a level n*pi is recorded with its direction.
struct AngleProfile {
  std::vector<double> t;
  std::vector<double> alpha;
  int k = 0;
  std::vector<LevelCrossing> crossings;
};

// Requires samples >= 64 and a field without zeros on the unit circle.
// Throws ConditionViolated, ZeroOnCircle, and UnwrapJump when adjacent
// samples land more than three quarters of a half turn apart, where the
// unwrap stops being trustworthy (increase samples).
AngleProfile boundary_angle_profile(const DiskField& disk, int samples = 256);

// (#increasing - #decreasing) == 2(k - 1).
bool crossing_census_check(const AngleProfile& profile);

struct EntryCheck {
  LevelCrossing crossing;
  bool pass = false;
  // max |x| over the local arc for increasing passages, min |x| for
  // decreasing ones.
  double worst = 1.0;
};

// Integrates a short trajectory arc through every crossing point, both ways,
// and checks which side of the circle it hugs: increasing passages stay in
// the closed disk, decreasing ones stay out of the open disk. Failures are
// reported, not thrown; no crossings gives an empty report.
std::vector<EntryCheck> crossing_entry_check(const DiskField& disk,
                                             const AngleProfile& profile);

struct GradientVerdict {
  int k = 0;
  bool gradient_possible = false;
  std::string reason;
  // Boundary points whose trajectories approach the origin in both time
  // directions; nonempty only when k >= 2, where such returns rule out any
  // potential that grows along the flow.
  std::vector<Vec2> returning;
};

// Decides whether a field with one singular point at the origin can be a
// gradient: possible exactly when k <= 1. Samples two interior circles first
// and throws MultipleSingularities when the field vanishes on either.
GradientVerdict gradient_obstruction(const DiskField& disk);

}  // namespace sf
