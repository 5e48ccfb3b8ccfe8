#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "singforge/field.hpp"

namespace sf {

// Field induced on one boundary loop: for every loop edge (vertices[k] to
// vertices[k+1], surface on the left) the incident face's vector is split
// into a tangential component phi (positive along the walk) and a normal
// component nu (positive pointing off the surface).
struct BoundaryField {
  int loop = 0;               // index into mesh.boundary_loops()
  std::vector<int> vertices;  // the loop's vertex cycle
  std::vector<double> phi;    // entry k belongs to edge vertices[k] -> vertices[k+1]
  std::vector<double> nu;
};

enum class ZeroDirection { Inward, Outward };

struct BoundaryZero {
  int vertex = 0;
  int index = 0;  // +1 when phi flips + to - along the walk, -1 the other way
  ZeroDirection direction = ZeroDirection::Outward;
  bool operator==(const BoundaryZero&) const = default;
};

// delta_plus / delta_minus total the 1D indices of the inward- and
// outward-pointing zeros of the induced field.
struct BoundaryCensus {
  std::vector<BoundaryZero> zeros;
  int delta_plus = 0;
  int delta_minus = 0;
};

struct BoundaryReport {
  std::vector<BoundaryCensus> loops;
  int chi = 0;
  int sum_ind = 0;
  int delta_plus = 0;
  int delta_minus = 0;
  bool eq_plus_holds = false;   // chi == sum_ind - delta_plus
  bool eq_minus_holds = false;  // chi == sum_ind + delta_minus
};

// Projects the field onto each boundary loop, one BoundaryField per loop in
// mesh order. Throws NoBoundary on closed meshes.
std::vector<BoundaryField> induced_boundary_field(const TangentField& f);

// Zeros of the induced field sit at loop vertices where phi changes sign;
// the direction comes from nu averaged over the two flanking edges. Throws
// DegenerateZero when phi vanishes along a whole edge (within 1e-12) and
// TangentAtZero when the nu average at a sign change is under 1e-9.
BoundaryCensus boundary_census(const BoundaryField& bf);

// Index law on a bounded surface: chi = sum_ind - delta_plus and
// chi = sum_ind + delta_minus with the deltas summed over all loops. The
// report carries both verdicts; callers decide what a failure means.
BoundaryReport check_boundary_laws(const TangentField& f, uint64_t seed = 0);

// Field on the two face rings inside the given loop, blending from pure
// outward normal (scaled by w_scale) at the boundary to the tangential loop
// prescription u.phi at the inner ring. The blend never vanishes because the
// two parts stay near-orthogonal. Faces off the strip carry a unit
// placeholder for callers to overwrite. Throws ZeroU when u.phi vanishes on
// some edge.
TangentField collar_extend(const TriMesh& mesh, const BoundaryField& u, double w_scale);

// Field tangent to every boundary loop (|nu| < 1e-9 on all boundary edges)
// whose interior singular set is exactly `want` (vertex -> index; zero
// entries become marked points). Sum of want must equal chi (ChiMismatch)
// and prescription vertices must sit clear of the two-ring boundary collar
// (NotInterior). TooCoarse when the interior cannot carry the prescription.
TangentField synthesize_tangent_boundary(const TriMesh& mesh, const std::map<int, int>& want,
                                         uint64_t seed = 0);

// Field with a prescribed interior singular set and a prescribed boundary
// census: `inward` and `outward` map boundary vertices to +-1 zero indices.
// Zero indices must alternate around each loop and the books must close:
// chi = sum(interior) - sum(inward). Throws ConditionViolated, NotInterior,
// TooCoarse.
TangentField synthesize_with_boundary(const TriMesh& mesh, const std::map<int, int>& interior,
                                      const std::map<int, int>& inward,
                                      const std::map<int, int>& outward, uint64_t seed = 0);

}  // namespace sf
