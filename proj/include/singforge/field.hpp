#pragma once

#include <cstdint>
#include <vector>

#include "singforge/mesh.hpp"

namespace sf {

// Piecewise-constant tangent vector field: one direction angle (in the face
// frame) and one positive magnitude per face. Singular points live at
// vertices; `marked` lists vertices flagged singular even when their winding
// index is zero (degenerate prescriptions keep their identity this way).
struct TangentField {
  const TriMesh* mesh = nullptr;
  std::vector<double> theta;
  std::vector<double> mag;
  std::vector<int> marked;  // sorted vertex ids
};

TangentField make_field(const TriMesh& mesh, std::vector<double> theta,
                        std::vector<double> mag, std::vector<int> marked = {});
// Shape/positivity/mark checks. Throws ZeroFace, BoundaryVertex, InternalError.
void validate_field(const TangentField& f);
Vec3 face_vector(const TangentField& f, int face);

// Rotation taking angles measured in from_face's frame to to_face's frame
// across their shared edge. Antisymmetric. Throws NotAdjacent.
double transport_angle(const TriMesh& mesh, int from_face, int to_face);

// Winding index at an interior vertex: wrapped angle steps between
// consecutive fan faces (each transported across the shared edge) plus the
// angle defect, divided by 2*pi. Throws BoundaryVertex; throws AmbiguousWrap
// when a step lands within 1e-9 of the +-pi cut (anti-parallel neighbors).
int vertex_index(const TangentField& f, int v);

struct SingularPoint {
  int vertex = 0;
  int index = 0;
  bool marked = false;
  bool operator==(const SingularPoint&) const = default;
};

// All interior vertices with nonzero index, plus marked vertices, sorted by
// id. Ambiguous wraps are retried under a deterministic sub-1e-6 angle
// jitter derived from `seed`.
std::vector<SingularPoint> singular_set(const TangentField& f, uint64_t seed = 0);

struct IndexReport {
  std::vector<SingularPoint> points;
  int sum = 0;
  int chi = 0;
  bool holds = false;
};

// Index-sum law for closed surfaces. Throws HasBoundary on open meshes.
IndexReport check_poincare_hopf(const TangentField& f, uint64_t seed = 0);

// Per-face gradient of the piecewise-linear interpolant of per-vertex
// values. Throws ZeroFace if some face gradient vanishes (constant values);
// callers break ties with jitter first.
TangentField gradient_field(const TriMesh& mesh, const std::vector<double>& values);

}  // namespace sf
