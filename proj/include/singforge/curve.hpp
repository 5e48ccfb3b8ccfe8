#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "singforge/boundary.hpp"
#include "singforge/field.hpp"

namespace sf {

// Closed simple cycle of interior mesh edges, oriented by vertex order.
// halfedges[k] runs vertices[k] -> vertices[(k+1) % n].
struct EmbeddedCurve {
  std::vector<int> vertices;
  std::vector<int> halfedges;
};

// Validates the cycle: at least three distinct in-range vertices, none on
// the mesh boundary, consecutive pairs joined by mesh edges. Throws
// ConditionViolated, BoundaryVertex, NotAdjacent.
EmbeddedCurve make_curve(const TriMesh& mesh, std::vector<int> vertices);

// Field data along the curve, averaged over the two faces flanking each
// edge. Unlike boundary loops, nu counts the component to the LEFT of the
// walk direction here; loop is -1 since the curve bounds nothing.
BoundaryField induce_on_curve(const TangentField& f, const EmbeddedCurve& curve);

// True when the transversal component stays within tol of zero, relative to
// the field strength, on every curve edge.
bool is_tangent_to_curve(const TangentField& f, const EmbeddedCurve& curve, double tol);

// A prescribed zero of the induced field at a curve vertex: beta (+1 or -1)
// is its index along the curve, gamma the surface index the vertex must
// carry (0 = regular, kept marked).
struct CurvePoint {
  int vertex = 0;
  int beta = 0;
  int gamma = 0;
};

// Builds a field tangent to the curve whose induced zeros sit exactly at
// points, with indices beta, and whose surface singular set is interior plus
// the (vertex, gamma) pairs. Every face flanking a curve edge ends up
// parallel to that edge. Preconditions: the betas sum to zero and alternate
// around the cycle, the index totals match chi, interior prescriptions stay
// off the curve. Throws ConditionViolated, BetaSumNonzero,
// BetaNotAlternating, ChiMismatch, NotInterior, BoundaryVertex, TooCoarse.
TangentField synthesize_tangent_to_curve(const TriMesh& mesh, const EmbeddedCurve& curve,
                                         const std::map<int, int>& interior,
                                         const std::vector<CurvePoint>& points,
                                         uint64_t seed = 0);

}  // namespace sf
