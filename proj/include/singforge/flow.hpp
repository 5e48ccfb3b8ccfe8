#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "singforge/field.hpp"

namespace sf {

enum class FlowDir { Forward, Backward };
enum class TraceEnd { Singular, Escaped, StepLimit };

struct TraceSegment {
  int face = 0;
  Vec3 a, b;  // entry and exit; slide segments run along a face edge
  double length = 0.0;
};

// Piecewise-straight integral curve of the face field. Each face contributes
// one straight run along its vector; when the next face pushes back across
// the shared edge the curve slides along that edge to a vertex instead.
struct Trajectory {
  std::vector<TraceSegment> segments;
  TraceEnd end = TraceEnd::StepLimit;
  int end_vertex = -1;  // set when end == Singular
  double total_length = 0.0;
};

// March from a point inside `face` with the field (Forward) or against it
// (Backward). Stops on entering a capture ball around a singular vertex, on
// leaving through a boundary edge (Escaped), or once the segment budget runs
// out (StepLimit). capture_radius <= 0 means half the shortest edge incident
// to each singular vertex. Throws StartsAtSingular when the start point
// already sits inside a capture ball.
Trajectory trace(const TangentField& f, int face, const Vec3& start, FlowDir dir,
                 int max_steps = 20000, double capture_radius = 0.0);

struct FlowArc {
  int from = 0;
  int to = 0;
  Trajectory witness;  // oriented from `from` to `to`
};

// Directed graph of the dynamics: one node per singular vertex, one arc per
// witnessed connecting trajectory.
struct FlowGraph {
  std::vector<int> nodes;     // sorted vertex ids
  std::vector<FlowArc> arcs;  // deduplicated by (from, to), discovery order
};

// Seeds a ring of points around every singular vertex, traces each seed both
// ways, and records an arc whenever both ends land on singular vertices.
// Throws InconclusiveTrace when there is no singular vertex to seed or more
// than half of the traces hit the step limit.
FlowGraph field_graph(const TangentField& f, int seeds_per_singularity = 64);

struct ContourReport {
  bool found = false;
  std::vector<int> cycle;  // vertex walk, first == last, empty when !found
};

// Directed-cycle search over the arcs; self-arcs count.
ContourReport has_contour(const FlowGraph& graph);

// Piecewise potential attached to an acyclic flow graph. Singular vertices
// carry their order rank, points inside a capture ball sit on that rank's
// plateau, and everything else interpolates between the two terminal ranks
// of its trajectory in proportion to arc length, so the value grows strictly
// along the flow outside the plateaus.
struct LyapunovFunction {
  std::map<int, double> rank;  // singular vertex -> 1-based order position
  int max_steps = 20000;
  double capture_radius = 0.0;

  // Both evaluations trace from the query, so they throw
  // NonterminatingTrajectory when a trace fails to reach singular ends.
  double operator()(const TangentField& f, int face, const Vec3& p) const;
  double at_vertex(const TangentField& f, int v) const;
};

// Orders the graph sources-first (lowest vertex id among the ready nodes)
// and assigns rank i to the i-th node. Throws HasContour on a cyclic graph.
LyapunovFunction lyapunov(const TangentField& f, const FlowGraph& graph);

// First and last entries 1, total equal to the Euler characteristic.
bool is_admissible(const std::vector<int>& indices, const TriMesh& mesh);

// Smallest number of critical points a smooth function on the surface can
// carry. Entries are caller-overridable.
struct QTable {
  int sphere = 2;
  int other = 3;
  int operator()(const TriMesh& mesh) const;
};

// Admissible (throws NotAdmissible otherwise) and long enough for a function
// with at least q critical points.
bool is_realizable(const std::vector<int>& indices, const TriMesh& mesh,
                   const QTable& q = {});

struct RealizedField {
  TangentField field;
  FlowGraph graph;
  LyapunovFunction potential;
};

// Builds a gradient-like field whose singular points, read in potential
// order, carry exactly the prescribed index sequence: a tilted height
// gradient supplies the unit extremes, inserted pairs and merges shape the
// larger entries, zeros become marked points. The returned graph is
// contour-free. Throws HasBoundary and NotAdmissible up front; when every
// tilt fails it rethrows the last reshaping error instead.
RealizedField realize_admissible(const TriMesh& mesh, const std::vector<int>& indices,
                                 uint64_t seed = 0);

}  // namespace sf
