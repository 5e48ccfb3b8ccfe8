#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "singforge/errors.hpp"
#include "singforge/vec3.hpp"

namespace sf {

// Oriented triangle mesh with halfedge connectivity.
//
// Halfedge h = 3*f + k lives in face f and runs from corner k to corner
// (k+1)%3 of that face. twin(h) == -1 marks a boundary edge. Faces are CCW
// (surface normal out of the screen / outward for closed surfaces), so a
// boundary loop traversed along its halfedges keeps the surface on the left.
class TriMesh {
 public:
  // Validates the complex: triangles only, edge-manifold, vertex-manifold
  // (single fan per vertex), consistently orientable, connected, no
  // degenerate faces. Throws sf::Error on violation.
  static TriMesh from_data(std::vector<Vec3> positions,
                           std::vector<std::array<int, 3>> faces);

  int n_vertices() const { return static_cast<int>(positions_.size()); }
  int n_faces() const { return static_cast<int>(faces_.size()); }
  int n_edges() const { return n_edges_; }
  int euler_characteristic() const { return n_vertices() - n_edges() + n_faces(); }
  bool is_closed() const { return boundary_loops_.empty(); }
  // (2 - chi - #loops) / 2 for orientable surfaces.
  int genus() const;

  const Vec3& position(int v) const { return positions_[v]; }
  std::vector<Vec3>& positions() { return positions_; }
  const std::vector<Vec3>& positions() const { return positions_; }
  const std::array<int, 3>& face(int f) const { return faces_[f]; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }

  static int next_halfedge(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
  static int prev_halfedge(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
  static int halfedge_face(int h) { return h / 3; }
  int twin(int h) const { return twin_[h]; }
  int halfedge_from(int h) const { return faces_[h / 3][h % 3]; }
  int halfedge_to(int h) const { return faces_[h / 3][(h % 3 + 1) % 3]; }
  // Halfedge in face f whose twin lies in face g, or -1.
  int shared_halfedge(int f, int g) const;

  // Geometry. Frames are per-face orthonormal bases: e1 along the first
  // halfedge, e2 = normal x e1, so in-plane vectors are (cos t, sin t) in
  // frame coordinates with angle t.
  const Vec3& frame_e1(int f) const { return frame_e1_[f]; }
  const Vec3& frame_e2(int f) const { return frame_e2_[f]; }
  const Vec3& normal(int f) const { return normal_[f]; }
  double face_area(int f) const { return area_[f]; }
  Vec3 face_centroid(int f) const;
  // Angle of an (assumed in-plane) direction in face f's frame.
  double angle_in_face(int f, const Vec3& d) const;
  Vec3 direction_in_face(int f, double angle) const;
  double corner_angle(int f, int k) const;
  // 2*pi minus the total corner angle at an interior vertex.
  double angle_defect(int v) const;
  double bbox_diagonal() const { return diag_; }
  double shortest_edge_at(int v) const;

  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }
  // Outgoing halfedge at v from which twin(prev(...)) walks the fan CCW; for
  // boundary vertices this is the boundary-leading halfedge (twin == -1).
  int vertex_halfedge(int v) const { return vertex_he_[v]; }
  // Faces incident to v in CCW order; for boundary vertices the fan runs
  // from the boundary-leading face to the boundary-trailing face.
  const std::vector<int>& faces_around(int v) const { return vertex_faces_[v]; }
  // One-ring vertices in the matching CCW order (boundary fans include both ends).
  const std::vector<int>& vertices_around(int v) const { return vertex_ring_[v]; }
  // Boundary loops as CCW vertex cycles (surface on the left).
  const std::vector<std::vector<int>>& boundary_loops() const { return boundary_loops_; }
  // Parallel structure holding the interior halfedge for each loop edge:
  // loop vertex i -> halfedge from vertex i to vertex i+1.
  const std::vector<std::vector<int>>& boundary_loop_halfedges() const {
    return boundary_loop_halfedges_;
  }

  // Shortest vertex path (BFS, ties broken toward lower vertex ids) from a
  // to b through vertices not in `forbidden`. Throws NoPath when no such
  // path exists or an endpoint is itself forbidden.
  std::vector<int> path_between(int a, int b,
                                const std::vector<int>& forbidden = {}) const;

 private:
  std::vector<Vec3> positions_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<int> twin_;
  int n_edges_ = 0;
  std::vector<Vec3> frame_e1_, frame_e2_, normal_;
  std::vector<double> area_;
  double diag_ = 0.0;
  std::vector<bool> boundary_vertex_;
  std::vector<int> vertex_he_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<std::vector<int>> vertex_ring_;
  std::vector<std::vector<int>> boundary_loops_;
  std::vector<std::vector<int>> boundary_loop_halfedges_;
};

// Sub-complex spanned by a set of faces.
struct Region {
  std::vector<int> faces;              // sorted, unique
  std::vector<int> closure_vertices;   // every vertex touched by a region face
  std::vector<int> interior_vertices;  // full incident fan inside the region
};

Region region_from_faces(const TriMesh& mesh, std::vector<int> faces);

// Region is a combinatorial disk: edge-connected, every closure vertex has a
// single contiguous face fan inside the region (no pinch points), chi == 1.
bool is_disk(const TriMesh& mesh, const Region& region);

// Smallest disk (by ring growth) whose interior contains every core vertex
// and whose closure avoids `avoid`. Starts from the union of vertex stars,
// grows by whole one-ring face layers. Throws CannotIsolate.
Region disk_region(const TriMesh& mesh, const std::vector<int>& core,
                   const std::vector<int>& avoid);

TriMesh load_off(std::istream& in);
TriMesh load_off_file(const std::string& path);
void save_off(const TriMesh& mesh, std::ostream& out);
void save_off_file(const TriMesh& mesh, const std::string& path);

}  // namespace sf
