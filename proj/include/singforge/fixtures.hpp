#pragma once

#include <vector>

#include "singforge/mesh.hpp"

namespace sf::fixtures {

TriMesh tetrahedron();
// Vertices: 0 +x, 1 -x, 2 +y, 3 -y, 4 +z, 5 -z.
TriMesh octahedron();
// Icosahedron with `subdivisions` rounds of 1:4 loop splits, reprojected to
// the unit sphere. subdivisions=2 gives 162 vertices / 320 faces.
TriMesh icosphere(int subdivisions);
// Poles plus n_lat latitude rings of n_lon vertices. Pole valence = n_lon.
TriMesh uv_sphere(int n_lat, int n_lon);
// nx x ny quad grid on a torus (R=2, r=0.8), each quad split into two
// triangles. Vertex (i,j) has id i*ny + j.
TriMesh grid_torus(int nx, int ny);
// Closed genus-2 surface: 8x8 torus with two distant quad cells removed and
// an 8-triangle tube glued between the square holes. chi = -2.
TriMesh genus2();
// Planar unit disk: center vertex 0 plus `rings` circles of `sectors`
// vertices; center valence = sectors.
TriMesh polar_disk(int rings, int sectors);
// Planar annulus, radii 0.5..1.0, (rings+1) circles of `sectors` vertices.
TriMesh polar_annulus(int rings, int sectors);
// Splits the ring edge opposite each incident corner of every listed vertex,
// doubling that vertex's valence while preserving its total corner angle.
// Used to mint high-valence carrier vertices for large indices.
TriMesh star_refine(const TriMesh& mesh, const std::vector<int>& vertices);

}  // namespace sf::fixtures
