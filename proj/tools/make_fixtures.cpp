// Regenerates the checked-in meshes under fixtures/.
#include <cstdio>
#include <string>

#include "singforge/fixtures.hpp"
#include "singforge/mesh.hpp"

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "fixtures";
  using namespace sf::fixtures;
  struct Item {
    const char* name;
    sf::TriMesh mesh;
  };
  const Item items[] = {
      {"tetra.off", tetrahedron()},
      {"octa.off", octahedron()},
      {"icosphere2.off", icosphere(2)},
      {"uv_sphere_9x16.off", uv_sphere(9, 16)},
      {"torus_8x8.off", grid_torus(8, 8)},
      {"torus_16x16.off", grid_torus(16, 16)},
      {"genus2.off", genus2()},
      {"disk_6x24.off", polar_disk(6, 24)},
      {"annulus_4x24.off", polar_annulus(4, 24)},
      {"fan_1000.off", polar_disk(1, 1000)},
  };
  for (const Item& item : items) {
    std::string path = dir + "/" + item.name;
    sf::save_off_file(item.mesh, path);
    std::printf("%s: %d vertices, %d faces, chi=%d\n", path.c_str(),
                item.mesh.n_vertices(), item.mesh.n_faces(),
                item.mesh.euler_characteristic());
  }
  return 0;
}
