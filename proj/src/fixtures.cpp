#include "singforge/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

namespace sf::fixtures {

TriMesh tetrahedron() {
  std::vector<Vec3> p = {
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<std::array<int, 3>> f = {
      {0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return TriMesh::from_data(std::move(p), std::move(f));
}

TriMesh octahedron() {
  std::vector<Vec3> p = {
      {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<std::array<int, 3>> f = {
      {0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
      {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return TriMesh::from_data(std::move(p), std::move(f));
}

TriMesh icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> p = {
      {-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : p) v = normalized(v);
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int round = 0; round < subdivisions; ++round) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int id = static_cast<int>(p.size());
      p.push_back(normalized((p[a] + p[b]) * 0.5));
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * f.size());
    for (const auto& fv : f) {
      int a = fv[0], b = fv[1], c = fv[2];
      int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  return TriMesh::from_data(std::move(p), std::move(f));
}

TriMesh uv_sphere(int n_lat, int n_lon) {
  std::vector<Vec3> p;
  p.push_back({0, 0, 1});
  auto ring_id = [n_lon](int i, int j) {
    return 1 + (i - 1) * n_lon + ((j % n_lon + n_lon) % n_lon);
  };
  for (int i = 1; i <= n_lat; ++i) {
    double theta = M_PI * i / (n_lat + 1);
    for (int j = 0; j < n_lon; ++j) {
      double phi = 2.0 * M_PI * j / n_lon;
      p.push_back({std::sin(theta) * std::cos(phi),
                   std::sin(theta) * std::sin(phi), std::cos(theta)});
    }
  }
  int south = static_cast<int>(p.size());
  p.push_back({0, 0, -1});

  std::vector<std::array<int, 3>> f;
  for (int j = 0; j < n_lon; ++j)
    f.push_back({0, ring_id(1, j), ring_id(1, j + 1)});
  for (int i = 1; i < n_lat; ++i) {
    for (int j = 0; j < n_lon; ++j) {
      f.push_back({ring_id(i, j), ring_id(i + 1, j), ring_id(i + 1, j + 1)});
      f.push_back({ring_id(i, j), ring_id(i + 1, j + 1), ring_id(i, j + 1)});
    }
  }
  for (int j = 0; j < n_lon; ++j)
    f.push_back({south, ring_id(n_lat, j + 1), ring_id(n_lat, j)});
  return TriMesh::from_data(std::move(p), std::move(f));
}

TriMesh grid_torus(int nx, int ny) {
  const double R = 2.0, r = 0.8;
  std::vector<Vec3> p(static_cast<size_t>(nx) * ny);
  auto id = [nx, ny](int i, int j) {
    return ((i % nx + nx) % nx) * ny + ((j % ny + ny) % ny);
  };
  for (int i = 0; i < nx; ++i) {
    double u = 2.0 * M_PI * i / nx;
    for (int j = 0; j < ny; ++j) {
      double w = 2.0 * M_PI * j / ny;
      p[id(i, j)] = {(R + r * std::cos(w)) * std::cos(u),
                     (R + r * std::cos(w)) * std::sin(u), r * std::sin(w)};
    }
  }
  std::vector<std::array<int, 3>> f;
  f.reserve(static_cast<size_t>(2 * nx) * ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriMesh::from_data(std::move(p), std::move(f));
}

TriMesh genus2() {
  const int nx = 8, ny = 8;
  TriMesh torus = grid_torus(nx, ny);
  // Faces for cell (i,j) were emitted as 2*(i*ny+j) and 2*(i*ny+j)+1.
  std::set<int> removed;
  for (auto [ci, cj] : {std::pair{1, 1}, std::pair{5, 5}}) {
    removed.insert(2 * (ci * ny + cj));
    removed.insert(2 * (ci * ny + cj) + 1);
  }
  std::vector<std::array<int, 3>> base_faces;
  for (int f = 0; f < torus.n_faces(); ++f)
    if (!removed.count(f)) base_faces.push_back(torus.face(f));
  TriMesh open = TriMesh::from_data(torus.positions(), base_faces);
  const auto& loops = open.boundary_loops();
  if (loops.size() != 2 || loops[0].size() != 4 || loops[1].size() != 4)
    throw Error(ErrorCode::InternalError, "unexpected genus2 hole shape");
  const std::vector<int>& A = loops[0];
  const std::vector<int>& B = loops[1];

  // The tube gluing must oppose the two hole orientations; rather than
  // reason about which rotation/direction that is, try all and keep the
  // first combinatorially valid one.
  for (int dir = 0; dir < 2; ++dir) {
    for (int off = 0; off < 4; ++off) {
      std::array<int, 4> bb;
      for (int i = 0; i < 4; ++i)
        bb[i] = B[((dir ? -i : i) + off + 8) % 4];
      std::vector<std::array<int, 3>> faces = base_faces;
      for (int i = 0; i < 4; ++i) {
        // tube quads traverse hole A against its boundary direction
        int a0 = A[i], a1 = A[(i + 1) % 4];
        int b0 = bb[i], b1 = bb[(i + 1) % 4];
        faces.push_back({a1, a0, b0});
        faces.push_back({a1, b0, b1});
      }
      try {
        TriMesh closed = TriMesh::from_data(torus.positions(), faces);
        if (closed.euler_characteristic() == -2 && closed.is_closed())
          return closed;
      } catch (const Error&) {
        continue;
      }
    }
  }
  throw Error(ErrorCode::InternalError, "genus2 tube gluing failed");
}

TriMesh polar_disk(int rings, int sectors) {
  std::vector<Vec3> p;
  p.push_back({0, 0, 0});
  auto id = [sectors](int i, int j) {
    return 1 + (i - 1) * sectors + ((j % sectors + sectors) % sectors);
  };
  for (int i = 1; i <= rings; ++i) {
    double radius = static_cast<double>(i) / rings;
    for (int j = 0; j < sectors; ++j) {
      double phi = 2.0 * M_PI * j / sectors;
      p.push_back({radius * std::cos(phi), radius * std::sin(phi), 0});
    }
  }
  std::vector<std::array<int, 3>> f;
  for (int j = 0; j < sectors; ++j)
    f.push_back({0, id(1, j), id(1, j + 1)});
  for (int i = 1; i < rings; ++i) {
    for (int j = 0; j < sectors; ++j) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriMesh::from_data(std::move(p), std::move(f));
}

TriMesh polar_annulus(int rings, int sectors) {
  std::vector<Vec3> p;
  auto id = [sectors](int i, int j) {
    return i * sectors + ((j % sectors + sectors) % sectors);
  };
  for (int i = 0; i <= rings; ++i) {
    double radius = 0.5 + 0.5 * i / rings;
    for (int j = 0; j < sectors; ++j) {
      double phi = 2.0 * M_PI * j / sectors;
      p.push_back({radius * std::cos(phi), radius * std::sin(phi), 0});
    }
  }
  std::vector<std::array<int, 3>> f;
  for (int i = 0; i < rings; ++i) {
    for (int j = 0; j < sectors; ++j) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriMesh::from_data(std::move(p), std::move(f));
}

TriMesh star_refine(const TriMesh& mesh, const std::vector<int>& vertices) {
  std::set<std::pair<int, int>> to_split;
  for (int v : vertices) {
    for (int f : mesh.faces_around(v)) {
      const auto& fv = mesh.face(f);
      int k = 0;
      while (fv[k] != v) ++k;
      int u = fv[(k + 1) % 3], w = fv[(k + 2) % 3];
      to_split.insert(std::minmax(u, w));
    }
  }

  std::vector<Vec3> p = mesh.positions();
  std::vector<std::array<int, 3>> faces(mesh.faces().begin(), mesh.faces().end());
  for (const auto& [u, w] : to_split) {
    int m = static_cast<int>(p.size());
    p.push_back((p[u] + p[w]) * 0.5);
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() + 2);
    for (const auto& fv : faces) {
      int k = -1;
      for (int i = 0; i < 3; ++i) {
        int a = fv[i], b = fv[(i + 1) % 3];
        if ((a == u && b == w) || (a == w && b == u)) { k = i; break; }
      }
      if (k == -1) {
        next.push_back(fv);
      } else {
        next.push_back({fv[k], m, fv[(k + 2) % 3]});
        next.push_back({m, fv[(k + 1) % 3], fv[(k + 2) % 3]});
      }
    }
    faces = std::move(next);
  }
  return TriMesh::from_data(std::move(p), std::move(faces));
}

}  // namespace sf::fixtures
