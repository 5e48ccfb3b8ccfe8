#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "singforge/field.hpp"
#include "singforge/rng.hpp"

namespace sfh {

// Field sampled from a complex function at face centroids of a planar z=0 mesh.
inline sf::TangentField sample_planar(
    const sf::TriMesh& m,
    const std::function<std::complex<double>(std::complex<double>)>& fn) {
  std::vector<double> theta(m.n_faces()), mag(m.n_faces());
  for (int f = 0; f < m.n_faces(); ++f) {
    sf::Vec3 c = m.face_centroid(f);
    std::complex<double> w = fn({c.x, c.y});
    sf::Vec3 v{w.real(), w.imag(), 0.0};
    theta[f] = m.angle_in_face(f, v);
    mag[f] = std::abs(w);
  }
  return sf::make_field(m, std::move(theta), std::move(mag));
}

inline sf::TangentField random_field(const sf::TriMesh& m, uint64_t seed) {
  sf::SplitMix rng(seed);
  std::vector<double> theta(m.n_faces()), mag(m.n_faces());
  for (int f = 0; f < m.n_faces(); ++f) {
    theta[f] = rng.range(-M_PI, M_PI);
    mag[f] = rng.range(0.5, 2.0);
  }
  return sf::make_field(m, std::move(theta), std::move(mag));
}

// Independent winding oracle for planar z=0 meshes: accumulate global-plane
// angle steps around the fan, no frames, no transport, no wrap helper.
inline int planar_winding_at(const sf::TangentField& f, int v) {
  const sf::TriMesh& m = *f.mesh;
  const std::vector<int>& fan = m.faces_around(v);
  std::vector<double> phi;
  for (int face : fan) {
    sf::Vec3 w = sf::face_vector(f, face);
    phi.push_back(std::atan2(w.y, w.x));
  }
  double total = 0.0;
  for (size_t i = 0; i < phi.size(); ++i) {
    double d = phi[(i + 1) % phi.size()] - phi[i];
    d = d - 2.0 * M_PI * std::floor(d / (2.0 * M_PI) + 0.5);
    total += d;
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

}  // namespace sfh
