#pragma once

#include <map>
#include <vector>

#include "singforge/field.hpp"

namespace sf::detail {

// Rotates only the faces around q so that the index at q rises by sign (+1 or
// -1) while the index at the adjacent vertex donor drops by sign. Every other
// vertex keeps its index exactly; magnitudes and all faces outside star(q) are
// untouched. Throws TooCoarse when the star cannot absorb the extra turn
// within wrap limits.
void whirl(TangentField& f, int q, int donor, int sign);

// Same transfer when part of star(q) is pinned: faces with frozen_face set
// keep their angles bitwise, and only the maximal free arc of the fan around
// the donor spoke rotates. Needs about three free faces around the donor to
// absorb a turn; tighter fans throw TooCoarse. With nothing frozen in the
// star this is exactly whirl.
void wedge_whirl(TangentField& f, int q, int donor, int sign,
                 const std::vector<char>& frozen_face);

// Carries sign units of index along a path of pairwise adjacent vertices:
// path.front() loses sign, path.back() gains sign, intermediate vertices end
// unchanged. Touches only faces in the stars of path[1..].
void ship_index(TangentField& f, const std::vector<int>& path, int sign);

// Deterministic sub-milliradian angle perturbation per face id, used to keep
// synthesized transitions off exact branch points.
double theta_jitter(int f);

// Floods angles outward from the seeded faces across shared edges, so the
// fill stays smooth and the leftover winding collects in small pockets
// instead of smearing along the seams.
void fill_from_seeds(const TriMesh& m, std::vector<double>& theta, std::vector<char>& assigned);

// Ships winding units between vertices until each carries its prescribed
// index (absent = 0, zero entries become marked). Whirl centers are interior
// vertices whose star holds no frozen face, so frozen faces are never
// rotated; other vertices take part only as path heads, receiving through a
// clear pivot when needed. Verifies the final singular set against want.
void settle_indices(TangentField& f, const std::map<int, int>& want,
                    const std::vector<char>& frozen_face, uint64_t seed);

}  // namespace sf::detail
