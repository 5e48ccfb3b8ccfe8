#pragma once

#include <cstdint>
#include <map>

#include "singforge/field.hpp"

namespace sf {

// Total winding index carried by the region's interior vertices, which
// equals the turning of the field along the region boundary.
int boundary_winding(const TangentField& f, const Region& region, uint64_t seed = 0);

// Replace the field inside a combinatorial disk so that its interior
// vertices carry exactly `want` (absent vertices get index zero). Every face
// outside the region keeps its angle and magnitude bitwise; magnitudes are
// untouched everywhere. Errors: NotADisk, NotInterior, WindingMismatch when
// sum(want) differs from the current boundary winding, TooCoarse when the
// region cannot carry the prescription.
TangentField resynthesize_region(const TangentField& f, const Region& region,
                                 const std::map<int, int>& want, uint64_t seed = 0);

// Disk the pair insertion works inside: grown around the connecting path,
// avoiding all other singular points. Exposed for locality checks.
Region insertion_region(const TangentField& f, int p, int q);
Region merge_region(const TangentField& f, int x0, int x1);

// Create an index +1 at p and -1 at q; both must currently be regular
// interior vertices. Errors: AlreadySingular, PathHitsSingular (no
// singularity-free path), CannotIsolate, TooCoarse.
TangentField insert_pair(const TangentField& f, int p, int q, uint64_t seed = 0);

// Slide the singularity at x1 along a path onto x0; x0 ends up with the
// index sum (a zero sum annihilates both). Errors: EndpointNotSingular,
// PathHitsSingular, CannotIsolate, TooCoarse.
TangentField merge_singularities(const TangentField& f, int x0, int x1, uint64_t seed = 0);

// Build a field on a closed surface whose singular set is exactly `want`
// (vertex -> index; zero entries become marked degenerate points). Sum of
// indices must equal chi (ChiMismatch). Deterministic in `seed`.
TangentField synthesize_closed(const TriMesh& mesh, const std::map<int, int>& want,
                               uint64_t seed);

}  // namespace sf
