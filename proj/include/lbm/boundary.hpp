/// @file boundary.hpp
/// @brief Domain-boundary treatment as six per-face passes.
///
/// Passes run on the post-streaming distributions, before moments and
/// collision. Each pass reconstructs exactly the populations whose pull
/// source lies outside the global domain through its own face; a direction
/// leaving through several faces at an edge or corner is owned by the first
/// face in the fixed pass order (-x,+x,-y,+y,-z,+z), so no slot is written
/// twice. No-slip bounce-back fills a missing population from the opposite
/// population of the previous time step at the same node.
#pragma once

#include <array>

#include "lbm/collision.hpp"
#include "lbm/domain.hpp"
#include "lbm/layout.hpp"
#include "lbm/parallel.hpp"

namespace lbm {

enum class FaceCondition { NoSlip, VelocityInlet, Outflow, Periodic };

struct FaceSpec {
    FaceCondition condition = FaceCondition::NoSlip;
    Vec3 inlet_velocity;  // used by VelocityInlet (inlet density is 1)
};

/// Face order: 0:-x 1:+x 2:-y 3:+y 4:-z 5:+z.
inline constexpr int kNumFaces = 6;
inline int face_axis(int face) { return face / 2; }
inline int face_side(int face) { return face % 2 == 0 ? -1 : +1; }

struct BoundarySet {
    std::array<FaceSpec, kNumFaces> faces;

    /// Periodic faces must come in opposing pairs. Throws ConfigError.
    void validate() const;
    bool axis_periodic(int axis) const {
        return faces[2 * axis].condition == FaceCondition::Periodic;
    }
};

/// True when direction i at global coordinates g pulls from outside the
/// domain through `face`, and `face` is the first such face in pass order.
/// Periodic faces never make a population missing (streaming wraps them),
/// so they are skipped both as owner and as earlier claimant.
bool face_owns_direction(const GridDims& global, const BoundarySet& set, int gx, int gy, int gz,
                         int dir, int face);

/// One boundary pass over the face's layer restricted to this region.
/// f_star is the post-streaming store being repaired; f_prev holds the
/// previous step's populations (used by bounce-back).
void apply_face(FieldStore& f_star, const FieldStore& f_prev, const BoundarySet& set, int face,
                const DomainContext& ctx, ThreadPool& pool);

/// All six passes in the fixed order.
void apply_domain_boundaries(FieldStore& f_star, const FieldStore& f_prev,
                             const BoundarySet& set, const DomainContext& ctx,
                             ThreadPool& pool);

}  // namespace lbm
