/// @file ib.hpp
/// @brief Immersed-boundary coupling: surface samples, interpolation, penalty
/// forces and race-free force spreading.
///
/// Samples are generated by Poisson-disk sampling of a triangle mesh and
/// stored sorted by (block index, Morton code within block) for memory
/// locality, with block edge `ell` chosen by the auto-tuner. Interpolation
/// and spreading use the 2x2x2 per-axis hat kernel, the smallest kernel with
/// a partition of unity.
///
/// Spreading parallelizes over samples. Two accumulation modes:
///  - Atomic: atomic float adds; fast, run-to-run order nondeterministic.
///  - Deterministic: samples are grouped by 2-cell super-blocks and the eight
///    super-block parities are processed as sequential colors, samples inside
///    a group in original-sampling-id order. No two concurrent writers share
///    a node, and each node's accumulation order depends only on sample
///    positions and ids, so results are bit-identical for any thread count,
///    sample storage order, block edge, or region decomposition.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lbm/core.hpp"
#include "lbm/domain.hpp"
#include "lbm/layout.hpp"
#include "lbm/mesh.hpp"
#include "lbm/parallel.hpp"

namespace lbm {

enum class AccumulationMode { Atomic, Deterministic };

enum class SamplingMethod { DartThrowing, SampleElimination };

struct SamplingReport {
    std::size_t n_samples = 0;
    std::size_t degenerate_triangles = 0;
    std::size_t attempts = 0;
    // Per-boundary-cell sample counts (cells holding at least one sample).
    std::size_t occupied_cells = 0;
    double density_min = 0.0, density_mean = 0.0, density_max = 0.0;
    double in_band_fraction = 0.0;  // fraction of cells inside the 10..100 band
};

struct SolidSampleSet {
    std::vector<Vec3> positions;            // current, grid units
    std::vector<Vec3> boundary_velocity;    // u_b
    std::vector<Vec3> penalty_force;        // g^{s->f}
    std::vector<Vec3> sampled_velocity;     // interpolated fluid velocity u(x_s)
    std::vector<Vec3> reference_positions;  // body frame, relative to the motion center
    std::vector<std::uint32_t> source_id;   // original sampling order
    std::vector<std::uint8_t> flagged;      // kernel support left the grid this step
    int block_edge = 1;                     // ell
    Vec3 bbox_lo, bbox_hi;                  // solid bounding box at ordering time
    double poisson_radius = 0.0;

    std::size_t size() const { return positions.size(); }
};

/// Bit-interleaved Z-order code, x in the least-significant position.
/// Contract: each coordinate < 2^21.
std::uint64_t morton3(std::uint32_t x, std::uint32_t y, std::uint32_t z);

/// Poisson-disk surface sampling with minimum pairwise distance `radius`.
/// Degenerate triangles are skipped and counted in the report.
SolidSampleSet sample_surface(const TriMesh& mesh, double radius, std::uint64_t seed,
                              SamplingReport* report = nullptr,
                              SamplingMethod method = SamplingMethod::DartThrowing);

/// Sorts samples by block index (x-fastest block order over the bounding
/// box), then by Morton code within the block. Permutes every per-sample
/// array consistently.
SolidSampleSet reorder_samples(const SolidSampleSet& set, int ell);

/// 2x2x2 kernel footprint of one continuous position.
struct KernelSupport {
    int base[3];         // lower corner node (global coords)
    double wx[2], wy[2], wz[2];
    bool inside = true;  // full support within the global grid

    double weight(int ox, int oy, int oz) const { return wx[ox] * wy[oy] * wz[oz]; }
};

KernelSupport kernel_support(const Vec3& pos, const GridDims& global);

/// Per-axis hat weight, 2-cell support.
inline double kernel_phi(double d) {
    double a = d < 0 ? -d : d;
    return a < 1.0 ? 1.0 - a : 0.0;
}

/// u(x_s) interpolated from the velocity field; flagged samples get zero and
/// contribute nothing downstream. Parallel over samples.
void interpolate_velocity(SolidSampleSet& set, const FieldStore& u, const DomainContext& ctx,
                          ThreadPool& pool);

/// g^{s->f}(x_s) = rho(x_s) * (u_b - u(x_s)), rho interpolated with the same
/// kernel. Requires interpolate_velocity this step.
void penalty_forces(SolidSampleSet& set, const FieldStore& rho, const DomainContext& ctx,
                    ThreadPool& pool);

/// Scatters each sample's penalty force to its 8 support nodes (region-owned
/// nodes only). Per-sample loop count is exactly the kernel support size.
void spread_forces(const SolidSampleSet& set, FieldStore& g, const DomainContext& ctx,
                   AccumulationMode mode, ThreadPool& pool);

/// Prescribed rigid trajectory: rotation about `center` at constant angular
/// velocity plus constant linear drift of the center.
struct RigidMotion {
    Vec3 linear_velocity;
    Vec3 angular_velocity;
    Vec3 center;  // rotation center at t = 0
};

/// positions = center(t) + R(t) * reference; u_b = v + omega x (x_s - center(t)).
void update_rigid_motion(SolidSampleSet& set, const RigidMotion& motion, long t,
                         const GridDims& global, ThreadPool& pool);

/// Fluid reaction on the solid: F = -sum g_s, torque about the current
/// center. Restricted to samples whose position lies in [z0, z1) so region
/// partial sums add up to the global total exactly once.
struct ReactionTotals {
    Vec3 force;
    Vec3 torque;
};
ReactionTotals reaction_totals(const SolidSampleSet& set, const Vec3& center, int global_z0,
                               int global_z1);

}  // namespace lbm
