/// @file tracer.hpp
/// @brief Visualization-only smoke tracers: emit, advect, rasterize.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lbm/core.hpp"
#include "lbm/layout.hpp"
#include "lbm/parallel.hpp"

namespace lbm {

struct TracerEmitter {
    Vec3 lo, hi;   // axis-aligned emission region, grid units
    int rate = 0;  // particles per step
};

struct TracerCloud {
    std::vector<Vec3> positions;
    std::vector<long> birth_step;

    std::size_t size() const { return positions.size(); }
};

/// Samples the velocity field at an arbitrary position. Returns false when
/// the kernel support leaves the domain (the particle is then retired).
using VelocitySampler = std::function<bool(const Vec3&, Vec3&)>;

/// Trilinear sampler over a single full-domain velocity store.
VelocitySampler make_grid_sampler(const FieldStore& u, const GridDims& dims);

/// Adds emitter particles for this step (deterministic given the seed/step).
void emit_tracers(TracerCloud& cloud, const std::vector<TracerEmitter>& emitters, long step,
                  std::uint64_t seed);

/// Explicit Euler, one lattice time step: x += u(x). Out-of-domain particles
/// are retired (removed, order preserved).
void advect_tracers(TracerCloud& cloud, const VelocitySampler& sample, ThreadPool& pool);

/// Deposits each particle into the cell-centered volume with the trilinear
/// kernel; the volume sum equals the live particle count.
std::vector<double> rasterize_density(const TracerCloud& cloud, const GridDims& dims);

}  // namespace lbm
