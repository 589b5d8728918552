/// @file solver.hpp
/// @brief Time-stepping engine: streaming, moments, forcing, split collision.
///
/// Step order (pull scheme):
///   1. stream          f(t) -> f* (periodic pulls wrap; other boundary pulls
///                      are left for the face passes)
///   2. face passes     repair f* populations whose source is outside
///   3. moments         rho*, u* from f*; g reset to the body force
///   4. immersed solids interpolate / penalty / spread into g (module ib)
///   5. collision       f(t+1) = f* + Omega + G in two passes over output
///                      indices 0-13 and 14-26
///
/// Collision writes f(t+1) back into the buffer that held f(t) (already fully
/// consumed by then), so the two stores permanently alternate roles without
/// copies.
#pragma once

#include <array>
#include <string>

#include "lbm/boundary.hpp"
#include "lbm/collision.hpp"
#include "lbm/domain.hpp"
#include "lbm/layout.hpp"
#include "lbm/parallel.hpp"

namespace lbm {

struct SimState {
    GridDims dims;     // local dims (ghost planes included in region mode)
    FieldStore f;      // beta 27: current distributions f(t)
    FieldStore f_star; // beta 27: post-streaming scratch
    FieldStore rho;    // beta 1
    FieldStore u;      // beta 3
    FieldStore g;      // beta 3: body + immersed-boundary force density
    long t = 0;

    static SimState make(const GridDims& dims, std::size_t alpha);

    /// Re-layouts every vector store to group size alpha (pure permutation).
    void set_alpha(std::size_t alpha);

    /// f = f_star = equilibrium(rho0, u0) everywhere, t = 0.
    void initialize_uniform(double rho0, const Vec3& u0);
};

struct StepStatus {
    bool ok = true;
    bool mach_warning = false;  // some node reached |u| >= 0.4
    long step = -1;
    std::string reason;
};

/// Pull streaming over the owned planes. Periodic pulls wrap (in place for a
/// single region; via ghost planes otherwise). Pulls whose source is outside
/// a non-periodic global face are skipped and later repaired by the face
/// passes.
void stream(const FieldStore& f_prev, FieldStore& f_out, const DomainContext& ctx,
            ThreadPool& pool);

/// rho = sum_i f_i, u = (1/rho) sum_i c_i f_i per owned node; resets g to the
/// body force. Flags divergence on rho <= 0 or non-finite values.
StepStatus compute_moments(SimState& s, const Vec3& body_force, const DomainContext& ctx,
                           ThreadPool& pool);

/// Discrete force term: G_i = w_i (c_i . g) / cs2. Zeroth moment vanishes and
/// the first moment equals g. The velocity argument is unused by this
/// first-order scheme but part of the forcing contract.
std::array<double, 27> forcing_term(const Vec3& g, const Vec3& u);

/// One split collision pass over owned nodes: f(t+1)_i = f*_i + Omega_i + G_i
/// for output indices of the pass (0: 0-13, 1: 14-26). Reads f_star, writes
/// f_out.
void collide_pass(SimState& s, FieldStore& f_out, const CollisionModel& model, int pass,
                  const DomainContext& ctx, ThreadPool& pool);

/// Full single-region step without solids (unit tests, simple scenes):
/// stream, face passes, moments, two collision passes, buffer roles swap,
/// t advances. Multi-region and solid-coupled stepping is orchestrated by the
/// runner, which interleaves ghost exchanges and IB phases between the same
/// building blocks.
StepStatus step(SimState& s, const CollisionModel& model, const BoundarySet& boundary,
                const Vec3& body_force, const DomainContext& ctx, ThreadPool& pool);

}  // namespace lbm
