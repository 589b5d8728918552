/// @file domain.hpp
/// @brief Local-grid topology shared by the solver phases.
///
/// A DomainContext describes one region's view of the global grid: its local
/// store (owned z-slab plus up to two one-cell ghost planes), the global
/// position of that slab, and the axis periodicity. The single-region case is
/// the degenerate context with no ghosts.
#pragma once

#include <cassert>

#include "lbm/core.hpp"
#include "lbm/layout.hpp"

namespace lbm {

struct DomainContext {
    GridDims global;
    GridDims local;             // nx,ny match global; nz = owned + ghost planes
    int local_z0_global = 0;    // global z of local plane 0
    int owned_begin = 0;        // local z of first owned plane
    int owned_end = 0;          // local z past last owned plane
    bool periodic[3] = {false, false, false};
    bool wrap_z_local = false;  // single region with periodic z: wrap in place

    static DomainContext single(const GridDims& dims, bool px, bool py, bool pz) {
        DomainContext c;
        c.global = dims;
        c.local = dims;
        c.owned_begin = 0;
        c.owned_end = dims.nz;
        c.periodic[0] = px;
        c.periodic[1] = py;
        c.periodic[2] = pz;
        c.wrap_z_local = pz;
        return c;
    }

    int owned_planes() const { return owned_end - owned_begin; }
    int owned_global_z0() const { return local_z0_global + owned_begin; }
    int owned_global_z1() const { return local_z0_global + owned_end; }

    bool owns_global_z(int gz) const {
        return gz >= owned_global_z0() && gz < owned_global_z1();
    }
    /// Local store index of global coordinates; the z plane must be present
    /// locally (owned or ghost).
    std::size_t local_index(int x, int y, int gz) const {
        int lz = gz - local_z0_global;
        assert(lz >= 0 && lz < local.nz);
        return node_index(x, y, lz, local);
    }
};

}  // namespace lbm
