/// @file decomp.hpp
/// @brief Multi-region execution: z-slab split and one-cell ghost exchange.
///
/// The grid is cut into m slabs of near-equal plane count along z. Each
/// region's local stores cover its owned slab plus a one-cell ghost plane per
/// neighbor. Two exchange rounds run per step: the macroscopic planes (u,
/// rho) after the moments phase so ghost-adjacent solid samples interpolate
/// current values, and the distribution planes after collision so the next
/// streaming pulls current populations. Every region also keeps a full
/// replica of all solid samples.
#pragma once

#include <vector>

#include "lbm/domain.hpp"
#include "lbm/solver.hpp"

namespace lbm {

struct SlabRange {
    int z0 = 0, z1 = 0;  // owned global planes [z0, z1)
};

/// Balanced partition of [0, nz) into m slabs; sizes differ by at most one.
/// Throws ConfigError unless 1 <= m <= nz.
std::vector<SlabRange> split_domain(const GridDims& dims, int m);

/// Region topology for slab r of the partition.
DomainContext make_region_context(const GridDims& global, const std::vector<SlabRange>& slabs,
                                  int r, bool periodic_x, bool periodic_y, bool periodic_z);

struct Region {
    DomainContext ctx;
    SimState state;
};

std::vector<Region> make_regions(const GridDims& global, int m, std::size_t alpha,
                                 bool periodic_x, bool periodic_y, bool periodic_z);

enum class ExchangePayload { MacroFields, Distributions };

/// Copies each region's owned boundary planes into the neighbours' ghost
/// planes (by value). MacroFields moves u and rho; Distributions moves f.
/// No-op for a single region.
void exchange_ghosts(std::vector<Region>& regions, ExchangePayload payload);

}  // namespace lbm
