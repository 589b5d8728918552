#include "lbm/decomp.hpp"

namespace lbm {

std::vector<SlabRange> split_domain(const GridDims& dims, int m) {
    if (m < 1 || m > dims.nz)
        throw ConfigError("decomp: region count must satisfy 1 <= m <= nz (got m=" +
                          std::to_string(m) + ", nz=" + std::to_string(dims.nz) + ")");
    std::vector<SlabRange> slabs(m);
    const int base = dims.nz / m, rem = dims.nz % m;
    int z = 0;
    for (int r = 0; r < m; ++r) {
        int size = base + (r < rem ? 1 : 0);
        slabs[r] = {z, z + size};
        z += size;
    }
    return slabs;
}

DomainContext make_region_context(const GridDims& global, const std::vector<SlabRange>& slabs,
                                  int r, bool periodic_x, bool periodic_y, bool periodic_z) {
    const int m = static_cast<int>(slabs.size());
    DomainContext ctx;
    ctx.global = global;
    ctx.periodic[0] = periodic_x;
    ctx.periodic[1] = periodic_y;
    ctx.periodic[2] = periodic_z;
    if (m == 1) return DomainContext::single(global, periodic_x, periodic_y, periodic_z);

    const bool ghost_lo = r > 0 || periodic_z;
    const bool ghost_hi = r + 1 < m || periodic_z;
    const int owned = slabs[r].z1 - slabs[r].z0;
    ctx.local = {global.nx, global.ny, owned + (ghost_lo ? 1 : 0) + (ghost_hi ? 1 : 0)};
    ctx.owned_begin = ghost_lo ? 1 : 0;
    ctx.owned_end = ctx.owned_begin + owned;
    ctx.local_z0_global = slabs[r].z0 - ctx.owned_begin;
    ctx.wrap_z_local = false;
    return ctx;
}

std::vector<Region> make_regions(const GridDims& global, int m, std::size_t alpha,
                                 bool periodic_x, bool periodic_y, bool periodic_z) {
    auto slabs = split_domain(global, m);
    std::vector<Region> regions;
    regions.reserve(m);
    for (int r = 0; r < m; ++r) {
        Region reg;
        reg.ctx = make_region_context(global, slabs, r, periodic_x, periodic_y, periodic_z);
        reg.state = SimState::make(reg.ctx.local, alpha);
        regions.push_back(std::move(reg));
    }
    return regions;
}

namespace {

void copy_plane(const FieldStore& src, const GridDims& src_dims, int src_lz, FieldStore& dst,
                const GridDims& dst_dims, int dst_lz) {
    const std::size_t beta = src.beta();
    // Staged through a value buffer: regions never touch each other's stores
    // beyond this exchange.
    std::vector<double> buf(static_cast<std::size_t>(src_dims.nx) * src_dims.ny * beta);
    std::size_t p = 0;
    for (int y = 0; y < src_dims.ny; ++y)
        for (int x = 0; x < src_dims.nx; ++x) {
            std::size_t k = node_index(x, y, src_lz, src_dims);
            for (std::size_t c = 0; c < beta; ++c) buf[p++] = src.get(k, c);
        }
    p = 0;
    for (int y = 0; y < dst_dims.ny; ++y)
        for (int x = 0; x < dst_dims.nx; ++x) {
            std::size_t k = node_index(x, y, dst_lz, dst_dims);
            for (std::size_t c = 0; c < beta; ++c) dst.set(k, c, buf[p++]);
        }
}

void exchange_pair(Region& lo, Region& hi, ExchangePayload payload) {
    // lo's top owned plane -> hi's lower ghost; hi's bottom owned -> lo's upper ghost.
    const int lo_top = lo.ctx.owned_end - 1;
    const int lo_ghost_hi = lo.ctx.owned_end;
    const int hi_bottom = hi.ctx.owned_begin;
    const int hi_ghost_lo = hi.ctx.owned_begin - 1;

    if (payload == ExchangePayload::Distributions) {
        copy_plane(lo.state.f, lo.ctx.local, lo_top, hi.state.f, hi.ctx.local, hi_ghost_lo);
        copy_plane(hi.state.f, hi.ctx.local, hi_bottom, lo.state.f, lo.ctx.local, lo_ghost_hi);
    } else {
        copy_plane(lo.state.u, lo.ctx.local, lo_top, hi.state.u, hi.ctx.local, hi_ghost_lo);
        copy_plane(hi.state.u, hi.ctx.local, hi_bottom, lo.state.u, lo.ctx.local, lo_ghost_hi);
        copy_plane(lo.state.rho, lo.ctx.local, lo_top, hi.state.rho, hi.ctx.local, hi_ghost_lo);
        copy_plane(hi.state.rho, hi.ctx.local, hi_bottom, lo.state.rho, lo.ctx.local,
                   lo_ghost_hi);
    }
}

}  // namespace

void exchange_ghosts(std::vector<Region>& regions, ExchangePayload payload) {
    const int m = static_cast<int>(regions.size());
    if (m < 2) return;
    for (int r = 0; r + 1 < m; ++r) exchange_pair(regions[r], regions[r + 1], payload);
    if (regions[0].ctx.periodic[2]) exchange_pair(regions[m - 1], regions[0], payload);
}

}  // namespace lbm
