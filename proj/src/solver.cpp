#include "lbm/solver.hpp"

#include <atomic>
#include <cmath>

#include "lbm/lattice.hpp"

namespace lbm {

SimState SimState::make(const GridDims& dims, std::size_t alpha) {
    SimState s;
    s.dims = dims;
    const std::size_t n = dims.n_nodes();
    s.f = FieldStore(LayoutParams::make(alpha, 27, n));
    s.f_star = FieldStore(LayoutParams::make(alpha, 27, n));
    s.rho = FieldStore(LayoutParams::make(alpha, 1, n));
    s.u = FieldStore(LayoutParams::make(alpha, 3, n));
    s.g = FieldStore(LayoutParams::make(alpha, 3, n));
    return s;
}

void SimState::set_alpha(std::size_t alpha) {
    const std::size_t n = dims.n_nodes();
    f = convert_layout(f, LayoutParams::make(alpha, 27, n));
    f_star = convert_layout(f_star, LayoutParams::make(alpha, 27, n));
    rho = convert_layout(rho, LayoutParams::make(alpha, 1, n));
    u = convert_layout(u, LayoutParams::make(alpha, 3, n));
    g = convert_layout(g, LayoutParams::make(alpha, 3, n));
}

void SimState::initialize_uniform(double rho0, const Vec3& u0) {
    const auto feq = equilibrium(rho0, u0);
    const std::size_t n = dims.n_nodes();
    for (std::size_t k = 0; k < n; ++k)
        for (int i = 0; i < 27; ++i) {
            f.set(k, i, feq[i]);
            f_star.set(k, i, feq[i]);
        }
    for (std::size_t k = 0; k < n; ++k) {
        rho.set(k, 0, rho0);
        for (int a = 0; a < 3; ++a) u.set(k, a, u0[a]);
    }
    t = 0;
}

void stream(const FieldStore& f_prev, FieldStore& f_out, const DomainContext& ctx,
            ThreadPool& pool) {
    const auto& lat = LatticeD3Q27::instance();
    const GridDims& L = ctx.local;
    const GridDims& G = ctx.global;
    const int planes = ctx.owned_planes();
    const std::size_t plane_nodes = static_cast<std::size_t>(L.nx) * L.ny;

    pool.parallel_for(static_cast<std::size_t>(planes), [&](std::size_t plo, std::size_t phi) {
        for (std::size_t pl = plo; pl < phi; ++pl) {
            const int lz = ctx.owned_begin + static_cast<int>(pl);
            const int gz = ctx.local_z0_global + lz;
            for (int y = 0; y < L.ny; ++y)
                for (int x = 0; x < L.nx; ++x) {
                    const std::size_t k = node_index(x, y, lz, L);
                    for (int i = 0; i < 27; ++i) {
                        const int cx = lat.c[i][0], cy = lat.c[i][1], cz = lat.c[i][2];
                        int sx = x - cx;
                        if (sx < 0 || sx >= G.nx) {
                            if (!ctx.periodic[0]) continue;
                            sx = (sx + G.nx) % G.nx;
                        }
                        int sy = y - cy;
                        if (sy < 0 || sy >= G.ny) {
                            if (!ctx.periodic[1]) continue;
                            sy = (sy + G.ny) % G.ny;
                        }
                        int sz = lz - cz;
                        const int sgz = gz - cz;
                        if (sgz < 0 || sgz >= G.nz) {
                            if (!ctx.periodic[2]) continue;
                            if (ctx.wrap_z_local) sz = (sz + L.nz) % L.nz;
                            // else: the ghost plane at lz -/+ 1 holds the
                            // wrapped neighbor plane already.
                        }
                        f_out.set(k, i, f_prev.get(node_index(sx, sy, sz, L), i));
                    }
                }
        }
    });
    (void)plane_nodes;
}

StepStatus compute_moments(SimState& s, const Vec3& body_force, const DomainContext& ctx,
                           ThreadPool& pool) {
    const auto& lat = LatticeD3Q27::instance();
    const GridDims& L = ctx.local;
    std::atomic<bool> diverged{false};
    std::atomic<bool> mach{false};

    pool.parallel_for(static_cast<std::size_t>(ctx.owned_planes()),
                      [&](std::size_t plo, std::size_t phi) {
        bool local_mach = false;
        for (std::size_t pl = plo; pl < phi; ++pl) {
            const int lz = ctx.owned_begin + static_cast<int>(pl);
            for (int y = 0; y < L.ny; ++y)
                for (int x = 0; x < L.nx; ++x) {
                    const std::size_t k = node_index(x, y, lz, L);
                    double r = 0.0;
                    Vec3 m{};
                    for (int i = 0; i < 27; ++i) {
                        const double fi = s.f_star.get(k, i);
                        r += fi;
                        m.x += lat.c[i][0] * fi;
                        m.y += lat.c[i][1] * fi;
                        m.z += lat.c[i][2] * fi;
                    }
                    if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(m.x) ||
                        !std::isfinite(m.y) || !std::isfinite(m.z)) {
                        diverged.store(true, std::memory_order_relaxed);
                        s.rho.set(k, 0, r);
                        continue;
                    }
                    const Vec3 vel = m * (1.0 / r);
                    if (mach_limit_exceeded(vel)) local_mach = true;
                    s.rho.set(k, 0, r);
                    for (int a = 0; a < 3; ++a) s.u.set(k, a, vel[a]);
                    for (int a = 0; a < 3; ++a) s.g.set(k, a, body_force[a]);
                }
        }
        if (local_mach) mach.store(true, std::memory_order_relaxed);
    });

    StepStatus st;
    st.step = s.t;
    st.mach_warning = mach.load();
    if (diverged.load()) {
        st.ok = false;
        st.reason = "divergence: non-positive or non-finite density";
    }
    return st;
}

std::array<double, 27> forcing_term(const Vec3& g, const Vec3& /*u*/) {
    const auto& lat = LatticeD3Q27::instance();
    std::array<double, 27> G;
    for (int i = 0; i < 27; ++i) {
        const double cg = lat.c[i][0] * g.x + lat.c[i][1] * g.y + lat.c[i][2] * g.z;
        G[i] = lat.w[i] * 3.0 * cg;  // 1/cs2 = 3
    }
    return G;
}

void collide_pass(SimState& s, FieldStore& f_out, const CollisionModel& model, int pass,
                  const DomainContext& ctx, ThreadPool& pool) {
    const auto& lat = LatticeD3Q27::instance();
    const GridDims& L = ctx.local;
    const int i_begin = pass == 0 ? 0 : kSplitBoundary;
    const int i_end = pass == 0 ? kSplitBoundary : 27;

    pool.parallel_for(static_cast<std::size_t>(ctx.owned_planes()),
                      [&](std::size_t plo, std::size_t phi) {
        std::array<double, 27> fnode;
        double omega[27];
        for (std::size_t pl = plo; pl < phi; ++pl) {
            const int lz = ctx.owned_begin + static_cast<int>(pl);
            for (int y = 0; y < L.ny; ++y)
                for (int x = 0; x < L.nx; ++x) {
                    const std::size_t k = node_index(x, y, lz, L);
                    for (int i = 0; i < 27; ++i) fnode[i] = s.f_star.get(k, i);
                    const double r = s.rho.get(k, 0);
                    const Vec3 vel{s.u.get(k, 0), s.u.get(k, 1), s.u.get(k, 2)};
                    const Vec3 gf{s.g.get(k, 0), s.g.get(k, 1), s.g.get(k, 2)};
                    collide_range(fnode, r, vel, model, i_begin, i_end, omega);
                    for (int i = i_begin; i < i_end; ++i) {
                        const double cg =
                            lat.c[i][0] * gf.x + lat.c[i][1] * gf.y + lat.c[i][2] * gf.z;
                        const double Gi = lat.w[i] * 3.0 * cg;
                        f_out.set(k, i, fnode[i] + omega[i - i_begin] + Gi);
                    }
                }
        }
    });
}

StepStatus step(SimState& s, const CollisionModel& model, const BoundarySet& boundary,
                const Vec3& body_force, const DomainContext& ctx, ThreadPool& pool) {
    stream(s.f, s.f_star, ctx, pool);
    apply_domain_boundaries(s.f_star, s.f, boundary, ctx, pool);
    StepStatus st = compute_moments(s, body_force, ctx, pool);
    if (!st.ok) return st;
    collide_pass(s, s.f, model, 0, ctx, pool);
    collide_pass(s, s.f, model, 1, ctx, pool);
    ++s.t;
    return st;
}

}  // namespace lbm
