#include "lbm/boundary.hpp"

#include "lbm/lattice.hpp"

namespace lbm {

void BoundarySet::validate() const {
    for (int a = 0; a < 3; ++a) {
        bool lo = faces[2 * a].condition == FaceCondition::Periodic;
        bool hi = faces[2 * a + 1].condition == FaceCondition::Periodic;
        if (lo != hi)
            throw ConfigError("boundary: periodic faces must come in opposing pairs (axis " +
                              std::to_string(a) + ")");
    }
}

namespace {

// Pull source of direction `dir` exits the domain through face f?
inline bool exits_through(const GridDims& g, const int coord[3], const int c[3], int f) {
    int a = face_axis(f);
    int src = coord[a] - c[a];
    return face_side(f) < 0 ? src < 0 : src >= g.extent(a);
}

}  // namespace

bool face_owns_direction(const GridDims& global, const BoundarySet& set, int gx, int gy, int gz,
                         int dir, int face) {
    if (set.axis_periodic(face_axis(face))) return false;
    const auto& lat = LatticeD3Q27::instance();
    const int coord[3] = {gx, gy, gz};
    const int* c = lat.c[dir].data();
    if (!exits_through(global, coord, c, face)) return false;
    for (int f = 0; f < face; ++f) {
        if (set.axis_periodic(face_axis(f))) continue;
        if (exits_through(global, coord, c, f)) return false;
    }
    return true;
}

void apply_face(FieldStore& f_star, const FieldStore& f_prev, const BoundarySet& set, int face,
                const DomainContext& ctx, ThreadPool& pool) {
    const FaceSpec& spec = set.faces[face];
    if (spec.condition == FaceCondition::Periodic) return;  // streaming wraps these

    const auto& lat = LatticeD3Q27::instance();
    const GridDims& g = ctx.global;
    const int axis = face_axis(face);
    const int side = face_side(face);
    const int plane = side < 0 ? 0 : g.extent(axis) - 1;

    // Precompute the directions that can need reconstruction on this face.
    int dirs[27], ndirs = 0;
    for (int i = 0; i < 27; ++i)
        if ((side < 0 && lat.c[i][axis] > 0) || (side > 0 && lat.c[i][axis] < 0)) dirs[ndirs++] = i;

    std::array<double, 27> inlet_feq{};
    if (spec.condition == FaceCondition::VelocityInlet)
        inlet_feq = equilibrium(1.0, spec.inlet_velocity);

    // This region's portion of the face layer.
    int z_lo = ctx.owned_global_z0(), z_hi = ctx.owned_global_z1();
    if (axis == 2) {
        if (plane < z_lo || plane >= z_hi) return;
        z_lo = plane;
        z_hi = plane + 1;
    }
    const int nz_span = z_hi - z_lo;
    const int u_extent = axis == 0 ? g.ny : g.nx;  // in-plane fast coordinate
    const std::size_t span =
        axis == 2 ? static_cast<std::size_t>(g.nx) * g.ny
                  : static_cast<std::size_t>(nz_span) * u_extent;

    pool.parallel_for(span, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            int gx, gy, gz;
            if (axis == 2) {
                gx = static_cast<int>(s % g.nx);
                gy = static_cast<int>(s / g.nx);
                gz = plane;
            } else {
                int u = static_cast<int>(s % u_extent);
                gz = z_lo + static_cast<int>(s / u_extent);
                if (axis == 0) {
                    gx = plane;
                    gy = u;
                } else {
                    gx = u;
                    gy = plane;
                }
            }
            const std::size_t k = ctx.local_index(gx, gy, gz);
            for (int d = 0; d < ndirs; ++d) {
                const int i = dirs[d];
                if (!face_owns_direction(g, set, gx, gy, gz, i, face)) continue;
                switch (spec.condition) {
                    case FaceCondition::NoSlip:
                        f_star.set(k, i, f_prev.get(k, opposite_index(i)));
                        break;
                    case FaceCondition::VelocityInlet:
                        f_star.set(k, i, inlet_feq[i]);
                        break;
                    case FaceCondition::Outflow: {
                        int ix = gx, iy = gy, iz = gz;
                        if (axis == 0) ix -= side;
                        if (axis == 1) iy -= side;
                        if (axis == 2) iz -= side;
                        f_star.set(k, i, f_star.get(ctx.local_index(ix, iy, iz), i));
                        break;
                    }
                    case FaceCondition::Periodic:
                        break;
                }
            }
        }
    });
}

void apply_domain_boundaries(FieldStore& f_star, const FieldStore& f_prev,
                             const BoundarySet& set, const DomainContext& ctx,
                             ThreadPool& pool) {
    for (int face = 0; face < kNumFaces; ++face)
        apply_face(f_star, f_prev, set, face, ctx, pool);
}

}  // namespace lbm
