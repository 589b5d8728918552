/// Test-only reference implementations, independent of the library's
/// production code paths: dense-matrix collision, scalar-loop moments,
/// per-bit Morton interleave, grid-accelerated gathering.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lbm/collision.hpp"
#include "lbm/ib.hpp"
#include "lbm/lattice.hpp"

namespace oracle {

using lbm::Vec3;

/// rng bits -> [0,1) double, replicated from the sampler for deterministic tests.
inline double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

/// Dense moment matrix M[row][dir] = prod_a (c_dir_a - shift_a)^(q_row_a).
inline std::array<std::array<double, 27>, 27> dense_moment_matrix(const Vec3& shift) {
    const auto& lat = lbm::LatticeD3Q27::instance();
    const auto& exps = lbm::moment_exponents();
    std::array<std::array<double, 27>, 27> M;
    for (int r = 0; r < 27; ++r)
        for (int j = 0; j < 27; ++j) {
            double v = 1.0;
            for (int a = 0; a < 3; ++a)
                for (int p = 0; p < exps[r][a]; ++p) v *= lat.c[j][a] - shift[a];
            M[r][j] = v;
        }
    return M;
}

/// Gauss-Jordan inverse with partial pivoting.
inline std::array<std::array<double, 27>, 27> invert(std::array<std::array<double, 27>, 27> A) {
    std::array<std::array<double, 27>, 27> I{};
    for (int i = 0; i < 27; ++i) I[i][i] = 1.0;
    for (int col = 0; col < 27; ++col) {
        int piv = col;
        for (int r = col + 1; r < 27; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(I[col], I[piv]);
        double d = A[col][col];
        for (int c = 0; c < 27; ++c) {
            A[col][c] /= d;
            I[col][c] /= d;
        }
        for (int r = 0; r < 27; ++r) {
            if (r == col) continue;
            double f = A[r][col];
            if (f == 0.0) continue;
            for (int c = 0; c < 27; ++c) {
                A[r][c] -= f * A[col][c];
                I[r][c] -= f * I[col][c];
            }
        }
    }
    return I;
}

/// Omega = -Minv * D * M * (f - feq) evaluated with explicit dense algebra.
inline std::array<double, 27> dense_collide(const std::array<double, 27>& f, double rho,
                                            const Vec3& u, const lbm::CollisionModel& model) {
    const Vec3 shift = model.kind == lbm::CollisionKind::CentralMomentMRT ? u : Vec3{};
    const auto M = dense_moment_matrix(shift);
    const auto Minv = invert(M);
    const auto feq = lbm::equilibrium(rho, u);

    std::array<double, 27> rates = model.rates;
    if (model.policy != lbm::RatePolicy::Constant) {
        lbm::LocalNodeState local;
        local.rho = rho;
        local.u = u;
        for (int i = 0; i < 27; ++i) local.f_dev[i] = f[i] - feq[i];
        rates = lbm::adaptive_rates(local, model);
    }

    std::array<double, 27> m{};
    for (int r = 0; r < 27; ++r)
        for (int j = 0; j < 27; ++j) m[r] += M[r][j] * (f[j] - feq[j]);
    for (int r = 0; r < 27; ++r) m[r] *= rates[r];
    std::array<double, 27> omega{};
    for (int i = 0; i < 27; ++i) {
        double acc = 0.0;
        for (int r = 0; r < 27; ++r) acc += Minv[i][r] * m[r];
        omega[i] = -acc;
    }
    return omega;
}

/// Naive 27-term scalar summation of density and momentum.
inline void scalar_moments(const std::array<double, 27>& f, double& rho, Vec3& u) {
    const auto& lat = lbm::LatticeD3Q27::instance();
    rho = 0.0;
    u = {};
    for (int i = 0; i < 27; ++i) {
        rho += f[i];
        u.x += lat.c[i][0] * f[i];
        u.y += lat.c[i][1] * f[i];
        u.z += lat.c[i][2] * f[i];
    }
    u = u * (1.0 / rho);
}

/// Per-bit Morton interleave.
inline std::uint64_t naive_morton3(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    std::uint64_t code = 0;
    for (int b = 0; b < 21; ++b) {
        code |= static_cast<std::uint64_t>((x >> b) & 1u) << (3 * b);
        code |= static_cast<std::uint64_t>((y >> b) & 1u) << (3 * b + 1);
        code |= static_cast<std::uint64_t>((z >> b) & 1u) << (3 * b + 2);
    }
    return code;
}

/// Grid-accelerated gathering: per fluid node, loop over the samples held in
/// the 2x2x2 cell block around it and accumulate kernel-weighted forces.
/// Also reports the per-node loop (examination) counts.
struct GatherResult {
    std::vector<Vec3> g;            // per node force
    std::vector<std::uint32_t> loops;  // per node samples examined
};

inline GatherResult gather_forces(const lbm::SolidSampleSet& set, const lbm::GridDims& dims) {
    GatherResult out;
    out.g.assign(dims.n_nodes(), Vec3{});
    out.loops.assign(dims.n_nodes(), 0);

    // Cell lists: samples binned by their containing cell.
    std::vector<std::vector<std::uint32_t>> cells(dims.n_nodes());
    for (std::size_t s = 0; s < set.size(); ++s) {
        if (set.flagged[s]) continue;
        const Vec3& p = set.positions[s];
        int cx = std::min(static_cast<int>(std::floor(p.x)), dims.nx - 1);
        int cy = std::min(static_cast<int>(std::floor(p.y)), dims.ny - 1);
        int cz = std::min(static_cast<int>(std::floor(p.z)), dims.nz - 1);
        cells[lbm::node_index(cx, cy, cz, dims)].push_back(static_cast<std::uint32_t>(s));
    }

    for (int z = 0; z < dims.nz; ++z)
        for (int y = 0; y < dims.ny; ++y)
            for (int x = 0; x < dims.nx; ++x) {
                const std::size_t k = lbm::node_index(x, y, z, dims);
                // A sample reaches node (x,y,z) only from the 8 cells whose
                // corner it is, i.e. cells [x-1,x] x [y-1,y] x [z-1,z].
                for (int dz = -1; dz <= 0; ++dz)
                    for (int dy = -1; dy <= 0; ++dy)
                        for (int dx = -1; dx <= 0; ++dx) {
                            int cx = x + dx, cy = y + dy, cz = z + dz;
                            if (cx < 0 || cy < 0 || cz < 0 || cx >= dims.nx || cy >= dims.ny ||
                                cz >= dims.nz)
                                continue;
                            for (std::uint32_t s : cells[lbm::node_index(cx, cy, cz, dims)]) {
                                ++out.loops[k];
                                const Vec3& p = set.positions[s];
                                double w = lbm::kernel_phi(p.x - x) * lbm::kernel_phi(p.y - y) *
                                           lbm::kernel_phi(p.z - z);
                                if (w > 0.0) out.g[k] += w * set.penalty_force[s];
                            }
                        }
            }
    return out;
}

}  // namespace oracle
