/// @file lattice.hpp
/// @brief Immutable D3Q27 lattice constants.
///
/// Canonical direction order: index 0 is the rest velocity (0,0,0); the
/// remaining 26 directions are sorted lexicographically by (c_z, c_y, c_x).
/// This order is fixed for all file formats and collision tables.
#pragma once

#include <array>
#include <cassert>

namespace lbm {

struct LatticeD3Q27 {
    static constexpr int Q = 27;
    static constexpr double cs2 = 1.0 / 3.0;  // squared sound speed, lattice units

    std::array<std::array<int, 3>, Q> c;  // discrete velocities, components in {-1,0,1}
    std::array<double, Q> w;              // quadrature weights, sum to 1
    std::array<int, Q> opposite;          // opposite[i] = i' with c[i'] == -c[i]

    static const LatticeD3Q27& instance();

private:
    LatticeD3Q27();
};

/// Direction index with reversed velocity. Contract: 0 <= i < 27.
inline int opposite_index(int i) {
    assert(i >= 0 && i < LatticeD3Q27::Q);
    return LatticeD3Q27::instance().opposite[i];
}

}  // namespace lbm
