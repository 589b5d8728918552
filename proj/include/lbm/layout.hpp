/// @file layout.hpp
/// @brief Parametric storage of per-node vector fields (AoS / SoA / CSoA).
///
/// The i'th component of node k lives at linear offset
///
///     beta * alpha * floor(k / alpha) + alpha * i + (k mod alpha)
///
/// so alpha = 1 reproduces AoS and alpha = padded_nodes reproduces SoA.
/// When alpha does not divide the node count, storage is padded to the next
/// multiple; padding slots are never read by any physics operation.
#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lbm/core.hpp"

namespace lbm {

struct LayoutParams {
    std::size_t alpha = 1;         // group size (nodes per group)
    std::size_t beta = 1;          // vector width (27 for f, 3 for u/g, 1 for rho)
    std::size_t n_nodes = 0;       // logical node count
    std::size_t padded_nodes = 0;  // smallest multiple of alpha >= n_nodes

    // alpha power-of-two fast path for the hot index map.
    std::size_t alpha_mask = 0;
    unsigned alpha_shift = 0;
    bool alpha_pow2 = false;

    static LayoutParams make(std::size_t alpha, std::size_t beta, std::size_t n_nodes);

    bool same_shape(const LayoutParams& o) const {
        return beta == o.beta && n_nodes == o.n_nodes;
    }
};

/// Linear offset of component i of node k under layout p.
inline std::size_t remap_index(std::size_t k, std::size_t i, const LayoutParams& p) {
    assert(k < p.padded_nodes && i < p.beta);
    std::size_t group, lane;
    if (p.alpha_pow2) {
        group = k >> p.alpha_shift;
        lane = k & p.alpha_mask;
    } else {
        group = k / p.alpha;
        lane = k % p.alpha;
    }
    return p.beta * p.alpha * group + p.alpha * i + lane;
}

/// Row-major x-fastest linearization of grid coordinates.
inline std::size_t node_index(int x, int y, int z, const GridDims& d) {
    assert(d.contains(x, y, z));
    return (static_cast<std::size_t>(z) * d.ny + y) * d.nx + x;
}

class FieldStore {
public:
    FieldStore() = default;
    explicit FieldStore(const LayoutParams& p) : layout_(p), data_(p.padded_nodes * p.beta, 0.0) {}

    const LayoutParams& layout() const { return layout_; }
    std::size_t n_nodes() const { return layout_.n_nodes; }
    std::size_t beta() const { return layout_.beta; }

    double get(std::size_t k, std::size_t i) const { return data_[remap_index(k, i, layout_)]; }
    void set(std::size_t k, std::size_t i, double v) { data_[remap_index(k, i, layout_)] = v; }
    double& at(std::size_t k, std::size_t i) { return data_[remap_index(k, i, layout_)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    void fill(double v) { data_.assign(data_.size(), v); }

private:
    LayoutParams layout_;
    std::vector<double> data_;
};

/// Pure permutation of the payload into dst_params; logical values preserved.
/// Throws ConfigError on shape mismatch.
FieldStore convert_layout(const FieldStore& src, const LayoutParams& dst_params);

}  // namespace lbm
