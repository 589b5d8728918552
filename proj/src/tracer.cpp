#include "lbm/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lbm/ib.hpp"

namespace lbm {

VelocitySampler make_grid_sampler(const FieldStore& u, const GridDims& dims) {
    return [&u, dims](const Vec3& pos, Vec3& out) {
        KernelSupport ks = kernel_support(pos, dims);
        if (!ks.inside) return false;
        Vec3 v{};
        for (int oz = 0; oz < 2; ++oz)
            for (int oy = 0; oy < 2; ++oy)
                for (int ox = 0; ox < 2; ++ox) {
                    std::size_t k = node_index(ks.base[0] + ox, ks.base[1] + oy, ks.base[2] + oz,
                                               dims);
                    v += ks.weight(ox, oy, oz) * Vec3{u.get(k, 0), u.get(k, 1), u.get(k, 2)};
                }
        out = v;
        return true;
    };
}

void emit_tracers(TracerCloud& cloud, const std::vector<TracerEmitter>& emitters, long step,
                  std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(step + 1)));
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };
    for (const auto& e : emitters)
        for (int p = 0; p < e.rate; ++p) {
            cloud.positions.push_back({uniform(e.lo.x, e.hi.x), uniform(e.lo.y, e.hi.y),
                                       uniform(e.lo.z, e.hi.z)});
            cloud.birth_step.push_back(step);
        }
}

void advect_tracers(TracerCloud& cloud, const VelocitySampler& sample, ThreadPool& pool) {
    const std::size_t n = cloud.size();
    std::vector<char> live(n, 1);
    pool.parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            Vec3 v;
            if (!sample(cloud.positions[p], v)) {
                live[p] = 0;
                continue;
            }
            cloud.positions[p] += v;
            Vec3 probe;
            if (!sample(cloud.positions[p], probe)) live[p] = 0;
        }
    });
    std::size_t w = 0;
    for (std::size_t p = 0; p < n; ++p) {
        if (!live[p]) continue;
        cloud.positions[w] = cloud.positions[p];
        cloud.birth_step[w] = cloud.birth_step[p];
        ++w;
    }
    cloud.positions.resize(w);
    cloud.birth_step.resize(w);
}

std::vector<double> rasterize_density(const TracerCloud& cloud, const GridDims& dims) {
    std::vector<double> vol(dims.n_nodes(), 0.0);
    for (const auto& p : cloud.positions) {
        // Cell centers sit at i + 0.5; clamped offsets keep the deposit a
        // partition of unity at the domain rim.
        int base[3];
        double w[3][2];
        const double shifted[3] = {p.x - 0.5, p.y - 0.5, p.z - 0.5};
        const int n[3] = {dims.nx, dims.ny, dims.nz};
        for (int a = 0; a < 3; ++a) {
            int b = static_cast<int>(std::floor(shifted[a]));
            b = std::max(0, std::min(b, n[a] - 2));
            double t = std::clamp(shifted[a] - b, 0.0, 1.0);
            base[a] = b;
            w[a][0] = 1.0 - t;
            w[a][1] = t;
        }
        for (int oz = 0; oz < 2; ++oz)
            for (int oy = 0; oy < 2; ++oy)
                for (int ox = 0; ox < 2; ++ox)
                    vol[node_index(base[0] + ox, base[1] + oy, base[2] + oz, dims)] +=
                        w[0][ox] * w[1][oy] * w[2][oz];
    }
    return vol;
}

}  // namespace lbm
