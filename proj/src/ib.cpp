#include "lbm/ib.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

namespace lbm {

std::uint64_t morton3(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    assert(x < (1u << 21) && y < (1u << 21) && z < (1u << 21));
    auto spread = [](std::uint64_t v) {
        v &= 0x1fffff;
        v = (v | v << 32) & 0x1f00000000ffffULL;
        v = (v | v << 16) & 0x1f0000ff0000ffULL;
        v = (v | v << 8) & 0x100f00f00f00f00fULL;
        v = (v | v << 4) & 0x10c30c30c30c30c3ULL;
        v = (v | v << 2) & 0x1249249249249249ULL;
        return v;
    };
    return spread(x) | (spread(y) << 1) | (spread(z) << 2);
}

namespace {

// mt19937_64 has a standardized sequence; converting bits manually keeps the
// sampling reproducible across standard libraries.
inline double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

struct CellKey {
    std::int64_t v;
    bool operator==(const CellKey& o) const { return v == o.v; }
};
struct CellHash {
    std::size_t operator()(const CellKey& k) const {
        return std::hash<std::int64_t>()(k.v);
    }
};

class HashGrid {
public:
    explicit HashGrid(double cell) : cell_(cell) {}

    CellKey key(const Vec3& p) const {
        auto q = [&](double x) { return static_cast<std::int64_t>(std::floor(x / cell_)) + (1 << 20); };
        return {q(p.x) | (q(p.y) << 21) | (q(p.z) << 42)};
    }

    void insert(const Vec3& p, std::uint32_t idx) { cells_[key(p)].push_back(idx); }

    template <class Fn>
    void for_neighbors(const Vec3& p, Fn&& fn) const {
        std::int64_t base[3];
        for (int a = 0; a < 3; ++a) base[a] = static_cast<std::int64_t>(std::floor(p[a] / cell_));
        for (std::int64_t dz = -1; dz <= 1; ++dz)
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    CellKey k{(base[0] + dx + (1 << 20)) | ((base[1] + dy + (1 << 20)) << 21) |
                              ((base[2] + dz + (1 << 20)) << 42)};
                    auto it = cells_.find(k);
                    if (it == cells_.end()) continue;
                    for (std::uint32_t idx : it->second) fn(idx);
                }
    }

private:
    double cell_;
    std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
};

struct SurfaceSampler {
    std::vector<std::array<Vec3, 3>> tris;
    std::vector<double> cumulative;
    double total_area = 0.0;
    std::size_t degenerate = 0;

    explicit SurfaceSampler(const TriMesh& mesh) {
        for (const auto& t : mesh.triangles) {
            const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
            double area = triangle_area(a, b, c);
            if (area <= 1e-14) {
                ++degenerate;
                continue;
            }
            total_area += area;
            tris.push_back({a, b, c});
            cumulative.push_back(total_area);
        }
    }

    Vec3 draw(std::mt19937_64& rng) const {
        double r = uniform01(rng) * total_area;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
        std::size_t t = std::min<std::size_t>(it - cumulative.begin(), tris.size() - 1);
        double u = uniform01(rng), v = uniform01(rng);
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const auto& tri = tris[t];
        return tri[0] + (tri[1] - tri[0]) * u + (tri[2] - tri[0]) * v;
    }
};

void finalize_report(const std::vector<Vec3>& pts, SamplingReport* report) {
    if (!report) return;
    report->n_samples = pts.size();
    std::map<std::array<int, 3>, std::size_t> cells;
    for (const auto& p : pts)
        ++cells[{static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y)),
                 static_cast<int>(std::floor(p.z))}];
    report->occupied_cells = cells.size();
    if (cells.empty()) return;
    double mn = 1e300, mx = 0.0, sum = 0.0;
    std::size_t in_band = 0;
    for (const auto& [cell, n] : cells) {
        double d = static_cast<double>(n);
        mn = std::min(mn, d);
        mx = std::max(mx, d);
        sum += d;
        if (n >= 10 && n <= 100) ++in_band;
    }
    report->density_min = mn;
    report->density_max = mx;
    report->density_mean = sum / cells.size();
    report->in_band_fraction = static_cast<double>(in_band) / cells.size();
}

SolidSampleSet build_set(std::vector<Vec3>&& pts, double radius) {
    SolidSampleSet set;
    set.positions = std::move(pts);
    const std::size_t n = set.positions.size();
    set.boundary_velocity.assign(n, Vec3{});
    set.penalty_force.assign(n, Vec3{});
    set.sampled_velocity.assign(n, Vec3{});
    set.reference_positions = set.positions;
    set.flagged.assign(n, 0);
    set.source_id.resize(n);
    std::iota(set.source_id.begin(), set.source_id.end(), 0u);
    set.poisson_radius = radius;
    set.bbox_lo = {1e300, 1e300, 1e300};
    set.bbox_hi = {-1e300, -1e300, -1e300};
    for (const auto& p : set.positions)
        for (int a = 0; a < 3; ++a) {
            set.bbox_lo[a] = std::min(set.bbox_lo[a], p[a]);
            set.bbox_hi[a] = std::max(set.bbox_hi[a], p[a]);
        }
    return set;
}

}  // namespace

SolidSampleSet sample_surface(const TriMesh& mesh, double radius, std::uint64_t seed,
                              SamplingReport* report, SamplingMethod method) {
    if (!(radius > 0.0)) throw ConfigError("sampling: radius must be > 0");
    SurfaceSampler surf(mesh);
    if (surf.tris.empty()) throw ConfigError("sampling: mesh has no non-degenerate triangles");

    std::mt19937_64 rng(seed);
    const double r2 = radius * radius;
    const double estimate = 0.7 * surf.total_area / (M_PI * r2 / 4.0);
    std::vector<Vec3> pts;
    std::size_t attempts = 0;

    if (method == SamplingMethod::DartThrowing) {
        HashGrid grid(radius);
        const std::size_t budget =
            std::max<std::size_t>(static_cast<std::size_t>(60.0 * estimate), 20000);
        std::size_t fail_streak = 0;
        while (attempts < budget && fail_streak < 8000) {
            ++attempts;
            Vec3 p = surf.draw(rng);
            bool ok = true;
            grid.for_neighbors(p, [&](std::uint32_t idx) {
                if (ok && (pts[idx] - p).norm2() < r2) ok = false;
            });
            if (!ok) {
                ++fail_streak;
                continue;
            }
            grid.insert(p, static_cast<std::uint32_t>(pts.size()));
            pts.push_back(p);
            fail_streak = 0;
        }
    } else {
        // Greedy elimination: oversample, then repeatedly drop the sample with
        // the most conflicts until the radius property holds.
        const std::size_t m = std::max<std::size_t>(static_cast<std::size_t>(3.0 * estimate), 64);
        std::vector<Vec3> pool(m);
        for (auto& p : pool) p = surf.draw(rng);
        attempts = m;
        HashGrid grid(radius);
        for (std::size_t i = 0; i < m; ++i) grid.insert(pool[i], static_cast<std::uint32_t>(i));
        std::vector<std::vector<std::uint32_t>> conflicts(m);
        for (std::size_t i = 0; i < m; ++i)
            grid.for_neighbors(pool[i], [&](std::uint32_t j) {
                if (j != i && (pool[i] - pool[j]).norm2() < r2)
                    conflicts[i].push_back(j);
            });
        std::vector<char> alive(m, 1);
        std::vector<std::size_t> count(m);
        for (std::size_t i = 0; i < m; ++i) count[i] = conflicts[i].size();
        for (;;) {
            std::size_t worst = m, worst_count = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (alive[i] && count[i] > worst_count) {
                    worst = i;
                    worst_count = count[i];
                }
            if (worst == m) break;
            alive[worst] = 0;
            for (std::uint32_t j : conflicts[worst])
                if (alive[j] && count[j] > 0) --count[j];
        }
        for (std::size_t i = 0; i < m; ++i)
            if (alive[i]) pts.push_back(pool[i]);
    }

    SolidSampleSet set = build_set(std::move(pts), radius);
    if (report) {
        report->degenerate_triangles = surf.degenerate;
        report->attempts = attempts;
        finalize_report(set.positions, report);
    }
    return set;
}

SolidSampleSet reorder_samples(const SolidSampleSet& set, int ell) {
    if (ell < 1) throw ConfigError("reorder_samples: block edge must be >= 1");
    SolidSampleSet out = set;
    out.block_edge = ell;
    const std::size_t n = set.size();
    if (n == 0) return out;

    Vec3 lo = {1e300, 1e300, 1e300}, hi = {-1e300, -1e300, -1e300};
    for (const auto& p : set.positions)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    out.bbox_lo = lo;
    out.bbox_hi = hi;

    int cell_lo[3], nblocks[3];
    for (int a = 0; a < 3; ++a) {
        cell_lo[a] = static_cast<int>(std::floor(lo[a]));
        int cell_hi = static_cast<int>(std::floor(hi[a]));
        nblocks[a] = (cell_hi - cell_lo[a]) / ell + 1;
    }

    struct Key {
        std::uint64_t block, morton;
        std::uint32_t source;
        std::uint32_t idx;
    };
    std::vector<Key> keys(n);
    for (std::size_t s = 0; s < n; ++s) {
        int cell[3], blk[3], local[3];
        for (int a = 0; a < 3; ++a) {
            cell[a] = static_cast<int>(std::floor(set.positions[s][a])) - cell_lo[a];
            blk[a] = cell[a] / ell;
            local[a] = cell[a] - blk[a] * ell;
        }
        keys[s].block = static_cast<std::uint64_t>(blk[0]) +
                        static_cast<std::uint64_t>(nblocks[0]) *
                            (static_cast<std::uint64_t>(blk[1]) +
                             static_cast<std::uint64_t>(nblocks[1]) * blk[2]);
        keys[s].morton = morton3(local[0], local[1], local[2]);
        keys[s].source = set.source_id[s];
        keys[s].idx = static_cast<std::uint32_t>(s);
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.block != b.block) return a.block < b.block;
        if (a.morton != b.morton) return a.morton < b.morton;
        return a.source < b.source;
    });

    for (std::size_t s = 0; s < n; ++s) {
        std::size_t j = keys[s].idx;
        out.positions[s] = set.positions[j];
        out.boundary_velocity[s] = set.boundary_velocity[j];
        out.penalty_force[s] = set.penalty_force[j];
        out.sampled_velocity[s] = set.sampled_velocity[j];
        out.reference_positions[s] = set.reference_positions[j];
        out.source_id[s] = set.source_id[j];
        out.flagged[s] = set.flagged[j];
    }
    return out;
}

KernelSupport kernel_support(const Vec3& pos, const GridDims& global) {
    KernelSupport ks;
    const int n[3] = {global.nx, global.ny, global.nz};
    double* w[3] = {ks.wx, ks.wy, ks.wz};
    for (int a = 0; a < 3; ++a) {
        if (pos[a] < 0.0 || pos[a] > n[a] - 1) ks.inside = false;
        int b = static_cast<int>(std::floor(pos[a]));
        b = std::max(0, std::min(b, n[a] - 2));
        ks.base[a] = b;
        double t = pos[a] - b;
        w[a][0] = 1.0 - t;
        w[a][1] = t;
    }
    return ks;
}

namespace {

// A sample matters to this region when its support touches the owned slab.
inline bool sample_active(const Vec3& pos, const DomainContext& ctx) {
    int bz = static_cast<int>(std::floor(pos.z));
    bz = std::max(0, std::min(bz, ctx.global.nz - 2));
    return bz + 1 >= ctx.owned_global_z0() && bz < ctx.owned_global_z1();
}

}  // namespace

void interpolate_velocity(SolidSampleSet& set, const FieldStore& u, const DomainContext& ctx,
                          ThreadPool& pool) {
    pool.parallel_for(set.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            KernelSupport ks = kernel_support(set.positions[s], ctx.global);
            set.flagged[s] = ks.inside ? 0 : 1;
            if (!ks.inside || !sample_active(set.positions[s], ctx)) {
                set.sampled_velocity[s] = Vec3{};
                continue;
            }
            Vec3 us{};
            for (int oz = 0; oz < 2; ++oz)
                for (int oy = 0; oy < 2; ++oy)
                    for (int ox = 0; ox < 2; ++ox) {
                        double w = ks.weight(ox, oy, oz);
                        std::size_t k =
                            ctx.local_index(ks.base[0] + ox, ks.base[1] + oy, ks.base[2] + oz);
                        us += w * Vec3{u.get(k, 0), u.get(k, 1), u.get(k, 2)};
                    }
            set.sampled_velocity[s] = us;
        }
    });
}

void penalty_forces(SolidSampleSet& set, const FieldStore& rho, const DomainContext& ctx,
                    ThreadPool& pool) {
    pool.parallel_for(set.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            if (set.flagged[s] || !sample_active(set.positions[s], ctx)) {
                set.penalty_force[s] = Vec3{};
                continue;
            }
            KernelSupport ks = kernel_support(set.positions[s], ctx.global);
            double rs = 0.0;
            for (int oz = 0; oz < 2; ++oz)
                for (int oy = 0; oy < 2; ++oy)
                    for (int ox = 0; ox < 2; ++ox)
                        rs += ks.weight(ox, oy, oz) *
                              rho.get(ctx.local_index(ks.base[0] + ox, ks.base[1] + oy,
                                                      ks.base[2] + oz),
                                      0);
            set.penalty_force[s] = rs * (set.boundary_velocity[s] - set.sampled_velocity[s]);
        }
    });
}

namespace {

inline void scatter_one(const SolidSampleSet& set, std::size_t s, FieldStore& g,
                        const DomainContext& ctx, bool atomic) {
    KernelSupport ks = kernel_support(set.positions[s], ctx.global);
    const Vec3& gs = set.penalty_force[s];
    for (int oz = 0; oz < 2; ++oz)
        for (int oy = 0; oy < 2; ++oy)
            for (int ox = 0; ox < 2; ++ox) {
                int gz = ks.base[2] + oz;
                if (!ctx.owns_global_z(gz)) continue;
                double w = ks.weight(ox, oy, oz);
                std::size_t k = ctx.local_index(ks.base[0] + ox, ks.base[1] + oy, gz);
                for (int comp = 0; comp < 3; ++comp) {
                    double add = w * gs[comp];
                    if (atomic) {
                        std::atomic_ref<double> slot(g.at(k, comp));
                        slot.fetch_add(add, std::memory_order_relaxed);
                    } else {
                        g.at(k, comp) += add;
                    }
                }
            }
}

}  // namespace

void spread_forces(const SolidSampleSet& set, FieldStore& g, const DomainContext& ctx,
                   AccumulationMode mode, ThreadPool& pool) {
    const std::size_t n = set.size();
    if (mode == AccumulationMode::Atomic) {
        pool.parallel_for(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t s = lo; s < hi; ++s) {
                if (set.flagged[s] || !sample_active(set.positions[s], ctx)) continue;
                scatter_one(set, s, g, ctx, true);
            }
        });
        return;
    }

    // Deterministic mode: group by 2-cell super-block, eight parity colors.
    struct Rec {
        std::uint64_t key;
        std::uint32_t color;
        std::uint32_t source;
        std::uint32_t idx;
    };
    std::vector<Rec> recs;
    recs.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (set.flagged[s] || !sample_active(set.positions[s], ctx)) continue;
        KernelSupport ks = kernel_support(set.positions[s], ctx.global);
        std::uint32_t B[3], parity = 0;
        for (int a = 0; a < 3; ++a) {
            B[a] = static_cast<std::uint32_t>(ks.base[a] >> 1);
            parity |= (B[a] & 1u) << a;
        }
        recs.push_back({morton3(B[0], B[1], B[2]), parity, set.source_id[s],
                        static_cast<std::uint32_t>(s)});
    }
    std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
        if (a.color != b.color) return a.color < b.color;
        if (a.key != b.key) return a.key < b.key;
        return a.source < b.source;
    });

    std::size_t pos = 0;
    for (std::uint32_t color = 0; color < 8; ++color) {
        // Contiguous segments of equal (color,key) are independent groups.
        std::size_t begin = pos;
        while (pos < recs.size() && recs[pos].color == color) ++pos;
        std::size_t end = pos;
        if (begin == end) continue;
        std::vector<std::pair<std::size_t, std::size_t>> groups;
        std::size_t gb = begin;
        for (std::size_t i = begin + 1; i <= end; ++i) {
            if (i == end || recs[i].key != recs[gb].key) {
                groups.emplace_back(gb, i);
                gb = i;
            }
        }
        pool.parallel_for(groups.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t gi = lo; gi < hi; ++gi)
                for (std::size_t r = groups[gi].first; r < groups[gi].second; ++r)
                    scatter_one(set, recs[r].idx, g, ctx, false);
        });
    }
}

void update_rigid_motion(SolidSampleSet& set, const RigidMotion& motion, long t,
                         const GridDims& global, ThreadPool& pool) {
    const double td = static_cast<double>(t);
    const Vec3 center = motion.center + motion.linear_velocity * td;
    const double wn = motion.angular_velocity.norm();
    double R[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    if (wn > 0.0) {
        const Vec3 axis = motion.angular_velocity * (1.0 / wn);
        const double th = wn * td, ct = std::cos(th), st = std::sin(th), vt = 1.0 - ct;
        const double ax = axis.x, ay = axis.y, az = axis.z;
        R[0][0] = ct + ax * ax * vt;
        R[0][1] = ax * ay * vt - az * st;
        R[0][2] = ax * az * vt + ay * st;
        R[1][0] = ay * ax * vt + az * st;
        R[1][1] = ct + ay * ay * vt;
        R[1][2] = ay * az * vt - ax * st;
        R[2][0] = az * ax * vt - ay * st;
        R[2][1] = az * ay * vt + ax * st;
        R[2][2] = ct + az * az * vt;
    }
    pool.parallel_for(set.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            const Vec3& r = set.reference_positions[s];
            Vec3 p = {R[0][0] * r.x + R[0][1] * r.y + R[0][2] * r.z,
                      R[1][0] * r.x + R[1][1] * r.y + R[1][2] * r.z,
                      R[2][0] * r.x + R[2][1] * r.y + R[2][2] * r.z};
            set.positions[s] = center + p;
            set.boundary_velocity[s] =
                motion.linear_velocity + motion.angular_velocity.cross(set.positions[s] - center);
            KernelSupport ks = kernel_support(set.positions[s], global);
            set.flagged[s] = ks.inside ? 0 : 1;
        }
    });
}

ReactionTotals reaction_totals(const SolidSampleSet& set, const Vec3& center, int global_z0,
                               int global_z1) {
    ReactionTotals tot;
    for (std::size_t s = 0; s < set.size(); ++s) {
        double z = set.positions[s].z;
        if (z < global_z0 || z >= global_z1) continue;
        tot.force -= set.penalty_force[s];
        tot.torque -= (set.positions[s] - center).cross(set.penalty_force[s]);
    }
    return tot;
}

}  // namespace lbm
