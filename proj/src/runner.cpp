#include "lbm/runner.hpp"

#include <chrono>
#include <cmath>
#include <thread>

namespace lbm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Runner::Runner(const Scene& scene)
    : Runner(scene, scene.cfg.regions, scene.cfg.threads_per_region) {}

Runner::Runner(const Scene& scene, int m, unsigned threads_per_region) {
    cfg_ = scene.cfg;
    model_ = scene.model;
    global_ = cfg_.dims;
    alpha_ = cfg_.alpha;
    block_edge_ = cfg_.block_edge;
    threads_per_region_ = threads_per_region;

    regions_ = make_regions(global_, m, alpha_, cfg_.boundary.axis_periodic(0),
                            cfg_.boundary.axis_periodic(1), cfg_.boundary.axis_periodic(2));
    // Outflow on a z face reads one plane into the slab interior.
    for (int f = 4; f < 6; ++f)
        if (cfg_.boundary.faces[f].condition == FaceCondition::Outflow && m > 1)
            for (const auto& r : regions_)
                if (r.ctx.owned_planes() < 2)
                    throw ConfigError("decomp: z outflow needs slabs at least 2 planes thick");

    solids_.resize(regions_.size());
    for (auto& per_region : solids_) {
        per_region.clear();
        for (const auto& s : scene.solids) per_region.push_back(s.samples);
    }
    for (const auto& s : scene.solids) {
        motions_.push_back(s.motion);
        moving_.push_back(s.moving ? 1 : 0);
    }

    for (std::size_t r = 0; r < regions_.size(); ++r)
        pools_.push_back(std::make_unique<ThreadPool>(threads_per_region_));

    plane_region_.assign(global_.nz, 0);
    for (std::size_t r = 0; r < regions_.size(); ++r)
        for (int z = regions_[r].ctx.owned_global_z0(); z < regions_[r].ctx.owned_global_z1(); ++z)
            plane_region_[z] = static_cast<int>(r);

    init_fields();
}

void Runner::init_fields() {
    const double rho0 = cfg_.init_density;
    auto initial = [&](int x, int y, int z, double& rho, Vec3& u) {
        if (cfg_.init == InitKind::Uniform) {
            rho = rho0;
            u = cfg_.init_velocity;
            return;
        }
        // Taylor-Green vortex in the x-y plane, uniform along z, with the
        // consistent kinetic pressure field.
        const double kx = 2.0 * M_PI / global_.nx;
        const double ky = 2.0 * M_PI / global_.ny;
        const double u0 = cfg_.tg_u_max;
        u.x = -u0 * std::cos(kx * x) * std::sin(ky * y);
        u.y = u0 * std::sin(kx * x) * std::cos(ky * y);
        u.z = 0.0;
        const double p = -0.25 * u0 * u0 * (std::cos(2.0 * kx * x) + std::cos(2.0 * ky * y));
        rho = rho0 + 3.0 * p;
    };

    for (auto& reg : regions_) {
        const GridDims& L = reg.ctx.local;
        for (int lz = 0; lz < L.nz; ++lz) {
            int gz = reg.ctx.local_z0_global + lz;
            gz = (gz % global_.nz + global_.nz) % global_.nz;  // periodic ghost wrap
            for (int y = 0; y < L.ny; ++y)
                for (int x = 0; x < L.nx; ++x) {
                    double rho;
                    Vec3 u;
                    initial(x, y, gz, rho, u);
                    const auto feq = equilibrium(rho, u);
                    const std::size_t k = node_index(x, y, lz, L);
                    for (int i = 0; i < 27; ++i) {
                        reg.state.f.set(k, i, feq[i]);
                        reg.state.f_star.set(k, i, feq[i]);
                    }
                    reg.state.rho.set(k, 0, rho);
                    for (int a = 0; a < 3; ++a) reg.state.u.set(k, a, u[a]);
                }
        }
        reg.state.t = 0;
    }

    // Place static solids' flags and boundary velocities once.
    for (std::size_t r = 0; r < regions_.size(); ++r)
        for (std::size_t s = 0; s < solids_[r].size(); ++s)
            update_rigid_motion(solids_[r][s], motions_[s], 0, global_, *pools_[r]);
}

void Runner::for_each_region(const std::function<void(int)>& fn) {
    const int m = static_cast<int>(regions_.size());
    if (m == 1) {
        fn(0);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(m);
    for (int r = 0; r < m; ++r) threads.emplace_back(fn, r);
    for (auto& th : threads) th.join();
}

StepStatus Runner::advance(long steps, std::vector<TimingRow>* timings) {
    const int m = static_cast<int>(regions_.size());
    std::vector<StepStatus> statuses(m);

    auto timed = [&](const char* phase, auto&& body) {
        auto t0 = Clock::now();
        body();
        if (timings) timings->push_back({phase, t_, seconds_since(t0)});
    };

    for (long s = 0; s < steps; ++s) {
        if (!status_.ok) return status_;
        auto step_t0 = Clock::now();

        timed("stream", [&] {
            for_each_region([&](int r) {
                stream(regions_[r].state.f, regions_[r].state.f_star, regions_[r].ctx,
                       *pools_[r]);
            });
        });
        timed("boundary", [&] {
            for_each_region([&](int r) {
                apply_domain_boundaries(regions_[r].state.f_star, regions_[r].state.f,
                                        cfg_.boundary, regions_[r].ctx, *pools_[r]);
            });
        });
        timed("moments", [&] {
            for_each_region([&](int r) {
                statuses[r] =
                    compute_moments(regions_[r].state, cfg_.body_force, regions_[r].ctx,
                                    *pools_[r]);
            });
        });
        for (const auto& st : statuses) {
            if (!st.ok) {
                status_ = st;
                status_.step = t_;
            }
            if (st.mach_warning) status_.mach_warning = true;
        }
        if (!status_.ok) return status_;

        if (m > 1)
            timed("exchange_macro", [&] { exchange_ghosts(regions_, ExchangePayload::MacroFields); });

        if (!solids_.empty() && !solids_[0].empty()) {
            timed("ib", [&] {
                for_each_region([&](int r) {
                    for (auto& set : solids_[r]) {
                        interpolate_velocity(set, regions_[r].state.u, regions_[r].ctx,
                                             *pools_[r]);
                        penalty_forces(set, regions_[r].state.rho, regions_[r].ctx, *pools_[r]);
                        spread_forces(set, regions_[r].state.g, regions_[r].ctx, cfg_.ib_mode,
                                      *pools_[r]);
                    }
                });
            });
            // Reaction totals: region partial sums over owned samples, added
            // in region order.
            ReactionTotals step_total;
            for (int r = 0; r < m; ++r) {
                for (std::size_t si = 0; si < solids_[r].size(); ++si) {
                    ReactionTotals part = reaction_totals(
                        solids_[r][si], motions_[si].center +
                                            motions_[si].linear_velocity * double(t_),
                        regions_[r].ctx.owned_global_z0(), regions_[r].ctx.owned_global_z1());
                    step_total.force += part.force;
                    step_total.torque += part.torque;
                }
            }
            totals_log_.push_back(step_total);
            // Prescribed motion update for the next step.
            for_each_region([&](int r) {
                for (std::size_t si = 0; si < solids_[r].size(); ++si)
                    if (moving_[si])
                        update_rigid_motion(solids_[r][si], motions_[si], t_ + 1, global_,
                                            *pools_[r]);
            });
        }

        timed("collision", [&] {
            for_each_region([&](int r) {
                collide_pass(regions_[r].state, regions_[r].state.f, model_, 0, regions_[r].ctx,
                             *pools_[r]);
                collide_pass(regions_[r].state, regions_[r].state.f, model_, 1, regions_[r].ctx,
                             *pools_[r]);
            });
        });

        if (m > 1)
            timed("exchange_f", [&] { exchange_ghosts(regions_, ExchangePayload::Distributions); });

        if (!cfg_.emitters.empty()) {
            timed("tracers", [&] {
                emit_tracers(tracers_, cfg_.emitters, t_, cfg_.seed);
                auto sampler = [this](const Vec3& pos, Vec3& out) {
                    bool ok = true;
                    out = sample_velocity_region(pos, ok);
                    return ok;
                };
                advect_tracers(tracers_, sampler, *pools_[0]);
            });
        }

        ++t_;
        for (auto& reg : regions_) ++reg.state.t;
        if (timings) timings->push_back({"total", t_ - 1, seconds_since(step_t0)});
    }
    return status_;
}

Vec3 Runner::sample_velocity_region(const Vec3& pos, bool& ok) const {
    KernelSupport ks = kernel_support(pos, global_);
    if (!ks.inside) {
        ok = false;
        return {};
    }
    const Region& reg = regions_[plane_region_[ks.base[2]]];
    Vec3 v{};
    for (int oz = 0; oz < 2; ++oz)
        for (int oy = 0; oy < 2; ++oy)
            for (int ox = 0; ox < 2; ++ox) {
                std::size_t k = reg.ctx.local_index(ks.base[0] + ox, ks.base[1] + oy,
                                                    ks.base[2] + oz);
                v += ks.weight(ox, oy, oz) * Vec3{reg.state.u.get(k, 0), reg.state.u.get(k, 1),
                                                  reg.state.u.get(k, 2)};
            }
    ok = true;
    return v;
}

void Runner::set_layout(int block_edge, std::size_t alpha) {
    for (auto& reg : regions_) reg.state.set_alpha(alpha);
    for (auto& per_region : solids_)
        for (auto& set : per_region) set = reorder_samples(set, block_edge);
    alpha_ = alpha;
    block_edge_ = block_edge;
}

FieldStore Runner::gather_rho() const {
    FieldStore out(LayoutParams::make(1, 1, global_.n_nodes()));
    for (const auto& reg : regions_)
        for (int gz = reg.ctx.owned_global_z0(); gz < reg.ctx.owned_global_z1(); ++gz)
            for (int y = 0; y < global_.ny; ++y)
                for (int x = 0; x < global_.nx; ++x)
                    out.set(node_index(x, y, gz, global_), 0,
                            reg.state.rho.get(reg.ctx.local_index(x, y, gz), 0));
    return out;
}

FieldStore Runner::gather_u() const {
    FieldStore out(LayoutParams::make(1, 3, global_.n_nodes()));
    for (const auto& reg : regions_)
        for (int gz = reg.ctx.owned_global_z0(); gz < reg.ctx.owned_global_z1(); ++gz)
            for (int y = 0; y < global_.ny; ++y)
                for (int x = 0; x < global_.nx; ++x) {
                    std::size_t kg = node_index(x, y, gz, global_);
                    std::size_t kl = reg.ctx.local_index(x, y, gz);
                    for (int a = 0; a < 3; ++a) out.set(kg, a, reg.state.u.get(kl, a));
                }
    return out;
}

FieldStore Runner::gather_f() const {
    FieldStore out(LayoutParams::make(1, 27, global_.n_nodes()));
    for (const auto& reg : regions_)
        for (int gz = reg.ctx.owned_global_z0(); gz < reg.ctx.owned_global_z1(); ++gz)
            for (int y = 0; y < global_.ny; ++y)
                for (int x = 0; x < global_.nx; ++x) {
                    std::size_t kg = node_index(x, y, gz, global_);
                    std::size_t kl = reg.ctx.local_index(x, y, gz);
                    for (int i = 0; i < 27; ++i) out.set(kg, i, reg.state.f.get(kl, i));
                }
    return out;
}

Runner Runner::clone() const {
    Runner c;
    c.cfg_ = cfg_;
    c.model_ = model_;
    c.global_ = global_;
    c.regions_ = regions_;
    c.solids_ = solids_;
    c.motions_ = motions_;
    c.moving_ = moving_;
    c.plane_region_ = plane_region_;
    c.tracers_ = tracers_;
    c.totals_log_ = totals_log_;
    c.t_ = t_;
    c.status_ = status_;
    c.alpha_ = alpha_;
    c.block_edge_ = block_edge_;
    c.threads_per_region_ = threads_per_region_;
    for (std::size_t r = 0; r < regions_.size(); ++r)
        c.pools_.push_back(std::make_unique<ThreadPool>(threads_per_region_));
    return c;
}

}  // namespace lbm
