/// @file runner.hpp
/// @brief Step orchestration over one or more regions.
///
/// Each region runs the per-step phases on its own thread (with a private
/// pool for the data-parallel loops inside a phase). The orchestrator joins
/// the regions between phases and performs the two ghost exchanges: u/rho
/// planes after the moments phase, f planes after collision. Every region
/// holds a full replica of all solid samples; a sample is processed by each
/// region whose kernel support it touches, and accumulates only into owned
/// nodes, so multi-region runs reproduce the single-region fields exactly.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lbm/decomp.hpp"
#include "lbm/io.hpp"
#include "lbm/scene.hpp"
#include "lbm/solver.hpp"
#include "lbm/tracer.hpp"

namespace lbm {

class Runner {
public:
    explicit Runner(const Scene& scene);
    Runner(const Scene& scene, int regions, unsigned threads_per_region);

    /// Runs up to `steps` steps; stops early on divergence. Appends phase
    /// timing rows when `timings` is given.
    StepStatus advance(long steps, std::vector<TimingRow>* timings = nullptr);

    long step_count() const { return t_; }
    const StepStatus& status() const { return status_; }
    const GridDims& dims() const { return global_; }
    const SceneConfig& config() const { return cfg_; }
    int region_count() const { return static_cast<int>(regions_.size()); }

    /// Converts every store to group size alpha and reorders all sample
    /// replicas by block edge ell. Pure permutations; physics unchanged.
    void set_layout(int block_edge, std::size_t alpha);
    std::size_t alpha() const { return alpha_; }
    int block_edge() const { return block_edge_; }

    /// Canonical (AoS) global fields stitched from the owned slabs.
    FieldStore gather_rho() const;
    FieldStore gather_u() const;
    FieldStore gather_f() const;

    /// Fluid reaction on the solids, one entry per completed step.
    const std::vector<ReactionTotals>& totals_log() const { return totals_log_; }

    TracerCloud& tracers() { return tracers_; }
    const std::vector<std::vector<SolidSampleSet>>& region_solids() const { return solids_; }

    /// Deep copy with fresh thread pools (used by the auto-tuner so that
    /// measurement never advances the production state).
    Runner clone() const;

private:
    Runner() = default;
    void init_fields();
    void for_each_region(const std::function<void(int)>& fn);
    Vec3 sample_velocity_region(const Vec3& pos, bool& ok) const;

    SceneConfig cfg_;
    CollisionModel model_;
    GridDims global_;
    std::vector<Region> regions_;
    std::vector<std::vector<SolidSampleSet>> solids_;  // [region][solid]
    std::vector<RigidMotion> motions_;
    std::vector<char> moving_;
    std::vector<std::unique_ptr<ThreadPool>> pools_;
    std::vector<int> plane_region_;  // global z plane -> owning region
    TracerCloud tracers_;
    std::vector<ReactionTotals> totals_log_;
    long t_ = 0;
    StepStatus status_;
    std::size_t alpha_ = 1;
    int block_edge_ = 1;
    unsigned threads_per_region_ = 0;
};

}  // namespace lbm
