/// @file autotune.hpp
/// @brief Exhaustive layout-parameter search minimizing measured step cost.
///
/// Candidates are every (ell, alpha) pair with ell in {1..L_m} (L_m = the
/// smallest edge of the solid bounding box in cells) and alpha a power of two
/// up to the node count. Each candidate's cost is the mean wall time per step
/// over a measurement window after a discarded warmup. Measurement runs on a
/// clone of the production state, so tuning never advances or alters physics.
#pragma once

#include <functional>

#include "lbm/io.hpp"
#include "lbm/runner.hpp"

namespace lbm {

struct TuneSpec {
    int ell_min = 1;
    int ell_max = 1;
    std::vector<std::size_t> alphas;
    int n_steps = 10;  // static solids need only a small window; rotating
                       // solids should cover a revolution (~500)
    int warmup = 5;

    std::size_t candidate_count() const {
        return static_cast<std::size_t>(ell_max - ell_min + 1) * alphas.size();
    }

    /// Ranges from the scene: ell bounded by the solids' smallest bbox edge,
    /// alpha in {2^1 .. 2^floor(log2 N_f)}.
    static TuneSpec from_scene(const Scene& scene, int n_steps, int warmup);
};

struct TuneOutcome {
    int ell = 0;
    std::size_t alpha = 0;
    double cost = 0.0;
    TuneReport report;
};

/// Mean seconds per step for one candidate on `runner` (which advances).
/// Returns +inf when the run diverges during measurement.
double measure_cost(Runner& runner, int ell, std::size_t alpha, const TuneSpec& spec);

using CostFn = std::function<double(int ell, std::size_t alpha)>;

/// Pure argmin over the full candidate grid with ties broken toward smaller
/// ell, then smaller alpha. Throws ConfigError if every candidate is invalid.
TuneOutcome search_with_cost(const TuneSpec& spec, const CostFn& cost);

/// Full search against real measurements on a clone of `base`.
TuneOutcome search(const Runner& base, const TuneSpec& spec);

}  // namespace lbm
