/// @file driver.hpp
/// @brief Full run orchestration: optional tuning, time loop, artifacts.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbm/autotune.hpp"
#include "lbm/scene.hpp"

namespace lbm {

/// Exit codes distinguish IO/config failures from divergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDiverged = 3;

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    long steps_done = 0;
    std::vector<std::string> artifacts;
    std::optional<TuneOutcome> tune;
    std::vector<TimingRow> timings;
};

/// Runs the scene: tune phase when enabled, then the time loop with
/// snapshots, tracer volumes and the timing log under cfg.output_dir.
RunOutcome run_scene(const Scene& scene);

}  // namespace lbm
