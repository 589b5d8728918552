#include "lbm/driver.hpp"

#include <filesystem>

#include "lbm/runner.hpp"

namespace lbm {

namespace {

std::string model_kind_name(CollisionKind k) {
    switch (k) {
        case CollisionKind::BGK: return "bgk";
        case CollisionKind::RawMomentMRT: return "rm-mrt";
        case CollisionKind::CentralMomentMRT: return "cm-mrt";
    }
    return "?";
}

}  // namespace

RunOutcome run_scene(const Scene& scene) {
    namespace fs = std::filesystem;
    const SceneConfig& cfg = scene.cfg;
    RunOutcome out;

    fs::create_directories(cfg.output_dir);
    auto artifact = [&](const std::string& name) {
        std::string p = (fs::path(cfg.output_dir) / name).string();
        out.artifacts.push_back(p);
        return p;
    };

    Runner runner(scene);

    if (cfg.tune.enabled) {
        TuneSpec spec = TuneSpec::from_scene(scene, cfg.tune.n_steps, cfg.tune.warmup);
        TuneOutcome tuned = search(runner, spec);
        tuned.report.config_hash = cfg.config_hash;
        write_tune_report(tuned.report, artifact("tune_report.json"));
        runner.set_layout(tuned.ell, tuned.alpha);
        out.tune = std::move(tuned);
    }

    auto snapshot = [&](long step) {
        const std::string tag = std::to_string(step);
        FieldStore rho = runner.gather_rho();
        FieldStore u = runner.gather_u();
        dump_field(rho, cfg.dims, artifact("rho_" + tag + ".lbf"));
        dump_field(u, cfg.dims, artifact("u_" + tag + ".lbf"));
        SnapshotMeta meta{step, cfg.dims, cfg.viscosity, model_kind_name(cfg.kind),
                          cfg.config_hash};
        write_sidecar(meta, artifact("snapshot_" + tag + ".json"));
        if (!cfg.emitters.empty()) {
            auto vol = rasterize_density(runner.tracers(), cfg.dims);
            write_volume_vtk(vol, cfg.dims, artifact("density_" + tag + ".vtk"),
                             cfg.config_hash);
        }
    };

    StepStatus st;
    for (long s = 0; s < cfg.steps;) {
        long chunk = cfg.output_cadence > 0 ? std::min<long>(cfg.output_cadence, cfg.steps - s)
                                            : cfg.steps - s;
        st = runner.advance(chunk, &out.timings);
        s = runner.step_count();
        if (!st.ok) break;
        if (cfg.output_cadence > 0) snapshot(s);
    }

    write_timing_log(out.timings, artifact("timing.csv"), cfg.config_hash);
    out.steps_done = runner.step_count();

    if (!st.ok) {
        out.exit_code = kExitDiverged;
        out.message = st.reason + " at step " + std::to_string(st.step);
    } else {
        out.message = "completed " + std::to_string(out.steps_done) + " steps";
        if (st.mach_warning) out.message += " (lattice Mach warning: |u| reached 0.4)";
    }
    return out;
}

}  // namespace lbm
