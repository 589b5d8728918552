/// Command-line front end: run, tune, validate-config, export-samples,
/// plot-costs. Exit codes: 0 success, 2 config/IO error, 3 divergence.
#include <cmath>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "lbm/driver.hpp"
#include "lbm/runner.hpp"

using namespace lbm;

namespace {

int cmd_run(const std::string& config_path) {
    Scene scene = build_scene(load_scene_config(config_path));
    for (std::size_t i = 0; i < scene.solids.size(); ++i) {
        const auto& rep = scene.solids[i].report;
        std::cout << "solid " << i << ": " << rep.n_samples << " samples, per-cell density "
                  << rep.density_min << "/" << rep.density_mean << "/" << rep.density_max
                  << " (min/mean/max), " << 100.0 * rep.in_band_fraction
                  << "% of cells in the 10-100 band\n";
    }
    RunOutcome out = run_scene(scene);
    std::cout << out.message << "\n";
    for (const auto& a : out.artifacts) std::cout << "wrote " << a << "\n";
    return out.exit_code;
}

int cmd_tune(const std::string& config_path, const std::string& report_path) {
    SceneConfig cfg = load_scene_config(config_path);
    Scene scene = build_scene(cfg);
    Runner runner(scene);
    TuneSpec spec = TuneSpec::from_scene(scene, cfg.tune.n_steps, cfg.tune.warmup);
    std::cout << "searching " << spec.candidate_count() << " candidates: ell 1.."
              << spec.ell_max << ", alpha 2..2^" << spec.alphas.size() << "\n";
    TuneOutcome outcome = search(runner, spec);
    outcome.report.config_hash = cfg.config_hash;
    write_tune_report(outcome.report, report_path);
    std::cout << "chosen ell=" << outcome.ell << " alpha=" << outcome.alpha << " ("
              << outcome.cost << " s/step), report: " << report_path << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& config_path) {
    SceneConfig cfg = load_scene_config(config_path);
    std::cout << "config ok (hash " << cfg.config_hash << "): grid " << cfg.dims.nx << "x"
              << cfg.dims.ny << "x" << cfg.dims.nz << ", " << cfg.solids.size() << " solids, "
              << cfg.steps << " steps\n";
    return kExitOk;
}

int cmd_export_samples(const std::string& config_path, const std::string& out_path) {
    SceneConfig cfg = load_scene_config(config_path);
    Scene scene = build_scene(cfg);
    if (scene.solids.empty()) throw ConfigError("export-samples: the scene has no solids");
    for (std::size_t i = 0; i < scene.solids.size(); ++i) {
        std::string path = scene.solids.size() == 1
                               ? out_path
                               : out_path + "." + std::to_string(i);
        write_sample_dump(scene.solids[i].samples, path, cfg.config_hash);
        std::cout << "wrote " << scene.solids[i].samples.size() << " samples to " << path
                  << "\n";
    }
    return kExitOk;
}

int cmd_plot_costs(const std::string& report_path) {
    TuneReport rep = read_tune_report(report_path);
    double best = 1e300, worst = 0.0;
    for (const auto& r : rep.rows)
        if (std::isfinite(r.seconds)) {
            best = std::min(best, r.seconds);
            worst = std::max(worst, r.seconds);
        }
    std::cout << "cost surface (s/step), " << rep.rows.size() << " candidates, chosen ell="
              << rep.chosen_ell << " alpha=" << rep.chosen_alpha << "\n";
    std::cout << "ell, alpha, mean_step_seconds, relative\n";
    const char* shades = " .:-=+*#%@";
    for (const auto& r : rep.rows) {
        std::string bar;
        if (std::isfinite(r.seconds) && worst > best) {
            int level = static_cast<int>(9.0 * (r.seconds - best) / (worst - best));
            bar = std::string(1, shades[std::min(9, std::max(0, level))]);
        } else {
            bar = "x";
        }
        std::cout << r.ell << ", " << r.alpha << ", "
                  << (std::isfinite(r.seconds) ? std::to_string(r.seconds) : "invalid") << ", "
                  << bar << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinetic-flow: data-parallel D3Q27 kinetic fluid solver"};
    app.require_subcommand(1);

    std::string config_path, out_path = "tune_report.json";

    auto* run = app.add_subcommand("run", "run a scene from a config file");
    run->add_option("config", config_path, "scene config (json)")->required();

    auto* tune = app.add_subcommand("tune", "search layout parameters (ell, alpha)");
    tune->add_option("config", config_path, "scene config (json)")->required();
    tune->add_option("-o,--output", out_path, "report path");

    auto* validate = app.add_subcommand("validate-config", "check a config file");
    validate->add_option("config", config_path, "scene config (json)")->required();

    std::string samples_path = "samples.txt";
    auto* exports = app.add_subcommand("export-samples", "sample solids and dump the sets");
    exports->add_option("config", config_path, "scene config (json)")->required();
    exports->add_option("-o,--output", samples_path, "output path");

    std::string report_path;
    auto* plot = app.add_subcommand("plot-costs", "print a tuning report as a cost table");
    plot->add_option("report", report_path, "tuning report (json)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (tune->parsed()) return cmd_tune(config_path, out_path);
        if (validate->parsed()) return cmd_validate(config_path);
        if (exports->parsed()) return cmd_export_samples(config_path, samples_path);
        if (plot->parsed()) return cmd_plot_costs(report_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
