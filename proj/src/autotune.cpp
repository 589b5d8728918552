#include "lbm/autotune.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace lbm {

TuneSpec TuneSpec::from_scene(const Scene& scene, int n_steps, int warmup) {
    TuneSpec spec;
    spec.n_steps = n_steps;
    spec.warmup = warmup;
    spec.ell_min = 1;
    spec.ell_max = 1;
    if (!scene.solids.empty()) {
        double min_edge = 1e300;
        for (const auto& s : scene.solids)
            for (int a = 0; a < 3; ++a)
                min_edge = std::min(min_edge, s.samples.bbox_hi[a] - s.samples.bbox_lo[a]);
        spec.ell_max = std::max(1, static_cast<int>(std::floor(min_edge)));
    }
    const std::size_t n_f = scene.cfg.dims.n_nodes();
    for (std::size_t a = 2; a <= n_f; a *= 2) spec.alphas.push_back(a);
    if (spec.alphas.empty()) spec.alphas.push_back(1);
    if (spec.n_steps < 1) throw ConfigError("tune: n_steps must be >= 1");
    return spec;
}

double measure_cost(Runner& runner, int ell, std::size_t alpha, const TuneSpec& spec) {
    runner.set_layout(ell, alpha);
    if (!runner.advance(spec.warmup).ok) return std::numeric_limits<double>::infinity();
    auto t0 = std::chrono::steady_clock::now();
    if (!runner.advance(spec.n_steps).ok) return std::numeric_limits<double>::infinity();
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return dt / spec.n_steps;
}

TuneOutcome search_with_cost(const TuneSpec& spec, const CostFn& cost) {
    TuneOutcome out;
    out.cost = std::numeric_limits<double>::infinity();
    out.report.n_steps = spec.n_steps;
    out.report.warmup = spec.warmup;
    // Ascending enumeration with a strict improvement test implements the
    // "smaller ell, then smaller alpha" tie rule.
    for (int ell = spec.ell_min; ell <= spec.ell_max; ++ell)
        for (std::size_t alpha : spec.alphas) {
            double c = cost(ell, alpha);
            out.report.rows.push_back({ell, alpha, c});
            if (c < out.cost) {
                out.cost = c;
                out.ell = ell;
                out.alpha = alpha;
            }
        }
    if (!std::isfinite(out.cost)) throw ConfigError("tune: every candidate was invalid");
    out.report.chosen_ell = out.ell;
    out.report.chosen_alpha = out.alpha;
    out.report.chosen_seconds = out.cost;
    return out;
}

TuneOutcome search(const Runner& base, const TuneSpec& spec) {
    Runner probe = base.clone();
    // Candidates measured sequentially; concurrent measurement would corrupt
    // the timings. The probe state keeps advancing through the sweep, so
    // rotating solids are measured over their actual trajectory.
    return search_with_cost(spec, [&](int ell, std::size_t alpha) {
        return measure_cost(probe, ell, alpha, spec);
    });
}

}  // namespace lbm
