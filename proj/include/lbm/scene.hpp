/// @file scene.hpp
/// @brief Scene configuration: schema, validation, and scene assembly.
///
/// One JSON file fully determines a run (plus mesh assets). Unknown keys are
/// rejected and every physical value is validated up front so a run record
/// can be reproduced from its config hash.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbm/boundary.hpp"
#include "lbm/collision.hpp"
#include "lbm/ib.hpp"
#include "lbm/mesh.hpp"
#include "lbm/tracer.hpp"

namespace lbm {

struct MeshConfig {
    enum class Type { Sphere, Box, FinComb, Quad, File } type = Type::Sphere;
    Vec3 center, lo, hi, origin;
    double radius = 1.0;
    int subdivisions = 3;
    int fins = 8;
    double fin_length = 8, fin_height = 6, fin_spacing = 2;
    double size = 1.0, plane_z = 0.0;
    std::string path;

    TriMesh build() const;
};

struct SolidConfig {
    MeshConfig mesh;
    double poisson_radius = 0.5;
    SamplingMethod sampling = SamplingMethod::DartThrowing;
    std::optional<RigidMotion> motion;
};

enum class InitKind { Uniform, TaylorGreen };

struct TuneConfig {
    bool enabled = false;
    int n_steps = 10;  // measurement window; static solids need only a few
    int warmup = 5;
};

struct SceneConfig {
    GridDims dims;
    double viscosity = 0.05;
    CollisionKind kind = CollisionKind::BGK;
    double high_order_rate = 1.0;
    RatePolicy policy = RatePolicy::Constant;
    double policy_eps0 = 0.01;
    std::optional<std::array<double, 27>> explicit_rates;
    BoundarySet boundary;
    Vec3 body_force;
    std::vector<SolidConfig> solids;
    std::vector<TracerEmitter> emitters;
    InitKind init = InitKind::Uniform;
    double init_density = 1.0;
    Vec3 init_velocity;
    double tg_u_max = 0.02;
    long steps = 0;
    long output_cadence = 0;  // 0 disables snapshots
    std::string output_dir = "out";
    int regions = 1;
    unsigned threads_per_region = 0;  // 0 = auto
    std::size_t alpha = 1;
    int block_edge = 1;
    AccumulationMode ib_mode = AccumulationMode::Atomic;
    TuneConfig tune;
    std::uint64_t seed = 1;
    std::string config_hash;  // provenance tag, filled by the loader

    CollisionModel make_model() const;
};

/// Parses and validates; throws ConfigError naming the offending field.
SceneConfig load_scene_config(const std::string& path);
SceneConfig parse_scene_config(const std::string& json_text, const std::string& config_hash);

/// A solid ready for simulation: sampled, ordered and motion-annotated.
struct SolidInstance {
    SolidSampleSet samples;
    RigidMotion motion;     // zero velocities for static solids
    bool moving = false;
    SamplingReport report;
};

struct Scene {
    SceneConfig cfg;
    CollisionModel model;
    std::vector<SolidInstance> solids;
};

/// Samples all solids (seeded, deterministic) and orders them by the
/// configured block edge.
Scene build_scene(const SceneConfig& cfg);

}  // namespace lbm
