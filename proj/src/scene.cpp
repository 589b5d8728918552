#include "lbm/scene.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lbm/io.hpp"

namespace lbm {

using nlohmann::json;

TriMesh MeshConfig::build() const {
    switch (type) {
        case Type::Sphere: return make_icosphere(center, radius, subdivisions);
        case Type::Box: return make_box(lo, hi);
        case Type::FinComb: return make_fin_comb(origin, fins, fin_length, fin_height,
                                                 fin_spacing);
        case Type::Quad: return make_quad(size, plane_z);
        case Type::File: return load_mesh(path);
    }
    throw ConfigError("mesh: unknown type");
}

CollisionModel SceneConfig::make_model() const {
    CollisionModel m;
    switch (kind) {
        case CollisionKind::BGK: m = CollisionModel::bgk(viscosity); break;
        case CollisionKind::RawMomentMRT:
            m = CollisionModel::raw_mrt(viscosity, high_order_rate);
            break;
        case CollisionKind::CentralMomentMRT:
            m = CollisionModel::central_mrt(viscosity, high_order_rate, policy);
            break;
    }
    m.policy_eps0 = policy_eps0;
    if (explicit_rates) {
        m.rates = *explicit_rates;
        m.validate();
    }
    return m;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config: " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double need_finite(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "must be a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

Vec3 parse_vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "must be an array of 3 numbers");
    return {need_finite(j[0], path + "[0]"), need_finite(j[1], path + "[1]"),
            need_finite(j[2], path + "[2]")};
}

int need_int(const json& j, const std::string& path, long lo, long hi) {
    if (!j.is_number_integer()) fail(path, "must be an integer");
    long v = j.get<long>();
    if (v < lo || v > hi)
        fail(path, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

FaceCondition parse_condition(const json& j, const std::string& path) {
    std::string s = j.get<std::string>();
    if (s == "no-slip") return FaceCondition::NoSlip;
    if (s == "inlet") return FaceCondition::VelocityInlet;
    if (s == "outflow") return FaceCondition::Outflow;
    if (s == "periodic") return FaceCondition::Periodic;
    fail(path, "must be one of no-slip|inlet|outflow|periodic");
}

MeshConfig parse_mesh(const json& j, const std::string& path) {
    MeshConfig m;
    std::string t = j.value("type", "");
    if (t == "sphere") {
        check_keys(j, path, {"type", "center", "radius", "subdivisions"});
        m.type = MeshConfig::Type::Sphere;
        m.center = parse_vec3(j.at("center"), path + ".center");
        m.radius = need_finite(j.at("radius"), path + ".radius");
        if (m.radius <= 0) fail(path + ".radius", "must be > 0");
        m.subdivisions = j.contains("subdivisions")
                             ? need_int(j["subdivisions"], path + ".subdivisions", 0, 7)
                             : 3;
    } else if (t == "box") {
        check_keys(j, path, {"type", "lo", "hi"});
        m.type = MeshConfig::Type::Box;
        m.lo = parse_vec3(j.at("lo"), path + ".lo");
        m.hi = parse_vec3(j.at("hi"), path + ".hi");
    } else if (t == "fin-comb") {
        check_keys(j, path,
                   {"type", "origin", "fins", "fin_length", "fin_height", "fin_spacing"});
        m.type = MeshConfig::Type::FinComb;
        m.origin = parse_vec3(j.at("origin"), path + ".origin");
        m.fins = need_int(j.at("fins"), path + ".fins", 1, 4096);
        m.fin_length = need_finite(j.at("fin_length"), path + ".fin_length");
        m.fin_height = need_finite(j.at("fin_height"), path + ".fin_height");
        m.fin_spacing = need_finite(j.at("fin_spacing"), path + ".fin_spacing");
    } else if (t == "quad") {
        check_keys(j, path, {"type", "size", "z"});
        m.type = MeshConfig::Type::Quad;
        m.size = need_finite(j.at("size"), path + ".size");
        m.plane_z = j.contains("z") ? need_finite(j["z"], path + ".z") : 0.0;
    } else if (t == "file") {
        check_keys(j, path, {"type", "path"});
        m.type = MeshConfig::Type::File;
        m.path = j.at("path").get<std::string>();
    } else {
        fail(path + ".type", "must be one of sphere|box|fin-comb|quad|file");
    }
    return m;
}

}  // namespace

SceneConfig parse_scene_config(const std::string& json_text, const std::string& config_hash) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(j, "$",
               {"grid", "viscosity", "collision", "faces", "body_force", "solids", "tracers",
                "initial", "steps", "output_cadence", "output_dir", "regions",
                "threads_per_region", "layout", "ib_accumulation", "tune", "seed"});

    SceneConfig cfg;
    cfg.config_hash = config_hash;

    const json& grid = j.at("grid");
    check_keys(grid, "$.grid", {"nx", "ny", "nz"});
    cfg.dims.nx = need_int(grid.at("nx"), "$.grid.nx", 2, 4096);
    cfg.dims.ny = need_int(grid.at("ny"), "$.grid.ny", 2, 4096);
    cfg.dims.nz = need_int(grid.at("nz"), "$.grid.nz", 2, 4096);

    cfg.viscosity = need_finite(j.at("viscosity"), "$.viscosity");
    if (!(cfg.viscosity > 0)) fail("$.viscosity", "must be > 0");

    const json& col = j.at("collision");
    check_keys(col, "$.collision", {"kind", "high_order_rate", "rates", "policy", "policy_eps0"});
    std::string kind = col.at("kind").get<std::string>();
    if (kind == "bgk")
        cfg.kind = CollisionKind::BGK;
    else if (kind == "rm-mrt")
        cfg.kind = CollisionKind::RawMomentMRT;
    else if (kind == "cm-mrt")
        cfg.kind = CollisionKind::CentralMomentMRT;
    else
        fail("$.collision.kind", "must be one of bgk|rm-mrt|cm-mrt");
    if (col.contains("high_order_rate"))
        cfg.high_order_rate = need_finite(col["high_order_rate"], "$.collision.high_order_rate");
    if (col.contains("policy")) {
        std::string p = col["policy"].get<std::string>();
        if (p == "constant")
            cfg.policy = RatePolicy::Constant;
        else if (p == "relax-toward-one")
            cfg.policy = RatePolicy::RelaxTowardOne;
        else
            fail("$.collision.policy", "must be constant|relax-toward-one");
    }
    if (col.contains("policy_eps0")) {
        cfg.policy_eps0 = need_finite(col["policy_eps0"], "$.collision.policy_eps0");
        if (cfg.policy_eps0 <= 0) fail("$.collision.policy_eps0", "must be > 0");
    }
    if (col.contains("rates")) {
        if (!col["rates"].is_array() || col["rates"].size() != 27)
            fail("$.collision.rates", "must be an array of 27 numbers");
        std::array<double, 27> r;
        for (int i = 0; i < 27; ++i)
            r[i] = need_finite(col["rates"][i], "$.collision.rates[" + std::to_string(i) + "]");
        cfg.explicit_rates = r;
    }

    const json& faces = j.at("faces");
    const char* face_names[6] = {"x-", "x+", "y-", "y+", "z-", "z+"};
    check_keys(faces, "$.faces", {"x-", "x+", "y-", "y+", "z-", "z+"});
    for (int f = 0; f < 6; ++f) {
        std::string fp = std::string("$.faces.") + face_names[f];
        if (!faces.contains(face_names[f])) fail(fp, "missing face");
        const json& fj = faces[face_names[f]];
        check_keys(fj, fp, {"condition", "velocity"});
        cfg.boundary.faces[f].condition = parse_condition(fj.at("condition"), fp + ".condition");
        if (fj.contains("velocity"))
            cfg.boundary.faces[f].inlet_velocity = parse_vec3(fj["velocity"], fp + ".velocity");
    }
    cfg.boundary.validate();

    if (j.contains("body_force")) cfg.body_force = parse_vec3(j["body_force"], "$.body_force");

    if (j.contains("solids")) {
        int idx = 0;
        for (const json& sj : j["solids"]) {
            std::string sp = "$.solids[" + std::to_string(idx++) + "]";
            check_keys(sj, sp, {"mesh", "poisson_radius", "sampling", "motion"});
            SolidConfig sc;
            sc.mesh = parse_mesh(sj.at("mesh"), sp + ".mesh");
            sc.poisson_radius = need_finite(sj.at("poisson_radius"), sp + ".poisson_radius");
            if (sc.poisson_radius <= 0) fail(sp + ".poisson_radius", "must be > 0");
            if (sj.contains("sampling")) {
                std::string m = sj["sampling"].get<std::string>();
                if (m == "dart-throwing")
                    sc.sampling = SamplingMethod::DartThrowing;
                else if (m == "elimination")
                    sc.sampling = SamplingMethod::SampleElimination;
                else
                    fail(sp + ".sampling", "must be dart-throwing|elimination");
            }
            if (sj.contains("motion")) {
                const json& mj = sj["motion"];
                check_keys(mj, sp + ".motion", {"linear_velocity", "angular_velocity", "center"});
                RigidMotion motion;
                if (mj.contains("linear_velocity"))
                    motion.linear_velocity =
                        parse_vec3(mj["linear_velocity"], sp + ".motion.linear_velocity");
                if (mj.contains("angular_velocity"))
                    motion.angular_velocity =
                        parse_vec3(mj["angular_velocity"], sp + ".motion.angular_velocity");
                motion.center = mj.contains("center")
                                    ? parse_vec3(mj["center"], sp + ".motion.center")
                                    : Vec3{};
                sc.motion = motion;
            }
            cfg.solids.push_back(std::move(sc));
        }
    }

    if (j.contains("tracers")) {
        int idx = 0;
        for (const json& tj : j["tracers"]) {
            std::string tp = "$.tracers[" + std::to_string(idx++) + "]";
            check_keys(tj, tp, {"region", "rate"});
            const json& rj = tj.at("region");
            check_keys(rj, tp + ".region", {"lo", "hi"});
            TracerEmitter e;
            e.lo = parse_vec3(rj.at("lo"), tp + ".region.lo");
            e.hi = parse_vec3(rj.at("hi"), tp + ".region.hi");
            e.rate = need_int(tj.at("rate"), tp + ".rate", 0, 1000000);
            cfg.emitters.push_back(e);
        }
    }

    if (j.contains("initial")) {
        const json& ij = j["initial"];
        std::string t = ij.value("type", "uniform");
        if (t == "uniform") {
            check_keys(ij, "$.initial", {"type", "density", "velocity"});
            cfg.init = InitKind::Uniform;
            if (ij.contains("density")) {
                cfg.init_density = need_finite(ij["density"], "$.initial.density");
                if (cfg.init_density <= 0) fail("$.initial.density", "must be > 0");
            }
            if (ij.contains("velocity"))
                cfg.init_velocity = parse_vec3(ij["velocity"], "$.initial.velocity");
        } else if (t == "taylor-green") {
            check_keys(ij, "$.initial", {"type", "u_max"});
            cfg.init = InitKind::TaylorGreen;
            if (ij.contains("u_max"))
                cfg.tg_u_max = need_finite(ij["u_max"], "$.initial.u_max");
        } else {
            fail("$.initial.type", "must be uniform|taylor-green");
        }
    }

    cfg.steps = j.contains("steps") ? need_int(j["steps"], "$.steps", 0, 100000000) : 0;
    if (j.contains("output_cadence"))
        cfg.output_cadence = need_int(j["output_cadence"], "$.output_cadence", 0, 100000000);
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("regions")) cfg.regions = need_int(j["regions"], "$.regions", 1, 1024);
    if (cfg.regions > cfg.dims.nz) fail("$.regions", "must be <= grid.nz");
    if (j.contains("threads_per_region"))
        cfg.threads_per_region =
            static_cast<unsigned>(need_int(j["threads_per_region"], "$.threads_per_region", 0, 4096));

    if (j.contains("layout")) {
        const json& lj = j["layout"];
        check_keys(lj, "$.layout", {"alpha", "block_edge"});
        if (lj.contains("alpha"))
            cfg.alpha = static_cast<std::size_t>(need_int(lj["alpha"], "$.layout.alpha", 1,
                                                          1 << 30));
        if (lj.contains("block_edge"))
            cfg.block_edge = need_int(lj["block_edge"], "$.layout.block_edge", 1, 4096);
    }

    if (j.contains("ib_accumulation")) {
        std::string m = j["ib_accumulation"].get<std::string>();
        if (m == "atomic")
            cfg.ib_mode = AccumulationMode::Atomic;
        else if (m == "deterministic")
            cfg.ib_mode = AccumulationMode::Deterministic;
        else
            fail("$.ib_accumulation", "must be atomic|deterministic");
    }

    if (j.contains("tune")) {
        const json& tj = j["tune"];
        check_keys(tj, "$.tune", {"enabled", "n_steps", "warmup"});
        if (tj.contains("enabled")) {
            if (!tj["enabled"].is_boolean()) fail("$.tune.enabled", "must be a boolean");
            cfg.tune.enabled = tj["enabled"].get<bool>();
        }
        if (tj.contains("n_steps")) cfg.tune.n_steps = need_int(tj["n_steps"], "$.tune.n_steps", 1, 1000000);
        if (tj.contains("warmup")) cfg.tune.warmup = need_int(tj["warmup"], "$.tune.warmup", 0, 1000000);
    }

    if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(j["seed"].get<std::int64_t>());

    // Outflow needs an interior neighbor plane on its axis.
    for (int f = 0; f < kNumFaces; ++f)
        if (cfg.boundary.faces[f].condition == FaceCondition::Outflow &&
            cfg.dims.extent(face_axis(f)) < 2)
            fail("$.faces", "outflow requires extent >= 2 on its axis");

    return cfg;
}

SceneConfig load_scene_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scene_config(ss.str(), hash_bytes(ss.str()));
}

Scene build_scene(const SceneConfig& cfg) {
    Scene scene;
    scene.cfg = cfg;
    scene.model = cfg.make_model();
    std::uint64_t solid_seed = cfg.seed;
    for (const auto& sc : cfg.solids) {
        TriMesh mesh = sc.mesh.build();
        SolidInstance inst;
        inst.samples = sample_surface(mesh, sc.poisson_radius, solid_seed++, &inst.report,
                                      sc.sampling);
        if (sc.motion) {
            inst.motion = *sc.motion;
            inst.moving = true;
            for (std::size_t s = 0; s < inst.samples.size(); ++s)
                inst.samples.reference_positions[s] =
                    inst.samples.positions[s] - inst.motion.center;
        } else {
            inst.motion = RigidMotion{};  // zero velocities; identity trajectory
            inst.motion.center = Vec3{};
            inst.samples.reference_positions = inst.samples.positions;
        }
        inst.samples = reorder_samples(inst.samples, cfg.block_edge);
        scene.solids.push_back(std::move(inst));
    }
    return scene;
}

}  // namespace lbm
