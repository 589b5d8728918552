#include "lbm/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace lbm {

namespace {

constexpr char kMagic[4] = {'L', 'B', 'F', '1'};
constexpr std::uint32_t kEndianProbe = 0x01020304u;

template <class T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T take(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw IoError("field dump: truncated file");
    return v;
}

}  // namespace

void dump_field(const FieldStore& field, const GridDims& dims, const std::string& path,
                bool canonical) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write field dump: " + path);
    out.write(kMagic, 4);
    put(out, kEndianProbe);
    put(out, static_cast<std::uint32_t>(dims.nx));
    put(out, static_cast<std::uint32_t>(dims.ny));
    put(out, static_cast<std::uint32_t>(dims.nz));
    put(out, static_cast<std::uint32_t>(field.beta()));
    put(out, static_cast<std::uint64_t>(canonical ? 0 : field.layout().alpha));
    put(out, static_cast<std::uint32_t>(sizeof(double)));
    put(out, static_cast<std::uint64_t>(field.n_nodes()));
    if (canonical) {
        for (std::size_t k = 0; k < field.n_nodes(); ++k)
            for (std::size_t i = 0; i < field.beta(); ++i) put(out, field.get(k, i));
    } else {
        out.write(reinterpret_cast<const char*>(field.data()),
                  static_cast<std::streamsize>(field.size() * sizeof(double)));
    }
    if (!out) throw IoError("short write: " + path);
}

LoadedField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open field dump: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw IoError("bad field dump magic: " + path);
    if (take<std::uint32_t>(in) != kEndianProbe)
        throw IoError("field dump endianness mismatch: " + path);
    GridDims dims;
    dims.nx = static_cast<int>(take<std::uint32_t>(in));
    dims.ny = static_cast<int>(take<std::uint32_t>(in));
    dims.nz = static_cast<int>(take<std::uint32_t>(in));
    const std::uint32_t beta = take<std::uint32_t>(in);
    const std::uint64_t alpha = take<std::uint64_t>(in);
    const std::uint32_t width = take<std::uint32_t>(in);
    if (width != sizeof(double)) throw IoError("unsupported scalar width in " + path);
    const std::uint64_t n_nodes = take<std::uint64_t>(in);

    LoadedField lf;
    lf.dims = dims;
    lf.field = FieldStore(LayoutParams::make(alpha == 0 ? 1 : alpha, beta, n_nodes));
    if (alpha == 0) {
        for (std::uint64_t k = 0; k < n_nodes; ++k)
            for (std::uint32_t i = 0; i < beta; ++i) lf.field.set(k, i, take<double>(in));
    } else {
        in.read(reinterpret_cast<char*>(lf.field.data()),
                static_cast<std::streamsize>(lf.field.size() * sizeof(double)));
        if (!in) throw IoError("field dump: truncated payload in " + path);
    }
    return lf;
}

void write_sidecar(const SnapshotMeta& meta, const std::string& path) {
    nlohmann::json j;
    j["step"] = meta.step;
    j["dims"] = {meta.dims.nx, meta.dims.ny, meta.dims.nz};
    j["viscosity"] = meta.viscosity;
    j["model_kind"] = meta.model_kind;
    j["config_hash"] = meta.config_hash;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write sidecar: " + path);
    out << j.dump(2) << "\n";
}

void write_volume_vtk(const std::vector<double>& cells, const GridDims& dims,
                      const std::string& path, const std::string& config_hash) {
    if (cells.size() != dims.n_nodes()) throw IoError("volume size does not match dims");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write volume: " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "density volume config_hash=" << config_hash << "\n";
    out << "ASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << dims.nx << " " << dims.ny << " " << dims.nz << "\n";
    out << "ORIGIN 0.5 0.5 0.5\nSPACING 1 1 1\n";
    out << "POINT_DATA " << cells.size() << "\nSCALARS density double 1\nLOOKUP_TABLE default\n";
    out << std::setprecision(9);
    for (std::size_t i = 0; i < cells.size(); ++i)
        out << cells[i] << ((i + 1) % 8 == 0 ? "\n" : " ");
    out << "\n";
}

void write_sample_dump(const SolidSampleSet& set, const std::string& path,
                       const std::string& config_hash) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write sample dump: " + path);
    out << "# solid sample dump config_hash=" << config_hash << "\n";
    out << set.size() << " " << set.block_edge << "\n";
    out << std::setprecision(17);
    for (std::size_t s = 0; s < set.size(); ++s) {
        const Vec3& p = set.positions[s];
        const Vec3& v = set.boundary_velocity[s];
        out << p.x << " " << p.y << " " << p.z << " " << v.x << " " << v.y << " " << v.z << "\n";
    }
}

void write_timing_log(const std::vector<TimingRow>& rows, const std::string& path,
                      const std::string& config_hash) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write timing log: " + path);
    out << "# config_hash=" << config_hash << "\n";
    out << "phase,step,seconds\n";
    out << std::setprecision(9);
    for (const auto& r : rows) out << r.phase << "," << r.step << "," << r.seconds << "\n";
}

void write_tune_report(const TuneReport& report, const std::string& path) {
    nlohmann::json j;
    j["spec"] = {{"n_steps", report.n_steps}, {"warmup", report.warmup}};
    j["chosen"] = {{"ell", report.chosen_ell},
                   {"alpha", report.chosen_alpha},
                   {"mean_step_seconds", report.chosen_seconds}};
    j["config_hash"] = report.config_hash;
    auto rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"ell", r.ell},
                        {"alpha", r.alpha},
                        {"mean_step_seconds",
                         std::isfinite(r.seconds) ? r.seconds : -1.0}});
    }
    j["rows"] = rows;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write tuning report: " + path);
    out << j.dump(2) << "\n";
}

TuneReport read_tune_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tuning report: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    TuneReport r;
    r.n_steps = j.at("spec").at("n_steps").get<int>();
    r.warmup = j.at("spec").at("warmup").get<int>();
    r.chosen_ell = j.at("chosen").at("ell").get<int>();
    r.chosen_alpha = j.at("chosen").at("alpha").get<std::size_t>();
    r.chosen_seconds = j.at("chosen").at("mean_step_seconds").get<double>();
    r.config_hash = j.value("config_hash", "");
    for (const auto& row : j.at("rows")) {
        double s = row.at("mean_step_seconds").get<double>();
        r.rows.push_back({row.at("ell").get<int>(), row.at("alpha").get<std::size_t>(),
                          s < 0 ? std::numeric_limits<double>::infinity() : s});
    }
    return r;
}

std::string hash_bytes(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for hashing: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return hash_bytes(ss.str());
}

}  // namespace lbm
