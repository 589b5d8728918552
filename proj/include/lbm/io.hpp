/// @file io.hpp
/// @brief File formats: field dumps, volume export, sample dumps, reports.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbm/ib.hpp"
#include "lbm/layout.hpp"

namespace lbm {

/// Binary field dump. Header: magic "LBF1", u32 endian probe, dims, beta,
/// alpha (0 = canonical AoS export), scalar width, node count; payload in
/// layout order. The canonical export iterates (node, component) in AoS
/// order regardless of the in-memory layout, so re-import is bit-exact and
/// layout independent.
void dump_field(const FieldStore& field, const GridDims& dims, const std::string& path,
                bool canonical = true);

struct LoadedField {
    FieldStore field;
    GridDims dims;
};
LoadedField load_field(const std::string& path);

/// Metadata sidecar written next to each snapshot.
struct SnapshotMeta {
    long step = 0;
    GridDims dims;
    double viscosity = 0.0;
    std::string model_kind;
    std::string config_hash;
};
void write_sidecar(const SnapshotMeta& meta, const std::string& path);

/// Dense scalar volume in legacy VTK structured-points format (ASCII),
/// readable by common volume viewers. The config hash rides in the comment
/// line.
void write_volume_vtk(const std::vector<double>& cells, const GridDims& dims,
                      const std::string& path, const std::string& config_hash);

/// Sample-set dump: count and block edge, then one position/velocity record
/// per sample in stored order.
void write_sample_dump(const SolidSampleSet& set, const std::string& path,
                       const std::string& config_hash);

/// Per-phase wall-time rows (phase, step, seconds).
struct TimingRow {
    std::string phase;
    long step = 0;
    double seconds = 0.0;
};
void write_timing_log(const std::vector<TimingRow>& rows, const std::string& path,
                      const std::string& config_hash);

/// Auto-tuner report: measured cost table, chosen pair, spec echo.
struct TuneRow {
    int ell = 0;
    std::size_t alpha = 0;
    double seconds = 0.0;  // +inf marks an invalid candidate
};
struct TuneReport {
    std::vector<TuneRow> rows;
    int chosen_ell = 0;
    std::size_t chosen_alpha = 0;
    double chosen_seconds = 0.0;
    int n_steps = 0;
    int warmup = 0;
    std::string config_hash;
};
void write_tune_report(const TuneReport& report, const std::string& path);
TuneReport read_tune_report(const std::string& path);

/// FNV-1a hash of a file's bytes, hex-encoded; the provenance tag carried by
/// every output file.
std::string hash_file(const std::string& path);
std::string hash_bytes(const std::string& bytes);

}  // namespace lbm
