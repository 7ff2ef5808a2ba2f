#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hydroradar/evaluation.hpp"
#include "hydroradar/rdmap.hpp"
#include "hydroradar/scenesim.hpp"

namespace hydroradar {

/// Manifest tying a deployment's files together. Run and groundtruth paths
/// are relative to the manifest's directory.
struct DeploymentManifest {
    std::string deployment_id;
    DeploymentKind kind = DeploymentKind::manual;
    std::vector<std::string> run_paths;
    std::string groundtruth_path;
    std::optional<double> d_ref_m;
    std::optional<std::string> notes;

    bool operator==(const DeploymentManifest&) const = default;
};

// ---- fixed-format number rendering (all writers are byte-deterministic) ----

/// Fixed decimal, 6 fractional digits ("1.130000").
std::string fmt_fixed(double v);
/// Scientific, 6 fractional digits ("7.800000e-06"); used for error metrics.
std::string fmt_sci(double v);

// ---- run files (line-delimited JSON: header line, then one point per line) ----

void write_run_file(const RunRecord& run, const std::filesystem::path& path);
RunRecord parse_run_file(const std::filesystem::path& path);

// ---- groundtruth (CSV: timestamp_s,depth_m) ----

void write_groundtruth_csv(const std::vector<GroundtruthSample>& series,
                           const std::filesystem::path& path);
std::vector<GroundtruthSample> parse_groundtruth_csv(const std::filesystem::path& path);

// ---- deployments (manifest JSON + run files + groundtruth CSV in a directory) ----

/// Writes manifest.json, groundtruth.csv and runs/<run_id>.jsonl under dir.
std::filesystem::path write_deployment(const DeploymentRecord& deployment,
                                       const std::filesystem::path& dir);
DeploymentRecord parse_deployment(const std::filesystem::path& manifest_path);

DeploymentManifest parse_manifest(const std::filesystem::path& path);
void write_manifest(const DeploymentManifest& manifest, const std::filesystem::path& path);

// ---- parameter / scene / grid / chirp config documents (flat JSON) ----

std::string filter_params_to_json(const FilterParams& params);
FilterParams filter_params_from_json(const std::string& text);
void save_filter_params(const FilterParams& params, const std::filesystem::path& path);
FilterParams load_filter_params(const std::filesystem::path& path);

void save_scene_spec(const SceneSpec& spec, const std::filesystem::path& path);
SceneSpec load_scene_spec(const std::filesystem::path& path);

void save_param_grid(const ParamGrid& grid, const std::filesystem::path& path);
ParamGrid load_param_grid(const std::filesystem::path& path);

void save_chirp_config(const ChirpConfig& config, const std::filesystem::path& path);
ChirpConfig load_chirp_config(const std::filesystem::path& path);

// ---- estimates and reports ----

/// One JSON object per line.
void write_run_estimates(const std::vector<RunEstimate>& estimates,
                         const std::filesystem::path& path);
std::vector<RunEstimate> parse_run_estimates(const std::filesystem::path& path);
std::string run_estimate_to_json_line(const RunEstimate& estimate);

void write_report(const EvaluationReport& report, const std::filesystem::path& path);
EvaluationReport parse_report(const std::filesystem::path& path);

// ---- tuner table / map dump / plot data ----

void write_grid_table_csv(const std::vector<GridCellResult>& table,
                          const std::filesystem::path& path);

/// Rows = Doppler bins, columns = range bins, linear magnitudes.
void write_map_csv(const RangeDopplerMap& map, const std::filesystem::path& path);

/// CSV series of run_time_s, estimate_delta_m, groundtruth_delta_m.
void write_delta_series_csv(const EvaluationReport& report,
                            const std::filesystem::path& path);

/// Static SVG of the two delta series over time.
void write_delta_svg(const EvaluationReport& report, const std::filesystem::path& path);

}  // namespace hydroradar
