#include "hydroradar/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hydroradar/errors.hpp"
#include "json.hpp"

namespace hydroradar {

namespace {

using nlohmann::json;

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (!path.parent_path().empty()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

std::string load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(load_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), 1, e.what());
    }
}

double require_number(const json& j, const char* key, const std::filesystem::path& path,
                      long line) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ParseError(path.string(), line, std::string("missing or non-numeric field '") + key + "'");
    }
    return j[key].get<double>();
}

DeploymentKind kind_from_string(const std::string& s) {
    if (s == "manual") return DeploymentKind::manual;
    if (s == "automated") return DeploymentKind::automated;
    throw std::invalid_argument("unknown deployment kind '" + s + "'");
}

PathClass path_class_from_string(const std::string& s) {
    if (s == "direct_surface") return PathClass::direct_surface;
    if (s == "subsurface") return PathClass::subsurface;
    if (s == "near_sensor_noise") return PathClass::near_sensor_noise;
    if (s == "multipath") return PathClass::multipath;
    throw std::invalid_argument("unknown path class '" + s + "'");
}

void check_known_keys(const json& j, std::initializer_list<const char*> known,
                      const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end()) {
            throw std::invalid_argument(context + ": unknown field '" + key + "'");
        }
    }
}

std::optional<double> opt_number(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_number()) {
        throw std::invalid_argument(std::string("field '") + key + "' must be a number");
    }
    return j[key].get<double>();
}

std::string opt_cell(const std::optional<double>& v) { return v ? fmt_fixed(*v) : ""; }

}  // namespace

std::string fmt_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string out = buf;
    if (out == "-0.000000") out.erase(0, 1);  // values rounding to zero lose the sign
    return out;
}

std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    std::string out = buf;
    if (out == "-0.000000e+00") out.erase(0, 1);
    return out;
}

// ---------------------------------------------------------------------------
// run files
// ---------------------------------------------------------------------------

void write_run_file(const RunRecord& run, const std::filesystem::path& path) {
    std::string out;
    out.reserve(64 + run.measurements.size() * 96);
    out += "{\"run_id\":\"" + json_escape(run.run_id) + "\",\"sensor_label\":\"" +
           json_escape(run.sensor_label) + "\",\"measurement_rate_hz\":" +
           fmt_fixed(run.measurement_rate_hz) + ",\"start_time_s\":" +
           fmt_fixed(run.start_time_s) + ",\"imu_roll_deg\":" + fmt_fixed(run.imu_roll_deg) +
           ",\"imu_pitch_deg\":" + fmt_fixed(run.imu_pitch_deg) + "}\n";
    for (const PointCloud& meas : run.measurements) {
        const std::string t = fmt_fixed(meas.timestamp_s - run.start_time_s);
        for (const RadarPoint& pt : meas.points) {
            out += "{\"t\":" + t + ",\"x\":" + fmt_fixed(pt.x_m) + ",\"y\":" + fmt_fixed(pt.y_m) +
                   ",\"z\":" + fmt_fixed(pt.z_m) + ",\"p\":" + fmt_fixed(pt.p) + "}\n";
        }
    }
    atomic_write(path, out);
}

RunRecord parse_run_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    RunRecord run;
    std::string line;
    long line_number = 0;
    bool have_header = false;
    double prev_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(path.string(), line_number, e.what());
        }
        if (!have_header) {
            for (const char* key : {"sensor_label", "measurement_rate_hz", "start_time_s",
                                    "imu_roll_deg", "imu_pitch_deg"}) {
                if (!j.contains(key)) {
                    throw ParseError(path.string(), line_number,
                                     std::string("missing header field '") + key + "'");
                }
            }
            if (!j["sensor_label"].is_string()) {
                throw ParseError(path.string(), line_number, "sensor_label must be a string");
            }
            run.run_id = j.value("run_id", std::string{});
            run.sensor_label = j["sensor_label"].get<std::string>();
            run.measurement_rate_hz = require_number(j, "measurement_rate_hz", path, line_number);
            run.start_time_s = require_number(j, "start_time_s", path, line_number);
            run.imu_roll_deg = require_number(j, "imu_roll_deg", path, line_number);
            run.imu_pitch_deg = require_number(j, "imu_pitch_deg", path, line_number);
            have_header = true;
            continue;
        }
        const double t = require_number(j, "t", path, line_number);
        const double x = require_number(j, "x", path, line_number);
        const double y = require_number(j, "y", path, line_number);
        const double z = require_number(j, "z", path, line_number);
        const double p = require_number(j, "p", path, line_number);
        if (!std::isfinite(t) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
            throw ParseError(path.string(), line_number, "non-finite value");
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ParseError(path.string(), line_number,
                             "p = " + fmt_fixed(p) + " outside [0, 1]");
        }
        if (t < prev_t) {
            throw ParseError(path.string(), line_number, "non-monotone t");
        }
        const double timestamp = run.start_time_s + t;
        if (run.measurements.empty() || t > prev_t) {
            run.measurements.push_back(PointCloud{timestamp, {}});
        }
        run.measurements.back().points.push_back(
            RadarPoint{.x_m = x, .y_m = y, .z_m = z, .p = p, .timestamp_s = timestamp});
        prev_t = t;
    }
    if (!have_header) {
        throw ParseError(path.string(), std::max(1L, line_number), "missing run header line");
    }
    return run;
}

// ---------------------------------------------------------------------------
// groundtruth CSV
// ---------------------------------------------------------------------------

void write_groundtruth_csv(const std::vector<GroundtruthSample>& series,
                           const std::filesystem::path& path) {
    std::string out = "timestamp_s,depth_m\n";
    for (const GroundtruthSample& s : series) {
        out += fmt_fixed(s.timestamp_s) + "," + fmt_fixed(s.depth_m) + "\n";
    }
    atomic_write(path, out);
}

std::vector<GroundtruthSample> parse_groundtruth_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    long line_number = 0;
    if (!std::getline(in, line) || line != "timestamp_s,depth_m") {
        throw ParseError(path.string(), 1, "expected header 'timestamp_s,depth_m'");
    }
    ++line_number;
    std::vector<GroundtruthSample> series;
    double prev = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(path.string(), line_number, "expected 'timestamp_s,depth_m' row");
        }
        double t = 0.0, depth = 0.0;
        try {
            t = std::stod(line.substr(0, comma));
            depth = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ParseError(path.string(), line_number, "non-numeric value");
        }
        if (!std::isfinite(t) || !std::isfinite(depth)) {
            throw ParseError(path.string(), line_number, "non-finite value");
        }
        if (!(t > prev)) {
            throw ParseError(path.string(), line_number, "timestamps must be strictly increasing");
        }
        prev = t;
        series.push_back(GroundtruthSample{t, depth});
    }
    return series;
}

// ---------------------------------------------------------------------------
// manifests and deployments
// ---------------------------------------------------------------------------

void write_manifest(const DeploymentManifest& manifest, const std::filesystem::path& path) {
    std::string out = "{\n";
    out += "  \"deployment_id\": \"" + json_escape(manifest.deployment_id) + "\",\n";
    out += "  \"kind\": \"" + std::string(to_string(manifest.kind)) + "\",\n";
    out += "  \"runs\": [\n";
    for (std::size_t i = 0; i < manifest.run_paths.size(); ++i) {
        out += "    \"" + json_escape(manifest.run_paths[i]) + "\"";
        out += (i + 1 < manifest.run_paths.size()) ? ",\n" : "\n";
    }
    out += "  ],\n";
    out += "  \"groundtruth\": \"" + json_escape(manifest.groundtruth_path) + "\"";
    if (manifest.d_ref_m) out += ",\n  \"d_ref_m\": " + fmt_fixed(*manifest.d_ref_m);
    if (manifest.notes) out += ",\n  \"notes\": \"" + json_escape(*manifest.notes) + "\"";
    out += "\n}\n";
    atomic_write(path, out);
}

DeploymentManifest parse_manifest(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    check_known_keys(j, {"deployment_id", "kind", "runs", "groundtruth", "d_ref_m", "notes"},
                     path.string());
    DeploymentManifest manifest;
    if (!j.contains("deployment_id") || !j["deployment_id"].is_string()) {
        throw ParseError(path.string(), 1, "missing 'deployment_id'");
    }
    manifest.deployment_id = j["deployment_id"].get<std::string>();
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw ParseError(path.string(), 1, "missing 'kind'");
    }
    manifest.kind = kind_from_string(j["kind"].get<std::string>());
    if (!j.contains("runs") || !j["runs"].is_array()) {
        throw ParseError(path.string(), 1, "missing 'runs' array");
    }
    for (const auto& r : j["runs"]) {
        if (!r.is_string()) throw ParseError(path.string(), 1, "run entries must be paths");
        manifest.run_paths.push_back(r.get<std::string>());
    }
    if (!j.contains("groundtruth") || !j["groundtruth"].is_string()) {
        throw ParseError(path.string(), 1, "missing 'groundtruth'");
    }
    manifest.groundtruth_path = j["groundtruth"].get<std::string>();
    manifest.d_ref_m = opt_number(j, "d_ref_m");
    if (j.contains("notes")) manifest.notes = j["notes"].get<std::string>();
    return manifest;
}

std::filesystem::path write_deployment(const DeploymentRecord& deployment,
                                       const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir / "runs", ec);

    DeploymentManifest manifest;
    manifest.deployment_id = deployment.deployment_id;
    manifest.kind = deployment.kind;
    manifest.d_ref_m = deployment.d_ref_m;
    for (const RunRecord& run : deployment.runs) {
        const std::string rel = "runs/" + run.run_id + ".jsonl";
        write_run_file(run, dir / rel);
        manifest.run_paths.push_back(rel);
    }
    manifest.groundtruth_path = "groundtruth.csv";
    write_groundtruth_csv(deployment.groundtruth, dir / manifest.groundtruth_path);
    const fs::path manifest_path = dir / "manifest.json";
    write_manifest(manifest, manifest_path);
    return manifest_path;
}

DeploymentRecord parse_deployment(const std::filesystem::path& manifest_path) {
    const DeploymentManifest manifest = parse_manifest(manifest_path);
    const std::filesystem::path base = manifest_path.parent_path();
    DeploymentRecord deployment;
    deployment.deployment_id = manifest.deployment_id;
    deployment.kind = manifest.kind;
    deployment.d_ref_m = manifest.d_ref_m.value_or(0.0);
    for (const std::string& rel : manifest.run_paths) {
        deployment.runs.push_back(parse_run_file(base / rel));
    }
    deployment.groundtruth = parse_groundtruth_csv(base / manifest.groundtruth_path);
    return deployment;
}

// ---------------------------------------------------------------------------
// filter params
// ---------------------------------------------------------------------------

std::string filter_params_to_json(const FilterParams& params) {
    std::string out = "{\"window_w\":" + std::to_string(params.window_w) +
                      ",\"aggregation_f\":\"" + to_string(params.aggregation_f) + "\"";
    if (params.x_min_m) out += ",\"x_min_m\":" + fmt_fixed(*params.x_min_m);
    if (params.x_max_m) out += ",\"x_max_m\":" + fmt_fixed(*params.x_max_m);
    if (params.y_min_m) out += ",\"y_min_m\":" + fmt_fixed(*params.y_min_m);
    if (params.y_max_m) out += ",\"y_max_m\":" + fmt_fixed(*params.y_max_m);
    if (params.p_min) out += ",\"p_min\":" + fmt_fixed(*params.p_min);
    if (params.p_top_percent) out += ",\"p_top_percent\":" + fmt_fixed(*params.p_top_percent);
    if (params.i_max) out += ",\"i_max\":" + std::to_string(*params.i_max);
    out += "}";
    return out;
}

namespace {

FilterParams filter_params_from_json_obj(const json& j) {
    check_known_keys(j,
                     {"window_w", "aggregation_f", "x_min_m", "x_max_m", "y_min_m", "y_max_m",
                      "p_min", "p_top_percent", "i_max"},
                     "filter params");
    FilterParams params;
    if (j.contains("window_w")) params.window_w = j["window_w"].get<int>();
    if (j.contains("aggregation_f")) {
        params.aggregation_f = aggregation_from_string(j["aggregation_f"].get<std::string>());
    }
    params.x_min_m = opt_number(j, "x_min_m");
    params.x_max_m = opt_number(j, "x_max_m");
    params.y_min_m = opt_number(j, "y_min_m");
    params.y_max_m = opt_number(j, "y_max_m");
    params.p_min = opt_number(j, "p_min");
    params.p_top_percent = opt_number(j, "p_top_percent");
    if (j.contains("i_max") && !j["i_max"].is_null()) params.i_max = j["i_max"].get<int>();
    params.validate();
    return params;
}

}  // namespace

FilterParams filter_params_from_json(const std::string& text) {
    return filter_params_from_json_obj(json::parse(text));
}

void save_filter_params(const FilterParams& params, const std::filesystem::path& path) {
    atomic_write(path, filter_params_to_json(params) + "\n");
}

FilterParams load_filter_params(const std::filesystem::path& path) {
    return filter_params_from_json_obj(parse_json_file(path));
}

// ---------------------------------------------------------------------------
// scene specs
// ---------------------------------------------------------------------------

void save_scene_spec(const SceneSpec& spec, const std::filesystem::path& path) {
    std::string out = "{\n";
    out += "  \"true_distance_m\": " + fmt_fixed(spec.true_distance_m) + ",\n";
    out += "  \"surface_jitter_std_m\": " + fmt_fixed(spec.surface_jitter_std_m) + ",\n";
    out += "  \"subsurface_rate\": " + fmt_fixed(spec.subsurface_rate) + ",\n";
    out += "  \"subsurface_depth_min_m\": " + fmt_fixed(spec.subsurface_depth_min_m) + ",\n";
    out += "  \"subsurface_depth_max_m\": " + fmt_fixed(spec.subsurface_depth_max_m) + ",\n";
    out += "  \"near_noise_rate\": " + fmt_fixed(spec.near_noise_rate) + ",\n";
    out += "  \"near_noise_max_y_m\": " + fmt_fixed(spec.near_noise_max_y_m) + ",\n";
    out += "  \"multipath_rate\": " + fmt_fixed(spec.multipath_rate) + ",\n";
    out += "  \"multipath_extra_min_m\": " + fmt_fixed(spec.multipath_extra_min_m) + ",\n";
    out += "  \"multipath_extra_max_m\": " + fmt_fixed(spec.multipath_extra_max_m) + ",\n";
    out += "  \"tilt_roll_deg\": " + fmt_fixed(spec.tilt_roll_deg) + ",\n";
    out += "  \"tilt_pitch_deg\": " + fmt_fixed(spec.tilt_pitch_deg) + ",\n";
    out += "  \"intensity_profile\": {\n";
    bool first = true;
    for (const auto& [c, prof] : spec.intensity_profile) {
        if (!first) out += ",\n";
        first = false;
        out += "    \"" + std::string(to_string(c)) + "\": {\"mean\": " + fmt_fixed(prof.mean) +
               ", \"std\": " + fmt_fixed(prof.std) + "}";
    }
    out += "\n  }\n}\n";
    atomic_write(path, out);
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    check_known_keys(j,
                     {"true_distance_m", "surface_jitter_std_m", "subsurface_rate",
                      "subsurface_depth_min_m", "subsurface_depth_max_m", "near_noise_rate",
                      "near_noise_max_y_m", "multipath_rate", "multipath_extra_min_m",
                      "multipath_extra_max_m", "tilt_roll_deg", "tilt_pitch_deg",
                      "intensity_profile"},
                     path.string());
    SceneSpec spec;
    auto set = [&](const char* key, double& field) {
        if (auto v = opt_number(j, key)) field = *v;
    };
    set("true_distance_m", spec.true_distance_m);
    set("surface_jitter_std_m", spec.surface_jitter_std_m);
    set("subsurface_rate", spec.subsurface_rate);
    set("subsurface_depth_min_m", spec.subsurface_depth_min_m);
    set("subsurface_depth_max_m", spec.subsurface_depth_max_m);
    set("near_noise_rate", spec.near_noise_rate);
    set("near_noise_max_y_m", spec.near_noise_max_y_m);
    set("multipath_rate", spec.multipath_rate);
    set("multipath_extra_min_m", spec.multipath_extra_min_m);
    set("multipath_extra_max_m", spec.multipath_extra_max_m);
    set("tilt_roll_deg", spec.tilt_roll_deg);
    set("tilt_pitch_deg", spec.tilt_pitch_deg);
    if (j.contains("intensity_profile")) {
        for (const auto& [name, prof] : j["intensity_profile"].items()) {
            const PathClass c = path_class_from_string(name);
            spec.intensity_profile[c] = IntensityProfile{prof.at("mean").get<double>(),
                                                         prof.at("std").get<double>()};
        }
    }
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// parameter grids
// ---------------------------------------------------------------------------

void save_param_grid(const ParamGrid& grid, const std::filesystem::path& path) {
    auto opt_list = [](const std::vector<std::optional<double>>& values) {
        std::string out = "[";
        for (std::size_t i = 0; i < values.size(); ++i) {
            out += values[i] ? fmt_fixed(*values[i]) : "null";
            if (i + 1 < values.size()) out += ", ";
        }
        return out + "]";
    };
    std::string out = "{\n  \"aggregation_f\": [";
    for (std::size_t i = 0; i < grid.aggregation_f.size(); ++i) {
        out += std::string("\"") + to_string(grid.aggregation_f[i]) + "\"";
        if (i + 1 < grid.aggregation_f.size()) out += ", ";
    }
    out += "],\n  \"window_w\": [";
    for (std::size_t i = 0; i < grid.window_w.size(); ++i) {
        out += std::to_string(grid.window_w[i]);
        if (i + 1 < grid.window_w.size()) out += ", ";
    }
    out += "],\n";
    out += "  \"y_min_m\": " + opt_list(grid.y_min_m) + ",\n";
    out += "  \"y_max_m\": " + opt_list(grid.y_max_m) + ",\n";
    out += "  \"x_min_m\": " + opt_list(grid.x_min_m) + ",\n";
    out += "  \"x_max_m\": " + opt_list(grid.x_max_m) + ",\n";
    out += "  \"p_min\": " + opt_list(grid.p_min) + ",\n";
    out += "  \"p_top_percent\": " + opt_list(grid.p_top_percent) + ",\n";
    out += "  \"i_max\": [";
    for (std::size_t i = 0; i < grid.i_max.size(); ++i) {
        out += grid.i_max[i] ? std::to_string(*grid.i_max[i]) : "null";
        if (i + 1 < grid.i_max.size()) out += ", ";
    }
    out += "]\n}\n";
    atomic_write(path, out);
}

ParamGrid load_param_grid(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    check_known_keys(j,
                     {"aggregation_f", "window_w", "y_min_m", "y_max_m", "x_min_m", "x_max_m",
                      "p_min", "p_top_percent", "i_max"},
                     path.string());
    ParamGrid grid;
    if (!j.contains("aggregation_f") || !j.contains("window_w")) {
        throw ParseError(path.string(), 1, "grid needs 'aggregation_f' and 'window_w' axes");
    }
    for (const auto& v : j["aggregation_f"]) {
        grid.aggregation_f.push_back(aggregation_from_string(v.get<std::string>()));
    }
    for (const auto& v : j["window_w"]) grid.window_w.push_back(v.get<int>());
    auto opt_axis = [&](const char* key) {
        std::vector<std::optional<double>> values;
        if (!j.contains(key)) {
            values.push_back(std::nullopt);
            return values;
        }
        for (const auto& v : j[key]) {
            if (v.is_null()) {
                values.push_back(std::nullopt);
            } else {
                values.push_back(v.get<double>());
            }
        }
        return values;
    };
    grid.y_min_m = opt_axis("y_min_m");
    grid.y_max_m = opt_axis("y_max_m");
    grid.x_min_m = opt_axis("x_min_m");
    grid.x_max_m = opt_axis("x_max_m");
    grid.p_min = opt_axis("p_min");
    grid.p_top_percent = opt_axis("p_top_percent");
    if (j.contains("i_max")) {
        for (const auto& v : j["i_max"]) {
            if (v.is_null()) {
                grid.i_max.push_back(std::nullopt);
            } else {
                grid.i_max.push_back(v.get<int>());
            }
        }
    } else {
        grid.i_max.push_back(std::nullopt);
    }
    return grid;
}

// ---------------------------------------------------------------------------
// chirp configs
// ---------------------------------------------------------------------------

void save_chirp_config(const ChirpConfig& config, const std::filesystem::path& path) {
    std::string out = "{\n";
    out += "  \"start_frequency_hz\": " + fmt_fixed(config.start_frequency_hz) + ",\n";
    out += "  \"bandwidth_hz\": " + fmt_fixed(config.bandwidth_hz) + ",\n";
    out += "  \"chirp_duration_s\": " + fmt_sci(config.chirp_duration_s) + ",\n";
    out += "  \"samples_per_chirp\": " + std::to_string(config.samples_per_chirp) + ",\n";
    out += "  \"chirps_per_frame\": " + std::to_string(config.chirps_per_frame) + ",\n";
    out += "  \"frame_rate_hz\": " + fmt_fixed(config.frame_rate_hz) + "\n";
    out += "}\n";
    atomic_write(path, out);
}

ChirpConfig load_chirp_config(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    check_known_keys(j,
                     {"start_frequency_hz", "bandwidth_hz", "chirp_duration_s",
                      "samples_per_chirp", "chirps_per_frame", "frame_rate_hz"},
                     path.string());
    ChirpConfig config;
    if (auto v = opt_number(j, "start_frequency_hz")) config.start_frequency_hz = *v;
    if (auto v = opt_number(j, "bandwidth_hz")) config.bandwidth_hz = *v;
    if (auto v = opt_number(j, "chirp_duration_s")) config.chirp_duration_s = *v;
    if (j.contains("samples_per_chirp")) config.samples_per_chirp = j["samples_per_chirp"].get<int>();
    if (j.contains("chirps_per_frame")) config.chirps_per_frame = j["chirps_per_frame"].get<int>();
    if (auto v = opt_number(j, "frame_rate_hz")) config.frame_rate_hz = *v;
    config.validate();
    return config;
}

// ---------------------------------------------------------------------------
// run estimates
// ---------------------------------------------------------------------------

std::string run_estimate_to_json_line(const RunEstimate& estimate) {
    std::string out = "{\"run_id\":\"" + json_escape(estimate.run_id) + "\",\"run_time_s\":" +
                      fmt_fixed(estimate.run_time_s) + ",\"d_run_m\":" +
                      fmt_fixed(estimate.d_run_m) + ",\"n_windows\":" +
                      std::to_string(estimate.n_windows) + ",\"n_empty_windows\":" +
                      std::to_string(estimate.n_empty_windows) + ",\"params\":" +
                      filter_params_to_json(estimate.params) + ",\"per_window_estimates_m\":[";
    for (std::size_t i = 0; i < estimate.per_window_estimates_m.size(); ++i) {
        out += fmt_fixed(estimate.per_window_estimates_m[i]);
        if (i + 1 < estimate.per_window_estimates_m.size()) out += ",";
    }
    out += "]}";
    return out;
}

void write_run_estimates(const std::vector<RunEstimate>& estimates,
                         const std::filesystem::path& path) {
    std::string out;
    for (const RunEstimate& e : estimates) out += run_estimate_to_json_line(e) + "\n";
    atomic_write(path, out);
}

std::vector<RunEstimate> parse_run_estimates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<RunEstimate> estimates;
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(path.string(), line_number, e.what());
        }
        RunEstimate estimate;
        estimate.run_id = j.at("run_id").get<std::string>();
        estimate.run_time_s = require_number(j, "run_time_s", path, line_number);
        estimate.d_run_m = require_number(j, "d_run_m", path, line_number);
        estimate.n_windows = j.at("n_windows").get<int>();
        estimate.n_empty_windows = j.at("n_empty_windows").get<int>();
        estimate.params = filter_params_from_json_obj(j.at("params"));
        for (const auto& v : j.at("per_window_estimates_m")) {
            estimate.per_window_estimates_m.push_back(v.get<double>());
        }
        estimates.push_back(std::move(estimate));
    }
    return estimates;
}

// ---------------------------------------------------------------------------
// evaluation reports
// ---------------------------------------------------------------------------

namespace {

std::string number_list(const std::vector<double>& values, const char* indent,
                        std::string (*fmt)(double)) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i % 8 == 0) out += std::string("\n") + indent;
        out += fmt(values[i]);
        if (i + 1 < values.size()) out += ", ";
    }
    if (!values.empty()) out += "\n  ";
    out += "]";
    return out;
}

std::string string_list(const std::vector<std::string>& values, const char* indent) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i % 8 == 0) out += std::string("\n") + indent;
        out += "\"" + json_escape(values[i]) + "\"";
        if (i + 1 < values.size()) out += ", ";
    }
    if (!values.empty()) out += "\n  ";
    out += "]";
    return out;
}

}  // namespace

void write_report(const EvaluationReport& report, const std::filesystem::path& path) {
    std::string out = "{\n";
    out += "  \"params\": " + filter_params_to_json(report.params) + ",\n";
    out += "  \"n_runs_scored\": " + std::to_string(report.n_runs_scored) + ",\n";
    out += "  \"mse_m2\": " + fmt_sci(report.mse_m2) + ",\n";
    out += "  \"rmse_m\": " + fmt_sci(report.rmse_m) + ",\n";
    out += "  \"run_ids\": " + string_list(report.run_ids, "    ") + ",\n";
    out += "  \"run_times_s\": " + number_list(report.run_times_s, "    ", &fmt_fixed) + ",\n";
    out += "  \"estimate_deltas_m\": " +
           number_list(report.estimate_deltas_m, "    ", &fmt_fixed) + ",\n";
    out += "  \"groundtruth_deltas_m\": " +
           number_list(report.groundtruth_deltas_m, "    ", &fmt_fixed) + ",\n";
    out += "  \"skipped_runs\": [";
    for (std::size_t i = 0; i < report.skipped_runs.size(); ++i) {
        out += "\n    {\"run_id\": \"" + json_escape(report.skipped_runs[i].run_id) +
               "\", \"reason\": \"" + json_escape(report.skipped_runs[i].reason) + "\"}";
        if (i + 1 < report.skipped_runs.size()) out += ",";
    }
    if (!report.skipped_runs.empty()) out += "\n  ";
    out += "]\n}\n";
    atomic_write(path, out);
}

EvaluationReport parse_report(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    EvaluationReport report;
    report.params = filter_params_from_json_obj(j.at("params"));
    report.n_runs_scored = j.at("n_runs_scored").get<int>();
    report.mse_m2 = require_number(j, "mse_m2", path, 1);
    report.rmse_m = require_number(j, "rmse_m", path, 1);
    for (const auto& v : j.at("run_ids")) report.run_ids.push_back(v.get<std::string>());
    for (const auto& v : j.at("run_times_s")) report.run_times_s.push_back(v.get<double>());
    for (const auto& v : j.at("estimate_deltas_m")) {
        report.estimate_deltas_m.push_back(v.get<double>());
    }
    for (const auto& v : j.at("groundtruth_deltas_m")) {
        report.groundtruth_deltas_m.push_back(v.get<double>());
    }
    for (const auto& v : j.at("skipped_runs")) {
        report.skipped_runs.push_back(
            SkippedRun{v.at("run_id").get<std::string>(), v.at("reason").get<std::string>()});
    }
    return report;
}

// ---------------------------------------------------------------------------
// tuner table, map dump, plot data
// ---------------------------------------------------------------------------

void write_grid_table_csv(const std::vector<GridCellResult>& table,
                          const std::filesystem::path& path) {
    std::string out =
        "aggregation_f,window_w,y_min_m,y_max_m,x_min_m,x_max_m,p_min,p_top_percent,i_max,"
        "n_runs_scored,mse_m2,rmse_m\n";
    for (const GridCellResult& cell : table) {
        const FilterParams& p = cell.params;
        out += std::string(to_string(p.aggregation_f)) + "," + std::to_string(p.window_w) + "," +
               opt_cell(p.y_min_m) + "," + opt_cell(p.y_max_m) + "," + opt_cell(p.x_min_m) + "," +
               opt_cell(p.x_max_m) + "," + opt_cell(p.p_min) + "," + opt_cell(p.p_top_percent) +
               "," + (p.i_max ? std::to_string(*p.i_max) : "") + "," +
               std::to_string(cell.n_runs_scored) + "," + fmt_sci(cell.mse_m2) + "," +
               fmt_sci(cell.rmse_m) + "\n";
    }
    atomic_write(path, out);
}

void write_map_csv(const RangeDopplerMap& map, const std::filesystem::path& path) {
    std::string out;
    out.reserve(static_cast<std::size_t>(map.doppler_bins()) * map.range_bins() * 14);
    for (int d = 0; d < map.doppler_bins(); ++d) {
        for (int r = 0; r < map.range_bins(); ++r) {
            if (r) out += ",";
            out += fmt_sci(std::abs(map.cells.at(d, r)));
        }
        out += "\n";
    }
    atomic_write(path, out);
}

void write_delta_series_csv(const EvaluationReport& report, const std::filesystem::path& path) {
    std::string out = "run_time_s,estimate_delta_m,groundtruth_delta_m\n";
    for (std::size_t i = 0; i < report.run_times_s.size(); ++i) {
        out += fmt_fixed(report.run_times_s[i]) + "," + fmt_fixed(report.estimate_deltas_m[i]) +
               "," + fmt_fixed(report.groundtruth_deltas_m[i]) + "\n";
    }
    atomic_write(path, out);
}

void write_delta_svg(const EvaluationReport& report, const std::filesystem::path& path) {
    const std::size_t n = report.run_times_s.size();
    if (n == 0 || report.estimate_deltas_m.size() != n || report.groundtruth_deltas_m.size() != n) {
        throw std::invalid_argument("write_delta_svg: report has no plottable series");
    }
    const double width = 900, height = 480;
    const double left = 80, right = 880, top = 50, bottom = 430;

    const double t0 = report.run_times_s.front();
    double t_span = report.run_times_s.back() - t0;
    if (!(t_span > 0.0)) t_span = 1.0;
    double v_min = 0.0, v_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v_min = std::min({v_min, report.estimate_deltas_m[i], report.groundtruth_deltas_m[i]});
        v_max = std::max({v_max, report.estimate_deltas_m[i], report.groundtruth_deltas_m[i]});
    }
    if (v_max - v_min < 2e-3) {  // degenerate (flat) series: +/-1 mm window
        v_min -= 1e-3;
        v_max += 1e-3;
    }
    const double pad = 0.05 * (v_max - v_min);
    v_min -= pad;
    v_max += pad;

    auto sx = [&](double t) { return left + (t - t0) / t_span * (right - left); };
    auto sy = [&](double v) { return bottom - (v - v_min) / (v_max - v_min) * (bottom - top); };
    auto polyline = [&](const std::vector<double>& values, const char* color) {
        std::string pts;
        for (std::size_t i = 0; i < n; ++i) {
            pts += fmt_fixed(sx(report.run_times_s[i])) + "," + fmt_fixed(sy(values[i]));
            if (i + 1 < n) pts += " ";
        }
        return "  <polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string((int)width) +
           "\" height=\"" + std::to_string((int)height) + "\">\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "  <text x=\"80\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\">"
           "Water level deltas vs. time</text>\n";
    // axes
    out += "  <line x1=\"" + fmt_fixed(left) + "\" y1=\"" + fmt_fixed(bottom) + "\" x2=\"" +
           fmt_fixed(right) + "\" y2=\"" + fmt_fixed(bottom) + "\" stroke=\"black\"/>\n";
    out += "  <line x1=\"" + fmt_fixed(left) + "\" y1=\"" + fmt_fixed(top) + "\" x2=\"" +
           fmt_fixed(left) + "\" y2=\"" + fmt_fixed(bottom) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = v_min + (v_max - v_min) * i / 4.0;
        const double y = sy(v);
        out += "  <line x1=\"" + fmt_fixed(left - 4) + "\" y1=\"" + fmt_fixed(y) + "\" x2=\"" +
               fmt_fixed(left) + "\" y2=\"" + fmt_fixed(y) + "\" stroke=\"black\"/>\n";
        out += "  <text x=\"8\" y=\"" + fmt_fixed(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_fixed(v) + " m</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double t = t0 + t_span * i / 4.0;
        const double x = sx(t);
        out += "  <line x1=\"" + fmt_fixed(x) + "\" y1=\"" + fmt_fixed(bottom) + "\" x2=\"" +
               fmt_fixed(x) + "\" y2=\"" + fmt_fixed(bottom + 4) + "\" stroke=\"black\"/>\n";
        out += "  <text x=\"" + fmt_fixed(x - 18) + "\" y=\"" + fmt_fixed(bottom + 18) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_fixed((t - t0) / 3600.0) +
               " h</text>\n";
    }
    out += polyline(report.estimate_deltas_m, "#e6a23c");
    out += polyline(report.groundtruth_deltas_m, "#4078c0");
    out += "  <rect x=\"700\" y=\"56\" width=\"12\" height=\"3\" fill=\"#e6a23c\"/>\n";
    out += "  <text x=\"718\" y=\"62\" font-family=\"sans-serif\" font-size=\"12\">"
           "estimated distance delta</text>\n";
    out += "  <rect x=\"700\" y=\"74\" width=\"12\" height=\"3\" fill=\"#4078c0\"/>\n";
    out += "  <text x=\"718\" y=\"80\" font-family=\"sans-serif\" font-size=\"12\">"
           "inverse groundtruth depth delta</text>\n";
    out += "</svg>\n";
    atomic_write(path, out);
}

}  // namespace hydroradar
