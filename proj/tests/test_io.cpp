#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "hydroradar/errors.hpp"
#include "hydroradar/io.hpp"
#include "hydroradar/rng.hpp"
#include "hydroradar/scenesim.hpp"
#include "test_support.hpp"

using namespace hydroradar;
using hydroradar::testing::q6;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("hydroradar_io_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int counter;
};
int TempDir::counter = 0;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

RunRecord quantized_run(Rng& rng, int n_measurements) {
    RunRecord run;
    run.run_id = "run_" + std::to_string(static_cast<int>(rng.uniform(0.0, 1000.0)));
    run.sensor_label = "synthetic";
    run.start_time_s = q6(rng.uniform(0.0, 1e6));
    run.measurement_rate_hz = 10.0;
    run.imu_roll_deg = q6(rng.uniform(-30.0, 30.0));
    run.imu_pitch_deg = q6(rng.uniform(-30.0, 30.0));
    for (int i = 0; i < n_measurements; ++i) {
        PointCloud meas;
        meas.timestamp_s = run.start_time_s + i * 0.1;
        const int n_points = 1 + static_cast<int>(rng.uniform(0.0, 4.0));
        for (int j = 0; j < n_points; ++j) {
            meas.points.push_back(RadarPoint{q6(rng.uniform(-3.0, 3.0)),
                                             q6(rng.uniform(0.0, 4.0)),
                                             q6(rng.uniform(-1.0, 1.0)),
                                             q6(rng.uniform(0.0, 1.0)), meas.timestamp_s});
        }
        run.measurements.push_back(meas);
    }
    return run;
}

FilterParams sample_params() {
    FilterParams params;
    params.window_w = 5;
    params.aggregation_f = Aggregation::min_y;
    params.y_min_m = 0.1;
    params.p_top_percent = 75.0;
    params.i_max = 5;
    return params;
}

}  // namespace

TEST_CASE("number formatting is fixed-width and deterministic") {
    CHECK(fmt_fixed(1.13) == "1.130000");
    CHECK(fmt_fixed(0.0) == "0.000000");
    CHECK(fmt_fixed(-0.905) == "-0.905000");
    CHECK(fmt_sci(7.8e-6) == "7.800000e-06");
    CHECK(fmt_sci(1.055e-4) == "1.055000e-04");
}

TEST_CASE("run files round-trip generated records") {
    TempDir dir;
    Rng rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const RunRecord original = quantized_run(rng, 1 + trial % 7);
        const fs::path path = dir.path / "run.jsonl";
        write_run_file(original, path);
        const RunRecord parsed = parse_run_file(path);
        CHECK(parsed == original);
    }
}

TEST_CASE("run file output is byte-deterministic") {
    TempDir dir;
    Rng rng(52);
    const RunRecord run = quantized_run(rng, 5);
    write_run_file(run, dir.path / "a.jsonl");
    write_run_file(run, dir.path / "b.jsonl");
    CHECK(slurp(dir.path / "a.jsonl") == slurp(dir.path / "b.jsonl"));
}

TEST_CASE("synthetic runs survive one write-parse cycle as a fixed point") {
    TempDir dir;
    const RunRecord raw = synth_run(hydroradar::testing::noisy_scene(1.13), 3.0, 10.0, 6);
    write_run_file(raw, dir.path / "raw.jsonl");
    const RunRecord cycled = parse_run_file(dir.path / "raw.jsonl");
    write_run_file(cycled, dir.path / "cycled.jsonl");
    CHECK(slurp(dir.path / "raw.jsonl") == slurp(dir.path / "cycled.jsonl"));
    CHECK(parse_run_file(dir.path / "cycled.jsonl") == cycled);
}

TEST_CASE("malformed run files name the offending line") {
    TempDir dir;
    const fs::path path = dir.path / "bad.jsonl";

    auto write_text = [&](const std::string& text) {
        std::ofstream out(path, std::ios::trunc);
        out << text;
    };

    write_text(
        "{\"run_id\":\"r\",\"sensor_label\":\"s\",\"measurement_rate_hz\":10.0,"
        "\"start_time_s\":0.0,\"imu_roll_deg\":0.0,\"imu_pitch_deg\":0.0}\n"
        "{\"t\":0.0,\"x\":0.0,\"y\":1.0,\"z\":0.0,\"p\":0.5}\n"
        "{\"t\":0.1,\"x\":0.0,\"y\":1.0,\"z\":0.0,\"p\":1.5}\n");
    try {
        parse_run_file(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 3);
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }

    write_text(
        "{\"run_id\":\"r\",\"sensor_label\":\"s\",\"measurement_rate_hz\":10.0,"
        "\"start_time_s\":0.0,\"imu_roll_deg\":0.0,\"imu_pitch_deg\":0.0}\n"
        "{\"t\":0.2,\"x\":0.0,\"y\":1.0,\"z\":0.0,\"p\":0.5}\n"
        "{\"t\":0.1,\"x\":0.0,\"y\":1.0,\"z\":0.0,\"p\":0.5}\n");
    CHECK_THROWS_AS(parse_run_file(path), ParseError);

    write_text("{\"sensor_label\":\"s\",\"measurement_rate_hz\":10.0}\n");
    CHECK_THROWS_AS(parse_run_file(path), ParseError);

    CHECK_THROWS_AS(parse_run_file(dir.path / "missing.jsonl"), IoError);
}

TEST_CASE("a valid header with an empty body is an empty run") {
    TempDir dir;
    RunRecord empty;
    empty.run_id = "empty";
    empty.sensor_label = "synthetic";
    empty.measurement_rate_hz = 10.0;
    const fs::path path = dir.path / "empty.jsonl";
    write_run_file(empty, path);
    const RunRecord parsed = parse_run_file(path);
    CHECK(parsed.measurements.empty());
    CHECK(parsed == empty);
}

TEST_CASE("groundtruth CSV round-trips and validates ordering") {
    TempDir dir;
    Rng rng(53);
    std::vector<GroundtruthSample> series;
    double t = 0.0;
    for (int i = 0; i < 50; ++i) {
        t += q6(rng.uniform(1.0, 100.0));
        series.push_back(GroundtruthSample{q6(t), q6(rng.uniform(0.0, 3.0))});
    }
    const fs::path path = dir.path / "gt.csv";
    write_groundtruth_csv(series, path);
    CHECK(parse_groundtruth_csv(path) == series);

    std::ofstream out(path, std::ios::trunc);
    out << "timestamp_s,depth_m\n10.0,1.0\n5.0,1.1\n";
    out.close();
    CHECK_THROWS_AS(parse_groundtruth_csv(path), ParseError);
}

TEST_CASE("deployments round-trip through manifest plus data files") {
    TempDir dir;
    DeploymentRecord dep = synth_deployment(
        hydroradar::testing::noisy_scene(1.13), [](double) { return 1.13; }, 3, 600.0, 2.0,
        300.0, 7);
    // quantize to the file grid so equality is exact
    {
        TempDir scratch;
        const fs::path m = write_deployment(dep, scratch.path / "dep");
        dep = parse_deployment(m);
    }
    const fs::path manifest_path = write_deployment(dep, dir.path / "dep");
    CHECK(manifest_path.filename() == "manifest.json");
    const DeploymentRecord parsed = parse_deployment(manifest_path);
    CHECK(parsed == dep);

    const DeploymentManifest manifest = parse_manifest(manifest_path);
    CHECK(manifest.deployment_id == dep.deployment_id);
    CHECK(manifest.run_paths.size() == dep.runs.size());
    CHECK(manifest.d_ref_m.has_value());
}

TEST_CASE("filter params serialize with absent keys for unset bounds") {
    const FilterParams params = sample_params();
    const std::string json = filter_params_to_json(params);
    CHECK(json.find("y_min_m") != std::string::npos);
    CHECK(json.find("x_max_m") == std::string::npos);  // unset => absent
    CHECK(filter_params_from_json(json) == params);

    CHECK(filter_params_from_json("{}") == FilterParams{});
    CHECK_THROWS_AS(filter_params_from_json("{\"p_min\":0.2,\"p_top_percent\":50}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(filter_params_from_json("{\"ymin\":0.2}"), std::invalid_argument);
}

TEST_CASE("scene specs, grids and chirp configs round-trip") {
    TempDir dir;
    SceneSpec scene = hydroradar::testing::noisy_scene(1.13, 0.005);
    scene.tilt_pitch_deg = 15.0;
    save_scene_spec(scene, dir.path / "scene.json");
    CHECK(load_scene_spec(dir.path / "scene.json") == scene);

    const ParamGrid grid = hydroradar::testing::default_param_grid();
    save_param_grid(grid, dir.path / "grid.json");
    const ParamGrid loaded = load_param_grid(dir.path / "grid.json");
    CHECK(loaded.expand().size() == grid.expand().size());
    const auto a = grid.expand();
    const auto b = loaded.expand();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    ChirpConfig config;
    config.samples_per_chirp = 128;
    save_chirp_config(config, dir.path / "chirp.json");
    CHECK(load_chirp_config(dir.path / "chirp.json") == config);
}

TEST_CASE("run estimates round-trip as JSON lines") {
    TempDir dir;
    std::vector<RunEstimate> estimates;
    for (int i = 0; i < 3; ++i) {
        RunEstimate est;
        est.run_id = "run_" + std::to_string(i);
        est.run_time_s = q6(i * 1800.0);
        est.d_run_m = q6(1.1305 + i * 0.001);
        est.n_windows = 1796;
        est.n_empty_windows = i;
        est.params = sample_params();
        est.per_window_estimates_m = {q6(1.13), q6(1.131)};
        estimates.push_back(est);
    }
    const fs::path path = dir.path / "estimates.jsonl";
    write_run_estimates(estimates, path);
    CHECK(parse_run_estimates(path) == estimates);
}

TEST_CASE("evaluation reports reach a write-parse fixed point") {
    TempDir dir;
    EvaluationReport report;
    report.params = sample_params();
    report.n_runs_scored = 114;
    report.mse_m2 = 7.8e-6;
    report.rmse_m = 2.792848e-3;
    report.run_ids = {"run_000", "run_001", "run_002"};
    report.run_times_s = {0.0, 1800.0, 3600.0};
    report.estimate_deltas_m = {0.0, 0.001, 0.002};
    report.groundtruth_deltas_m = {0.0, 0.001, 0.0025};
    report.skipped_runs = {{"run_003", "no surviving points"}};

    const fs::path path = dir.path / "report.json";
    write_report(report, path);
    const EvaluationReport cycled = parse_report(path);
    write_report(cycled, dir.path / "report2.json");
    CHECK(slurp(path) == slurp(dir.path / "report2.json"));
    CHECK(parse_report(dir.path / "report2.json") == cycled);
    CHECK(cycled.mse_m2 == 7.8e-6);
}

TEST_CASE("tuner tables render error metrics in scientific notation") {
    TempDir dir;
    GridCellResult iwr;
    iwr.params.window_w = 5;
    iwr.params.aggregation_f = Aggregation::mean_y;
    iwr.params.x_max_m = 1.0;
    iwr.params.i_max = 25;
    iwr.n_runs_scored = 114;
    iwr.mse_m2 = 7.8e-6;
    iwr.rmse_m = std::sqrt(7.8e-6);
    const fs::path path = dir.path / "table.csv";
    write_grid_table_csv({iwr}, path);
    const std::string text = slurp(path);
    CHECK(text.find("7.800000e-06") != std::string::npos);
    CHECK(text.find("mean_y,5") != std::string::npos);
    CHECK(text.find("aggregation_f,window_w,y_min_m,y_max_m,x_min_m,x_max_m,p_min,"
                    "p_top_percent,i_max,n_runs_scored,mse_m2,rmse_m") == 0);
}

TEST_CASE("delta series CSV and SVG render the report") {
    TempDir dir;
    EvaluationReport report;
    report.params = FilterParams{};
    report.n_runs_scored = 3;
    report.run_ids = {"a", "b", "c"};
    report.run_times_s = {0.0, 600.0, 1200.0};
    report.estimate_deltas_m = {0.0, 0.0, 0.0};
    report.groundtruth_deltas_m = {0.0, 0.0, 0.0};

    write_delta_series_csv(report, dir.path / "series.csv");
    const std::string csv = slurp(dir.path / "series.csv");
    CHECK(csv.find("run_time_s,estimate_delta_m,groundtruth_delta_m") == 0);
    CHECK(csv.find("600.000000,0.000000,0.000000") != std::string::npos);

    write_delta_svg(report, dir.path / "deltas.svg");
    const std::string svg = slurp(dir.path / "deltas.svg");
    CHECK(svg.find("<svg") == 0);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 2);
}
