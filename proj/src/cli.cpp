#include "hydroradar/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hydroradar/errors.hpp"
#include "hydroradar/io.hpp"
#include "hydroradar/rdmap.hpp"

namespace hydroradar {

namespace {

namespace fs = std::filesystem;

/// Relative output paths resolve under $HYDRORADAR_OUT_DIR when it is set.
fs::path resolve_out(const std::string& path) {
    const char* base = std::getenv("HYDRORADAR_OUT_DIR");
    fs::path p(path);
    if (base && *base && p.is_relative()) return fs::path(base) / p;
    return p;
}

SceneSpec load_scene_or_default(const std::string& scene_path) {
    if (scene_path.empty()) return SceneSpec{};
    return load_scene_spec(scene_path);
}

std::string summary_line(const EvaluationReport& report) {
    return "{\"params\":" + filter_params_to_json(report.params) +
           ",\"n_runs_scored\":" + std::to_string(report.n_runs_scored) +
           ",\"mse_m2\":" + fmt_sci(report.mse_m2) + ",\"rmse_m\":" + fmt_sci(report.rmse_m) + "}";
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
    CLI::App app{"FMCW radar water level toolkit: synthetic scenes, level estimation, "
                 "groundtruth evaluation and parameter tuning"};
    app.require_subcommand(1);
    std::function<void()> action;

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "Generate synthetic runs or deployments");
    simulate->require_subcommand(1);

    struct {
        std::string scene, out = "run.jsonl", run_id = "run_000";
        double duration_s = 180.0, rate_hz = 10.0, start_time_s = 0.0;
        std::uint64_t seed = 0;
    } sim_run;
    auto* sim_run_cmd = simulate->add_subcommand("run", "Generate a single run file");
    sim_run_cmd->add_option("--scene", sim_run.scene, "Scene spec JSON (defaults to a clean scene)");
    sim_run_cmd->add_option("--duration-s", sim_run.duration_s, "Run duration, s");
    sim_run_cmd->add_option("--rate-hz", sim_run.rate_hz, "Measurement rate, Hz");
    sim_run_cmd->add_option("--seed", sim_run.seed, "RNG seed");
    sim_run_cmd->add_option("--run-id", sim_run.run_id, "Run identifier");
    sim_run_cmd->add_option("--start-time-s", sim_run.start_time_s, "Epoch start time, s");
    sim_run_cmd->add_option("--out", sim_run.out, "Output run file (JSONL)");
    sim_run_cmd->callback([&]() {
        action = [&]() {
            const SceneSpec spec = load_scene_or_default(sim_run.scene);
            const RunRecord run = synth_run(spec, sim_run.duration_s, sim_run.rate_hz,
                                            sim_run.seed, sim_run.run_id, sim_run.start_time_s);
            const fs::path out = resolve_out(sim_run.out);
            write_run_file(run, out);
            std::cout << out.string() << "\n";
        };
    });

    struct {
        std::string scene, out = "deployment", id = "deployment", kind = "automated";
        int n_runs = 114;
        double run_interval_s = 1800.0, run_duration_s = 180.0, gt_interval_s = 900.0;
        double rate_hz = 10.0, drift_m = 0.0, start_time_s = 0.0;
        std::uint64_t seed = 0;
    } sim_dep;
    auto* sim_dep_cmd = simulate->add_subcommand("deployment", "Generate a multi-run deployment");
    sim_dep_cmd->add_option("--scene", sim_dep.scene, "Scene spec JSON (defaults to a clean scene)");
    sim_dep_cmd->add_option("--n-runs", sim_dep.n_runs, "Number of runs");
    sim_dep_cmd->add_option("--run-interval-s", sim_dep.run_interval_s, "Run cadence, s");
    sim_dep_cmd->add_option("--run-duration-s", sim_dep.run_duration_s, "Run duration, s");
    sim_dep_cmd->add_option("--gt-interval-s", sim_dep.gt_interval_s, "Groundtruth cadence, s");
    sim_dep_cmd->add_option("--rate-hz", sim_dep.rate_hz, "Measurement rate, Hz");
    sim_dep_cmd->add_option("--drift-m", sim_dep.drift_m,
                            "Total linear distance increase over the deployment, m");
    sim_dep_cmd->add_option("--seed", sim_dep.seed, "RNG seed");
    sim_dep_cmd->add_option("--id", sim_dep.id, "Deployment identifier");
    sim_dep_cmd->add_option("--kind", sim_dep.kind, "manual | automated")
        ->check(CLI::IsMember({"manual", "automated"}));
    sim_dep_cmd->add_option("--start-time-s", sim_dep.start_time_s, "Epoch start time, s");
    sim_dep_cmd->add_option("--out", sim_dep.out, "Output directory");
    sim_dep_cmd->callback([&]() {
        action = [&]() {
            const SceneSpec spec = load_scene_or_default(sim_dep.scene);
            const double span =
                (sim_dep.n_runs - 1) * sim_dep.run_interval_s + sim_dep.run_duration_s;
            const double base = spec.true_distance_m;
            const double t0 = sim_dep.start_time_s;
            auto trajectory = [&](double t) {
                return base + sim_dep.drift_m * (t - t0) / span;
            };
            const DeploymentRecord dep = synth_deployment(
                spec, trajectory, sim_dep.n_runs, sim_dep.run_interval_s, sim_dep.run_duration_s,
                sim_dep.gt_interval_s, sim_dep.seed, sim_dep.rate_hz, t0, sim_dep.id,
                sim_dep.kind == "manual" ? DeploymentKind::manual : DeploymentKind::automated);
            const fs::path manifest = write_deployment(dep, resolve_out(sim_dep.out));
            std::cout << manifest.string() << "\n";
        };
    });

    // ---- estimate ----
    struct {
        std::string run, params, out;
        double bin_width_m = kDefaultBinWidthM;
    } est;
    auto* est_cmd = app.add_subcommand("estimate", "Estimate the water level of one run");
    est_cmd->add_option("--run", est.run, "Run file (JSONL)")->required();
    est_cmd->add_option("--params", est.params, "Filter params JSON")->required();
    est_cmd->add_option("--bin-width-m", est.bin_width_m, "Mode quantization bin, m");
    est_cmd->add_option("--out", est.out, "Optional output JSONL file");
    est_cmd->callback([&]() {
        action = [&]() {
            const RunRecord run = parse_run_file(est.run);
            const FilterParams params = load_filter_params(est.params);
            const RunEstimate estimate = estimate_run(run, params, est.bin_width_m);
            std::cout << run_estimate_to_json_line(estimate) << "\n";
            if (!est.out.empty()) write_run_estimates({estimate}, resolve_out(est.out));
        };
    });

    // ---- evaluate ----
    struct {
        std::string manifest, params, out;
        double max_gap_s = kDefaultMaxGapS, bin_width_m = kDefaultBinWidthM;
    } eval;
    auto* eval_cmd =
        app.add_subcommand("evaluate", "Score a deployment against groundtruth deltas");
    eval_cmd->add_option("--manifest", eval.manifest, "Deployment manifest JSON")->required();
    eval_cmd->add_option("--params", eval.params, "Filter params JSON")->required();
    eval_cmd->add_option("--max-gap-s", eval.max_gap_s, "Max timestamp alignment gap, s");
    eval_cmd->add_option("--bin-width-m", eval.bin_width_m, "Mode quantization bin, m");
    eval_cmd->add_option("--out", eval.out, "Optional report JSON file");
    eval_cmd->callback([&]() {
        action = [&]() {
            const DeploymentRecord dep = parse_deployment(eval.manifest);
            const FilterParams params = load_filter_params(eval.params);
            const EvaluationReport report =
                evaluate_deployment(dep, params, eval.max_gap_s, eval.bin_width_m);
            std::cout << summary_line(report) << "\n";
            if (!eval.out.empty()) write_report(report, resolve_out(eval.out));
        };
    });

    // ---- tune ----
    struct {
        std::string manifest, grid, out, table;
        double max_gap_s = kDefaultMaxGapS, bin_width_m = kDefaultBinWidthM;
        int threads = 0;
    } tune;
    auto* tune_cmd = app.add_subcommand("tune", "Grid-search filter params for minimum MSE");
    tune_cmd->add_option("--manifest", tune.manifest, "Deployment manifest JSON")->required();
    tune_cmd->add_option("--grid", tune.grid, "Parameter grid JSON")->required();
    tune_cmd->add_option("--max-gap-s", tune.max_gap_s, "Max timestamp alignment gap, s");
    tune_cmd->add_option("--bin-width-m", tune.bin_width_m, "Mode quantization bin, m");
    tune_cmd->add_option("--threads", tune.threads, "Worker threads (0 = hardware)");
    tune_cmd->add_option("--out", tune.out, "Optional best-cell report JSON file");
    tune_cmd->add_option("--table", tune.table, "Optional full results table CSV");
    tune_cmd->callback([&]() {
        action = [&]() {
            const DeploymentRecord dep = parse_deployment(tune.manifest);
            const ParamGrid grid = load_param_grid(tune.grid);
            const GridSearchResult result =
                grid_search(dep, grid, tune.max_gap_s, tune.bin_width_m, tune.threads);
            std::cout << summary_line(result.best_report) << "\n";
            if (!tune.out.empty()) write_report(result.best_report, resolve_out(tune.out));
            if (!tune.table.empty()) write_grid_table_csv(result.table, resolve_out(tune.table));
        };
    });

    // ---- plot ----
    struct {
        std::string report, out = "deltas.svg", csv;
    } plot;
    auto* plot_cmd = app.add_subcommand("plot", "Render a report's delta series as SVG + CSV");
    plot_cmd->add_option("--report", plot.report, "Report JSON file")->required();
    plot_cmd->add_option("--out", plot.out, "Output SVG file");
    plot_cmd->add_option("--csv", plot.csv, "Optional CSV series file");
    plot_cmd->callback([&]() {
        action = [&]() {
            const EvaluationReport report = parse_report(plot.report);
            const fs::path out = resolve_out(plot.out);
            write_delta_svg(report, out);
            if (!plot.csv.empty()) write_delta_series_csv(report, resolve_out(plot.csv));
            std::cout << out.string() << "\n";
        };
    });

    // ---- rdmap ----
    struct {
        std::string config, out = "rdmap.csv", window = "rectangular";
        std::vector<double> ranges{1.13};
        std::vector<double> velocities;
        std::vector<double> amplitudes;
        double noise_std = 0.0;
        std::uint64_t seed = 0;
        int training = 8, guard = 2;
        double pfa = 1e-3;
    } rd;
    auto* rd_cmd = app.add_subcommand(
        "rdmap", "Synthesize a frame, dump its range-Doppler map CSV and print detections");
    rd_cmd->add_option("--config", rd.config, "Chirp config JSON (defaults to 77 GHz / 4 GHz)");
    rd_cmd->add_option("--target-range", rd.ranges, "Target range(s), m");
    rd_cmd->add_option("--target-velocity", rd.velocities, "Target radial velocity(ies), m/s");
    rd_cmd->add_option("--amplitude", rd.amplitudes, "Target amplitude(s)");
    rd_cmd->add_option("--noise-std", rd.noise_std, "Complex noise RMS magnitude");
    rd_cmd->add_option("--seed", rd.seed, "RNG seed");
    rd_cmd->add_option("--window", rd.window, "rectangular | hann")
        ->check(CLI::IsMember({"rectangular", "hann"}));
    rd_cmd->add_option("--training", rd.training, "CFAR training cells per side");
    rd_cmd->add_option("--guard", rd.guard, "CFAR guard cells per side");
    rd_cmd->add_option("--pfa", rd.pfa, "CFAR probability of false alarm");
    rd_cmd->add_option("--out", rd.out, "Output map CSV");
    rd_cmd->callback([&]() {
        action = [&]() {
            ChirpConfig config;
            if (!rd.config.empty()) config = load_chirp_config(rd.config);
            std::vector<ScatterTarget> targets;
            for (std::size_t i = 0; i < rd.ranges.size(); ++i) {
                targets.push_back(ScatterTarget{
                    .range_m = rd.ranges[i],
                    .radial_velocity_mps = i < rd.velocities.size() ? rd.velocities[i] : 0.0,
                    .amplitude = i < rd.amplitudes.size() ? rd.amplitudes[i] : 1.0,
                    .path_class = PathClass::direct_surface});
            }
            const SampledFrame frame = synthesize_if_frame(config, targets, rd.noise_std, rd.seed);
            const Window window = rd.window == "hann" ? Window::hann : Window::rectangular;
            const RangeDopplerMap map = doppler_fft(range_fft(frame, window));
            write_map_csv(map, resolve_out(rd.out));
            const CfarParams cfar{rd.training, rd.guard, rd.pfa};
            for (const Detection& det : cfar_detect(map, cfar)) {
                std::cout << "{\"range_bin\":" << det.range_bin
                          << ",\"doppler_bin\":" << det.doppler_bin
                          << ",\"range_m\":" << fmt_fixed(det.range_m)
                          << ",\"refined_range_m\":" << fmt_fixed(refine_range(map, det))
                          << ",\"velocity_mps\":" << fmt_fixed(det.velocity_mps)
                          << ",\"magnitude\":" << fmt_sci(det.magnitude) << "}\n";
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        if (action) action();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace hydroradar
