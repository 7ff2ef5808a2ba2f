#include "hydroradar/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "hydroradar/errors.hpp"

namespace hydroradar {

AlignResult align(const std::vector<RunEstimate>& estimates,
                  const std::vector<GroundtruthSample>& groundtruth, double max_gap_s) {
    if (groundtruth.empty()) {
        throw AlignmentError("align: groundtruth series is empty");
    }
    if (!std::is_sorted(groundtruth.begin(), groundtruth.end(),
                        [](const GroundtruthSample& a, const GroundtruthSample& b) {
                            return a.timestamp_s < b.timestamp_s;
                        })) {
        throw AlignmentError("align: groundtruth timestamps must be sorted");
    }
    if (!(max_gap_s >= 0.0)) {
        throw std::invalid_argument("align: max_gap_s must be >= 0");
    }

    AlignResult result;
    for (const RunEstimate& est : estimates) {
        auto upper = std::lower_bound(groundtruth.begin(), groundtruth.end(), est.run_time_s,
                                      [](const GroundtruthSample& s, double t) {
                                          return s.timestamp_s < t;
                                      });
        const GroundtruthSample* nearest = nullptr;
        if (upper == groundtruth.end()) {
            nearest = &groundtruth.back();
        } else if (upper == groundtruth.begin()) {
            nearest = &*upper;
        } else {
            const GroundtruthSample& before = *(upper - 1);
            const GroundtruthSample& after = *upper;
            // Equidistant samples resolve to the earlier one.
            nearest = (est.run_time_s - before.timestamp_s <= after.timestamp_s - est.run_time_s)
                          ? &before
                          : &after;
        }
        const double gap = std::abs(est.run_time_s - nearest->timestamp_s);
        if (gap > max_gap_s) {
            result.skipped.push_back(
                SkippedRun{est.run_id, "nearest groundtruth sample is " + std::to_string(gap) +
                                           " s away (max gap " + std::to_string(max_gap_s) + " s)"});
            continue;
        }
        result.pairs.push_back(AlignedPair{.run_id = est.run_id,
                                           .run_time_s = est.run_time_s,
                                           .estimate_distance_m = est.d_run_m,
                                           .groundtruth_time_s = nearest->timestamp_s,
                                           .groundtruth_depth_m = nearest->depth_m,
                                           .gap_s = gap});
    }
    return result;
}

std::vector<double> to_deltas(const std::vector<double>& values) {
    if (values.empty()) throw std::domain_error("to_deltas: empty value list");
    std::vector<double> deltas(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) deltas[i] = values[i] - values[0];
    return deltas;
}

double mse(const std::vector<double>& estimated, const std::vector<double>& truth) {
    if (estimated.size() != truth.size() || estimated.empty()) {
        throw DimensionError("mse: lists must have equal nonzero lengths");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < estimated.size(); ++i) {
        const double diff = estimated[i] - truth[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(estimated.size());
}

namespace {

struct ScoredDeployment {
    std::vector<AlignedPair> pairs;
    std::vector<SkippedRun> skipped;
};

EvaluationReport report_from_pairs(const FilterParams& params, ScoredDeployment scored) {
    if (scored.pairs.size() < 2) {
        throw InsufficientDataError("evaluate_deployment: fewer than 2 scored runs (" +
                                    std::to_string(scored.pairs.size()) + ")");
    }
    std::vector<double> distances, depths;
    distances.reserve(scored.pairs.size());
    depths.reserve(scored.pairs.size());
    for (const AlignedPair& pair : scored.pairs) {
        distances.push_back(pair.estimate_distance_m);
        depths.push_back(pair.groundtruth_depth_m);
    }
    EvaluationReport report;
    report.params = params;
    report.n_runs_scored = static_cast<int>(scored.pairs.size());
    report.estimate_deltas_m = to_deltas(distances);
    // Depth varies inversely with distance; negating its deltas puts both
    // series in distance terms without needing the absolute offset.
    report.groundtruth_deltas_m = to_deltas(depths);
    for (double& d : report.groundtruth_deltas_m) d = -d;
    report.mse_m2 = mse(report.estimate_deltas_m, report.groundtruth_deltas_m);
    report.rmse_m = std::sqrt(report.mse_m2);
    for (const AlignedPair& pair : scored.pairs) {
        report.run_ids.push_back(pair.run_id);
        report.run_times_s.push_back(pair.run_time_s);
    }
    report.skipped_runs = std::move(scored.skipped);
    return report;
}

}  // namespace

EvaluationReport evaluate_deployment(const DeploymentRecord& deployment,
                                     const FilterParams& params, double max_gap_s,
                                     double bin_width_m) {
    params.validate();
    deployment.validate();
    std::vector<RunEstimate> estimates;
    std::vector<SkippedRun> skipped;
    for (const RunRecord& run : deployment.runs) {
        try {
            estimates.push_back(estimate_run(run, params, bin_width_m));
        } catch (const NoSignalError& e) {
            skipped.push_back(SkippedRun{run.run_id, e.what()});
        } catch (const WindowError& e) {
            skipped.push_back(SkippedRun{run.run_id, e.what()});
        }
    }
    AlignResult aligned = align(estimates, deployment.groundtruth, max_gap_s);
    ScoredDeployment scored{std::move(aligned.pairs), std::move(skipped)};
    scored.skipped.insert(scored.skipped.end(), aligned.skipped.begin(), aligned.skipped.end());
    return report_from_pairs(params, std::move(scored));
}

std::vector<FilterParams> ParamGrid::expand() const {
    std::vector<FilterParams> cells;
    for (Aggregation f : aggregation_f)
        for (int w : window_w)
            for (const auto& ymin : y_min_m)
                for (const auto& ymax : y_max_m)
                    for (const auto& xmin : x_min_m)
                        for (const auto& xmax : x_max_m)
                            for (const auto& pmin : p_min)
                                for (const auto& ptop : p_top_percent)
                                    for (const auto& imax : i_max) {
                                        FilterParams params;
                                        params.aggregation_f = f;
                                        params.window_w = w;
                                        params.y_min_m = ymin;
                                        params.y_max_m = ymax;
                                        params.x_min_m = xmin;
                                        params.x_max_m = xmax;
                                        params.p_min = pmin;
                                        params.p_top_percent = ptop;
                                        params.i_max = imax;
                                        try {
                                            params.validate();
                                        } catch (const std::invalid_argument&) {
                                            continue;  // invariant-violating combination
                                        }
                                        cells.push_back(std::move(params));
                                    }
    return cells;
}

GridSearchResult grid_search(const DeploymentRecord& deployment, const ParamGrid& grid,
                             double max_gap_s, double bin_width_m, int n_threads) {
    deployment.validate();
    if (!(bin_width_m > 0.0) || !std::isfinite(bin_width_m)) {
        throw std::invalid_argument("grid_search: bin_width_m must be positive");
    }
    const std::vector<FilterParams> cells = grid.expand();
    if (cells.empty()) {
        throw TuningError("grid_search: grid expands to no valid parameter combination");
    }
    const std::size_t n_runs = deployment.runs.size();
    const std::size_t n_cells = cells.size();

    // Distinct window sizes so each run is windowed once per size.
    std::vector<int> window_sizes;
    for (const FilterParams& cell : cells) {
        if (std::find(window_sizes.begin(), window_sizes.end(), cell.window_w) ==
            window_sizes.end()) {
            window_sizes.push_back(cell.window_w);
        }
    }

    // d_runs[run][cell]: the per-run estimate, or NaN when estimation failed.
    std::vector<std::vector<double>> d_runs(
        n_runs, std::vector<double>(n_cells, std::numeric_limits<double>::quiet_NaN()));

    unsigned hw = std::thread::hardware_concurrency();
    if (n_threads <= 0) n_threads = static_cast<int>(hw ? hw : 1);
    n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n_threads),
                                                       std::max<std::size_t>(n_runs, 1)));

    std::atomic<std::size_t> next_run{0};
    auto worker = [&]() {
        for (std::size_t run_idx = next_run.fetch_add(1); run_idx < n_runs;
             run_idx = next_run.fetch_add(1)) {
            const RunRecord transformed = transform_run(deployment.runs[run_idx]);
            for (int w : window_sizes) {
                std::vector<RawWindow> windows;
                try {
                    windows = window_measurements(transformed, w);
                } catch (const WindowError&) {
                    continue;  // cells with this w fail for this run
                }
                for (std::size_t cell_idx = 0; cell_idx < n_cells; ++cell_idx) {
                    if (cells[cell_idx].window_w != w) continue;
                    auto outcome = estimate_from_windows(windows, cells[cell_idx], bin_width_m,
                                                         /*keep_per_window=*/false);
                    if (outcome) d_runs[run_idx][cell_idx] = outcome->d_run_m;
                }
            }
        }
    };
    if (n_threads > 1) {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    } else {
        worker();
    }

    GridSearchResult result;
    std::vector<GridCellResult> valid_cells;
    std::size_t best = 0;
    for (std::size_t cell_idx = 0; cell_idx < n_cells; ++cell_idx) {
        std::vector<RunEstimate> estimates;
        std::size_t failed = 0;
        for (std::size_t run_idx = 0; run_idx < n_runs; ++run_idx) {
            const double d = d_runs[run_idx][cell_idx];
            if (std::isnan(d)) {
                ++failed;
                continue;
            }
            const RunRecord& run = deployment.runs[run_idx];
            RunEstimate estimate;
            estimate.run_id = run.run_id;
            estimate.run_time_s = run.start_time_s;
            estimate.d_run_m = d;
            estimate.params = cells[cell_idx];
            estimates.push_back(std::move(estimate));
        }
        if (failed * 2 > n_runs) {
            ++result.n_invalid_cells;
            continue;
        }
        AlignResult aligned = align(estimates, deployment.groundtruth, max_gap_s);
        if (aligned.pairs.size() < 2) {
            ++result.n_invalid_cells;
            continue;
        }
        EvaluationReport report =
            report_from_pairs(cells[cell_idx], ScoredDeployment{std::move(aligned.pairs), {}});
        valid_cells.push_back(GridCellResult{.params = cells[cell_idx],
                                             .n_runs_scored = report.n_runs_scored,
                                             .mse_m2 = report.mse_m2,
                                             .rmse_m = report.rmse_m});
        // Strict comparison: ties keep the earlier cell in declaration order.
        if (valid_cells.size() > 1 && valid_cells.back().mse_m2 < valid_cells[best].mse_m2) {
            best = valid_cells.size() - 1;
        }
    }
    if (valid_cells.empty()) {
        throw TuningError("grid_search: every grid cell was invalid");
    }
    result.best_params = valid_cells[best].params;
    result.best_report = evaluate_deployment(deployment, result.best_params, max_gap_s, bin_width_m);
    std::stable_sort(valid_cells.begin(), valid_cells.end(),
                     [](const GridCellResult& a, const GridCellResult& b) {
                         return a.mse_m2 < b.mse_m2;
                     });
    result.table = std::move(valid_cells);
    return result;
}

}  // namespace hydroradar
