#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hydroradar/estimator.hpp"
#include "hydroradar/types.hpp"

namespace hydroradar {

struct AlignedPair {
    std::string run_id;
    double run_time_s = 0.0;
    double estimate_distance_m = 0.0;
    double groundtruth_time_s = 0.0;
    double groundtruth_depth_m = 0.0;
    double gap_s = 0.0;
};

struct SkippedRun {
    std::string run_id;
    std::string reason;

    bool operator==(const SkippedRun&) const = default;
};

struct AlignResult {
    std::vector<AlignedPair> pairs;
    std::vector<SkippedRun> skipped;
};

/// Pairs each run estimate with the nearest-in-time groundtruth sample
/// (ties resolve to the earlier sample); runs whose gap exceeds max_gap_s
/// are skipped with a reason. Throws AlignmentError on an empty or
/// unsorted groundtruth series.
AlignResult align(const std::vector<RunEstimate>& estimates,
                  const std::vector<GroundtruthSample>& groundtruth, double max_gap_s);

/// values[i] - values[0]; the first delta is exactly 0. Throws
/// std::domain_error on an empty list.
std::vector<double> to_deltas(const std::vector<double>& values);

/// Mean squared error (1/N) * sum (estimated_i - truth_i)^2. Throws
/// DimensionError on mismatched or zero lengths.
double mse(const std::vector<double>& estimated, const std::vector<double>& truth);

struct EvaluationReport {
    FilterParams params;
    int n_runs_scored = 0;
    double mse_m2 = 0.0;
    double rmse_m = 0.0;
    std::vector<std::string> run_ids;       // scored runs, in run order
    std::vector<double> run_times_s;        // matching run start times
    std::vector<double> estimate_deltas_m;  // distance deltas vs first scored run
    std::vector<double> groundtruth_deltas_m;  // negated depth deltas
    std::vector<SkippedRun> skipped_runs;

    bool operator==(const EvaluationReport&) const = default;
};

/// Estimates every run, aligns against groundtruth, and compares distance
/// deltas with negated depth deltas via MSE. Runs that fail estimation or
/// alignment are reported in skipped_runs. Throws InsufficientDataError
/// when fewer than two runs score.
EvaluationReport evaluate_deployment(const DeploymentRecord& deployment,
                                     const FilterParams& params,
                                     double max_gap_s = kDefaultMaxGapS,
                                     double bin_width_m = kDefaultBinWidthM);

/// Candidate axes for the parameter search. expand() walks the cartesian
/// product in declaration order (aggregation_f slowest, i_max fastest) and
/// drops combinations that violate the FilterParams invariants.
struct ParamGrid {
    std::vector<Aggregation> aggregation_f;
    std::vector<int> window_w;
    std::vector<std::optional<double>> y_min_m;
    std::vector<std::optional<double>> y_max_m;
    std::vector<std::optional<double>> x_min_m;
    std::vector<std::optional<double>> x_max_m;
    std::vector<std::optional<double>> p_min;
    std::vector<std::optional<double>> p_top_percent;
    std::vector<std::optional<int>> i_max;

    std::vector<FilterParams> expand() const;
};

struct GridCellResult {
    FilterParams params;
    int n_runs_scored = 0;
    double mse_m2 = 0.0;
    double rmse_m = 0.0;
};

struct GridSearchResult {
    FilterParams best_params;
    EvaluationReport best_report;
    std::vector<GridCellResult> table;  // valid cells, ascending MSE
    int n_invalid_cells = 0;
};

/// Evaluates every grid cell and returns the MSE minimizer (ties break to
/// the first cell in declaration order). Cells failing estimation on more
/// than half the runs, or scoring fewer than two, are invalid and excluded.
/// Cells are evaluated concurrently; results are merged in declaration
/// order. Throws TuningError when no cell is valid.
GridSearchResult grid_search(const DeploymentRecord& deployment, const ParamGrid& grid,
                             double max_gap_s = kDefaultMaxGapS,
                             double bin_width_m = kDefaultBinWidthM, int n_threads = 0);

}  // namespace hydroradar
