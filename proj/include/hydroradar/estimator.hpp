#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hydroradar/filtering.hpp"
#include "hydroradar/types.hpp"

namespace hydroradar {

inline constexpr double kDefaultBinWidthM = 0.001;
inline constexpr double kDefaultMaxGapS = 900.0;

/// A run collapsed to a single distance-to-surface value.
struct RunEstimate {
    std::string run_id;
    double run_time_s = 0.0;
    double d_run_m = 0.0;
    int n_windows = 0;
    int n_empty_windows = 0;
    FilterParams params;
    std::vector<double> per_window_estimates_m;  // diagnostic, non-empty windows only

    bool operator==(const RunEstimate&) const = default;
};

/// Per-window reduction to a representative y value; empty windows yield
/// nothing and are excluded from the mode.
std::optional<double> aggregate(const std::vector<RadarPoint>& points, Aggregation f);
std::optional<double> aggregate(const PointCloudWindow& window, Aggregation f);

/// Most frequent value after quantizing to bins of bin_width_m; returns the
/// center of the winning bin, ties broken toward the smaller center.
/// Throws NoSignalError on an empty estimate list.
double mode_estimate(const std::vector<double>& estimates, double bin_width_m);

/// Shared core of estimate_run and the grid search: reduces pre-built
/// windows under one parameter set. Returns nullopt when every window is
/// empty after filtering.
struct WindowedEstimate {
    double d_run_m = 0.0;
    int n_windows = 0;
    int n_empty_windows = 0;
    std::vector<double> per_window_estimates_m;
};
std::optional<WindowedEstimate> estimate_from_windows(const std::vector<RawWindow>& windows,
                                                      const FilterParams& params,
                                                      double bin_width_m,
                                                      bool keep_per_window = true);

/// Tilt-compensates (from the run's IMU fields) and XY-projects every
/// measurement; the canonical preprocessing shared by all estimation paths.
RunRecord transform_run(const RunRecord& run);

/// Full chain: transform, window, filter, aggregate, mode. Throws
/// NoSignalError when no window survives filtering.
RunEstimate estimate_run(const RunRecord& run, const FilterParams& params,
                         double bin_width_m = kDefaultBinWidthM);

}  // namespace hydroradar
