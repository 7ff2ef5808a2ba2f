#include "hydroradar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hydroradar/errors.hpp"

namespace hydroradar {

std::optional<double> aggregate(const std::vector<RadarPoint>& points, Aggregation f) {
    if (points.empty()) return std::nullopt;
    switch (f) {
        case Aggregation::min_y: {
            double best = points.front().y_m;
            for (const RadarPoint& pt : points) best = std::min(best, pt.y_m);
            return best;
        }
        case Aggregation::mean_y: {
            double sum = 0.0;
            for (const RadarPoint& pt : points) sum += pt.y_m;
            return sum / static_cast<double>(points.size());
        }
        case Aggregation::median_y: {
            std::vector<double> ys(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) ys[i] = points[i].y_m;
            std::sort(ys.begin(), ys.end());
            const std::size_t mid = ys.size() / 2;
            if (ys.size() % 2 == 1) return ys[mid];
            return 0.5 * (ys[mid - 1] + ys[mid]);
        }
        case Aggregation::argmax_p_y: {
            const RadarPoint* best = &points.front();
            for (const RadarPoint& pt : points) {
                if (pt.p > best->p || (pt.p == best->p && pt.y_m < best->y_m)) best = &pt;
            }
            return best->y_m;
        }
    }
    throw std::invalid_argument("unknown Aggregation");
}

std::optional<double> aggregate(const PointCloudWindow& window, Aggregation f) {
    return aggregate(window.points, f);
}

double mode_estimate(const std::vector<double>& estimates, double bin_width_m) {
    if (!(bin_width_m > 0.0) || !std::isfinite(bin_width_m)) {
        throw std::invalid_argument("mode_estimate: bin_width_m must be positive");
    }
    if (estimates.empty()) {
        throw NoSignalError("mode_estimate: no window produced an estimate");
    }
    // The 1e-9 nudge keeps decimal values that sit exactly on a bin boundary
    // (e.g. 1.13 / 0.001) in their mathematical bin despite fp rounding.
    std::map<long long, int> histogram;
    for (double e : estimates) {
        if (!std::isfinite(e)) {
            throw std::invalid_argument("mode_estimate: estimates must be finite");
        }
        const auto bin = static_cast<long long>(std::floor(e / bin_width_m + 1e-9));
        ++histogram[bin];
    }
    long long best_bin = histogram.begin()->first;
    int best_count = 0;
    for (const auto& [bin, count] : histogram) {  // ascending keys: ties keep the smaller center
        if (count > best_count) {
            best_count = count;
            best_bin = bin;
        }
    }
    return (static_cast<double>(best_bin) + 0.5) * bin_width_m;
}

std::optional<WindowedEstimate> estimate_from_windows(const std::vector<RawWindow>& windows,
                                                      const FilterParams& params,
                                                      double bin_width_m, bool keep_per_window) {
    WindowedEstimate out;
    out.n_windows = static_cast<int>(windows.size());
    std::vector<double> estimates;
    estimates.reserve(windows.size());
    for (const RawWindow& window : windows) {
        const std::vector<RadarPoint> kept = filter_points(window.points, params);
        if (auto value = aggregate(kept, params.aggregation_f)) {
            estimates.push_back(*value);
        } else {
            ++out.n_empty_windows;
        }
    }
    if (estimates.empty()) return std::nullopt;
    out.d_run_m = mode_estimate(estimates, bin_width_m);
    if (keep_per_window) out.per_window_estimates_m = std::move(estimates);
    return out;
}

RunRecord transform_run(const RunRecord& run) {
    RunRecord out = run;
    for (PointCloud& meas : out.measurements) {
        meas.points = project_xy(
            tilt_compensate(std::move(meas.points), run.imu_roll_deg, run.imu_pitch_deg));
    }
    return out;
}

RunEstimate estimate_run(const RunRecord& run, const FilterParams& params, double bin_width_m) {
    params.validate();
    const RunRecord transformed = transform_run(run);
    const std::vector<RawWindow> windows = window_measurements(transformed, params.window_w);
    auto core = estimate_from_windows(windows, params, bin_width_m, /*keep_per_window=*/true);
    if (!core) {
        throw NoSignalError("estimate_run: run '" + run.run_id +
                            "' has no surviving points in any window");
    }
    return RunEstimate{.run_id = run.run_id,
                       .run_time_s = run.start_time_s,
                       .d_run_m = core->d_run_m,
                       .n_windows = core->n_windows,
                       .n_empty_windows = core->n_empty_windows,
                       .params = params,
                       .per_window_estimates_m = std::move(core->per_window_estimates_m)};
}

}  // namespace hydroradar
