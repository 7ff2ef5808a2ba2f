#include "hydroradar/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hydroradar/errors.hpp"

namespace hydroradar {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kMaxTiltDeg = 30.0;
}  // namespace

const char* to_string(Aggregation f) {
    switch (f) {
        case Aggregation::min_y: return "min_y";
        case Aggregation::mean_y: return "mean_y";
        case Aggregation::median_y: return "median_y";
        case Aggregation::argmax_p_y: return "argmax_p_y";
    }
    throw std::invalid_argument("unknown Aggregation");
}

Aggregation aggregation_from_string(const std::string& name) {
    if (name == "min_y") return Aggregation::min_y;
    if (name == "mean_y") return Aggregation::mean_y;
    if (name == "median_y") return Aggregation::median_y;
    if (name == "argmax_p_y") return Aggregation::argmax_p_y;
    throw std::invalid_argument("unknown aggregation function '" + name + "'");
}

void FilterParams::validate() const {
    if (window_w < 0) {
        throw std::invalid_argument("FilterParams: window_w must be >= 0");
    }
    if (p_min && p_top_percent) {
        throw std::invalid_argument("FilterParams: p_min and p_top_percent are mutually exclusive");
    }
    if (x_min_m && x_max_m && *x_min_m > *x_max_m) {
        throw std::invalid_argument("FilterParams: x_min_m must be <= x_max_m");
    }
    if (y_min_m && y_max_m && *y_min_m > *y_max_m) {
        throw std::invalid_argument("FilterParams: y_min_m must be <= y_max_m");
    }
    if (p_min && !(*p_min >= 0.0 && *p_min <= 1.0)) {
        throw std::invalid_argument("FilterParams: p_min must lie in [0, 1]");
    }
    if (p_top_percent && !(*p_top_percent > 0.0 && *p_top_percent <= 100.0)) {
        throw std::invalid_argument("FilterParams: p_top_percent must lie in (0, 100]");
    }
    if (i_max && *i_max < 1) {
        throw std::invalid_argument("FilterParams: i_max must be >= 1 when set");
    }
}

std::vector<RadarPoint> tilt_compensate(std::vector<RadarPoint> points, double roll_deg,
                                        double pitch_deg) {
    if (!std::isfinite(roll_deg) || !std::isfinite(pitch_deg) ||
        std::abs(roll_deg) > kMaxTiltDeg || std::abs(pitch_deg) > kMaxTiltDeg) {
        throw OutOfToleranceError("tilt_compensate: roll/pitch must lie within +/-30 degrees");
    }
    const double r = -roll_deg * kDegToRad;
    const double p = -pitch_deg * kDegToRad;
    // Rx(-pitch), then Rz(-roll): the exact inverse of scenesim's tilt.
    for (RadarPoint& pt : points) {
        const double y1 = std::cos(p) * pt.y_m - std::sin(p) * pt.z_m;
        const double z1 = std::sin(p) * pt.y_m + std::cos(p) * pt.z_m;
        const double x2 = std::cos(r) * pt.x_m - std::sin(r) * y1;
        const double y2 = std::sin(r) * pt.x_m + std::cos(r) * y1;
        pt.x_m = x2;
        pt.y_m = y2;
        pt.z_m = z1;
    }
    return points;
}

std::vector<RadarPoint> project_xy(std::vector<RadarPoint> points) {
    for (RadarPoint& pt : points) pt.z_m = 0.0;
    return points;
}

std::vector<RawWindow> window_measurements(const RunRecord& run, int w) {
    const int n = static_cast<int>(run.measurements.size());
    if (w < 0) throw WindowError("window_measurements: w must be >= 0");
    if (w > n) {
        throw WindowError("window_measurements: w=" + std::to_string(w) + " exceeds the " +
                          std::to_string(n) + " measurements of run '" + run.run_id + "'");
    }
    std::vector<RawWindow> windows;
    if (w == 0) {
        // w = 0: no sliding window, each measurement stands alone.
        windows.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            windows.push_back(RawWindow{.index = i + 1,
                                        .first_measurement = i + 1,
                                        .last_measurement = i + 1,
                                        .points = run.measurements[i].points});
        }
        return windows;
    }
    windows.reserve(static_cast<std::size_t>(n - w + 1));
    for (int i = 0; i + w <= n; ++i) {
        RawWindow window{.index = i + 1,
                         .first_measurement = i + 1,
                         .last_measurement = i + w,
                         .points = {}};
        std::size_t total = 0;
        for (int j = i; j < i + w; ++j) total += run.measurements[j].points.size();
        window.points.reserve(total);
        for (int j = i; j < i + w; ++j) {
            const auto& pts = run.measurements[j].points;
            window.points.insert(window.points.end(), pts.begin(), pts.end());
        }
        windows.push_back(std::move(window));
    }
    return windows;
}

std::vector<RadarPoint> filter_points(const std::vector<RadarPoint>& points,
                                      const FilterParams& params) {
    params.validate();

    double p_threshold = -1.0;  // inactive
    if (params.p_min) {
        p_threshold = *params.p_min;
    } else if (params.p_top_percent && !points.empty()) {
        // Keep intensities at or above the k-th largest, k = ceil(n * q / 100).
        const std::size_t n = points.size();
        auto k = static_cast<std::size_t>(
            std::ceil(static_cast<double>(n) * *params.p_top_percent / 100.0 - 1e-9));
        k = std::clamp<std::size_t>(k, 1, n);
        std::vector<double> ps(n);
        for (std::size_t i = 0; i < n; ++i) ps[i] = points[i].p;
        std::nth_element(ps.begin(), ps.begin() + (k - 1), ps.end(), std::greater<double>());
        p_threshold = ps[k - 1];
    }

    std::vector<RadarPoint> kept;
    kept.reserve(points.size());
    for (const RadarPoint& pt : points) {
        if (!(pt.y_m >= 0.0)) continue;
        const double ax = std::abs(pt.x_m);
        if (params.x_min_m && ax < *params.x_min_m) continue;
        if (params.x_max_m && ax > *params.x_max_m) continue;
        if (params.y_min_m && pt.y_m < *params.y_min_m) continue;
        if (params.y_max_m && pt.y_m > *params.y_max_m) continue;
        if (pt.p < p_threshold) continue;
        kept.push_back(pt);
    }

    if (params.i_max && kept.size() > static_cast<std::size_t>(*params.i_max)) {
        std::vector<std::size_t> order(kept.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (kept[a].p != kept[b].p) return kept[a].p > kept[b].p;
            if (kept[a].y_m != kept[b].y_m) return kept[a].y_m < kept[b].y_m;
            return kept[a].timestamp_s < kept[b].timestamp_s;
        });
        std::vector<char> selected(kept.size(), 0);
        for (int i = 0; i < *params.i_max; ++i) selected[order[i]] = 1;
        std::vector<RadarPoint> capped;
        capped.reserve(static_cast<std::size_t>(*params.i_max));
        for (std::size_t i = 0; i < kept.size(); ++i) {
            if (selected[i]) capped.push_back(kept[i]);
        }
        kept = std::move(capped);
    }
    return kept;
}

PointCloudWindow filter_window(const RawWindow& window, const FilterParams& params) {
    return PointCloudWindow{.index = window.index,
                            .first_measurement = window.first_measurement,
                            .last_measurement = window.last_measurement,
                            .points = filter_points(window.points, params)};
}

}  // namespace hydroradar
