#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hydroradar/types.hpp"

namespace hydroradar {

enum class Aggregation { min_y, mean_y, median_y, argmax_p_y };

const char* to_string(Aggregation f);
Aggregation aggregation_from_string(const std::string& name);

/// Region-of-interest / intensity filter bundle. Unset optionals impose no
/// bound. The x bounds act on |x| (symmetric about the sensor centerline);
/// y >= 0 is enforced unconditionally. p_min (absolute intensity) and
/// p_top_percent (keep the top given percent of intensities within the
/// window) are mutually exclusive; i_max caps the survivors to the given
/// number of highest-intensity points.
struct FilterParams {
    int window_w = 0;  // 0 = no windowing, each measurement stands alone
    Aggregation aggregation_f = Aggregation::argmax_p_y;
    std::optional<double> x_min_m;
    std::optional<double> x_max_m;
    std::optional<double> y_min_m;
    std::optional<double> y_max_m;
    std::optional<double> p_min;
    std::optional<double> p_top_percent;
    std::optional<int> i_max;

    void validate() const;

    bool operator==(const FilterParams&) const = default;
};

/// Unfiltered accumulation of w consecutive measurements. Indices are
/// 1-based; the span records the first/last measurement index covered.
struct RawWindow {
    int index = 1;
    int first_measurement = 1;
    int last_measurement = 1;
    std::vector<RadarPoint> points;
};

/// A window after the filter pass; points satisfy the active predicate.
struct PointCloudWindow {
    int index = 1;
    int first_measurement = 1;
    int last_measurement = 1;
    std::vector<RadarPoint> points;
};

/// Rotates points from the tilted sensor frame back to the gravity-aligned
/// frame (about x by -pitch, then about z by -roll; the exact inverse of
/// scenesim's apply_tilt). Intensities and timestamps are untouched.
/// Throws OutOfToleranceError beyond the validated 30 degree envelope.
std::vector<RadarPoint> tilt_compensate(std::vector<RadarPoint> points,
                                        double roll_deg, double pitch_deg);

/// Collapses z to 0; everything else, including order, is preserved.
std::vector<RadarPoint> project_xy(std::vector<RadarPoint> points);

/// Overlapping windows of size w (N - w + 1 of them); w = 0 yields one
/// singleton window per measurement. Throws WindowError when w > N.
std::vector<RawWindow> window_measurements(const RunRecord& run, int w);

/// Applies the filter predicate to a point set; survivors keep their input
/// order. The i_max cap selects by (p desc, y asc, timestamp asc).
std::vector<RadarPoint> filter_points(const std::vector<RadarPoint>& points,
                                      const FilterParams& params);

PointCloudWindow filter_window(const RawWindow& window, const FilterParams& params);

}  // namespace hydroradar
