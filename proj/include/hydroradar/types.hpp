#pragma once

#include <string>
#include <vector>

namespace hydroradar {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Propagation class of a radar return (see the scene model in scenesim.hpp).
enum class PathClass {
    direct_surface,
    subsurface,
    near_sensor_noise,
    multipath,
};

const char* to_string(PathClass c);

/// One radar return. y_m is the distance-to-reflection axis; p is the
/// per-frame normalized intensity in [0, 1].
struct RadarPoint {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
    double p = 0.0;
    double timestamp_s = 0.0;

    bool operator==(const RadarPoint&) const = default;
};

/// One measurement: the set of points reported at a single timestamp.
struct PointCloud {
    double timestamp_s = 0.0;
    std::vector<RadarPoint> points;

    bool operator==(const PointCloud&) const = default;
};

/// A continuous recording of a few minutes: ordered measurements plus the
/// sensor metadata needed downstream (IMU attitude, cadence).
struct RunRecord {
    std::string run_id;
    std::string sensor_label;
    double start_time_s = 0.0;
    double measurement_rate_hz = 0.0;
    double imu_roll_deg = 0.0;
    double imu_pitch_deg = 0.0;
    std::vector<PointCloud> measurements;

    bool operator==(const RunRecord&) const = default;

    /// Throws std::invalid_argument on non-monotone timestamps, cadence
    /// deviating from measurement_rate_hz by more than 1%, non-finite
    /// coordinates, or intensities outside [0, 1].
    void validate() const;
};

struct GroundtruthSample {
    double timestamp_s = 0.0;
    double depth_m = 0.0;

    bool operator==(const GroundtruthSample&) const = default;
};

enum class DeploymentKind { manual, automated };

const char* to_string(DeploymentKind k);

/// A field experiment: ordered runs against one water body plus the
/// groundtruth depth series. d_ref_m is the fixed offset between the
/// sensor height and the depth datum, so depth(t) + distance(t) = d_ref_m.
struct DeploymentRecord {
    std::string deployment_id;
    DeploymentKind kind = DeploymentKind::manual;
    std::vector<RunRecord> runs;
    std::vector<GroundtruthSample> groundtruth;
    double d_ref_m = 0.0;

    bool operator==(const DeploymentRecord&) const = default;

    void validate() const;
};

}  // namespace hydroradar
