#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "hydroradar/types.hpp"

namespace hydroradar {

struct IntensityProfile {
    double mean = 0.5;
    double std = 0.1;

    bool operator==(const IntensityProfile&) const = default;
};

/// Point-cloud-level scene model. Every measurement carries one surface
/// return at y ~ Normal(true_distance_m, surface_jitter_std_m) on the
/// boresight, plus Poisson-distributed counts of the three noise classes:
///   subsurface        y in true + [depth_min, depth_max]
///   near_sensor_noise y uniform in [0, near_noise_max_y_m]
///   multipath         y = true + uniform extra path (apparent y > true)
/// Noise-class returns are spread across a +/-45 degree field of view
/// (x uniform in [-y, y]); the surface return sits at x = 0. Intensities
/// are Normal truncated to (0, 1] per class. When tilt is nonzero all
/// positions are rotated into the tilted sensor frame.
struct SceneSpec {
    double true_distance_m = 1.13;
    double surface_jitter_std_m = 0.0;
    double subsurface_rate = 0.0;
    double subsurface_depth_min_m = 0.05;
    double subsurface_depth_max_m = 0.5;
    double near_noise_rate = 0.0;
    double near_noise_max_y_m = 0.3;
    double multipath_rate = 0.0;
    double multipath_extra_min_m = 0.5;
    double multipath_extra_max_m = 2.0;
    std::map<PathClass, IntensityProfile> intensity_profile = default_intensity_profile();
    double tilt_roll_deg = 0.0;
    double tilt_pitch_deg = 0.0;

    static std::map<PathClass, IntensityProfile> default_intensity_profile();

    /// Throws std::invalid_argument if rates are negative, tilt exceeds the
    /// 30 degree envelope, the multipath extra path is not strictly
    /// positive, or the surface class does not dominate every other class's
    /// mean intensity.
    void validate() const;

    bool operator==(const SceneSpec&) const = default;
};

/// Rotates gravity-frame positions into the tilted sensor frame
/// (Rx(pitch) * Rz(roll)); filtering::tilt_compensate is its exact inverse.
RadarPoint apply_tilt(const RadarPoint& point, double roll_deg, double pitch_deg);

/// Generates one run: round(duration_s * rate_hz) measurements at fixed
/// cadence. Deterministic for a fixed seed.
RunRecord synth_run(const SceneSpec& spec, double duration_s, double rate_hz,
                    std::uint64_t seed, const std::string& run_id = "run_000",
                    double start_time_s = 0.0,
                    const std::string& sensor_label = "synthetic");

/// Generates a multi-run deployment. Each run's true distance is sampled
/// from level_trajectory at the run's start time; the groundtruth depth
/// series is the exact mirror depth(t) = d_ref - distance(t), with
/// d_ref = distance(start) + initial_depth_m. Per-run RNG streams are
/// derived from (seed, run index). Throws std::domain_error if the
/// trajectory returns a non-positive distance.
DeploymentRecord synth_deployment(
    const SceneSpec& base_spec, const std::function<double(double)>& level_trajectory,
    int n_runs, double run_interval_s, double run_duration_s,
    double groundtruth_interval_s, std::uint64_t seed,
    double measurement_rate_hz = 10.0, double start_time_s = 0.0,
    const std::string& deployment_id = "deployment",
    DeploymentKind kind = DeploymentKind::automated, double initial_depth_m = 1.0);

}  // namespace hydroradar
