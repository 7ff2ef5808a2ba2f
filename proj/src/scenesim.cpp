#include "hydroradar/scenesim.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hydroradar/rng.hpp"

namespace hydroradar {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

double intensity_for(Rng& rng, const SceneSpec& spec, PathClass c) {
    const IntensityProfile& prof = spec.intensity_profile.at(c);
    return rng.truncated_normal(prof.mean, prof.std, 0.0, 1.0);
}

std::string run_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run_%03d", index);
    return buf;
}

}  // namespace

std::map<PathClass, IntensityProfile> SceneSpec::default_intensity_profile() {
    return {
        {PathClass::direct_surface, {0.85, 0.05}},
        {PathClass::subsurface, {0.45, 0.10}},
        {PathClass::near_sensor_noise, {0.30, 0.10}},
        {PathClass::multipath, {0.50, 0.12}},
    };
}

void SceneSpec::validate() const {
    if (!(true_distance_m > 0.0) || !std::isfinite(true_distance_m)) {
        throw std::invalid_argument("SceneSpec: true_distance_m must be positive");
    }
    if (surface_jitter_std_m < 0.0 || subsurface_rate < 0.0 || near_noise_rate < 0.0 ||
        multipath_rate < 0.0) {
        throw std::invalid_argument("SceneSpec: rates and jitter must be >= 0");
    }
    if (std::abs(tilt_roll_deg) > 30.0 || std::abs(tilt_pitch_deg) > 30.0) {
        throw std::invalid_argument("SceneSpec: tilt components must lie within +/-30 degrees");
    }
    if (!(multipath_extra_min_m > 0.0) || multipath_extra_max_m < multipath_extra_min_m) {
        throw std::invalid_argument("SceneSpec: multipath extra path must be strictly positive");
    }
    if (subsurface_depth_min_m < 0.0 || subsurface_depth_max_m < subsurface_depth_min_m) {
        throw std::invalid_argument("SceneSpec: subsurface depth interval is invalid");
    }
    if (!(near_noise_max_y_m > 0.0)) {
        throw std::invalid_argument("SceneSpec: near_noise_max_y_m must be positive");
    }
    for (PathClass c : {PathClass::direct_surface, PathClass::subsurface,
                        PathClass::near_sensor_noise, PathClass::multipath}) {
        if (!intensity_profile.count(c)) {
            throw std::invalid_argument(std::string("SceneSpec: intensity profile missing class ") +
                                        to_string(c));
        }
    }
    const double surface_mean = intensity_profile.at(PathClass::direct_surface).mean;
    for (const auto& [c, prof] : intensity_profile) {
        if (c != PathClass::direct_surface && !(surface_mean > prof.mean)) {
            throw std::invalid_argument(
                "SceneSpec: surface mean intensity must exceed every other class mean");
        }
    }
}

RadarPoint apply_tilt(const RadarPoint& point, double roll_deg, double pitch_deg) {
    const double r = roll_deg * kDegToRad;
    const double p = pitch_deg * kDegToRad;
    // Rz(roll), then Rx(pitch).
    const double x1 = std::cos(r) * point.x_m - std::sin(r) * point.y_m;
    const double y1 = std::sin(r) * point.x_m + std::cos(r) * point.y_m;
    const double z1 = point.z_m;
    RadarPoint out = point;
    out.x_m = x1;
    out.y_m = std::cos(p) * y1 - std::sin(p) * z1;
    out.z_m = std::sin(p) * y1 + std::cos(p) * z1;
    return out;
}

RunRecord synth_run(const SceneSpec& spec, double duration_s, double rate_hz,
                    std::uint64_t seed, const std::string& run_id, double start_time_s,
                    const std::string& sensor_label) {
    spec.validate();
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw std::invalid_argument("synth_run: duration_s must be positive");
    }
    if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
        throw std::invalid_argument("synth_run: rate_hz must be positive");
    }
    const long long n = std::max(1LL, std::llround(duration_s * rate_hz));
    const bool tilted = spec.tilt_roll_deg != 0.0 || spec.tilt_pitch_deg != 0.0;

    RunRecord run;
    run.run_id = run_id;
    run.sensor_label = sensor_label;
    run.start_time_s = start_time_s;
    run.measurement_rate_hz = rate_hz;
    run.imu_roll_deg = spec.tilt_roll_deg;
    run.imu_pitch_deg = spec.tilt_pitch_deg;
    run.measurements.reserve(static_cast<std::size_t>(n));

    Rng rng(seed);
    for (long long i = 0; i < n; ++i) {
        PointCloud meas;
        meas.timestamp_s = start_time_s + static_cast<double>(i) / rate_hz;

        auto add = [&](double x, double y, PathClass c) {
            meas.points.push_back(RadarPoint{
                .x_m = x, .y_m = y, .z_m = 0.0,
                .p = intensity_for(rng, spec, c),
                .timestamp_s = meas.timestamp_s,
            });
        };

        add(0.0, rng.normal(spec.true_distance_m, spec.surface_jitter_std_m),
            PathClass::direct_surface);

        const int n_sub = rng.poisson(spec.subsurface_rate);
        for (int k = 0; k < n_sub; ++k) {
            const double y = spec.true_distance_m +
                             rng.uniform(spec.subsurface_depth_min_m, spec.subsurface_depth_max_m);
            add(rng.uniform(-y, y), y, PathClass::subsurface);
        }
        const int n_near = rng.poisson(spec.near_noise_rate);
        for (int k = 0; k < n_near; ++k) {
            const double y = rng.uniform(0.0, spec.near_noise_max_y_m);
            add(rng.uniform(-y, y), y, PathClass::near_sensor_noise);
        }
        const int n_multi = rng.poisson(spec.multipath_rate);
        for (int k = 0; k < n_multi; ++k) {
            const double y = spec.true_distance_m +
                             rng.uniform(spec.multipath_extra_min_m, spec.multipath_extra_max_m);
            add(rng.uniform(-y, y), y, PathClass::multipath);
        }

        if (tilted) {
            for (RadarPoint& pt : meas.points) {
                pt = apply_tilt(pt, spec.tilt_roll_deg, spec.tilt_pitch_deg);
            }
        }
        run.measurements.push_back(std::move(meas));
    }
    return run;
}

DeploymentRecord synth_deployment(const SceneSpec& base_spec,
                                  const std::function<double(double)>& level_trajectory,
                                  int n_runs, double run_interval_s, double run_duration_s,
                                  double groundtruth_interval_s, std::uint64_t seed,
                                  double measurement_rate_hz, double start_time_s,
                                  const std::string& deployment_id, DeploymentKind kind,
                                  double initial_depth_m) {
    base_spec.validate();
    if (n_runs < 1) throw std::invalid_argument("synth_deployment: n_runs must be >= 1");
    if (!(run_interval_s > 0.0) || !(run_duration_s > 0.0) || !(groundtruth_interval_s > 0.0)) {
        throw std::invalid_argument("synth_deployment: intervals must be positive");
    }
    if (!level_trajectory) {
        throw std::invalid_argument("synth_deployment: level_trajectory must be callable");
    }

    auto distance_at = [&](double t) {
        const double d = level_trajectory(t);
        if (!std::isfinite(d) || !(d > 0.0)) {
            throw std::domain_error("synth_deployment: trajectory returned non-positive distance at t=" +
                                    std::to_string(t));
        }
        return d;
    };

    DeploymentRecord deployment;
    deployment.deployment_id = deployment_id;
    deployment.kind = kind;
    deployment.d_ref_m = distance_at(start_time_s) + initial_depth_m;
    deployment.runs.reserve(static_cast<std::size_t>(n_runs));
    for (int k = 0; k < n_runs; ++k) {
        const double t_k = start_time_s + k * run_interval_s;
        SceneSpec spec = base_spec;
        spec.true_distance_m = distance_at(t_k);
        deployment.runs.push_back(synth_run(spec, run_duration_s, measurement_rate_hz,
                                            Rng::derive(seed, static_cast<std::uint64_t>(k)),
                                            run_name(k), t_k));
    }

    const double end_time = start_time_s + (n_runs - 1) * run_interval_s + run_duration_s;
    for (double t = start_time_s; t <= end_time; t += groundtruth_interval_s) {
        deployment.groundtruth.push_back(
            GroundtruthSample{t, deployment.d_ref_m - distance_at(t)});
    }
    deployment.validate();
    return deployment;
}

}  // namespace hydroradar
