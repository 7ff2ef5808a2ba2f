#include "hydroradar/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hydroradar {

const char* to_string(PathClass c) {
    switch (c) {
        case PathClass::direct_surface: return "direct_surface";
        case PathClass::subsurface: return "subsurface";
        case PathClass::near_sensor_noise: return "near_sensor_noise";
        case PathClass::multipath: return "multipath";
    }
    throw std::invalid_argument("unknown PathClass");
}

const char* to_string(DeploymentKind k) {
    switch (k) {
        case DeploymentKind::manual: return "manual";
        case DeploymentKind::automated: return "automated";
    }
    throw std::invalid_argument("unknown DeploymentKind");
}

void RunRecord::validate() const {
    if (!(measurement_rate_hz > 0.0) || !std::isfinite(measurement_rate_hz)) {
        throw std::invalid_argument("RunRecord: measurement_rate_hz must be positive");
    }
    const double nominal_spacing = 1.0 / measurement_rate_hz;
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < measurements.size(); ++i) {
        const PointCloud& m = measurements[i];
        if (!(m.timestamp_s > prev)) {
            throw std::invalid_argument("RunRecord '" + run_id +
                                        "': measurement timestamps must be strictly increasing");
        }
        if (i > 0) {
            const double spacing = m.timestamp_s - prev;
            if (std::abs(spacing - nominal_spacing) > 0.01 * nominal_spacing) {
                throw std::invalid_argument("RunRecord '" + run_id +
                                            "': measurement spacing deviates from rate by > 1%");
            }
        }
        prev = m.timestamp_s;
        for (const RadarPoint& pt : m.points) {
            if (!std::isfinite(pt.x_m) || !std::isfinite(pt.y_m) || !std::isfinite(pt.z_m)) {
                throw std::invalid_argument("RunRecord '" + run_id +
                                            "': point coordinates must be finite");
            }
            if (!(pt.p >= 0.0 && pt.p <= 1.0)) {
                throw std::invalid_argument("RunRecord '" + run_id +
                                            "': point intensity must lie in [0, 1]");
            }
        }
    }
}

void DeploymentRecord::validate() const {
    double prev_start = -std::numeric_limits<double>::infinity();
    for (const RunRecord& run : runs) {
        if (!(run.start_time_s > prev_start)) {
            throw std::invalid_argument("DeploymentRecord '" + deployment_id +
                                        "': run start times must be strictly increasing");
        }
        prev_start = run.start_time_s;
        run.validate();
    }
    double prev_ts = -std::numeric_limits<double>::infinity();
    for (const GroundtruthSample& s : groundtruth) {
        if (!(s.timestamp_s > prev_ts)) {
            throw std::invalid_argument("DeploymentRecord '" + deployment_id +
                                        "': groundtruth timestamps must be strictly increasing");
        }
        if (!std::isfinite(s.depth_m)) {
            throw std::invalid_argument("DeploymentRecord '" + deployment_id +
                                        "': groundtruth depth must be finite");
        }
        prev_ts = s.timestamp_s;
    }
    if (kind == DeploymentKind::manual && groundtruth.empty()) {
        throw std::invalid_argument("DeploymentRecord '" + deployment_id +
                                    "': manual deployments need at least one groundtruth entry");
    }
}

}  // namespace hydroradar
