#include "hydroradar/rdmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "hydroradar/errors.hpp"

namespace hydroradar {

double CfarParams::threshold_factor() const {
    const double n_t = 2.0 * training_cells;
    return n_t * (std::pow(probability_false_alarm, -1.0 / n_t) - 1.0);
}

void CfarParams::validate() const {
    if (training_cells < 1) {
        throw std::invalid_argument("CfarParams: training_cells must be >= 1");
    }
    if (guard_cells < 0) {
        throw std::invalid_argument("CfarParams: guard_cells must be >= 0");
    }
    if (!(probability_false_alarm > 0.0 && probability_false_alarm < 1.0)) {
        throw std::invalid_argument("CfarParams: probability_false_alarm must be in (0, 1)");
    }
    if (!(threshold_factor() > 0.0)) {
        throw std::invalid_argument("CfarParams: threshold factor must be positive");
    }
}

RangeProfiles range_fft(const SampledFrame& frame, Window window) {
    frame.validate();
    const int n_chirps = frame.samples.rows;
    const int n_samples = frame.samples.cols;

    RangeProfiles profiles;
    profiles.config = frame.config;
    profiles.frame_timestamp_s = frame.frame_timestamp_s;
    profiles.data = frame.samples;

    if (window == Window::hann) {
        // Periodic Hann; applied per chirp before the transform.
        std::vector<double> w(static_cast<std::size_t>(n_samples));
        for (int n = 0; n < n_samples; ++n) {
            w[n] = 0.5 * (1.0 - std::cos(2.0 * M_PI * n / n_samples));
        }
        for (int m = 0; m < n_chirps; ++m) {
            for (int n = 0; n < n_samples; ++n) profiles.data.at(m, n) *= w[n];
        }
    }
    for (int m = 0; m < n_chirps; ++m) {
        detail::fft_inplace(&profiles.data.at(m, 0), n_samples);
    }
    return profiles;
}

RangeDopplerMap doppler_fft(const RangeProfiles& profiles) {
    const int n_chirps = profiles.data.rows;
    const int n_bins = profiles.data.cols;
    if (n_chirps < 2) {
        throw DimensionError("doppler_fft: need at least 2 chirps");
    }

    RangeDopplerMap map;
    map.range_bin_width_m = profiles.config.range_bin_width_m();
    map.velocity_bin_width_mps = profiles.config.velocity_bin_width_mps();
    map.frame_timestamp_s = profiles.frame_timestamp_s;
    map.cells = ComplexMatrix(n_chirps, n_bins);

    std::vector<std::complex<double>> column(static_cast<std::size_t>(n_chirps));
    const int shift = n_chirps - n_chirps / 2;  // fftshift offset
    for (int r = 0; r < n_bins; ++r) {
        for (int m = 0; m < n_chirps; ++m) column[m] = profiles.data.at(m, r);
        detail::fft_inplace(column.data(), n_chirps);
        for (int d = 0; d < n_chirps; ++d) {
            map.cells.at(d, r) = column[(d + shift) % n_chirps];
        }
    }
    return map;
}

std::vector<Detection> cfar_detect(const RangeDopplerMap& map, const CfarParams& params) {
    params.validate();
    const int n_doppler = map.doppler_bins();
    const int n_range = map.range_bins();
    const int half_window = params.training_cells + params.guard_cells;
    if (n_range <= 2 * half_window + 1) {
        throw ConfigError("cfar_detect: range axis length " + std::to_string(n_range) +
                          " is too small for training " + std::to_string(params.training_cells) +
                          " + guard " + std::to_string(params.guard_cells) + " per side");
    }
    const double alpha = params.threshold_factor();
    const int n_training = 2 * params.training_cells;

    std::vector<Detection> detections;
    std::vector<double> power(static_cast<std::size_t>(n_range));
    for (int d = 0; d < n_doppler; ++d) {
        for (int r = 0; r < n_range; ++r) power[r] = std::norm(map.cells.at(d, r));
        // Cells without a complete training window on both sides are skipped.
        for (int r = half_window; r < n_range - half_window; ++r) {
            double noise_sum = 0.0;
            for (int k = r - half_window; k < r - params.guard_cells; ++k) noise_sum += power[k];
            for (int k = r + params.guard_cells + 1; k <= r + half_window; ++k) noise_sum += power[k];
            const double threshold = alpha * (noise_sum / n_training);
            if (power[r] > threshold) {
                detections.push_back(Detection{
                    .range_bin = r,
                    .doppler_bin = d,
                    .range_m = map.range_at(r),
                    .velocity_mps = map.velocity_at(d),
                    .magnitude = power[r],
                });
            }
        }
    }
    return detections;  // already ordered by (doppler_bin, range_bin)
}

double refine_range(const RangeDopplerMap& map, const Detection& det) {
    const int r = det.range_bin;
    const int n = map.range_bins();
    if (r <= 0 || r >= n - 1) return map.range_at(r);
    const std::complex<double> left = map.cells.at(det.doppler_bin, r - 1);
    const std::complex<double> center = map.cells.at(det.doppler_bin, r);
    const std::complex<double> right = map.cells.at(det.doppler_bin, r + 1);
    const std::complex<double> denom = 2.0 * center - left - right;
    double delta = 0.0;
    if (std::abs(denom) > 0.0) {
        const double correction = std::tan(M_PI / n) / (M_PI / n);
        delta = correction * ((left - right) / denom).real();
        delta = std::clamp(delta, -0.5, 0.5);
    }
    return (r + delta) * map.range_bin_width_m;
}

PointCloud detections_to_points(const std::vector<Detection>& detections,
                                double timestamp_s,
                                std::span<const double> cross_range_offsets_m) {
    if (!cross_range_offsets_m.empty() && cross_range_offsets_m.size() != detections.size()) {
        throw std::invalid_argument(
            "detections_to_points: cross_range_offsets_m must match detections");
    }
    PointCloud cloud;
    cloud.timestamp_s = timestamp_s;
    if (detections.empty()) return cloud;

    double max_magnitude = 0.0;
    for (const Detection& d : detections) max_magnitude = std::max(max_magnitude, d.magnitude);
    if (!(max_magnitude > 0.0)) {
        throw std::invalid_argument("detections_to_points: detections must have positive magnitude");
    }
    cloud.points.reserve(detections.size());
    for (std::size_t i = 0; i < detections.size(); ++i) {
        cloud.points.push_back(RadarPoint{
            .x_m = cross_range_offsets_m.empty() ? 0.0 : cross_range_offsets_m[i],
            .y_m = detections[i].range_m,
            .z_m = 0.0,
            .p = detections[i].magnitude / max_magnitude,
            .timestamp_s = timestamp_s,
        });
    }
    return cloud;
}

}  // namespace hydroradar
