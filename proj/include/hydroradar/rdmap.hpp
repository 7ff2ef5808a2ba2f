#pragma once

#include <span>
#include <vector>

#include "hydroradar/waveform.hpp"

namespace hydroradar {

enum class Window { rectangular, hann };

/// Per-chirp range spectra: [chirps x range_bins] with the frame metadata
/// carried along for the Doppler stage.
struct RangeProfiles {
    ComplexMatrix data;
    ChirpConfig config;
    double frame_timestamp_s = 0.0;
};

/// Output of both FFT stages, Doppler-shifted so row 0 is the most
/// negative velocity and the center row is zero velocity.
struct RangeDopplerMap {
    ComplexMatrix cells;  // [doppler_bins x range_bins]
    double range_bin_width_m = 0.0;
    double velocity_bin_width_mps = 0.0;
    double frame_timestamp_s = 0.0;

    int doppler_bins() const { return cells.rows; }
    int range_bins() const { return cells.cols; }
    int zero_velocity_bin() const { return cells.rows / 2; }
    double range_at(int range_bin) const { return range_bin * range_bin_width_m; }
    double velocity_at(int doppler_bin) const {
        return (doppler_bin - zero_velocity_bin()) * velocity_bin_width_mps;
    }
};

/// Cell-averaging CFAR settings; training/guard counts are per side.
struct CfarParams {
    int training_cells = 8;
    int guard_cells = 2;
    double probability_false_alarm = 1e-3;

    /// alpha = N_t * (P_fa^(-1/N_t) - 1) with N_t = 2*training_cells; exact
    /// for exponentially distributed noise power.
    double threshold_factor() const;

    void validate() const;
};

struct Detection {
    int range_bin = 0;
    int doppler_bin = 0;
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double magnitude = 0.0;  // squared cell magnitude (linear power)
};

/// Per-chirp FFT along the sample axis; bin k maps to range k*c/(2B).
RangeProfiles range_fft(const SampledFrame& frame, Window window = Window::rectangular);

/// FFT across chirps per range bin, fftshifted. Throws DimensionError for
/// fewer than two chirps.
RangeDopplerMap doppler_fft(const RangeProfiles& profiles);

/// 1-D CA-CFAR along the range axis, run independently per Doppler bin on
/// squared magnitudes. Cells without a complete training window are never
/// detected. Output is ordered by (doppler_bin, range_bin). Throws
/// ConfigError when the range axis is too short for the window.
std::vector<Detection> cfar_detect(const RangeDopplerMap& map, const CfarParams& params);

/// Sub-bin range refinement: three-point quadratic fit through the complex
/// spectrum around the detection's range bin (Jacobsen estimator with the
/// tan(pi/N)/(pi/N) bias correction).
double refine_range(const RangeDopplerMap& map, const Detection& det);

/// Converts detections to the point-cloud format emitted by the real
/// sensors: y = range, x = optional cross-range offset, z = 0, p = power
/// normalized by the frame's strongest detection.
PointCloud detections_to_points(const std::vector<Detection>& detections,
                                double timestamp_s,
                                std::span<const double> cross_range_offsets_m = {});

}  // namespace hydroradar
