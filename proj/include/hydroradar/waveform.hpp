#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hydroradar/types.hpp"

namespace hydroradar {

/// Dense row-major complex matrix; the carrier for sampled frames, range
/// profiles and range-Doppler maps.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> data;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

    std::complex<double>& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    const std::complex<double>& at(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }

    bool operator==(const ComplexMatrix&) const = default;
};

/// FMCW chirp parameters. One chirp sweeps bandwidth_hz upward from
/// start_frequency_hz over chirp_duration_s; a frame is chirps_per_frame
/// consecutive chirps sampled at samples_per_chirp complex baseband ticks.
struct ChirpConfig {
    double start_frequency_hz = 77e9;
    double bandwidth_hz = 4e9;
    double chirp_duration_s = 50e-6;
    int samples_per_chirp = 256;
    int chirps_per_frame = 64;
    double frame_rate_hz = 10.0;

    double wavelength_m() const { return kSpeedOfLight / start_frequency_hz; }
    double slope_hz_per_s() const { return bandwidth_hz / chirp_duration_s; }
    double range_bin_width_m() const { return kSpeedOfLight / (2.0 * bandwidth_hz); }
    double velocity_bin_width_mps() const {
        return wavelength_m() / (2.0 * chirps_per_frame * chirp_duration_s);
    }
    double unambiguous_range_m() const { return samples_per_chirp * range_bin_width_m(); }

    void validate() const;

    bool operator==(const ChirpConfig&) const = default;
};

/// A single scatterer in a synthetic scene. For multipath returns range_m
/// is the apparent (longer) path length, not the geometric height.
struct ScatterTarget {
    double range_m = 0.0;
    double radial_velocity_mps = 0.0;
    double amplitude = 1.0;
    PathClass path_class = PathClass::direct_surface;
};

/// One frame of IF samples: chirps_per_frame x samples_per_chirp.
struct SampledFrame {
    ChirpConfig config;
    ComplexMatrix samples;
    double frame_timestamp_s = 0.0;

    void validate() const;
};

/// Initial IF phase of a return delayed by tau_s: phi0 = 2*pi*f_c*tau,
/// unwrapped. Throws std::domain_error on negative or non-finite input.
double delay_to_phase(double tau_s, double f_c_hz);

/// Range from the unwrapped IF phase: d = lambda*phi0 / (4*pi).
double phase_to_range(double phi0_rad, double wavelength_m);

/// Radial velocity from the chirp-to-chirp phase step:
/// v = lambda*delta_phi / (4*pi*T_c). Positive means receding.
double phase_diff_to_velocity(double delta_phi_rad, double wavelength_m,
                              double chirp_duration_s);

/// Synthesizes the complex-baseband IF frame for a scene of point
/// scatterers. Each target contributes a tone at beat frequency
/// 2*(B/T_c)*d/c with per-chirp phase step 4*pi*v*T_c/lambda, plus
/// additive complex Gaussian noise whose RMS magnitude is noise_std.
/// Deterministic for a fixed seed. Throws RangeAmbiguityError if a target
/// lies beyond config.unambiguous_range_m().
SampledFrame synthesize_if_frame(const ChirpConfig& config,
                                 const std::vector<ScatterTarget>& targets,
                                 double noise_std, std::uint64_t seed,
                                 double frame_timestamp_s = 0.0);

}  // namespace hydroradar
