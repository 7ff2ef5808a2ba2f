#include "hydroradar/waveform.hpp"

#include <cmath>
#include <stdexcept>

#include "hydroradar/errors.hpp"
#include "hydroradar/rng.hpp"

namespace hydroradar {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(name) + " must be finite");
    }
}

}  // namespace

void ChirpConfig::validate() const {
    require_finite(start_frequency_hz, "start_frequency_hz");
    require_finite(bandwidth_hz, "bandwidth_hz");
    require_finite(chirp_duration_s, "chirp_duration_s");
    require_finite(frame_rate_hz, "frame_rate_hz");
    if (!(start_frequency_hz > 0.0)) {
        throw std::invalid_argument("ChirpConfig: start_frequency_hz must be positive");
    }
    if (!(bandwidth_hz > 0.0)) {
        throw std::invalid_argument("ChirpConfig: bandwidth_hz must be positive");
    }
    if (!(chirp_duration_s > 0.0)) {
        throw std::invalid_argument("ChirpConfig: chirp_duration_s must be positive");
    }
    if (samples_per_chirp < 2) {
        throw std::invalid_argument("ChirpConfig: samples_per_chirp must be >= 2");
    }
    if (chirps_per_frame < 1) {
        throw std::invalid_argument("ChirpConfig: chirps_per_frame must be >= 1");
    }
    if (!(frame_rate_hz > 0.0)) {
        throw std::invalid_argument("ChirpConfig: frame_rate_hz must be positive");
    }
}

void SampledFrame::validate() const {
    config.validate();
    if (samples.rows != config.chirps_per_frame || samples.cols != config.samples_per_chirp) {
        throw std::invalid_argument("SampledFrame: sample matrix does not match config");
    }
    for (const auto& v : samples.data) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("SampledFrame: non-finite sample value");
        }
    }
}

double delay_to_phase(double tau_s, double f_c_hz) {
    require_finite(tau_s, "tau_s");
    require_finite(f_c_hz, "f_c_hz");
    if (tau_s < 0.0) throw std::domain_error("delay_to_phase: tau_s must be >= 0");
    if (!(f_c_hz > 0.0)) throw std::domain_error("delay_to_phase: f_c_hz must be > 0");
    return 2.0 * M_PI * f_c_hz * tau_s;
}

double phase_to_range(double phi0_rad, double wavelength_m) {
    require_finite(phi0_rad, "phi0_rad");
    require_finite(wavelength_m, "wavelength_m");
    if (!(wavelength_m > 0.0)) {
        throw std::domain_error("phase_to_range: wavelength_m must be > 0");
    }
    return wavelength_m * phi0_rad / (4.0 * M_PI);
}

double phase_diff_to_velocity(double delta_phi_rad, double wavelength_m,
                              double chirp_duration_s) {
    require_finite(delta_phi_rad, "delta_phi_rad");
    require_finite(wavelength_m, "wavelength_m");
    require_finite(chirp_duration_s, "chirp_duration_s");
    if (!(wavelength_m > 0.0)) {
        throw std::domain_error("phase_diff_to_velocity: wavelength_m must be > 0");
    }
    if (!(chirp_duration_s > 0.0)) {
        throw std::domain_error("phase_diff_to_velocity: chirp_duration_s must be > 0");
    }
    return wavelength_m * delta_phi_rad / (4.0 * M_PI * chirp_duration_s);
}

SampledFrame synthesize_if_frame(const ChirpConfig& config,
                                 const std::vector<ScatterTarget>& targets,
                                 double noise_std, std::uint64_t seed,
                                 double frame_timestamp_s) {
    config.validate();
    if (!std::isfinite(noise_std) || noise_std < 0.0) {
        throw std::domain_error("synthesize_if_frame: noise_std must be finite and >= 0");
    }
    for (const ScatterTarget& t : targets) {
        if (!std::isfinite(t.range_m) || t.range_m < 0.0) {
            throw std::domain_error("synthesize_if_frame: target range must be finite and >= 0");
        }
        if (!std::isfinite(t.amplitude) || t.amplitude < 0.0) {
            throw std::domain_error("synthesize_if_frame: target amplitude must be >= 0");
        }
        require_finite(t.radial_velocity_mps, "radial_velocity_mps");
        if (t.range_m >= config.unambiguous_range_m()) {
            throw RangeAmbiguityError("target at " + std::to_string(t.range_m) +
                                      " m is beyond the unambiguous range of " +
                                      std::to_string(config.unambiguous_range_m()) + " m");
        }
    }

    const int n_chirps = config.chirps_per_frame;
    const int n_samples = config.samples_per_chirp;
    SampledFrame frame;
    frame.config = config;
    frame.frame_timestamp_s = frame_timestamp_s;
    frame.samples = ComplexMatrix(n_chirps, n_samples);

    const double sample_dt = config.chirp_duration_s / n_samples;
    const double lambda = config.wavelength_m();
    for (const ScatterTarget& t : targets) {
        if (t.amplitude == 0.0) continue;
        const double tau = 2.0 * t.range_m / kSpeedOfLight;
        const double beat_hz = config.slope_hz_per_s() * tau;  // 2*(B/T_c)*d/c
        const double phi0 = delay_to_phase(tau, config.start_frequency_hz);
        const double chirp_phase_step =
            4.0 * M_PI * t.radial_velocity_mps * config.chirp_duration_s / lambda;
        for (int m = 0; m < n_chirps; ++m) {
            const double base = phi0 + m * chirp_phase_step;
            for (int n = 0; n < n_samples; ++n) {
                const double phase = base + 2.0 * M_PI * beat_hz * (n * sample_dt);
                frame.samples.at(m, n) +=
                    t.amplitude * std::complex<double>(std::cos(phase), std::sin(phase));
            }
        }
    }

    if (noise_std > 0.0) {
        Rng rng(seed);
        const double per_component = noise_std / std::sqrt(2.0);
        for (int m = 0; m < n_chirps; ++m) {
            for (int n = 0; n < n_samples; ++n) {
                frame.samples.at(m, n) += std::complex<double>(
                    per_component * rng.normal(), per_component * rng.normal());
            }
        }
    }
    return frame;
}

}  // namespace hydroradar
