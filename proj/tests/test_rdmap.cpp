#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "doctest.h"
#include "hydroradar/errors.hpp"
#include "hydroradar/rdmap.hpp"
#include "hydroradar/rng.hpp"
#include "hydroradar/waveform.hpp"

using namespace hydroradar;

namespace {

const ChirpConfig kDefault{};

RangeDopplerMap flat_map(int doppler_bins, int range_bins, double magnitude) {
    RangeDopplerMap map;
    map.cells = ComplexMatrix(doppler_bins, range_bins);
    for (auto& v : map.cells.data) v = {magnitude, 0.0};
    map.range_bin_width_m = kDefault.range_bin_width_m();
    map.velocity_bin_width_mps = kDefault.velocity_bin_width_mps();
    return map;
}

RangeDopplerMap noise_map(int doppler_bins, int range_bins, std::uint64_t seed) {
    RangeDopplerMap map = flat_map(doppler_bins, range_bins, 0.0);
    Rng rng(seed);
    const double s = 1.0 / std::sqrt(2.0);
    for (auto& v : map.cells.data) v = {s * rng.normal(), s * rng.normal()};
    return map;
}

std::set<std::pair<int, int>> detection_set(const std::vector<Detection>& dets) {
    std::set<std::pair<int, int>> bins;
    for (const Detection& d : dets) bins.insert({d.doppler_bin, d.range_bin});
    return bins;
}

const Detection& strongest(const std::vector<Detection>& dets) {
    REQUIRE_FALSE(dets.empty());
    return *std::max_element(dets.begin(), dets.end(),
                             [](const Detection& a, const Detection& b) {
                                 return a.magnitude < b.magnitude;
                             });
}

}  // namespace

TEST_CASE("range FFT of an all-zero frame is all zero") {
    SampledFrame frame;
    frame.config = kDefault;
    frame.samples = ComplexMatrix(kDefault.chirps_per_frame, kDefault.samples_per_chirp);
    const RangeProfiles profiles = range_fft(frame);
    for (const auto& v : profiles.data.data) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("range FFT peak bin for a 1.0 m target") {
    const SampledFrame frame =
        synthesize_if_frame(kDefault, {{.range_m = 1.0, .amplitude = 1.0}}, 0.0, 0);
    const RangeProfiles profiles = range_fft(frame);
    int peak = 0;
    double best = -1.0;
    for (int c = 0; c < profiles.data.cols; ++c) {
        if (std::abs(profiles.data.at(0, c)) > best) {
            best = std::abs(profiles.data.at(0, c));
            peak = c;
        }
    }
    // Bin-mapping oracle: round(1.0 / 0.0375) = 27.
    CHECK(std::abs(peak - 27) <= 1);
}

TEST_CASE("range FFT satisfies Parseval's identity") {
    ChirpConfig small = kDefault;
    small.chirps_per_frame = 8;
    small.samples_per_chirp = 64;
    const SampledFrame frame =
        synthesize_if_frame(small, {{.range_m = 1.3, .amplitude = 0.8}}, 1.0, 21);
    const RangeProfiles profiles = range_fft(frame);
    for (int m = 0; m < small.chirps_per_frame; ++m) {
        double time_energy = 0.0, freq_energy = 0.0;
        for (int n = 0; n < small.samples_per_chirp; ++n) {
            time_energy += std::norm(frame.samples.at(m, n));
            freq_energy += std::norm(profiles.data.at(m, n));
        }
        CHECK(time_energy ==
              doctest::Approx(freq_energy / small.samples_per_chirp).epsilon(1e-9));
    }
}

TEST_CASE("hann window suppresses leakage skirts") {
    // Off-grid target: compare energy two bins away from the peak.
    const double d = 26.5 * kDefault.range_bin_width_m();
    const SampledFrame frame =
        synthesize_if_frame(kDefault, {{.range_m = d, .amplitude = 1.0}}, 0.0, 0);
    const RangeProfiles rect = range_fft(frame, Window::rectangular);
    const RangeProfiles hann = range_fft(frame, Window::hann);
    const double rect_skirt = std::abs(rect.data.at(0, 32)) / std::abs(rect.data.at(0, 26));
    const double hann_skirt = std::abs(hann.data.at(0, 32)) / std::abs(hann.data.at(0, 26));
    CHECK(hann_skirt < rect_skirt);
}

TEST_CASE("static target concentrates in the zero-velocity bin") {
    const SampledFrame frame =
        synthesize_if_frame(kDefault, {{.range_m = 3.0, .amplitude = 1.0}}, 0.0, 0);
    const RangeDopplerMap map = doppler_fft(range_fft(frame));
    const int range_bin = static_cast<int>(std::lround(3.0 / map.range_bin_width_m));
    int best_d = 0;
    double best = -1.0;
    for (int dr = 0; dr < map.doppler_bins(); ++dr) {
        if (std::abs(map.cells.at(dr, range_bin)) > best) {
            best = std::abs(map.cells.at(dr, range_bin));
            best_d = dr;
        }
    }
    CHECK(best_d == map.zero_velocity_bin());
    CHECK(map.velocity_at(best_d) == 0.0);
}

TEST_CASE("per-chirp phase step of pi/2 lands on the Eq-derived Doppler bin") {
    const double lambda = kDefault.wavelength_m();
    const double v = phase_diff_to_velocity(M_PI / 2.0, lambda, kDefault.chirp_duration_s);
    const SampledFrame frame = synthesize_if_frame(
        kDefault, {{.range_m = 2.0, .radial_velocity_mps = v, .amplitude = 1.0}}, 0.0, 0);
    const RangeDopplerMap map = doppler_fft(range_fft(frame));
    const int range_bin = static_cast<int>(std::lround(2.0 / map.range_bin_width_m));
    int best_d = 0;
    double best = -1.0;
    for (int dr = 0; dr < map.doppler_bins(); ++dr) {
        if (std::abs(map.cells.at(dr, range_bin)) > best) {
            best = std::abs(map.cells.at(dr, range_bin));
            best_d = dr;
        }
    }
    const int expected =
        map.zero_velocity_bin() + static_cast<int>(std::lround(v / map.velocity_bin_width_mps));
    CHECK(best_d == expected);
}

TEST_CASE("opposite velocities at the same range resolve to two Doppler peaks") {
    const double v = 5.0;
    const SampledFrame frame = synthesize_if_frame(
        kDefault,
        {{.range_m = 2.0, .radial_velocity_mps = v, .amplitude = 1.0},
         {.range_m = 2.0, .radial_velocity_mps = -v, .amplitude = 1.0}},
        0.0, 0);
    const RangeDopplerMap map = doppler_fft(range_fft(frame));
    const std::vector<Detection> dets = cfar_detect(map, CfarParams{});
    const int range_bin = static_cast<int>(std::lround(2.0 / map.range_bin_width_m));
    int positive = 0, negative = 0;
    for (const Detection& det : dets) {
        if (std::abs(det.range_bin - range_bin) <= 1) {
            if (det.velocity_mps > 1.0) ++positive;
            if (det.velocity_mps < -1.0) ++negative;
        }
    }
    CHECK(positive >= 1);
    CHECK(negative >= 1);
}

TEST_CASE("doppler_fft requires at least two chirps") {
    RangeProfiles profiles;
    profiles.config = kDefault;
    profiles.data = ComplexMatrix(1, 64);
    CHECK_THROWS_AS(doppler_fft(profiles), DimensionError);
}

TEST_CASE("CFAR on a constant map detects nothing") {
    const RangeDopplerMap map = flat_map(4, 64, 1.0);
    CHECK(cfar_detect(map, CfarParams{}).empty());
}

TEST_CASE("CFAR detects exactly the planted cell against a flat floor") {
    RangeDopplerMap map = flat_map(4, 64, 1.0);
    map.cells.at(2, 30) = {10.0, 0.0};  // power 100x the floor
    const CfarParams params{.training_cells = 8, .guard_cells = 2,
                            .probability_false_alarm = 1e-3};
    // Scalar threshold oracle: alpha * mean of 16 unit-power training cells.
    const double alpha = 16.0 * (std::pow(1e-3, -1.0 / 16.0) - 1.0);
    CHECK(params.threshold_factor() == doctest::Approx(alpha).epsilon(1e-12));
    REQUIRE(alpha > 1.0);
    REQUIRE(alpha < 100.0);

    const std::vector<Detection> dets = cfar_detect(map, params);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].doppler_bin == 2);
    CHECK(dets[0].range_bin == 30);
    CHECK(dets[0].magnitude == doctest::Approx(100.0));
    CHECK(dets[0].range_m == doctest::Approx(30 * map.range_bin_width_m));
}

TEST_CASE("CFAR empirical false-alarm rate matches P_fa on Gaussian noise") {
    const int rows = 100, cols = 1040;
    const RangeDopplerMap map = noise_map(rows, cols, 11);
    const CfarParams params{.training_cells = 8, .guard_cells = 2,
                            .probability_false_alarm = 1e-3};
    const std::vector<Detection> dets = cfar_detect(map, params);
    const double eligible = static_cast<double>(rows) * (cols - 20);
    REQUIRE(eligible >= 1e5);
    const double rate = dets.size() / eligible;
    CHECK(rate >= 0.5e-3);
    CHECK(rate <= 2e-3);

    // output ordering contract: (doppler_bin, range_bin) ascending
    for (std::size_t i = 1; i < dets.size(); ++i) {
        const bool ordered = dets[i - 1].doppler_bin < dets[i].doppler_bin ||
                             (dets[i - 1].doppler_bin == dets[i].doppler_bin &&
                              dets[i - 1].range_bin < dets[i].range_bin);
        CHECK(ordered);
    }
    // identical inputs give identical detection lists
    const std::vector<Detection> again = cfar_detect(map, params);
    REQUIRE(again.size() == dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
        CHECK(again[i].range_bin == dets[i].range_bin);
        CHECK(again[i].doppler_bin == dets[i].doppler_bin);
        CHECK(again[i].magnitude == dets[i].magnitude);
    }
}

TEST_CASE("CFAR detections are invariant to magnitude scaling") {
    const RangeDopplerMap base = noise_map(6, 80, 3);
    const auto reference = detection_set(cfar_detect(base, CfarParams{}));
    for (double k : {1e-3, 7.0, 1e4}) {
        RangeDopplerMap scaled = base;
        for (auto& v : scaled.cells.data) v *= k;
        CHECK(detection_set(cfar_detect(scaled, CfarParams{})) == reference);
    }
}

TEST_CASE("stricter P_fa never adds detections") {
    const RangeDopplerMap map = noise_map(8, 120, 17);
    CfarParams loose{.training_cells = 4, .guard_cells = 1, .probability_false_alarm = 5e-2};
    CfarParams strict = loose;
    strict.probability_false_alarm = 1e-3;
    const auto loose_set = detection_set(cfar_detect(map, loose));
    const auto strict_set = detection_set(cfar_detect(map, strict));
    CHECK(std::includes(loose_set.begin(), loose_set.end(), strict_set.begin(), strict_set.end()));
}

TEST_CASE("CFAR works without guard cells") {
    RangeDopplerMap map = flat_map(2, 40, 1.0);
    map.cells.at(1, 20) = {10.0, 0.0};
    const CfarParams params{.training_cells = 4, .guard_cells = 0,
                            .probability_false_alarm = 1e-3};
    const std::vector<Detection> dets = cfar_detect(map, params);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].range_bin == 20);
    CHECK(dets[0].doppler_bin == 1);
}

TEST_CASE("CFAR rejects maps smaller than the window") {
    const RangeDopplerMap map = flat_map(2, 21, 1.0);
    CHECK_THROWS_AS(cfar_detect(map, CfarParams{.training_cells = 8, .guard_cells = 2,
                                                .probability_false_alarm = 1e-3}),
                    ConfigError);
    CHECK_THROWS_AS(cfar_detect(map, CfarParams{.training_cells = 0, .guard_cells = 2,
                                                .probability_false_alarm = 1e-3}),
                    std::invalid_argument);
}

TEST_CASE("detections_to_points normalizes intensity by the frame maximum") {
    CHECK(detections_to_points({}, 1.0).points.empty());

    std::vector<Detection> one{{.range_bin = 30, .doppler_bin = 2, .range_m = 1.13,
                                .velocity_mps = 0.0, .magnitude = 42.0}};
    const PointCloud single = detections_to_points(one, 5.0);
    REQUIRE(single.points.size() == 1);
    CHECK(single.points[0] == RadarPoint{0.0, 1.13, 0.0, 1.0, 5.0});

    std::vector<Detection> two = one;
    two.push_back({.range_bin = 40, .doppler_bin = 2, .range_m = 1.5, .velocity_mps = 0.0,
                   .magnitude = 21.0});
    const PointCloud pair = detections_to_points(two, 5.0);
    REQUIRE(pair.points.size() == 2);
    CHECK(pair.points[0].p == 1.0);
    CHECK(pair.points[1].p == 0.5);

    const std::vector<double> offsets{0.25, -0.5};
    const PointCloud with_x = detections_to_points(two, 5.0, offsets);
    CHECK(with_x.points[0].x_m == 0.25);
    CHECK(with_x.points[1].x_m == -0.5);
    const std::vector<double> wrong{0.25};
    CHECK_THROWS_AS(detections_to_points(two, 5.0, wrong), std::invalid_argument);
}

TEST_CASE("full pipeline recovers single static targets within one bin") {
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        const double d = rng.uniform(0.5, 9.0);
        const double snr_db = 20.0 + rng.uniform(0.0, 10.0);
        const double noise_std = std::pow(10.0, -snr_db / 20.0);
        const SampledFrame frame = synthesize_if_frame(
            kDefault, {{.range_m = d, .amplitude = 1.0}}, noise_std, 100 + i);
        const RangeDopplerMap map = doppler_fft(range_fft(frame));
        const std::vector<Detection> dets = cfar_detect(map, CfarParams{});
        const Detection& best = strongest(dets);
        CHECK(std::abs(best.range_m - d) <= map.range_bin_width_m);
        CHECK(std::abs(refine_range(map, best) - d) <= 0.005);
    }
}
