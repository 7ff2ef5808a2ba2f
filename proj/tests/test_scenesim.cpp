#include <cmath>

#include "doctest.h"
#include "hydroradar/filtering.hpp"
#include "hydroradar/rng.hpp"
#include "hydroradar/scenesim.hpp"
#include "test_support.hpp"

using namespace hydroradar;
using hydroradar::testing::noisy_scene;

namespace {

SceneSpec clean_scene(double distance = 1.13) {
    SceneSpec scene;
    scene.true_distance_m = distance;
    for (auto& [c, prof] : scene.intensity_profile) prof.std = 0.0;
    return scene;
}

}  // namespace

TEST_CASE("degenerate scene yields exactly one boresight point per measurement") {
    const SceneSpec scene = clean_scene(1.13);
    const RunRecord run = synth_run(scene, 10.0, 10.0, 42);
    REQUIRE(run.measurements.size() == 100);
    const double p_surface = scene.intensity_profile.at(PathClass::direct_surface).mean;
    for (const PointCloud& meas : run.measurements) {
        REQUIRE(meas.points.size() == 1);
        const RadarPoint& pt = meas.points[0];
        CHECK(pt.x_m == 0.0);
        CHECK(pt.y_m == 1.13);
        CHECK(pt.z_m == 0.0);
        CHECK(pt.p == p_surface);
        CHECK(pt.timestamp_s == meas.timestamp_s);
    }
}

TEST_CASE("three minutes at 10 Hz gives 1800 measurements") {
    const RunRecord run = synth_run(clean_scene(), 180.0, 10.0, 0);
    CHECK(run.measurements.size() == 1800);
    run.validate();  // strictly increasing, cadence within 1%
}

TEST_CASE("run synthesis is deterministic in the seed") {
    const SceneSpec scene = noisy_scene(1.13);
    CHECK(synth_run(scene, 5.0, 10.0, 3) == synth_run(scene, 5.0, 10.0, 3));
    CHECK_FALSE(synth_run(scene, 5.0, 10.0, 3) == synth_run(scene, 5.0, 10.0, 4));
}

TEST_CASE("tilt expresses points in the tilted sensor frame") {
    SceneSpec scene = clean_scene(1.0);
    scene.tilt_pitch_deg = 30.0;
    const RunRecord run = synth_run(scene, 1.0, 10.0, 0);
    const RadarPoint& pt = run.measurements[0].points[0];
    CHECK(pt.x_m == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pt.y_m == doctest::Approx(std::cos(30.0 * M_PI / 180.0)).epsilon(1e-12));
    CHECK(pt.z_m == doctest::Approx(std::sin(30.0 * M_PI / 180.0)).epsilon(1e-12));
    CHECK(run.imu_pitch_deg == 30.0);
    CHECK(run.imu_roll_deg == 0.0);
}

TEST_CASE("noise classes respect their geometric envelopes") {
    SceneSpec scene = clean_scene(1.13);
    scene.multipath_rate = 2.0;
    scene.near_noise_rate = 2.0;
    scene.subsurface_rate = 2.0;
    const RunRecord run = synth_run(scene, 30.0, 10.0, 9);
    int n_multipath = 0, n_near = 0;
    for (const PointCloud& meas : run.measurements) {
        for (const RadarPoint& pt : meas.points) {
            if (pt.y_m == 1.13 && pt.x_m == 0.0) continue;  // surface (jitter 0)
            if (pt.y_m > 1.13 + scene.multipath_extra_min_m - 1e-12) {
                // multipath: apparent path strictly beyond the surface
                CHECK(pt.y_m > scene.true_distance_m);
                ++n_multipath;
            } else if (pt.y_m < scene.near_noise_max_y_m) {
                ++n_near;
            } else {
                // subsurface: below surface within the configured band
                CHECK(pt.y_m >= 1.13 + scene.subsurface_depth_min_m - 1e-12);
                CHECK(pt.y_m <= 1.13 + scene.subsurface_depth_max_m + 1e-12);
            }
        }
    }
    CHECK(n_multipath > 100);
    CHECK(n_near > 100);
}

TEST_CASE("surface return dominates intensity on nearly every measurement") {
    const SceneSpec scene = noisy_scene(1.13, 0.005);
    const RunRecord run = synth_run(scene, 100.0, 10.0, 77);
    int ok = 0;
    for (const PointCloud& meas : run.measurements) {
        const RadarPoint* best = &meas.points[0];
        for (const RadarPoint& pt : meas.points) {
            if (pt.p > best->p) best = &pt;
        }
        if (std::abs(best->y_m - scene.true_distance_m) <= 3.0 * scene.surface_jitter_std_m) ++ok;
    }
    CHECK(static_cast<double>(ok) / static_cast<double>(run.measurements.size()) >= 0.99);
}

TEST_CASE("scene spec validation rejects out-of-contract values") {
    SceneSpec bad = clean_scene();
    bad.true_distance_m = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = clean_scene();
    bad.tilt_pitch_deg = 31.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = clean_scene();
    bad.multipath_extra_min_m = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = clean_scene();
    bad.intensity_profile[PathClass::multipath].mean =
        bad.intensity_profile[PathClass::direct_surface].mean + 0.01;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("deployment cadence and groundtruth mirror the trajectory") {
    const SceneSpec scene = clean_scene(1.13);
    auto trajectory = [](double t) { return 1.13 + 0.03 * t / 203580.0; };
    const DeploymentRecord dep =
        synth_deployment(scene, trajectory, 114, 1800.0, 180.0, 900.0, 5);
    CHECK(dep.runs.size() == 114);
    CHECK(dep.kind == DeploymentKind::automated);
    // ~3 days of cadence
    const double span = dep.runs.back().start_time_s - dep.runs.front().start_time_s;
    CHECK(span == doctest::Approx(113 * 1800.0));
    for (std::size_t k = 0; k < dep.runs.size(); ++k) {
        CHECK(dep.runs[k].start_time_s == doctest::Approx(k * 1800.0));
    }
    // depth(t) + distance(t) = d_ref for every groundtruth sample
    for (const GroundtruthSample& s : dep.groundtruth) {
        CHECK(std::abs(s.depth_m + trajectory(s.timestamp_s) - dep.d_ref_m) <= 1e-12);
    }
    CHECK(dep.groundtruth.size() ==
          static_cast<std::size_t>((113 * 1800 + 180) / 900) + 1);
}

TEST_CASE("constant trajectory gives an all-zero groundtruth delta series") {
    const DeploymentRecord dep = synth_deployment(
        clean_scene(1.0), [](double) { return 1.0; }, 4, 600.0, 60.0, 300.0, 1);
    REQUIRE_FALSE(dep.groundtruth.empty());
    for (const GroundtruthSample& s : dep.groundtruth) {
        CHECK(s.depth_m == dep.groundtruth.front().depth_m);
    }
}

TEST_CASE("dropping level appears as rising distance and falling depth") {
    // Water level drops => distance grows linearly by 3 cm over the deployment.
    auto trajectory = [](double t) { return 1.13 + 0.03 * t / 9000.0; };
    const DeploymentRecord dep =
        synth_deployment(clean_scene(1.13), trajectory, 6, 1800.0, 120.0, 900.0, 2);
    for (std::size_t i = 1; i < dep.groundtruth.size(); ++i) {
        CHECK(dep.groundtruth[i].depth_m < dep.groundtruth[i - 1].depth_m);
    }
    for (std::size_t k = 1; k < dep.runs.size(); ++k) {
        // Noise-free scene: the surface return tracks the trajectory exactly.
        CHECK(dep.runs[k].measurements[0].points[0].y_m >
              dep.runs[k - 1].measurements[0].points[0].y_m);
    }
}

TEST_CASE("non-positive trajectory distances are a domain error") {
    CHECK_THROWS_AS(synth_deployment(
                        clean_scene(), [](double t) { return 1.0 - t; }, 3, 10.0, 5.0, 5.0, 0),
                    std::domain_error);
}

TEST_CASE("record validation enforces cadence and groundtruth rules") {
    RunRecord run = synth_run(clean_scene(), 2.0, 10.0, 0);
    run.validate();
    run.measurements[5].timestamp_s += 0.05;  // breaks 1% cadence and ordering slack
    CHECK_THROWS_AS(run.validate(), std::invalid_argument);

    RunRecord bad_p = synth_run(clean_scene(), 2.0, 10.0, 0);
    bad_p.measurements[0].points[0].p = 1.5;
    CHECK_THROWS_AS(bad_p.validate(), std::invalid_argument);

    DeploymentRecord manual;
    manual.deployment_id = "manual";
    manual.kind = DeploymentKind::manual;
    manual.runs.push_back(synth_run(clean_scene(), 2.0, 10.0, 0));
    CHECK_THROWS_AS(manual.validate(), std::invalid_argument);  // needs groundtruth
    manual.groundtruth.push_back(GroundtruthSample{0.0, 1.0});
    manual.validate();
}

TEST_CASE("per-run streams derive from (seed, run index)") {
    const SceneSpec scene = noisy_scene(1.13);
    const DeploymentRecord dep =
        synth_deployment(scene, [](double) { return 1.13; }, 3, 600.0, 30.0, 300.0, 123);
    for (std::size_t k = 0; k < dep.runs.size(); ++k) {
        const RunRecord expected =
            synth_run(scene, 30.0, 10.0, Rng::derive(123, k), dep.runs[k].run_id,
                      dep.runs[k].start_time_s);
        CHECK(dep.runs[k] == expected);
    }
}
