#include "doctest.h"

#include <cmath>
#include <numbers>

#include "immcam/error.hpp"
#include "immcam/synthesis.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace immcam;

namespace {

const SkeletonLayout kLayout = SkeletonLayout::make_default();

ActorPoseSequence from_frames(std::vector<ActorPoseFrame> frames) { return ActorPoseSequence(std::move(frames), 30.0); }

ActorPoseSequence translating(std::size_t frames, double step) {
  std::vector<ActorPoseFrame> out;
  for (std::size_t t = 0; t < frames; ++t) {
    ActorPoseFrame f = default_rest_pose();
    for (auto& j : f.joints) j[kX] += step * static_cast<double>(t);
    out.push_back(f);
  }
  return from_frames(out);
}

ActorPoseSequence swaying(std::size_t frames) {
  std::vector<ActorPoseFrame> out;
  for (std::size_t t = 0; t < frames; ++t) {
    ActorPoseFrame f = default_rest_pose();
    const double s = 0.15 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 24.0);
    for (std::size_t j = 0; j < f.joints.size(); ++j)
      if (kLayout.region_of(j) == Region::Torso || kLayout.region_of(j) == Region::Head) f.joints[j][kX] += s;
    out.push_back(f);
  }
  return from_frames(out);
}

const CameraPlacement kC0{DofVector::from(0.5, 0.4, 3.5, std::numbers::pi, 0.05, 0.02)};

}  // namespace

TEST_SUITE("synthesis") {

TEST_CASE("static actor gives uniform saliency") {
  const RegionSaliency s = region_saliency(compute_delta(translating(5, 0.0)), kLayout);
  for (double w : s.weights) CHECK(w == doctest::Approx(0.25));
}

TEST_CASE("moving head dominates saliency") {
  std::vector<ActorPoseFrame> frames(6, default_rest_pose());
  for (std::size_t t = 0; t < frames.size(); ++t) frames[t].joints[kLayout.head_index()][kY] += 0.2 * t;
  const RegionSaliency s = region_saliency(compute_delta(from_frames(frames)), kLayout);
  for (Region r : {Region::Arms, Region::Torso, Region::Legs}) CHECK(s[Region::Head] > s[r]);
}

TEST_CASE("softmax of crafted energies") {
  const std::array<double, 4> e{0.2, 0.1, 0.1, 0.1};
  const RegionSaliency s = softmax_saliency(e, 1.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(s.weights[k] == doctest::Approx(oracle::softmax_weight(e, k, 1.0)).epsilon(1e-14));
    sum += s.weights[k];
  }
  CHECK(sum == doctest::Approx(1.0));
  const RegionSaliency p = softmax_saliency({0.1, 0.2, 0.1, 0.1}, 1.0);
  CHECK(p.weights[1] == doctest::Approx(s.weights[0]));
}

TEST_CASE("region energies from crafted deltas") {
  std::vector<ActorPoseFrame> frames(2, default_rest_pose());
  // Every head coordinate moves 0.2, every other coordinate 0.1.
  for (std::size_t j = 0; j < kLayout.size(); ++j)
    for (std::size_t a = kX; a <= kZ; ++a) frames[1].joints[j][a] += kLayout.region_of(j) == Region::Head ? 0.2 : 0.1;
  const auto e = region_energies(compute_delta(from_frames(frames)), kLayout);
  CHECK(e[0] == doctest::Approx(0.2));
  CHECK(e[1] == doctest::Approx(0.1));
  CHECK(e[2] == doctest::Approx(0.1));
  CHECK(e[3] == doctest::Approx(0.1));
}

TEST_CASE("moving average keeps linear motion and rejects even windows") {
  std::vector<Eigen::Vector3d> xs;
  for (int t = 0; t < 12; ++t) xs.emplace_back(0.3 * t, 1.0, -0.1 * t);
  const auto ys = centered_moving_average(xs, 5);
  for (std::size_t t = 0; t < xs.size(); ++t) CHECK(ys[t].isApprox(xs[t], 1e-12));
  CHECK_THROWS_AS(centered_moving_average(xs, 4), Error);
  CHECK_THROWS_AS(centered_moving_average(xs, 0), Error);
}

TEST_CASE("angle unwrapping") {
  std::vector<double> a{3.0, -3.0, 3.1};
  unwrap_angles(a);
  CHECK(a[1] == doctest::Approx(-3.0 + 2.0 * std::numbers::pi));
  CHECK(std::abs(a[2] - a[1]) < std::numbers::pi);
}

TEST_CASE("static actor gives a constant tracking camera equal to C0") {
  const ActorPoseSequence seq = translating(20, 0.0);
  const CameraTrajectory traj = tracking_trajectory(seq, kLayout, kC0, RegionSaliency{}, 9);
  CHECK(traj.size() == 20);
  for (const auto& p : traj.placements)
    for (std::size_t a = 0; a < kDof; ++a) CHECK(p[a] == doctest::Approx(kC0.pose[a]).epsilon(1e-12));
}

TEST_CASE("uniformly translating actor keeps the offset") {
  const ActorPoseSequence seq = translating(30, 0.05);
  const RegionSaliency sal = region_saliency(compute_delta(seq), kLayout);
  const CameraTrajectory traj = tracking_trajectory(seq, kLayout, kC0, sal, 9);
  const Eigen::Vector3d origin = actor_origin(seq, kLayout);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const Eigen::Vector3d target = saliency_target(centered(seq[t], origin), kLayout, sal);
    const Eigen::Vector3d first = saliency_target(centered(seq[0], origin), kLayout, sal);
    CHECK((traj.placements[t].position() - target).isApprox(kC0.pose.position() - first, 1e-9));
    CHECK(traj.placements[t].yaw() == doctest::Approx(kC0.pose.yaw()).epsilon(1e-9));
    CHECK(traj.placements[t].pitch() == doctest::Approx(kC0.pose.pitch()).epsilon(1e-9));
    CHECK(traj.placements[t].roll() == kC0.pose.roll());
  }
}

TEST_CASE("swaying torso matches a straight-line tracking reimplementation") {
  const ActorPoseSequence seq = swaying(40);
  const RegionSaliency sal = region_saliency(compute_delta(seq), kLayout);
  const CameraTrajectory traj = tracking_trajectory(seq, kLayout, kC0, sal, 9);

  const Eigen::Vector3d origin = seq[0].joints[kLayout.pelvis_index()].position();
  std::vector<double> target_x;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < 4; ++r) {
      double sum = 0.0;
      int n = 0;
      for (std::size_t j = 0; j < kLayout.size(); ++j)
        if (static_cast<std::size_t>(kLayout.region_of(j)) == r) {
          sum += seq[t].joints[j][kX] - origin.x();
          ++n;
        }
      num += sal.weights[r] * sum / n;
      den += sal.weights[r];
    }
    target_x.push_back(num / den);
  }
  const long n = static_cast<long>(target_x.size());
  for (long t = 0; t < n; ++t) {
    const long h = std::min({4L, t, n - 1 - t});
    double acc = 0.0;
    for (long k = t - h; k <= t + h; ++k) acc += target_x[static_cast<std::size_t>(k)];
    const double expected = acc / static_cast<double>(2 * h + 1) + (kC0.pose.x() - target_x[0]);
    CHECK(traj.placements[static_cast<std::size_t>(t)].x() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("target shakiness scales by E^kappa") {
  ShakinessVector base;
  for (std::size_t a = 0; a < kDof; ++a) base[a] = 0.1 * (a + 1);
  CHECK(target_shakiness(EmotionFactor(1.0), base) == base);
  const ShakinessVector two = target_shakiness(EmotionFactor(2.0), base);
  for (std::size_t a = 0; a < kDof; ++a) CHECK(two[a] == doctest::Approx(base[a] * std::pow(2.0, 1.5)));
  CHECK(target_shakiness(EmotionFactor(0.5), base).sum() < base.sum());
  ShakinessVector bad;
  bad[kYaw] = -1.0;
  CHECK_THROWS_AS(target_shakiness(EmotionFactor(1.0), bad), Error);
}

TEST_CASE("unit perturbation is zero-mean with unit peak") {
  for (int draw = 0; draw < 5; ++draw) {
    const auto s = unit_perturbation(97, 30.0, 3.0, 42, kPitch, draw);
    double mean = 0.0, peak = 0.0;
    for (double x : s) {
      mean += x;
      peak = std::max(peak, std::abs(x));
    }
    CHECK(std::abs(mean / s.size()) < 1e-12);
    CHECK(peak == doctest::Approx(1.0));
  }
}

TEST_CASE("shake injection") {
  const ActorPoseSequence seq = swaying(90);
  const CameraTrajectory base =
      tracking_trajectory(seq, kLayout, kC0, region_saliency(compute_delta(seq), kLayout), 9);

  SUBCASE("zero target leaves the input untouched") {
    ShakeProfile profile;
    profile.frequency_hz = 3.0;
    CHECK(inject_shake(base, profile) == base);
  }
  SUBCASE("pitch-only target") {
    ShakeProfile profile;
    profile.frequency_hz = 3.0;
    profile.seed = 9;
    profile.target[kPitch] = 0.3;
    const CameraTrajectory out = inject_shake(base, profile);
    CHECK(out.size() == base.size());
    CHECK(out.fps == base.fps);
    const ShakinessVector before = shakiness_vector(base), after = shakiness_vector(out);
    CHECK(std::abs(after[kPitch] - 0.3) <= 0.05 * 0.3);
    for (std::size_t a = 0; a < kDof; ++a)
      if (a != kPitch) CHECK(after[a] == before[a]);
    CHECK(inject_shake(base, profile) == out);

    double mean = 0.0, peak = 0.0;
    for (std::size_t t = 0; t < out.size(); ++t) {
      const double d = out.placements[t].pitch() - base.placements[t].pitch();
      mean += d;
      peak = std::max(peak, std::abs(d));
    }
    CHECK(std::abs(mean / out.size()) <= 0.02 * peak);
  }
  SUBCASE("invalid profiles") {
    ShakeProfile profile;
    profile.frequency_hz = 0.0;
    profile.target[kYaw] = 0.1;
    CHECK_THROWS_AS(inject_shake(base, profile), Error);
    profile.frequency_hz = 3.0;
    profile.target[kYaw] = -0.1;
    CHECK_THROWS_AS(inject_shake(base, profile), Error);
  }
  SUBCASE("unreachable target reports the achieved vector") {
    ShakeProfile profile;
    profile.frequency_hz = 3.0;
    profile.target[kYaw] = 1e-6;
    CameraTrajectory jagged = base;
    for (std::size_t t = 0; t < jagged.size(); ++t) jagged.placements[t][kYaw] += (t % 2 ? 0.1 : -0.1);
    try {
      inject_shake(jagged, profile);
      FAIL("expected a calibration error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Calibration);
      CHECK(e.context().find("achieved=") != std::string::npos);
    }
  }
}

TEST_CASE("synthesize") {
  const Scene scene = testing::motion_scene(1, 1.0, 77);
  SynthesisConfig config;
  config.seed = 5;

  SUBCASE("zero base shake gives the pure tracking trajectory") {
    SynthesisConfig quiet = config;
    quiet.base_shake = 0.0;
    const SynthesisResult r = synthesize_detailed(scene.sequence, scene.layout, EmotionFactor(1.0), scene.camera, quiet);
    CHECK(r.trajectory == r.tracking);
  }
  SUBCASE("deterministic") {
    CHECK(synthesize(scene.sequence, scene.layout, EmotionFactor(1.5), scene.camera, config) ==
          synthesize(scene.sequence, scene.layout, EmotionFactor(1.5), scene.camera, config));
  }
  SUBCASE("total shakiness increases over the emotion grid") {
    double prev = -1.0;
    for (double e : {0.5, 0.75, 1.0, 1.5, 2.0}) {
      const double total =
          shakiness_vector(synthesize(scene.sequence, scene.layout, EmotionFactor(e), scene.camera, config)).sum();
      CHECK(total > prev);
      prev = total;
    }
  }
  SUBCASE("rotation axes carry most of the base shake") {
    const ShakinessVector b = base_shake_vector(config, 61, 30.0);
    CHECK(b.sum() == doctest::Approx(config.base_shake * 2.0));
    CHECK(b[kYaw] + b[kPitch] == doctest::Approx(0.7 * b.sum()));
  }
  SUBCASE("joint count mismatch") {
    const SkeletonLayout small({"a", "b"}, {Region::Torso, Region::Head}, {-1, 0}, 0, 1, 0, 1.7);
    CHECK_THROWS_AS(synthesize(scene.sequence, small, EmotionFactor(1.0), scene.camera, config), Error);
  }
}

}
