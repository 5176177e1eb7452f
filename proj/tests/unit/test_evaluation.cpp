#include "doctest.h"

#include <cmath>
#include <vector>

#include "immcam/error.hpp"
#include "immcam/evaluation.hpp"
#include "immcam/random.hpp"
#include "immcam/synthesis.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace immcam;

namespace {

CameraTrajectory constant(std::size_t frames, const DofVector& d) {
  return CameraTrajectory{std::vector<DofVector>(frames, d), 30.0, {}};
}

CameraTrajectory random_trajectory(Rng& rng, std::size_t frames) {
  CameraTrajectory traj;
  DofVector d;
  for (std::size_t t = 0; t < frames; ++t) {
    for (auto& x : d.v) x += rng.uniform(-0.1, 0.1);
    traj.placements.push_back(d);
  }
  return traj;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("point loss") {
  CHECK(point_loss(constant(10, DofVector::from(1, 2, 3)), constant(10, DofVector::from(1, 2, 3))) == 0.0);
  const double delta = 0.25;
  CHECK(point_loss(constant(10, DofVector{}), constant(10, DofVector::from(0, delta, 0))) ==
        doctest::Approx(10 * delta * delta));
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const CameraTrajectory a = random_trajectory(rng, 25), b = random_trajectory(rng, 25);
    CHECK(point_loss(a, b) == doctest::Approx(oracle::point_loss(a, b)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(point_loss(constant(3, DofVector{}), constant(4, DofVector{})), Error);
}

TEST_CASE("combined trajectory objective") {
  Rng rng(6);
  const CameraTrajectory a = random_trajectory(rng, 30), b = random_trajectory(rng, 30);
  const CameraTrajectory still = constant(30, DofVector::from(1, 0, 2, 0.1, 0, 0));
  CHECK(combined_trajectory_objective(still, still) == 0.0);
  // The total-variation term is on the generated trajectory alone.
  CHECK(combined_trajectory_objective(a, a) == doctest::Approx(10.0 * point_loss(a, a)));
  CHECK(point_loss(a, a) > 0.0);
  CHECK(combined_trajectory_objective(a, b) ==
        doctest::Approx(10.0 * point_loss(a, b) + shakiness_distance(shakiness_vector(a), shakiness_vector(b))));
  const TrajectoryWeights w{2.0, 3.0};
  CHECK(combined_trajectory_objective(a, b, w) ==
        doctest::Approx(2.0 * point_loss(a, b) + 3.0 * shakiness_distance(shakiness_vector(a), shakiness_vector(b))));
}

TEST_CASE("normalization flags flat axes") {
  FeatureSet f{{1, 5, 0, 0, 0, 0}, {3, 5, 0, 0, 0, 0}, {2, 5, 0, 0, 0, 0}};
  const auto flat = normalize_features(f);
  CHECK_FALSE(flat[0]);
  CHECK(flat[1]);
  CHECK(f[0][0] == 0.0);
  CHECK(f[1][0] == 1.0);
  CHECK(f[2][0] == 0.5);
  CHECK(f[0][1] == 0.0);
}

TEST_CASE("hausdorff matches the brute-force oracle") {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    FeatureSet a(20 + trial), b(15 + 2 * trial);
    for (auto& p : a)
      for (auto& x : p) x = rng.uniform(0, 1);
    for (auto& p : b)
      for (auto& x : p) x = rng.uniform(0, 1);
    CHECK(hausdorff_distance(a, b) == doctest::Approx(oracle::hausdorff(a, b)).epsilon(1e-14));
    CHECK(hausdorff_distance(a, a) == 0.0);
  }
}

TEST_CASE("camera following the mean joint motion is in sync") {
  const ActorPoseSequence seq = testing::motion_sequence(testing::MotionKind::Dance, 60, 30.0, 3);
  CameraTrajectory traj;
  traj.fps = seq.fps();
  for (const auto& f : seq.frames()) {
    DofVector m;
    for (const auto& j : f.joints) m += j;
    traj.placements.push_back(m * (1.0 / static_cast<double>(f.joints.size())));
  }
  CHECK(spatial_sync_distance(seq, traj) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("static camera is further from the actor than the tracking camera") {
  const Scene scene = testing::motion_scene(0, 1.0, 21);
  const CameraTrajectory tracking = tracking_trajectory(
      scene.sequence, scene.layout, scene.camera, region_saliency(compute_delta(scene.sequence), scene.layout), 9);
  const CameraTrajectory still = constant(scene.sequence.size(), scene.camera.pose);
  const SpatialSync s = spatial_sync(scene.sequence, still);
  for (bool flag : s.degenerate_camera) CHECK(flag);
  CHECK(s.distance > spatial_sync_distance(scene.sequence, tracking));
  CHECK_THROWS_AS(spatial_sync(scene.sequence, constant(3, DofVector{})), Error);
}

TEST_CASE("correlations") {
  const std::vector<double> e{0.5, 0.75, 1.0, 1.5, 2.0};
  const std::vector<double> up{0.1, 0.3, 0.35, 0.9, 2.0};
  const Correlations c = emotion_correlation(e, up);
  CHECK(c.srcc == doctest::Approx(1.0));
  CHECK(c.krcc == doctest::Approx(1.0));
  CHECK(c.pcc > 0.9);
  const std::vector<double> lin{1, 2, 3, 4, 5};
  CHECK(pearson(lin, lin) == doctest::Approx(1.0));

  std::vector<double> down;
  for (double x : up) down.push_back(-x);
  const Correlations r = emotion_correlation(e, down);
  CHECK(r.pcc == doctest::Approx(-c.pcc));
  CHECK(r.srcc == doctest::Approx(-1.0));
  CHECK(r.krcc == doctest::Approx(-1.0));
}

TEST_CASE("rank correlations with ties") {
  const std::vector<double> a{1, 2, 2, 3}, b{1, 3, 2, 4};
  // Average ranks: a -> 1, 2.5, 2.5, 4.
  CHECK(spearman(a, b) == doctest::Approx(pearson(std::vector<double>{1, 2.5, 2.5, 4}, std::vector<double>{1, 3, 2, 4})));
  // tau-b: 5 concordant, 0 discordant, one tie in a.
  CHECK(kendall(a, b) == doctest::Approx(5.0 / std::sqrt(5.0 * 6.0)));
}

TEST_CASE("correlation preconditions") {
  const std::vector<double> two{1, 2}, flat{1, 1, 1}, three{1, 2, 3};
  try {
    emotion_correlation(two, two);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  try {
    emotion_correlation(three, flat);
    FAIL("expected UndefinedMetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedMetric);
  }
}

TEST_CASE("adjustment metrics") {
  const CameraPlacement cam{DofVector::from(1, 2, 3, 0.1, 0.2, 0.3)};
  CHECK(adj_dis(cam, cam) == 0.0);
  CHECK(adj_dis(cam, CameraPlacement{cam.pose + DofVector::from(0.3, 0, 0)}) == doctest::Approx(0.1));
  CHECK(adj_dis(cam, CameraPlacement{cam.pose + DofVector::from(0, 0, 0, 1.0, 0, 0)}) == 0.0);

  const SkeletonLayout layout = SkeletonLayout::make_default();
  const ActorPoseFrame pose = default_rest_pose();
  const CameraPlacement front{DofVector::from(0, 1.0, -4.0)};
  CHECK(vis_acc(pose, front, front, CameraIntrinsics{}) == 100.0);
  CameraPlacement away = front;
  away.pose[kYaw] += 3.141592653589793;
  CHECK(vis_acc(pose, front, away, CameraIntrinsics{}) == 0.0);
  CHECK(rot_shift(pose, front, CameraIntrinsics{}, layout) ==
        composition_loss(pose, front, CameraIntrinsics{}, layout));
}

TEST_CASE("immersion score") {
  const Correlations corr{0.8, 0.9, 0.7};
  const double diag = CameraIntrinsics{}.diagonal();
  const ImmersionReport s = immersion_score(1.0, corr, 100.0, 90.0, 1.0, 0.0, diag);
  CHECK(s.spatial == doctest::Approx(0.5));
  CHECK(s.combined == doctest::Approx(s.spatial));
  const ImmersionReport a = immersion_score(1.0, corr, 100.0, 90.0, 0.0, 0.0, diag);
  CHECK(a.aesthetic == doctest::Approx(0.5 * (1 - 100.0 / diag) + 0.45));
  CHECK(a.combined == doctest::Approx(a.aesthetic));
  CHECK(immersion_score(1.0, corr, 100.0, 90.0, 0.0, 1.0, diag).combined == doctest::Approx(0.8));
  CHECK(immersion_score(1.0, Correlations{-0.5, 0, 0}, 0, 100, 0.2, 0.3, diag).emotional == 0.0);

  CHECK(combine_immersion(0.4, 0.4, 0.4, 0.2, 0.5) == doctest::Approx(0.4));
  CHECK_THROWS_AS(combine_immersion(0.4, 0.4, 0.4, 0.7, 0.5), Error);
  CHECK_THROWS_AS(combine_immersion(0.4, 0.4, 0.4, -0.1, 0.5), Error);
  CHECK(s.raw.at("hausdorff") == 1.0);
}

}
