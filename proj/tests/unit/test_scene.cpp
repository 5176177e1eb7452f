#include "doctest.h"

#include "immcam/error.hpp"
#include "immcam/random.hpp"
#include "immcam/scene.hpp"

using namespace immcam;

namespace {

ActorPoseSequence still(std::size_t frames) {
  return ActorPoseSequence(std::vector<ActorPoseFrame>(frames, default_rest_pose()), 30.0);
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("default layout is pelvis-rooted with 17 joints") {
  const SkeletonLayout layout = SkeletonLayout::make_default();
  CHECK(layout.size() == 17);
  CHECK(layout.parent_of(layout.pelvis_index()) == -1);
  CHECK(layout.joint_names()[layout.head_index()] == "head");
  CHECK(layout.left_shoulder().has_value());
  CHECK(layout.right_shoulder().has_value());
  const auto hops = layout.hop_distances(layout.torso_center_index());
  CHECK(hops[layout.torso_center_index()] == 0);
  CHECK(hops[layout.pelvis_index()] == 1);
  CHECK(hops[layout.head_index()] == 3);
}

TEST_CASE("sequences need two frames and consistent joints") {
  CHECK_THROWS_AS(still(1), Error);
  try {
    still(1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSequence);
    CHECK(std::string(e.what()) == "T >= 2 required");
  }
  std::vector<ActorPoseFrame> frames(2, default_rest_pose());
  frames[1].joints.pop_back();
  CHECK_THROWS_AS(ActorPoseSequence(frames, 30.0), Error);
  CHECK_THROWS_AS(ActorPoseSequence(std::vector<ActorPoseFrame>(2, default_rest_pose()), 0.0), Error);
}

TEST_CASE("emotion factor bounds") {
  CHECK_THROWS_WITH(EmotionFactor(0.0), "emotion must be positive");
  CHECK_THROWS_AS(EmotionFactor(-1.0), Error);
  CHECK_THROWS_AS(EmotionFactor(5.0), Error);
  CHECK(EmotionFactor(0.5).relaxed());
  CHECK(EmotionFactor(2.0).tense());
  CHECK_FALSE(EmotionFactor(1.0).relaxed());
}

TEST_CASE("intrinsics reject mismatched aspect") {
  CHECK_THROWS_AS(CameraIntrinsics(35.0, 36.0, 24.0, 1920, 1080), Error);
  CHECK_NOTHROW(CameraIntrinsics(35.0, 36.0, 20.25, 1920, 1080));
  CHECK(CameraIntrinsics().diagonal() == doctest::Approx(2202.9071700822983));
}

TEST_CASE("delta of a constant sequence is zero") {
  for (const auto& row : compute_delta(still(4)))
    for (const auto& j : row.joints) CHECK(norm(j) == 0.0);
}

TEST_CASE("delta of a single displacement") {
  std::vector<ActorPoseFrame> frames(2, default_rest_pose());
  frames[1].joints[5][kX] += 0.3;
  const PoseRows d = compute_delta(ActorPoseSequence(frames, 30.0));
  for (std::size_t j = 0; j < d[1].joints.size(); ++j)
    for (std::size_t a = 0; a < kDof; ++a)
      CHECK(d[1].joints[j][a] == doctest::Approx(j == 5 && a == kX ? 0.3 : 0.0));
}

TEST_CASE("delta matches elementwise recomputation") {
  Rng rng(7);
  std::vector<ActorPoseFrame> frames;
  for (int t = 0; t < 5; ++t) {
    ActorPoseFrame f;
    for (int j = 0; j < 4; ++j) {
      DofVector d;
      for (auto& x : d.v) x = rng.uniform(-1.0, 1.0);
      f.joints.push_back(d);
    }
    frames.push_back(f);
  }
  const ActorPoseSequence seq(frames, 25.0);
  const PoseRows d = compute_delta(seq);
  for (std::size_t t = 1; t < 5; ++t)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t a = 0; a < kDof; ++a)
        CHECK(d[t].joints[j][a] == std::abs(frames[t].joints[j][a] - frames[t - 1].joints[j][a]));
}

TEST_CASE("velocity is the scaled difference quotient") {
  std::vector<ActorPoseFrame> frames;
  for (int t = 0; t < 4; ++t) {
    ActorPoseFrame f = default_rest_pose();
    f.joints[2][kX] += 0.1 * t;
    frames.push_back(f);
  }
  const PoseRows v = compute_velocity(ActorPoseSequence(frames, 30.0));
  for (std::size_t t = 1; t < 4; ++t) CHECK(v[t].joints[2][kX] == doctest::Approx(3.0));

  std::vector<ActorPoseFrame> reversed(frames.rbegin(), frames.rend());
  const PoseRows r = compute_velocity(ActorPoseSequence(reversed, 30.0));
  CHECK(r[2].joints[2][kX] == doctest::Approx(-v[2].joints[2][kX]));
}

TEST_CASE("actor-centred frame puts the first pelvis at the origin") {
  std::vector<ActorPoseFrame> frames(2, default_rest_pose());
  for (auto& j : frames[0].joints) j[kZ] += 4.0;
  const ActorPoseSequence seq(frames, 30.0);
  const SkeletonLayout layout = SkeletonLayout::make_default();
  const ActorPoseFrame c = centered(seq[0], actor_origin(seq, layout));
  CHECK(c.joints[layout.pelvis_index()].position().norm() == 0.0);
}

TEST_CASE("trajectory pose adds the uniform offset") {
  CameraTrajectory traj{{DofVector::from(1, 2, 3), DofVector::from(4, 5, 6)}, 30.0, DofVector::from(0.5, 0, 0, 0.1)};
  CHECK(traj.pose(1).x() == 4.5);
  CHECK(traj.pose(0).yaw() == 0.1);
  CHECK(traj.placements[1].x() == 4.0);
}

TEST_CASE("region names round trip") {
  for (Region r : {Region::Head, Region::Arms, Region::Torso, Region::Legs})
    CHECK(parse_region(to_string(r)) == r);
  CHECK_FALSE(parse_region("tail").has_value());
}

}
