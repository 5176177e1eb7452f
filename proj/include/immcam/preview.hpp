#pragma once

// Self-contained SVG shot previews: thirds grid, projected skeleton,
// body centre and the alignment candidates picked for the shot.

#include <string>

#include "immcam/aesthetics.hpp"
#include "immcam/scene.hpp"

namespace immcam {

/// `pose` and `cam` share one frame (normally actor-centred). Grid lines carry
/// class "grid", candidate lines class "candidate", the body centre is the
/// circle with id "body-center". A blank shot gets the grid and a text note.
std::string shot_svg(const ActorPoseFrame& pose, const CameraPlacement& cam, const CameraIntrinsics& intr,
                     const SkeletonLayout& layout, const AestheticsConfig& config = {},
                     const std::string& caption = {});

}  // namespace immcam
