#include "immcam/preview.hpp"

#include "immcam/projection.hpp"
#include "immcam/scene_io.hpp"

namespace immcam {

namespace {

std::string line(double x1, double y1, double x2, double y2, const char* cls) {
  return "  <line class=\"" + std::string(cls) + "\" x1=\"" + format_number(x1) + "\" y1=\"" + format_number(y1) +
         "\" x2=\"" + format_number(x2) + "\" y2=\"" + format_number(y2) + "\"/>\n";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string shot_svg(const ActorPoseFrame& pose, const CameraPlacement& cam, const CameraIntrinsics& intr,
                     const SkeletonLayout& layout, const AestheticsConfig& config, const std::string& caption) {
  const double w = intr.frame_width();
  const double h = intr.frame_height();
  const std::string ws = std::to_string(intr.frame_width());
  const std::string hs = std::to_string(intr.frame_height());

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + ws + "\" height=\"" + hs + "\" viewBox=\"0 0 " +
         ws + " " + hs + "\">\n";
  svg +=
      "  <style>.grid{stroke:#888;stroke-width:2}.candidate{stroke:#e33;stroke-width:4;stroke-dasharray:16 8}"
      ".bone{stroke:#1a6;stroke-width:4}.joint{fill:#1a6}#body-center{fill:#e33}"
      "text{font-family:sans-serif;font-size:32px;fill:#222}</style>\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + ws + "\" height=\"" + hs + "\" fill=\"#f4f4f4\"/>\n";
  svg += line(w / 3.0, 0.0, w / 3.0, h, "grid");
  svg += line(2.0 * w / 3.0, 0.0, 2.0 * w / 3.0, h, "grid");
  svg += line(0.0, h / 3.0, w, h / 3.0, "grid");
  svg += line(0.0, 2.0 * h / 3.0, w, 2.0 * h / 3.0, "grid");

  const ProjectedPose pp = project_pose(pose, cam, intr);
  if (pp.on_frame_count() == 0) {
    svg += "  <text class=\"annotation\" x=\"24\" y=\"48\">actor off frame</text>\n";
  } else {
    const Eigen::Vector2d center = body_center(pp, layout, config.body_center_sigma);
    const double hpd = head_pelvis_diff(pose, layout);
    const double threshold = config.lie_stand_ratio * layout.actor_height();
    const double ra = relative_angle(pose, cam, layout).degrees;
    const AlignmentCandidates cand =
        alignment_candidates(hpd, threshold, ra, intr.frame_width(), intr.frame_height(), center);
    // Lying actors shot from the side are aligned to horizontal lines.
    const bool side = (ra >= 45.0 && ra <= 135.0) || (ra >= 225.0 && ra <= 315.0);
    const bool horizontal = hpd < threshold && side;
    for (std::size_t i = 0; i < cand.points.size(); ++i) {
      if (i == 1 && cand.points[1] == cand.points[0]) break;
      const Eigen::Vector2d& p = cand.points[i];
      svg += horizontal ? line(0.0, p.y(), w, p.y(), "candidate") : line(p.x(), 0.0, p.x(), h, "candidate");
    }
    for (std::size_t j = 0; j < pp.points.size(); ++j) {
      const int parent = layout.parent_of(j);
      if (parent < 0) continue;
      const ShotPoint& a = pp.points[j];
      const ShotPoint& b = pp.points[static_cast<std::size_t>(parent)];
      if (a.on_frame && b.on_frame) svg += line(a.u, a.v, b.u, b.v, "bone");
    }
    for (const auto& p : pp.points)
      if (p.on_frame)
        svg += "  <circle class=\"joint\" cx=\"" + format_number(p.u) + "\" cy=\"" + format_number(p.v) +
               "\" r=\"6\"/>\n";
    svg += "  <circle id=\"body-center\" cx=\"" + format_number(center.x()) + "\" cy=\"" +
           format_number(center.y()) + "\" r=\"12\"/>\n";
  }
  if (!caption.empty())
    svg += "  <text class=\"caption\" x=\"24\" y=\"" + format_number(h - 24.0) + "\">" + escape(caption) +
           "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace immcam
