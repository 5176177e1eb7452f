#include "immcam/scene_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "immcam/error.hpp"

namespace immcam {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& message, const std::string& where) {
  throw Error(ErrorCode::Parse, message, where);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_error("expected an object", where);
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(std::string("missing field '") + key + "'", where);
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_error("expected a number", where);
  const double x = j.get<double>();
  if (!std::isfinite(x)) parse_error("expected a finite number", where);
  return x;
}

long long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_error("expected an integer", where);
  return j.get<long long>();
}

DofVector dof(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != kDof) parse_error("expected an array of 6 numbers", where);
  DofVector d;
  for (std::size_t a = 0; a < kDof; ++a)
    d[a] = number(j[a], where + "[" + std::to_string(a) + "]");
  return d;
}

json dof_json(const DofVector& d) {
  json arr = json::array();
  for (double x : d.v) arr.push_back(x);
  return arr;
}

SkeletonLayout parse_skeleton(const json& sk) {
  if (sk.is_string()) {
    if (sk.get<std::string>() != "default") parse_error("unknown built-in skeleton", "skeleton");
    return SkeletonLayout::make_default();
  }
  const json& names_j = member(sk, "joint_names", "skeleton");
  if (!names_j.is_array() || names_j.empty()) parse_error("expected a nonempty array", "skeleton.joint_names");
  std::vector<std::string> names;
  for (std::size_t j = 0; j < names_j.size(); ++j) {
    if (!names_j[j].is_string())
      parse_error("expected a string", "skeleton.joint_names[" + std::to_string(j) + "]");
    names.push_back(names_j[j].get<std::string>());
  }

  const json& regions_j = member(sk, "regions", "skeleton");
  if (!regions_j.is_object()) parse_error("expected an object mapping joint name to region", "skeleton.regions");
  std::vector<Region> regions;
  for (const auto& name : names) {
    auto it = regions_j.find(name);
    if (it == regions_j.end()) parse_error("region map is missing joint '" + name + "'", "skeleton.regions");
    const std::string where = "skeleton.regions." + name;
    if (!it->is_string()) parse_error("expected a region name", where);
    const auto r = parse_region(it->get<std::string>());
    if (!r) parse_error("unknown region '" + it->get<std::string>() + "'", where);
    regions.push_back(*r);
  }
  for (auto it = regions_j.begin(); it != regions_j.end(); ++it)
    if (std::find(names.begin(), names.end(), it.key()) == names.end())
      parse_error("region map names unknown joint '" + it.key() + "'", "skeleton.regions");

  const json& parents_j = member(sk, "parents", "skeleton");
  if (!parents_j.is_array() || parents_j.size() != names.size())
    parse_error("expected one parent per joint", "skeleton.parents");
  std::vector<int> parents;
  for (std::size_t j = 0; j < parents_j.size(); ++j)
    parents.push_back(static_cast<int>(integer(parents_j[j], "skeleton.parents[" + std::to_string(j) + "]")));

  const json& idx = member(sk, "indices", "skeleton");
  auto index = [&](const char* key) {
    const long long v = integer(member(idx, key, "skeleton.indices"), std::string("skeleton.indices.") + key);
    if (v < 0 || static_cast<std::size_t>(v) >= names.size())
      parse_error("joint index out of range", std::string("skeleton.indices.") + key);
    return static_cast<std::size_t>(v);
  };
  const std::size_t torso = index("torso_center");
  const std::size_t head = index("head");
  const std::size_t pelvis = index("pelvis");
  const double height = number(member(sk, "actor_height", "skeleton"), "skeleton.actor_height");
  try {
    return SkeletonLayout(std::move(names), std::move(regions), std::move(parents), torso, head, pelvis, height);
  } catch (const Error& e) {
    parse_error(e.what(), "skeleton" + (e.context().empty() ? std::string() : "." + e.context()));
  }
}

json skeleton_json(const SkeletonLayout& layout) {
  json regions = json::object();
  for (std::size_t j = 0; j < layout.size(); ++j)
    regions[layout.joint_names()[j]] = std::string(to_string(layout.region_of(j)));
  return json{{"joint_names", layout.joint_names()},
              {"regions", regions},
              {"parents", layout.parents()},
              {"indices",
               {{"torso_center", layout.torso_center_index()},
                {"head", layout.head_index()},
                {"pelvis", layout.pelvis_index()}}},
              {"actor_height", layout.actor_height()}};
}

}  // namespace

Scene scene_from_json(const json& doc) {
  if (!doc.is_object()) parse_error("scene must be a JSON object", "scene");
  const SkeletonLayout layout = parse_skeleton(member(doc, "skeleton", "scene"));
  const bool default_skeleton = doc["skeleton"].is_string();

  const double fps = number(member(doc, "fps", "scene"), "fps");
  if (!(fps > 0.0)) parse_error("fps must be positive", "fps");

  const json& frames_j = member(doc, "frames", "scene");
  if (!frames_j.is_array()) parse_error("expected an array of frames", "frames");
  std::vector<ActorPoseFrame> frames;
  frames.reserve(frames_j.size());
  for (std::size_t t = 0; t < frames_j.size(); ++t) {
    const std::string where = "frames[" + std::to_string(t) + "]";
    const json& f = frames_j[t];
    if (!f.is_array() || f.size() != layout.size())
      parse_error("expected " + std::to_string(layout.size()) + " joints", where);
    ActorPoseFrame frame;
    frame.joints.reserve(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
      frame.joints.push_back(dof(f[j], where + "[" + std::to_string(j) + "] (" + layout.joint_names()[j] + ")"));
    frames.push_back(std::move(frame));
  }
  if (frames.size() < 2) throw Error(ErrorCode::InvalidSequence, "T >= 2 required", "frames");

  double e_max = kDefaultEmotionMax;
  if (doc.contains("emotion_max")) e_max = number(doc["emotion_max"], "emotion_max");
  const double e = number(member(doc, "emotion", "scene"), "emotion");

  const json& cam_j = member(doc, "camera", "scene");
  DofVector pose = dof(member(cam_j, "pose", "camera"), "camera.pose");
  std::string unit = "rad";
  if (cam_j.contains("angle_unit")) {
    if (!cam_j["angle_unit"].is_string()) parse_error("expected \"rad\" or \"deg\"", "camera.angle_unit");
    unit = cam_j["angle_unit"].get<std::string>();
  }
  if (unit == "deg") {
    for (std::size_t a = kYaw; a <= kRoll; ++a) pose[a] *= std::numbers::pi / 180.0;
  } else if (unit != "rad") {
    parse_error("expected \"rad\" or \"deg\"", "camera.angle_unit");
  }

  CameraIntrinsics intr;
  if (doc.contains("intrinsics")) {
    const json& in = doc["intrinsics"];
    auto field = [&](const char* key) { return member(in, key, "intrinsics"); };
    try {
      intr = CameraIntrinsics(number(field("focal_length_mm"), "intrinsics.focal_length_mm"),
                              number(field("sensor_width_mm"), "intrinsics.sensor_width_mm"),
                              number(field("sensor_height_mm"), "intrinsics.sensor_height_mm"),
                              static_cast<int>(integer(field("frame_width"), "intrinsics.frame_width")),
                              static_cast<int>(integer(field("frame_height"), "intrinsics.frame_height")));
    } catch (const Error& err) {
      if (err.code() == ErrorCode::Parse) throw;
      parse_error(err.what(), "intrinsics");
    }
  }

  try {
    return Scene{layout,
                 ActorPoseSequence(std::move(frames), fps),
                 EmotionFactor(e, e_max),
                 CameraPlacement{pose},
                 intr,
                 default_skeleton,
                 e_max};
  } catch (const Error& err) {
    if (err.code() == ErrorCode::InvalidSequence) throw;
    parse_error(err.what(), err.context());
  }
}

json scene_to_json(const Scene& scene) {
  json frames = json::array();
  for (const auto& f : scene.sequence.frames()) {
    json joints = json::array();
    for (const auto& j : f.joints) joints.push_back(dof_json(j));
    frames.push_back(std::move(joints));
  }
  const CameraIntrinsics& in = scene.intrinsics;
  json doc = {
      {"skeleton", scene.default_skeleton ? json("default") : skeleton_json(scene.layout)},
      {"fps", scene.sequence.fps()},
      {"emotion", scene.emotion.value()},
      {"emotion_max", scene.emotion_max},
      {"camera", {{"pose", dof_json(scene.camera.pose)}, {"angle_unit", "rad"}}},
      {"intrinsics",
       {{"focal_length_mm", in.focal_length()},
        {"sensor_width_mm", in.sensor_width()},
        {"sensor_height_mm", in.sensor_height()},
        {"frame_width", in.frame_width()},
        {"frame_height", in.frame_height()}}},
      {"frames", std::move(frames)}};
  return doc;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open file for reading", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open file for writing", path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed", path.string());
}

Scene load_scene(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what(), path.string());
  }
  return scene_from_json(doc);
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  write_text(path, scene_to_json(scene).dump(1) + "\n");
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string trajectory_to_csv(const CameraTrajectory& traj) {
  std::string out = "t,x,y,z,yaw,pitch,roll\n";
  for (std::size_t t = 0; t < traj.size(); ++t) {
    out += format_number(static_cast<double>(t) / traj.fps);
    for (double x : traj.pose(t).v) {
      out += ',';
      out += format_number(x);
    }
    out += '\n';
  }
  return out;
}

CameraTrajectory trajectory_from_csv(const std::string& text, double fps) {
  if (!(fps > 0.0)) parse_error("fps must be positive", "trajectory");
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) parse_error("empty trajectory file", "trajectory");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y,z,yaw,pitch,roll") parse_error("expected header t,x,y,z,yaw,pitch,roll", "trajectory");
  CameraTrajectory traj;
  traj.fps = fps;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "trajectory row " + std::to_string(row);
    std::array<double, kDof + 1> cells{};
    std::size_t pos = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::size_t end = line.find(',', pos);
      if ((c + 1 < cells.size()) == (end == std::string::npos)) parse_error("expected 7 columns", where);
      const std::string cell = line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
      char* stop = nullptr;
      cells[c] = std::strtod(cell.c_str(), &stop);
      if (cell.empty() || *stop != '\0' || !std::isfinite(cells[c])) parse_error("bad number '" + cell + "'", where);
      pos = end + 1;
    }
    DofVector d;
    for (std::size_t a = 0; a < kDof; ++a) d[a] = cells[a + 1];
    traj.placements.push_back(d);
    ++row;
  }
  if (traj.placements.empty()) parse_error("trajectory has no rows", "trajectory");
  return traj;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".json");
}

void save_trajectory(const CameraTrajectory& traj, const std::filesystem::path& path, const json& provenance) {
  write_text(path, trajectory_to_csv(traj));
  const json meta = {{"fps", traj.fps}, {"frames", traj.size()}, {"provenance", provenance}};
  write_text(sidecar_path(path), meta.dump(2) + "\n");
}

CameraTrajectory load_trajectory(const std::filesystem::path& path, double fallback_fps) {
  double fps = fallback_fps;
  const auto meta_path = sidecar_path(path);
  if (std::filesystem::exists(meta_path)) {
    json meta;
    try {
      meta = json::parse(read_text(meta_path));
    } catch (const json::parse_error& e) {
      parse_error(std::string("invalid JSON: ") + e.what(), meta_path.string());
    }
    fps = number(member(meta, "fps", meta_path.string()), meta_path.string() + ":fps");
  }
  return trajectory_from_csv(read_text(path), fps);
}

}  // namespace immcam
