#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bikegen/geometry.hpp"
#include "bikegen/rotation.hpp"

namespace bikegen {

using Rgb = std::array<std::uint8_t, 3>;

/// Local frame of the parking area. Bike rotations are measured against
/// heading_deg, which makes the annotations independent of the camera.
struct SpotFrame {
  Vec3 origin;           // world coordinates, z up
  double heading_deg = 0.0;  // rotation about world z, wrapped to (-180, 180]
  double length_m = 2.8;
  double width_m = 1.2;
};

/// Footprint of a parametric bike model before scaling, in meters.
struct BikeModel {
  double length;
  double height;
  double width;
};

/// The four built-in parametric bike bodies.
const std::array<BikeModel, 4>& bike_models();

struct BikeInstance {
  int model_id = 0;
  double pos_u = 0.0;  // along spot length, within [-length/2, length/2]
  double pos_v = 0.0;  // across spot width, within [-width/2, width/2]
  RotationPair rot;    // spot-relative
  double scale = 1.0;
  Rgb color{128, 128, 128};
};

enum class DistractorKind : std::uint8_t { Vehicle = 0, Pedestrian, Tree, Pole, Bin };

const char* distractor_kind_name(DistractorKind k);

struct Distractor {
  DistractorKind kind = DistractorKind::Bin;
  Vec3 position;           // ground position, z = 0
  double heading_deg = 0.0;
  Vec3 size;               // extents in meters
  Rgb color{90, 90, 90};
};

struct LightSpec {
  double azimuth_deg = 0.0;
  double elevation_deg = 55.0;
  double intensity = 1.0;
};

struct Scene {
  SpotFrame spot;
  std::vector<BikeInstance> bikes;
  std::vector<Distractor> distractors;
  LightSpec light;
  int ground_texture_id = 0;
  int background_id = 0;
  std::uint64_t seed = 0;
};

enum class CameraMode : std::uint8_t { Free = 0, VerticalFree = 1, Restricted = 2 };

const char* camera_mode_name(CameraMode m);
CameraMode camera_mode_from_name(const std::string& name);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Everything sample_scene and sample_camera need. Defaults reproduce the
/// regular free-camera setup; presets adjust density and camera mode.
struct GenConfig {
  int bike_count_min = 3;
  int bike_count_max = 15;
  std::array<double, 3> class_mix{0.42, 0.35, 0.23};  // parked, rotated, fallen
  CameraMode camera_mode = CameraMode::Free;
  double split_ratio = 0.9;
  double min_spacing_m = 0.40;
  ClassThresholds thresholds;

  // Spot randomization.
  double spot_length_m = 2.8;
  double spot_width_m = 1.2;
  double spot_heading_max_deg = 20.0;
  double spot_jitter_m = 0.3;

  // Bike pose sampling.
  double scale_min = 0.8;
  double scale_max = 1.2;
  double fallen_lean_jitter_deg = 15.0;
  int placement_retries = 64;

  // Camera sampling (world coordinates; the restricted pose is fixed).
  Range cam_x{-0.9, 0.9};
  Range cam_y{-6.2, -5.0};
  Range cam_z{2.6, 3.8};
  Vec3 cam_restricted_pos{0.0, -5.6, 3.2};
  double cam_fov_deg = 34.0;
  double look_at_height_m = 0.5;

  // Scene dressing.
  int max_distractors = 5;
  std::vector<Rgb> bike_palette;
  std::vector<Rgb> ground_palette;
  std::vector<Rgb> background_palette;

  // Output.
  int image_width = 640;
  int image_height = 360;
};

/// Config with the built-in palettes filled in.
GenConfig default_config();

/// Named presets: "challenging", "regular-free", "regular-vertical-free",
/// "regular-restricted". Throws on unknown names.
GenConfig preset_config(const std::string& name);

/// Throws std::invalid_argument when any config invariant is violated.
void validate_config(const GenConfig& cfg);

/// Draws one fully specified scene. Pure function of (cfg, seed): identical
/// inputs give byte-identical scenes. Bike placement respects min_spacing_m;
/// when the spot cannot take another bike after the retry budget the count is
/// reduced, and an exception is raised only if fewer than bike_count_min fit.
Scene sample_scene(const GenConfig& cfg, std::uint64_t seed);

/// Per-class bike counts using derive_park_class.
std::array<std::size_t, 3> scene_class_histogram(const Scene& s, const ClassThresholds& th);

}  // namespace bikegen
