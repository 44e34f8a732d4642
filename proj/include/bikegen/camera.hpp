#pragma once

#include <cstdint>
#include <optional>

#include "bikegen/geometry.hpp"
#include "bikegen/scene.hpp"

namespace bikegen {

struct CameraRig {
  Vec3 position;
  Vec3 look_at;
  double vertical_fov_deg = 34.0;
  CameraMode mode = CameraMode::Free;
};

/// Draws a camera pose for the scene. free: all three coordinates from the
/// config ranges; vertical_free: x pinned to the spot center; restricted: the
/// fixed config pose regardless of seed. The rig always looks at the spot
/// center raised by look_at_height_m.
CameraRig sample_camera(const GenConfig& cfg, const Scene& scene, std::uint64_t seed);

/// Orthonormal view frame. forward points from the camera toward look_at,
/// right and up span the image plane.
struct CameraBasis {
  Vec3 right, up, forward;
};

CameraBasis camera_basis(const CameraRig& rig);

/// Vertical-FOV focal length in pixels.
double focal_px(const CameraRig& rig, int image_h);

/// Perspective projection of a world point into pixel coordinates, principal
/// point at the image center. Returns nullopt when the point is at or behind
/// the camera plane.
std::optional<Vec2> project_point(const CameraRig& rig, const Vec3& p, int image_w, int image_h);

/// Camera-space depth of a world point along the viewing direction.
double camera_depth(const CameraRig& rig, const Vec3& p);

}  // namespace bikegen
