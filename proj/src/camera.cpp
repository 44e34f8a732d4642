#include "bikegen/camera.hpp"

#include <cmath>
#include <stdexcept>

#include "bikegen/rng.hpp"

namespace bikegen {

namespace {

constexpr double kNearPlane = 1e-6;

}  // namespace

CameraBasis camera_basis(const CameraRig& rig) {
  const Vec3 forward = normalized(rig.look_at - rig.position);
  Vec3 world_up{0.0, 0.0, 1.0};
  Vec3 right = cross(forward, world_up);
  if (norm(right) < 1e-9) {
    // Looking straight up or down; fall back to the world y axis.
    world_up = {0.0, 1.0, 0.0};
    right = cross(forward, world_up);
  }
  right = normalized(right);
  const Vec3 up = cross(right, forward);
  return {right, up, forward};
}

double focal_px(const CameraRig& rig, int image_h) {
  return (image_h / 2.0) / std::tan(deg_to_rad(rig.vertical_fov_deg) / 2.0);
}

CameraRig sample_camera(const GenConfig& cfg, const Scene& scene, std::uint64_t seed) {
  CameraRig rig;
  rig.mode = cfg.camera_mode;
  rig.vertical_fov_deg = cfg.cam_fov_deg;
  rig.look_at = scene.spot.origin + Vec3{0.0, 0.0, cfg.look_at_height_m};

  for (const Range* r : {&cfg.cam_x, &cfg.cam_y, &cfg.cam_z}) {
    if (!(r->hi >= r->lo)) throw std::invalid_argument("sample_camera: empty range");
  }

  Rng rng(mix_seed(seed, 0xCA3E5Aull));
  switch (cfg.camera_mode) {
    case CameraMode::Free:
      rig.position = {rng.uniform(cfg.cam_x.lo, cfg.cam_x.hi),
                      rng.uniform(cfg.cam_y.lo, cfg.cam_y.hi),
                      rng.uniform(cfg.cam_z.lo, cfg.cam_z.hi)};
      break;
    case CameraMode::VerticalFree:
      rig.position = {scene.spot.origin.x,
                      rng.uniform(cfg.cam_y.lo, cfg.cam_y.hi),
                      rng.uniform(cfg.cam_z.lo, cfg.cam_z.hi)};
      break;
    case CameraMode::Restricted:
      rig.position = cfg.cam_restricted_pos;
      rig.look_at = Vec3{0.0, 0.0, cfg.look_at_height_m};  // fixed pose, fixed target
      break;
  }
  return rig;
}

double camera_depth(const CameraRig& rig, const Vec3& p) {
  return dot(p - rig.position, camera_basis(rig).forward);
}

std::optional<Vec2> project_point(const CameraRig& rig, const Vec3& p, int image_w, int image_h) {
  const CameraBasis basis = camera_basis(rig);
  const Vec3 rel = p - rig.position;
  const double depth = dot(rel, basis.forward);
  if (depth <= kNearPlane) return std::nullopt;

  const double focal = focal_px(rig, image_h);
  const double xc = dot(rel, basis.right);
  const double yc = dot(rel, basis.up);
  return Vec2{image_w / 2.0 + focal * xc / depth, image_h / 2.0 - focal * yc / depth};
}

}  // namespace bikegen
