#include "bikegen/annotate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bikegen {

Vec3 bike_world_position(const BikeInstance& bike, const SpotFrame& spot) {
  const double h = deg_to_rad(spot.heading_deg);
  const double c = std::cos(h), s = std::sin(h);
  return {spot.origin.x + c * bike.pos_u - s * bike.pos_v,
          spot.origin.y + s * bike.pos_u + c * bike.pos_v, spot.origin.z};
}

Mat3 bike_pose(const BikeInstance& bike, const SpotFrame& spot) {
  // Bike frame: x along the bike, y to its left, z up, base at z = 0.
  // Lean by -ry about x moves the top toward +y (the bike's left) for
  // positive ry; heading is spot heading plus the spot-relative rz.
  const Mat3 lean = rot_x(-bike.rot.ry.radians());
  const double world_heading =
      deg_to_rad(spot.heading_deg) + bike.rot.rz.radians();
  return rot_z(world_heading) * lean;
}

std::array<Vec3, 8> bike_box_corners(const BikeInstance& bike, const SpotFrame& spot) {
  const BikeModel& model = bike_models().at(static_cast<std::size_t>(bike.model_id));
  const double L = model.length * bike.scale;
  const double H = model.height * bike.scale;
  const double W = model.width * bike.scale;
  if (L <= 0.0 || H <= 0.0 || W <= 0.0) {
    throw std::invalid_argument("bike_box_corners: degenerate model extent");
  }

  const Mat3 pose = bike_pose(bike, spot);
  const Vec3 base = bike_world_position(bike, spot);

  std::array<Vec3, 8> corners;
  int idx = 0;
  for (double x : {-L / 2, L / 2}) {
    for (double y : {-W / 2, W / 2}) {
      for (double z : {0.0, H}) {
        corners[idx++] = base + pose * Vec3{x, y, z};
      }
    }
  }
  return corners;
}

std::optional<BBox2D> bike_bbox(const CameraRig& rig, const BikeInstance& bike,
                                const SpotFrame& spot, int image_w, int image_h) {
  const auto corners = bike_box_corners(bike, spot);

  double x1 = 1e300, y1 = 1e300, x2 = -1e300, y2 = -1e300;
  for (const Vec3& c : corners) {
    const auto px = project_point(rig, c, image_w, image_h);
    if (!px) return std::nullopt;  // part of the box is behind the camera
    x1 = std::min(x1, px->x);
    y1 = std::min(y1, px->y);
    x2 = std::max(x2, px->x);
    y2 = std::max(y2, px->y);
  }

  const double unclipped = (x2 - x1) * (y2 - y1);
  const double cx1 = std::max(x1, 0.0);
  const double cy1 = std::max(y1, 0.0);
  const double cx2 = std::min(x2, static_cast<double>(image_w));
  const double cy2 = std::min(y2, static_cast<double>(image_h));
  if (cx2 <= cx1 || cy2 <= cy1) return std::nullopt;

  const double clipped = (cx2 - cx1) * (cy2 - cy1);
  if (clipped < kMinVisibleAreaFraction * image_w * image_h) return std::nullopt;
  if (unclipped > 0.0 && clipped / unclipped < kMinRetainedFraction) return std::nullopt;

  BBox2D box;
  box.cx = (cx1 + cx2) / 2.0 / image_w;
  box.cy = (cy1 + cy2) / 2.0 / image_h;
  box.w = (cx2 - cx1) / image_w;
  box.h = (cy2 - cy1) / image_h;
  return box;
}

std::vector<AnnotationRecord> annotate_scene(const Scene& scene, const CameraRig& rig,
                                             int image_w, int image_h,
                                             const ClassThresholds& th) {
  std::vector<AnnotationRecord> records;
  records.reserve(scene.bikes.size());
  for (const BikeInstance& bike : scene.bikes) {
    const auto box = bike_bbox(rig, bike, scene.spot, image_w, image_h);
    if (!box) continue;
    AnnotationRecord rec;
    rec.class_id = static_cast<int>(derive_park_class(bike.rot, th));
    rec.box = *box;
    rec.ry_u = to_unit(bike.rot.ry);
    rec.rz_u = to_unit(bike.rot.rz);
    records.push_back(rec);
  }
  return records;
}

}  // namespace bikegen
