#pragma once

#include <array>
#include <optional>
#include <vector>

#include "bikegen/camera.hpp"
#include "bikegen/scene.hpp"

namespace bikegen {

/// Axis-aligned box in normalized image coordinates (fractions of width and
/// height), center/size representation, clipped to [0, 1].
struct BBox2D {
  double cx = 0.5;
  double cy = 0.5;
  double w = 0.0;
  double h = 0.0;
};

/// One ground-truth object: class id, box, and the two rotations in the
/// [0, 1] target space. The rotations depend only on the scene, never on the
/// camera.
struct AnnotationRecord {
  int class_id = 0;
  BBox2D box;
  double ry_u = 0.5;
  double rz_u = 0.5;
};

/// World-space corners of the bike's oriented bounding box: the model
/// footprint scaled, leaned about the bike's long axis, rotated to the world
/// heading (spot heading + rz), and moved to the bike's position in the spot.
std::array<Vec3, 8> bike_box_corners(const BikeInstance& bike, const SpotFrame& spot);

/// Orientation of the bike frame in world coordinates: lean about the long
/// axis, then yaw to spot heading + rz. Shared by annotation and rendering
/// so both agree on where the bike is.
Mat3 bike_pose(const BikeInstance& bike, const SpotFrame& spot);

/// World position of the bike's base center.
Vec3 bike_world_position(const BikeInstance& bike, const SpotFrame& spot);

/// Fraction of image area below which a projection does not count as
/// visible, and the minimum fraction of the unclipped projection that must
/// survive clipping.
inline constexpr double kMinVisibleAreaFraction = 0.01;
inline constexpr double kMinRetainedFraction = 0.25;

/// Projects the bike's eight box corners, takes the min/max rectangle and
/// clips it to the image. Returns nullopt when any corner is behind the
/// camera, the clipped area is under 1% of the image, or less than 25% of
/// the unclipped rectangle survives clipping.
std::optional<BBox2D> bike_bbox(const CameraRig& rig, const BikeInstance& bike,
                                const SpotFrame& spot, int image_w, int image_h);

/// One record per visible bike, in bike index order. Rotations come from the
/// spot-relative pair only, so every rig sees identical rotation fields.
std::vector<AnnotationRecord> annotate_scene(const Scene& scene, const CameraRig& rig,
                                             int image_w, int image_h,
                                             const ClassThresholds& th);

}  // namespace bikegen
