#pragma once

#include <vector>

#include "bikegen/annotate.hpp"
#include "bikegen/camera.hpp"
#include "bikegen/image.hpp"
#include "bikegen/scene.hpp"

namespace bikegen {

enum class Shading : std::uint8_t { Flat = 0, Lambert = 1 };

enum class OutputFormat : std::uint8_t { Png = 0, Jpeg = 1 };

struct RenderConfig {
  int width = 640;
  int height = 360;
  Shading shading = Shading::Lambert;
  OutputFormat format = OutputFormat::Png;
  int jpeg_quality = 98;
  // Color pools indexed by the scene's ground_texture_id / background_id;
  // defaulted from the built-in palettes when left empty.
  std::vector<Rgb> ground_palette;
  std::vector<Rgb> background_palette;
};

struct Triangle {
  Vec3 a, b, c;
  Rgb color;
};

/// Triangle soup with per-face colors. Construction helpers reject
/// zero-area faces.
struct MeshPrimitive {
  std::vector<Triangle> triangles;

  void add(const Vec3& a, const Vec3& b, const Vec3& c, Rgb color);
  /// Axis box of extents (lx, ly, lz) with its base at local z = 0,
  /// transformed by pose then translated.
  void add_box(const Mat3& pose, const Vec3& translate, double lx, double ly, double lz,
               Rgb color);
  /// Prism approximating a cylinder. The axis points along local y.
  void add_cylinder_y(const Mat3& pose, const Vec3& translate, const Vec3& center_local,
                      double radius, double thickness, int segments, Rgb color);
};

/// Parametric triangle assembly for one bike, fully inside the oriented
/// bounding box used for annotation.
MeshPrimitive bike_mesh(const BikeInstance& bike, const SpotFrame& spot);

/// All scene geometry: ground plane, spot marking, bikes, distractors.
MeshPrimitive scene_mesh(const Scene& scene, const RenderConfig& cfg);

/// Deterministic z-buffered rasterization: fixed-point coverage with the
/// top-left fill rule, near-plane clipping, optional Lambert shading from
/// the scene light. Identical inputs produce identical bytes.
Image rasterize(const Scene& scene, const CameraRig& rig, const RenderConfig& cfg);

/// Writes the image in the configured format.
void write_image(const Image& img, const std::string& path, const RenderConfig& cfg);

}  // namespace bikegen
