#include "bikegen/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bikegen {

namespace {

constexpr double kNearPlane = 0.05;      // meters, polygon clip plane
constexpr double kAmbient = 0.35;        // Lambert floor
constexpr double kGroundExtent = 30.0;   // meters each way
constexpr double kStripeWidth = 0.06;    // spot marking, meters
constexpr double kStripeLift = 0.002;    // above ground to avoid z-fighting

struct CamVert {
  Vec3 p;  // camera space: x right, y up, z depth
};

struct ScreenVert {
  std::int64_t x, y;  // 28.4 fixed point
  double inv_z;
};

std::int64_t orient2d(const ScreenVert& a, const ScreenVert& b, std::int64_t px,
                      std::int64_t py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// Fill rule: edges owned by the triangle are its top edges (horizontal,
// pointing left) and left edges (pointing down in screen coordinates).
bool is_top_left(const ScreenVert& a, const ScreenVert& b) {
  if (a.y == b.y) return b.x < a.x;  // top
  return b.y > a.y;                  // left
}

std::uint8_t shade_channel(std::uint8_t c, double shade) {
  const double v = std::lround(c * shade);
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

Vec3 light_direction(const LightSpec& light) {
  const double az = deg_to_rad(light.azimuth_deg);
  const double el = deg_to_rad(light.elevation_deg);
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

// Clips the triangle against z >= kNearPlane. Returns up to 4 vertices.
int clip_near(const CamVert in[3], CamVert out[4]) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const CamVert& cur = in[i];
    const CamVert& prev = in[(i + 2) % 3];
    const bool cur_in = cur.p.z >= kNearPlane;
    const bool prev_in = prev.p.z >= kNearPlane;
    if (cur_in != prev_in) {
      const double t = (kNearPlane - prev.p.z) / (cur.p.z - prev.p.z);
      out[n++].p = prev.p + (cur.p - prev.p) * t;
    }
    if (cur_in) out[n++].p = cur.p;
  }
  return n;
}

const std::vector<Rgb>& resolve_palette(const std::vector<Rgb>& from_cfg,
                                        const std::vector<Rgb>& fallback) {
  return from_cfg.empty() ? fallback : from_cfg;
}

}  // namespace

void MeshPrimitive::add(const Vec3& a, const Vec3& b, const Vec3& c, Rgb color) {
  if (norm(cross(b - a, c - a)) < 1e-12) return;  // degenerate
  triangles.push_back({a, b, c, color});
}

void MeshPrimitive::add_box(const Mat3& pose, const Vec3& translate, double lx, double ly,
                            double lz, Rgb color) {
  Vec3 v[8];
  int idx = 0;
  for (double z : {0.0, lz}) {
    for (double y : {-ly / 2, ly / 2}) {
      for (double x : {-lx / 2, lx / 2}) {
        v[idx++] = translate + pose * Vec3{x, y, z};
      }
    }
  }
  // v index bits: x = bit0, y = bit1, z = bit2
  static constexpr int faces[6][4] = {
      {0, 1, 3, 2},  // bottom
      {4, 6, 7, 5},  // top
      {0, 2, 6, 4},  // -x
      {1, 5, 7, 3},  // +x
      {0, 4, 5, 1},  // -y
      {2, 3, 7, 6},  // +y
  };
  for (const auto& f : faces) {
    add(v[f[0]], v[f[1]], v[f[2]], color);
    add(v[f[0]], v[f[2]], v[f[3]], color);
  }
}

void MeshPrimitive::add_cylinder_y(const Mat3& pose, const Vec3& translate,
                                   const Vec3& center_local, double radius, double thickness,
                                   int segments, Rgb color) {
  if (segments < 3) throw std::invalid_argument("add_cylinder_y: segments < 3");
  const double h = thickness / 2.0;
  std::vector<Vec3> near_ring(segments), far_ring(segments);
  for (int k = 0; k < segments; ++k) {
    const double t = 2.0 * kPi * k / segments;
    const Vec3 rim{radius * std::cos(t), 0.0, radius * std::sin(t)};
    near_ring[k] = translate + pose * (center_local + rim + Vec3{0.0, -h, 0.0});
    far_ring[k] = translate + pose * (center_local + rim + Vec3{0.0, h, 0.0});
  }
  const Vec3 c_near = translate + pose * (center_local + Vec3{0.0, -h, 0.0});
  const Vec3 c_far = translate + pose * (center_local + Vec3{0.0, h, 0.0});
  for (int k = 0; k < segments; ++k) {
    const int j = (k + 1) % segments;
    add(near_ring[k], near_ring[j], far_ring[j], color);
    add(near_ring[k], far_ring[j], far_ring[k], color);
    add(c_near, near_ring[j], near_ring[k], color);
    add(c_far, far_ring[k], far_ring[j], color);
  }
}

MeshPrimitive bike_mesh(const BikeInstance& bike, const SpotFrame& spot) {
  const BikeModel& model = bike_models().at(static_cast<std::size_t>(bike.model_id));
  const double L = model.length * bike.scale;
  const double H = model.height * bike.scale;
  const double W = model.width * bike.scale;

  const Mat3 pose = bike_pose(bike, spot);
  const Vec3 base = bike_world_position(bike, spot);

  const Rgb dark{28, 28, 32};
  const Rgb saddle_c{45, 45, 50};
  const Rgb bar_c{60, 60, 66};

  // Everything below stays inside the oriented box
  // [-L/2, L/2] x [-W/2, W/2] x [0, H].
  const double r = 0.30 * H;       // wheel radius; diameter 0.6 H
  const double wt = 0.09 * W;      // wheel thickness
  const double tube = 0.08 * W;

  MeshPrimitive m;
  m.add_cylinder_y(pose, base, {-(L / 2 - r), 0.0, r}, r, wt, 12, dark);
  m.add_cylinder_y(pose, base, {L / 2 - r, 0.0, r}, r, wt, 12, dark);

  auto part = [&](double cx, double base_z, double lx, double ly, double lz, Rgb c) {
    m.add_box(pose, base + pose * Vec3{cx, 0.0, base_z}, lx, ly, lz, c);
  };
  part(0.0, r - 0.03 * H, L - 2 * r, tube, 0.06 * H, bike.color);      // bottom tube
  part(-0.17 * L, r, 0.05 * L, tube, 0.72 * H - r, bike.color);        // seat tube
  part(0.30 * L, r, 0.05 * L, tube, 0.82 * H - r, bike.color);         // head tube
  part(0.065 * L, 0.60 * H, 0.47 * L, tube, 0.05 * H, bike.color);     // top tube
  part(-0.17 * L, 0.72 * H, 0.16 * L, 0.28 * W, 0.045 * H, saddle_c);  // saddle
  part(0.30 * L, 0.82 * H, 0.05 * L, W, 0.05 * H, bar_c);              // handlebar
  return m;
}

namespace {

void add_distractor(MeshPrimitive& m, const Distractor& d) {
  const Mat3 pose = rot_z(deg_to_rad(d.heading_deg));
  const Vec3 p = d.position;
  const double sx = d.size.x, sy = d.size.y, sz = d.size.z;
  switch (d.kind) {
    case DistractorKind::Vehicle: {
      m.add_box(pose, p, sx, sy, 0.55 * sz, d.color);
      m.add_box(pose, p + pose * Vec3{-0.05 * sx, 0.0, 0.55 * sz}, 0.55 * sx, 0.9 * sy,
                0.45 * sz, Rgb{40, 46, 52});
      break;
    }
    case DistractorKind::Pedestrian: {
      m.add_box(pose, p, sx, sy, 0.82 * sz, d.color);
      m.add_box(pose, p + pose * Vec3{0.0, 0.0, 0.84 * sz}, 0.55 * sx, 0.55 * sy, 0.16 * sz,
                Rgb{198, 166, 140});
      break;
    }
    case DistractorKind::Tree: {
      m.add_box(pose, p, 0.30 * sx, 0.30 * sy, 0.45 * sz, Rgb{92, 64, 40});
      m.add_box(pose, p + pose * Vec3{0.0, 0.0, 0.45 * sz}, sx, sy, 0.55 * sz, d.color);
      break;
    }
    case DistractorKind::Pole:
    case DistractorKind::Bin:
      m.add_box(pose, p, sx, sy, sz, d.color);
      break;
  }
}

}  // namespace

MeshPrimitive scene_mesh(const Scene& scene, const RenderConfig& cfg) {
  const GenConfig defaults = default_config();
  const std::vector<Rgb>& ground =
      resolve_palette(cfg.ground_palette, defaults.ground_palette);

  MeshPrimitive m;
  const Rgb g = ground.at(static_cast<std::size_t>(scene.ground_texture_id) % ground.size());
  const double e = kGroundExtent;
  m.add({-e, -e, 0.0}, {e, -e, 0.0}, {e, e, 0.0}, g);
  m.add({-e, -e, 0.0}, {e, e, 0.0}, {-e, e, 0.0}, g);

  // Spot marking: a painted border around the spot rectangle.
  const Mat3 spot_rot = rot_z(deg_to_rad(scene.spot.heading_deg));
  const Vec3 lift = scene.spot.origin + Vec3{0.0, 0.0, kStripeLift};
  const double sl = scene.spot.length_m, sw = scene.spot.width_m, st = kStripeWidth;
  const Rgb paint{235, 235, 235};
  auto stripe = [&](double cu, double cv, double lu, double lv) {
    m.add_box(spot_rot, lift + spot_rot * Vec3{cu, cv, 0.0}, lu, lv, 0.001, paint);
  };
  stripe(0.0, sw / 2, sl + st, st);
  stripe(0.0, -sw / 2, sl + st, st);
  stripe(sl / 2, 0.0, st, sw);
  stripe(-sl / 2, 0.0, st, sw);

  for (const Distractor& d : scene.distractors) add_distractor(m, d);
  for (const BikeInstance& b : scene.bikes) {
    const MeshPrimitive bm = bike_mesh(b, scene.spot);
    m.triangles.insert(m.triangles.end(), bm.triangles.begin(), bm.triangles.end());
  }
  return m;
}

Image rasterize(const Scene& scene, const CameraRig& rig, const RenderConfig& cfg) {
  if (cfg.width <= 0 || cfg.height <= 0) {
    throw std::invalid_argument("rasterize: non-positive image size");
  }
  const GenConfig defaults = default_config();
  const std::vector<Rgb>& bgs =
      resolve_palette(cfg.background_palette, defaults.background_palette);
  const Rgb bg = bgs.at(static_cast<std::size_t>(scene.background_id) % bgs.size());

  Image img(cfg.width, cfg.height);
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      std::uint8_t* px = img.pixel(x, y);
      px[0] = bg[0];
      px[1] = bg[1];
      px[2] = bg[2];
    }
  }
  std::vector<double> zbuf(static_cast<std::size_t>(cfg.width) * cfg.height, 0.0);

  const CameraBasis basis = camera_basis(rig);
  const double focal = focal_px(rig, cfg.height);
  const Vec3 ldir = light_direction(scene.light);
  const MeshPrimitive mesh = scene_mesh(scene, cfg);

  for (const Triangle& tri : mesh.triangles) {
    double shade = 1.0;
    if (cfg.shading == Shading::Lambert) {
      const Vec3 n = normalized(cross(tri.b - tri.a, tri.c - tri.a));
      const double lambert = std::abs(dot(n, ldir));  // two-sided
      shade = scene.light.intensity * (kAmbient + (1.0 - kAmbient) * lambert);
    }
    const Rgb col{shade_channel(tri.color[0], shade), shade_channel(tri.color[1], shade),
                  shade_channel(tri.color[2], shade)};

    CamVert cam[3];
    const Vec3* world[3] = {&tri.a, &tri.b, &tri.c};
    for (int i = 0; i < 3; ++i) {
      const Vec3 rel = *world[i] - rig.position;
      cam[i].p = {dot(rel, basis.right), dot(rel, basis.up), dot(rel, basis.forward)};
    }

    CamVert clipped[4];
    const int nclip = clip_near(cam, clipped);
    if (nclip < 3) continue;

    ScreenVert sv[4];
    for (int i = 0; i < nclip; ++i) {
      const double z = clipped[i].p.z;
      const double px = cfg.width / 2.0 + focal * clipped[i].p.x / z;
      const double py = cfg.height / 2.0 - focal * clipped[i].p.y / z;
      sv[i] = {std::llround(px * 16.0), std::llround(py * 16.0), 1.0 / z};
    }

    for (int f = 1; f + 1 < nclip; ++f) {
      ScreenVert v0 = sv[0], v1 = sv[f], v2 = sv[f + 1];
      std::int64_t area = orient2d(v0, v1, v2.x, v2.y);
      if (area == 0) continue;
      if (area < 0) {
        std::swap(v1, v2);
        area = -area;
      }

      const std::int64_t bias0 = is_top_left(v1, v2) ? 0 : -1;
      const std::int64_t bias1 = is_top_left(v2, v0) ? 0 : -1;
      const std::int64_t bias2 = is_top_left(v0, v1) ? 0 : -1;

      const std::int64_t min_x = std::min({v0.x, v1.x, v2.x});
      const std::int64_t max_x = std::max({v0.x, v1.x, v2.x});
      const std::int64_t min_y = std::min({v0.y, v1.y, v2.y});
      const std::int64_t max_y = std::max({v0.y, v1.y, v2.y});
      const int x_lo = static_cast<int>(std::max<std::int64_t>(0, (min_x - 8) >> 4));
      const int x_hi = static_cast<int>(
          std::min<std::int64_t>(cfg.width - 1, (max_x - 8 + 15) >> 4));
      const int y_lo = static_cast<int>(std::max<std::int64_t>(0, (min_y - 8) >> 4));
      const int y_hi = static_cast<int>(
          std::min<std::int64_t>(cfg.height - 1, (max_y - 8 + 15) >> 4));

      for (int y = y_lo; y <= y_hi; ++y) {
        const std::int64_t sy = static_cast<std::int64_t>(y) * 16 + 8;
        for (int x = x_lo; x <= x_hi; ++x) {
          const std::int64_t sx = static_cast<std::int64_t>(x) * 16 + 8;
          const std::int64_t w0 = orient2d(v1, v2, sx, sy);
          const std::int64_t w1 = orient2d(v2, v0, sx, sy);
          const std::int64_t w2 = orient2d(v0, v1, sx, sy);
          if (w0 + bias0 < 0 || w1 + bias1 < 0 || w2 + bias2 < 0) continue;

          // 1/z is affine in screen space, so the screen barycentrics
          // interpolate it perspective-correctly.
          const double iz = (w0 * v0.inv_z + w1 * v1.inv_z + w2 * v2.inv_z) /
                            static_cast<double>(area);
          const std::size_t idx = static_cast<std::size_t>(y) * cfg.width + x;
          if (iz > zbuf[idx]) {
            zbuf[idx] = iz;
            std::uint8_t* px = img.pixel(x, y);
            px[0] = col[0];
            px[1] = col[1];
            px[2] = col[2];
          }
        }
      }
    }
  }
  return img;
}

void write_image(const Image& img, const std::string& path, const RenderConfig& cfg) {
  if (cfg.format == OutputFormat::Jpeg) {
    write_jpeg(img, path, cfg.jpeg_quality);
  } else {
    write_png(img, path);
  }
}

}  // namespace bikegen
