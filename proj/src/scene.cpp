#include "bikegen/scene.hpp"

#include <cmath>
#include <stdexcept>

#include "bikegen/rng.hpp"

namespace bikegen {

namespace {

// Sub-seed streams; keep values stable, they are part of the output contract.
constexpr std::uint64_t kStreamSpot = 1;
constexpr std::uint64_t kStreamBikes = 2;
constexpr std::uint64_t kStreamDistractors = 3;
constexpr std::uint64_t kStreamDressing = 4;

const std::vector<Rgb> kBikePalette = {
    {196, 30, 58},  {36, 82, 175}, {32, 140, 60},  {230, 160, 30},
    {90, 90, 100},  {20, 20, 24},  {235, 235, 230}, {130, 60, 160},
};
const std::vector<Rgb> kGroundPalette = {
    {106, 110, 113}, {88, 92, 96}, {132, 126, 114}, {94, 120, 78}, {121, 100, 82},
};
const std::vector<Rgb> kBackgroundPalette = {
    {171, 205, 239}, {200, 214, 228}, {238, 222, 196}, {149, 165, 186},
};

double sample_open_interval(Rng& rng, double lo, double hi) {
  // Rejects the exact endpoints so strict inequalities survive downstream.
  for (;;) {
    const double v = rng.uniform(lo, hi);
    if (v > lo && v < hi) return v;
  }
}

RotationPair sample_rotation_for_class(Rng& rng, ParkClass target, const GenConfig& cfg) {
  const double tf = cfg.thresholds.theta_fallen;
  const double tr = cfg.thresholds.theta_rotated;
  double ry = 0.0, rz = 0.0;
  switch (target) {
    case ParkClass::Parked:
      ry = sample_open_interval(rng, -tf, tf);
      rz = sample_open_interval(rng, -tr, tr);
      break;
    case ParkClass::Rotated: {
      ry = sample_open_interval(rng, -tf, tf);
      // Uniform over the two heading arcs [tr, 180] and [-180, -tr].
      const double span = 180.0 - tr;
      const double mag = tr + rng.uniform01() * span;
      rz = rng.coin() ? mag : -mag;
      break;
    }
    case ParkClass::Fallen: {
      const double side = rng.coin() ? 90.0 : -90.0;
      // Keep |ry| at or above theta_fallen even for thresholds close to 90.
      const double down = std::min(cfg.fallen_lean_jitter_deg, 90.0 - tf);
      const double up = cfg.fallen_lean_jitter_deg;
      const double jitter = rng.uniform(-down, up);
      ry = side > 0 ? side + jitter : side - jitter;
      rz = rng.uniform(-180.0, 180.0);
      break;
    }
  }
  return RotationPair{Angle(ry), Angle(rz)};
}

struct DistractorTemplate {
  DistractorKind kind;
  Vec3 size;
  Rgb color;
};

const std::array<DistractorTemplate, 5> kDistractorTemplates = {{
    {DistractorKind::Vehicle, {4.2, 1.8, 1.5}, {70, 80, 110}},
    {DistractorKind::Pedestrian, {0.5, 0.4, 1.75}, {160, 120, 90}},
    {DistractorKind::Tree, {1.8, 1.8, 3.2}, {60, 110, 50}},
    {DistractorKind::Pole, {0.15, 0.15, 3.5}, {120, 120, 125}},
    {DistractorKind::Bin, {0.6, 0.6, 1.0}, {60, 100, 60}},
}};

// Conservative overlap test between an axis-aligned footprint around `pos`
// and the rotated spot rectangle, in the spot frame.
bool intersects_spot(const Vec3& pos, const Vec3& size, const SpotFrame& spot) {
  const double h = deg_to_rad(spot.heading_deg);
  const double dx = pos.x - spot.origin.x;
  const double dy = pos.y - spot.origin.y;
  const double u = std::cos(h) * dx + std::sin(h) * dy;
  const double v = -std::sin(h) * dx + std::cos(h) * dy;
  const double r = 0.5 * std::hypot(size.x, size.y);
  return std::fabs(u) < spot.length_m / 2 + r && std::fabs(v) < spot.width_m / 2 + r;
}

}  // namespace

const std::array<BikeModel, 4>& bike_models() {
  static const std::array<BikeModel, 4> models = {{
      {1.78, 1.08, 0.62},  // city
      {1.68, 1.02, 0.58},  // road
      {1.85, 1.12, 0.66},  // cargo
      {1.52, 0.94, 0.56},  // compact
  }};
  return models;
}

const char* distractor_kind_name(DistractorKind k) {
  switch (k) {
    case DistractorKind::Vehicle: return "vehicle";
    case DistractorKind::Pedestrian: return "pedestrian";
    case DistractorKind::Tree: return "tree";
    case DistractorKind::Pole: return "pole";
    default: return "bin";
  }
}

const char* camera_mode_name(CameraMode m) {
  switch (m) {
    case CameraMode::Free: return "free";
    case CameraMode::VerticalFree: return "vertical_free";
    default: return "restricted";
  }
}

CameraMode camera_mode_from_name(const std::string& name) {
  if (name == "free") return CameraMode::Free;
  if (name == "vertical_free") return CameraMode::VerticalFree;
  if (name == "restricted") return CameraMode::Restricted;
  throw std::invalid_argument("unknown camera mode: " + name);
}

GenConfig default_config() {
  GenConfig cfg;
  cfg.bike_palette = kBikePalette;
  cfg.ground_palette = kGroundPalette;
  cfg.background_palette = kBackgroundPalette;
  return cfg;
}

GenConfig preset_config(const std::string& name) {
  GenConfig cfg = default_config();
  if (name == "challenging") {
    cfg.bike_count_min = 3;
    cfg.bike_count_max = 20;
    cfg.min_spacing_m = 0.30;
    cfg.camera_mode = CameraMode::Free;
  } else if (name == "regular-free") {
    cfg.camera_mode = CameraMode::Free;
  } else if (name == "regular-vertical-free") {
    cfg.camera_mode = CameraMode::VerticalFree;
  } else if (name == "regular-restricted") {
    cfg.camera_mode = CameraMode::Restricted;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return cfg;
}

void validate_config(const GenConfig& cfg) {
  if (cfg.bike_count_min < 1 || cfg.bike_count_max < cfg.bike_count_min) {
    throw std::invalid_argument("bike count range must satisfy 1 <= min <= max");
  }
  double mix_sum = 0.0;
  for (double p : cfg.class_mix) {
    if (p < 0.0) throw std::invalid_argument("class mix entries must be nonnegative");
    mix_sum += p;
  }
  if (std::fabs(mix_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("class mix must sum to 1");
  }
  if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0)) {
    throw std::invalid_argument("split ratio must lie in (0, 1)");
  }
  if (cfg.min_spacing_m < 0.0) throw std::invalid_argument("min spacing must be >= 0");
  make_thresholds(cfg.thresholds.theta_fallen, cfg.thresholds.theta_rotated);
  if (cfg.spot_length_m <= 0.0 || cfg.spot_width_m <= 0.0) {
    throw std::invalid_argument("spot dimensions must be positive");
  }
  if (!(cfg.scale_min > 0.0 && cfg.scale_max >= cfg.scale_min)) {
    throw std::invalid_argument("scale range invalid");
  }
  if (!(cfg.cam_fov_deg > 20.0 && cfg.cam_fov_deg < 120.0)) {
    throw std::invalid_argument("camera fov must lie in (20, 120) degrees");
  }
  for (const Range* r : {&cfg.cam_x, &cfg.cam_y, &cfg.cam_z}) {
    if (!(r->hi >= r->lo)) throw std::invalid_argument("camera range is empty");
  }
  if (cfg.cam_z.lo <= 0.0 || cfg.cam_restricted_pos.z <= 0.0) {
    throw std::invalid_argument("camera height must be positive");
  }
  if (cfg.image_width < 64 || cfg.image_height < 64) {
    throw std::invalid_argument("image dimensions must be at least 64");
  }
  if (cfg.bike_palette.empty() || cfg.ground_palette.empty() || cfg.background_palette.empty()) {
    throw std::invalid_argument("palettes must not be empty");
  }
}

Scene sample_scene(const GenConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);

  Scene scene;
  scene.seed = seed;

  Rng spot_rng(mix_seed(seed, kStreamSpot));
  scene.spot.length_m = cfg.spot_length_m;
  scene.spot.width_m = cfg.spot_width_m;
  scene.spot.heading_deg =
      wrap_signed_deg(spot_rng.uniform(-cfg.spot_heading_max_deg, cfg.spot_heading_max_deg));
  scene.spot.origin = {spot_rng.uniform(-cfg.spot_jitter_m, cfg.spot_jitter_m),
                       spot_rng.uniform(-cfg.spot_jitter_m, cfg.spot_jitter_m), 0.0};

  Rng bike_rng(mix_seed(seed, kStreamBikes));
  const int target_count =
      static_cast<int>(bike_rng.uniform_int(cfg.bike_count_min, cfg.bike_count_max));

  const std::vector<double> mix(cfg.class_mix.begin(), cfg.class_mix.end());
  const double hu = cfg.spot_length_m / 2;
  const double hv = cfg.spot_width_m / 2;
  for (int i = 0; i < target_count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < cfg.placement_retries && !placed; ++attempt) {
      const double u = bike_rng.uniform(-hu, hu);
      const double v = bike_rng.uniform(-hv, hv);
      bool clear = true;
      for (const BikeInstance& other : scene.bikes) {
        const double du = u - other.pos_u;
        const double dv = v - other.pos_v;
        if (du * du + dv * dv < cfg.min_spacing_m * cfg.min_spacing_m) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;

      BikeInstance bike;
      bike.pos_u = u;
      bike.pos_v = v;
      bike.model_id = static_cast<int>(
          bike_rng.uniform_int(0, static_cast<std::int64_t>(bike_models().size()) - 1));
      bike.scale = bike_rng.uniform(cfg.scale_min, cfg.scale_max);
      bike.color = cfg.bike_palette[static_cast<std::size_t>(
          bike_rng.uniform_int(0, static_cast<std::int64_t>(cfg.bike_palette.size()) - 1))];
      const auto target = static_cast<ParkClass>(bike_rng.weighted_index(mix));
      bike.rot = sample_rotation_for_class(bike_rng, target, cfg);
      scene.bikes.push_back(bike);
      placed = true;
    }
    if (!placed) break;  // spot is saturated; accept the reduced count
  }
  if (static_cast<int>(scene.bikes.size()) < cfg.bike_count_min) {
    throw std::runtime_error("sample_scene: could not place the minimum bike count");
  }

  Rng distractor_rng(mix_seed(seed, kStreamDistractors));
  const int n_distractors = static_cast<int>(distractor_rng.uniform_int(0, cfg.max_distractors));
  for (int i = 0; i < n_distractors; ++i) {
    const auto& tmpl = kDistractorTemplates[static_cast<std::size_t>(
        distractor_rng.uniform_int(0, static_cast<std::int64_t>(kDistractorTemplates.size()) - 1))];
    for (int attempt = 0; attempt < 32; ++attempt) {
      Distractor d;
      d.kind = tmpl.kind;
      const double grow = distractor_rng.uniform(0.8, 1.2);
      d.size = tmpl.size * grow;
      d.color = tmpl.color;
      d.heading_deg = wrap_signed_deg(distractor_rng.uniform(-180.0, 180.0));
      d.position = {distractor_rng.uniform(-7.0, 7.0), distractor_rng.uniform(-1.5, 7.0), 0.0};
      if (intersects_spot(d.position, d.size, scene.spot)) continue;
      scene.distractors.push_back(d);
      break;
    }
  }

  Rng dressing_rng(mix_seed(seed, kStreamDressing));
  scene.light.azimuth_deg = wrap_signed_deg(dressing_rng.uniform(-180.0, 180.0));
  scene.light.elevation_deg = dressing_rng.uniform(30.0, 75.0);
  scene.light.intensity = dressing_rng.uniform(0.75, 1.25);
  scene.ground_texture_id = static_cast<int>(
      dressing_rng.uniform_int(0, static_cast<std::int64_t>(cfg.ground_palette.size()) - 1));
  scene.background_id = static_cast<int>(
      dressing_rng.uniform_int(0, static_cast<std::int64_t>(cfg.background_palette.size()) - 1));

  return scene;
}

std::array<std::size_t, 3> scene_class_histogram(const Scene& s, const ClassThresholds& th) {
  std::array<std::size_t, 3> counts{0, 0, 0};
  for (const BikeInstance& b : s.bikes) {
    counts[static_cast<std::size_t>(derive_park_class(b.rot, th))]++;
  }
  return counts;
}

}  // namespace bikegen
