#include "bikegen/scene_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bikegen {

namespace {

using Json = nlohmann::ordered_json;

Json vec3_to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json rgb_to_json(const Rgb& c) { return Json::array({c[0], c[1], c[2]}); }

Rgb rgb_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected [r, g, b]");
  Rgb c;
  for (int i = 0; i < 3; ++i) {
    const auto v = j[i].get<int>();
    if (v < 0 || v > 255) throw std::runtime_error("color channel outside [0, 255]");
    c[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
  }
  return c;
}

DistractorKind kind_from_name(const std::string& name) {
  for (int k = 0; k <= static_cast<int>(DistractorKind::Bin); ++k) {
    const auto kk = static_cast<DistractorKind>(k);
    if (name == distractor_kind_name(kk)) return kk;
  }
  throw std::runtime_error("unknown distractor kind: " + name);
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
  Json j;
  j["schema"] = kSceneSchema;
  j["seed"] = scene.seed;

  Json spot;
  spot["origin"] = vec3_to_json(scene.spot.origin);
  spot["heading_deg"] = scene.spot.heading_deg;
  spot["length_m"] = scene.spot.length_m;
  spot["width_m"] = scene.spot.width_m;
  j["spot"] = spot;

  Json bikes = Json::array();
  for (const BikeInstance& b : scene.bikes) {
    Json jb;
    jb["model_id"] = b.model_id;
    jb["pos_u"] = b.pos_u;
    jb["pos_v"] = b.pos_v;
    jb["ry_deg"] = b.rot.ry.degrees();
    jb["rz_deg"] = b.rot.rz.degrees();
    jb["scale"] = b.scale;
    jb["color"] = rgb_to_json(b.color);
    bikes.push_back(std::move(jb));
  }
  j["bikes"] = std::move(bikes);

  Json distractors = Json::array();
  for (const Distractor& d : scene.distractors) {
    Json jd;
    jd["kind"] = distractor_kind_name(d.kind);
    jd["position"] = vec3_to_json(d.position);
    jd["heading_deg"] = d.heading_deg;
    jd["size"] = vec3_to_json(d.size);
    jd["color"] = rgb_to_json(d.color);
    distractors.push_back(std::move(jd));
  }
  j["distractors"] = std::move(distractors);

  Json light;
  light["azimuth_deg"] = scene.light.azimuth_deg;
  light["elevation_deg"] = scene.light.elevation_deg;
  light["intensity"] = scene.light.intensity;
  j["light"] = std::move(light);

  j["ground_texture_id"] = scene.ground_texture_id;
  j["background_id"] = scene.background_id;
  return j.dump(2) + "\n";
}

Scene scene_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(std::string("scene parse: ") + e.what());
  }

  try {
    const auto schema = j.at("schema").get<std::string>();
    if (schema != kSceneSchema) {
      throw std::runtime_error("unsupported scene schema: " + schema);
    }

    Scene s;
    s.seed = j.at("seed").get<std::uint64_t>();

    const Json& spot = j.at("spot");
    s.spot.origin = vec3_from_json(spot.at("origin"));
    s.spot.heading_deg = spot.at("heading_deg").get<double>();
    s.spot.length_m = spot.at("length_m").get<double>();
    s.spot.width_m = spot.at("width_m").get<double>();
    if (s.spot.length_m <= 0.0 || s.spot.width_m <= 0.0) {
      throw std::runtime_error("non-positive spot extent");
    }

    for (const Json& jb : j.at("bikes")) {
      BikeInstance b;
      b.model_id = jb.at("model_id").get<int>();
      if (b.model_id < 0 || b.model_id >= static_cast<int>(bike_models().size())) {
        throw std::runtime_error("bike model_id out of range");
      }
      b.pos_u = jb.at("pos_u").get<double>();
      b.pos_v = jb.at("pos_v").get<double>();
      b.rot.ry = Angle(jb.at("ry_deg").get<double>());
      b.rot.rz = Angle(jb.at("rz_deg").get<double>());
      b.scale = jb.at("scale").get<double>();
      if (b.scale <= 0.0) throw std::runtime_error("non-positive bike scale");
      b.color = rgb_from_json(jb.at("color"));
      s.bikes.push_back(b);
    }

    for (const Json& jd : j.at("distractors")) {
      Distractor d;
      d.kind = kind_from_name(jd.at("kind").get<std::string>());
      d.position = vec3_from_json(jd.at("position"));
      d.heading_deg = jd.at("heading_deg").get<double>();
      d.size = vec3_from_json(jd.at("size"));
      if (d.size.x <= 0.0 || d.size.y <= 0.0 || d.size.z <= 0.0) {
        throw std::runtime_error("non-positive distractor size");
      }
      d.color = rgb_from_json(jd.at("color"));
      s.distractors.push_back(d);
    }

    const Json& light = j.at("light");
    s.light.azimuth_deg = light.at("azimuth_deg").get<double>();
    s.light.elevation_deg = light.at("elevation_deg").get<double>();
    s.light.intensity = light.at("intensity").get<double>();

    s.ground_texture_id = j.at("ground_texture_id").get<int>();
    s.background_id = j.at("background_id").get<int>();
    if (s.ground_texture_id < 0 || s.background_id < 0) {
      throw std::runtime_error("negative palette id");
    }
    return s;
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("scene parse: ") + e.what());
  }
}

void write_scene_file(const Scene& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << scene_to_json(scene);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Scene read_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scene_from_json(buf.str());
}

}  // namespace bikegen
