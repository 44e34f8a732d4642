#include "bikegen/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bikegen {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(value);
  while (std::getline(ss, cur, ',')) parts.push_back(trim(cur));
  return parts;
}

double to_double(const std::string& tok, const std::string& origin, int line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    fail(origin, line, "bad number '" + tok + "'");
  }
  return v;
}

int to_int(const std::string& tok, const std::string& origin, int line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    fail(origin, line, "bad integer '" + tok + "'");
  }
  return v;
}

Rgb to_color(const std::string& tok, const std::string& origin, int line) {
  if (tok.size() != 6 || tok.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    fail(origin, line, "bad color '" + tok + "' (want 6 hex digits)");
  }
  const auto byte = [&](std::size_t at) {
    return static_cast<std::uint8_t>(std::stoi(tok.substr(at, 2), nullptr, 16));
  };
  return {byte(0), byte(2), byte(4)};
}

std::vector<Rgb> to_palette(const std::string& value, const std::string& origin, int line) {
  std::vector<Rgb> out;
  for (const std::string& tok : split_list(value)) out.push_back(to_color(tok, origin, line));
  if (out.empty()) fail(origin, line, "empty palette");
  return out;
}

Range to_range(const std::string& value, const std::string& origin, int line) {
  const auto parts = split_list(value);
  if (parts.size() != 2) fail(origin, line, "expected 'lo,hi'");
  return {to_double(parts[0], origin, line), to_double(parts[1], origin, line)};
}

Vec3 to_vec3(const std::string& value, const std::string& origin, int line) {
  const auto parts = split_list(value);
  if (parts.size() != 3) fail(origin, line, "expected 'x,y,z'");
  return {to_double(parts[0], origin, line), to_double(parts[1], origin, line),
          to_double(parts[2], origin, line)};
}

std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string fmt_palette(const std::vector<Rgb>& p) {
  std::string out;
  char buf[8];
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    std::snprintf(buf, sizeof(buf), "%02x%02x%02x", p[i][0], p[i][1], p[i][2]);
    out += buf;
  }
  return out;
}

void apply_key(GenConfig& cfg, const std::string& key, const std::string& value,
               const std::string& origin, int line) {
  if (key == "preset") {
    try {
      cfg = preset_config(value);
    } catch (const std::invalid_argument& e) {
      fail(origin, line, e.what());
    }
  } else if (key == "bike_count_min") {
    cfg.bike_count_min = to_int(value, origin, line);
  } else if (key == "bike_count_max") {
    cfg.bike_count_max = to_int(value, origin, line);
  } else if (key == "class_mix") {
    const auto parts = split_list(value);
    if (parts.size() != 3) fail(origin, line, "class_mix wants 'parked,rotated,fallen'");
    for (int i = 0; i < 3; ++i) {
      cfg.class_mix[static_cast<std::size_t>(i)] =
          to_double(parts[static_cast<std::size_t>(i)], origin, line);
    }
  } else if (key == "camera_mode") {
    try {
      cfg.camera_mode = camera_mode_from_name(value);
    } catch (const std::invalid_argument& e) {
      fail(origin, line, e.what());
    }
  } else if (key == "split_ratio") {
    cfg.split_ratio = to_double(value, origin, line);
  } else if (key == "min_spacing_m") {
    cfg.min_spacing_m = to_double(value, origin, line);
  } else if (key == "theta_fallen_deg") {
    cfg.thresholds.theta_fallen = to_double(value, origin, line);
  } else if (key == "theta_rotated_deg") {
    cfg.thresholds.theta_rotated = to_double(value, origin, line);
  } else if (key == "spot_length_m") {
    cfg.spot_length_m = to_double(value, origin, line);
  } else if (key == "spot_width_m") {
    cfg.spot_width_m = to_double(value, origin, line);
  } else if (key == "spot_heading_max_deg") {
    cfg.spot_heading_max_deg = to_double(value, origin, line);
  } else if (key == "spot_jitter_m") {
    cfg.spot_jitter_m = to_double(value, origin, line);
  } else if (key == "scale_min") {
    cfg.scale_min = to_double(value, origin, line);
  } else if (key == "scale_max") {
    cfg.scale_max = to_double(value, origin, line);
  } else if (key == "fallen_lean_jitter_deg") {
    cfg.fallen_lean_jitter_deg = to_double(value, origin, line);
  } else if (key == "placement_retries") {
    cfg.placement_retries = to_int(value, origin, line);
  } else if (key == "cam_x") {
    cfg.cam_x = to_range(value, origin, line);
  } else if (key == "cam_y") {
    cfg.cam_y = to_range(value, origin, line);
  } else if (key == "cam_z") {
    cfg.cam_z = to_range(value, origin, line);
  } else if (key == "cam_restricted_pos") {
    cfg.cam_restricted_pos = to_vec3(value, origin, line);
  } else if (key == "cam_fov_deg") {
    cfg.cam_fov_deg = to_double(value, origin, line);
  } else if (key == "look_at_height_m") {
    cfg.look_at_height_m = to_double(value, origin, line);
  } else if (key == "max_distractors") {
    cfg.max_distractors = to_int(value, origin, line);
  } else if (key == "bike_palette") {
    cfg.bike_palette = to_palette(value, origin, line);
  } else if (key == "ground_palette") {
    cfg.ground_palette = to_palette(value, origin, line);
  } else if (key == "background_palette") {
    cfg.background_palette = to_palette(value, origin, line);
  } else if (key == "image_width") {
    cfg.image_width = to_int(value, origin, line);
  } else if (key == "image_height") {
    cfg.image_height = to_int(value, origin, line);
  } else {
    fail(origin, line, "unknown key '" + key + "'");
  }
}

}  // namespace

GenConfig parse_config_text(const std::string& text, const std::string& origin) {
  GenConfig cfg = default_config();
  std::set<std::string> seen;

  std::istringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    if (value.empty()) fail(origin, lineno, "empty value for '" + key + "'");
    if (!seen.insert(key).second) fail(origin, lineno, "duplicate key '" + key + "'");

    apply_key(cfg, key, value, origin, lineno);
  }

  try {
    validate_config(cfg);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return cfg;
}

GenConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string config_to_text(const GenConfig& cfg) {
  std::string out;
  const auto kv = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("bike_count_min", std::to_string(cfg.bike_count_min));
  kv("bike_count_max", std::to_string(cfg.bike_count_max));
  kv("class_mix", fmt_double(cfg.class_mix[0]) + "," + fmt_double(cfg.class_mix[1]) + "," +
                      fmt_double(cfg.class_mix[2]));
  kv("camera_mode", camera_mode_name(cfg.camera_mode));
  kv("split_ratio", fmt_double(cfg.split_ratio));
  kv("min_spacing_m", fmt_double(cfg.min_spacing_m));
  kv("theta_fallen_deg", fmt_double(cfg.thresholds.theta_fallen));
  kv("theta_rotated_deg", fmt_double(cfg.thresholds.theta_rotated));
  kv("spot_length_m", fmt_double(cfg.spot_length_m));
  kv("spot_width_m", fmt_double(cfg.spot_width_m));
  kv("spot_heading_max_deg", fmt_double(cfg.spot_heading_max_deg));
  kv("spot_jitter_m", fmt_double(cfg.spot_jitter_m));
  kv("scale_min", fmt_double(cfg.scale_min));
  kv("scale_max", fmt_double(cfg.scale_max));
  kv("fallen_lean_jitter_deg", fmt_double(cfg.fallen_lean_jitter_deg));
  kv("placement_retries", std::to_string(cfg.placement_retries));
  kv("cam_x", fmt_double(cfg.cam_x.lo) + "," + fmt_double(cfg.cam_x.hi));
  kv("cam_y", fmt_double(cfg.cam_y.lo) + "," + fmt_double(cfg.cam_y.hi));
  kv("cam_z", fmt_double(cfg.cam_z.lo) + "," + fmt_double(cfg.cam_z.hi));
  kv("cam_restricted_pos", fmt_double(cfg.cam_restricted_pos.x) + "," +
                               fmt_double(cfg.cam_restricted_pos.y) + "," +
                               fmt_double(cfg.cam_restricted_pos.z));
  kv("cam_fov_deg", fmt_double(cfg.cam_fov_deg));
  kv("look_at_height_m", fmt_double(cfg.look_at_height_m));
  kv("max_distractors", std::to_string(cfg.max_distractors));
  kv("bike_palette", fmt_palette(cfg.bike_palette));
  kv("ground_palette", fmt_palette(cfg.ground_palette));
  kv("background_palette", fmt_palette(cfg.background_palette));
  kv("image_width", std::to_string(cfg.image_width));
  kv("image_height", std::to_string(cfg.image_height));
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t config_hash(const GenConfig& cfg) { return fnv1a64(config_to_text(cfg)); }

}  // namespace bikegen
