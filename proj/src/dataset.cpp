#include "bikegen/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bikegen/rng.hpp"

namespace bikegen {

std::size_t train_count(std::size_t n_images, double split_ratio) {
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw std::invalid_argument("split ratio must lie in (0, 1)");
  }
  const auto train = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_images) * split_ratio));
  return std::min(train, n_images);
}

DatasetManifest assemble_dataset(const GenConfig& cfg, std::size_t n_images,
                                 std::uint64_t master_seed, const std::string& image_ext) {
  validate_config(cfg);
  if (n_images < 1) throw std::invalid_argument("n_images must be >= 1");
  if (image_ext != "png" && image_ext != "jpg") {
    throw std::invalid_argument("image extension must be png or jpg");
  }

  const std::size_t n_train = train_count(n_images, cfg.split_ratio);
  DatasetManifest manifest;
  manifest.items.reserve(n_images);
  char buf[64];
  for (std::size_t i = 0; i < n_images; ++i) {
    DatasetItem item;
    std::snprintf(buf, sizeof(buf), "img_%06zu", i);
    item.image_path = std::string("images/") + buf + "." + image_ext;
    item.label_path = std::string("labels/") + buf + ".txt";
    item.scene_path = std::string("scenes/") + buf + ".json";
    item.split = i < n_train ? "train" : "test";
    item.seed = mix_seed(master_seed, i);
    manifest.items.push_back(std::move(item));
  }
  return manifest;
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::string out;
  for (const DatasetItem& item : manifest.items) {
    nlohmann::ordered_json j;
    j["image"] = item.image_path;
    j["label"] = item.label_path;
    j["scene"] = item.scene_path;
    j["split"] = item.split;
    j["seed"] = item.seed;
    out += j.dump();
    out += '\n';
  }
  return out;
}

DatasetManifest parse_manifest(const std::string& text) {
  DatasetManifest manifest;
  std::istringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      DatasetItem item;
      item.image_path = j.at("image").get<std::string>();
      item.label_path = j.at("label").get<std::string>();
      item.scene_path = j.at("scene").get<std::string>();
      item.split = j.at("split").get<std::string>();
      item.seed = j.at("seed").get<std::uint64_t>();
      if (item.split != "train" && item.split != "test") {
        throw std::runtime_error("split must be train or test");
      }
      manifest.items.push_back(std::move(item));
    } catch (const std::exception& e) {
      throw std::runtime_error("manifest line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return manifest;
}

void write_manifest_file(const DatasetManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << format_manifest(manifest);
  if (!out) throw std::runtime_error("write failed: " + path);
}

DatasetManifest read_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

}  // namespace bikegen
