#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bikegen/scene.hpp"

namespace bikegen {

struct DatasetItem {
  std::string image_path;  // relative to the dataset root
  std::string label_path;
  std::string scene_path;
  std::string split;  // "train" or "test"
  std::uint64_t seed = 0;
};

struct DatasetManifest {
  std::vector<DatasetItem> items;
};

/// Train size for an n-image dataset: round(n * ratio), remainder test.
std::size_t train_count(std::size_t n_images, double split_ratio);

/// Deterministic manifest: item i gets seed mix_seed(master_seed, i), paths
/// images/img_<i>.<ext>, labels/img_<i>.txt, scenes/img_<i>.json with
/// six-digit indices, and split "train" for the first round(n * ratio)
/// items. Pure function of its arguments.
DatasetManifest assemble_dataset(const GenConfig& cfg, std::size_t n_images,
                                 std::uint64_t master_seed,
                                 const std::string& image_ext = "png");

/// One structured record per line.
std::string format_manifest(const DatasetManifest& manifest);
DatasetManifest parse_manifest(const std::string& text);

void write_manifest_file(const DatasetManifest& manifest, const std::string& path);
DatasetManifest read_manifest_file(const std::string& path);

}  // namespace bikegen
