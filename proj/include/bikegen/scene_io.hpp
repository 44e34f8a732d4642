#pragma once

#include <string>

#include "bikegen/scene.hpp"

namespace bikegen {

inline constexpr const char* kSceneSchema = "bikegen-scene/1";

/// Serializes every field of the scene. Parsing the result reproduces the
/// scene exactly, including the rotation angles bit for bit.
std::string scene_to_json(const Scene& scene);

/// Throws std::runtime_error on malformed documents, unknown schema tags, or
/// out-of-range values.
Scene scene_from_json(const std::string& text);

void write_scene_file(const Scene& scene, const std::string& path);
Scene read_scene_file(const std::string& path);

}  // namespace bikegen
