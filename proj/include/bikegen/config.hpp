#pragma once

#include <cstdint>
#include <string>

#include "bikegen/scene.hpp"

namespace bikegen {

/// Flat key = value schema; '#' starts a comment, blank lines are skipped.
/// A `preset` key resets every field to that preset and should come first;
/// later keys override single fields. Unknown or duplicate keys are errors
/// reported as "<origin>:<line>: <message>". Colors are 6-digit hex without
/// a leading '#', lists are comma-separated.
GenConfig parse_config_text(const std::string& text, const std::string& origin);

GenConfig load_config(const std::string& path);

/// Canonical serialization: every key in a fixed order, shortest
/// round-trippable numbers. parse(serialize(cfg)) == cfg.
std::string config_to_text(const GenConfig& cfg);

/// FNV-1a 64 over raw bytes.
std::uint64_t fnv1a64(const std::string& bytes);

/// FNV-1a 64 digest of the canonical serialization. Stable across runs and
/// platforms.
std::uint64_t config_hash(const GenConfig& cfg);

}  // namespace bikegen
