#pragma once

#include <string>
#include <vector>

#include "bikegen/image.hpp"

namespace bikegen {

enum class FilterKind : std::uint8_t {
  None = 0,
  Conv = 1,      // explicit odd square kernel, applied as written (no flip)
  Lowpass = 2,   // box mean
  Gaussian = 3,  // sigma from the window size unless overridden
  Median = 4,
  Bilateral = 5,
};

struct FilterSpec {
  FilterKind kind = FilterKind::None;
  int size = 5;                 // odd window edge length
  std::vector<double> kernel;   // Conv only: size*size row-major weights
  double sigma = 0.0;           // Gaussian: 0 means derive from size
  double sigma_space = 2.0;     // Bilateral
  double sigma_color = 25.0;    // Bilateral
};

/// Named presets: none, conv5 (binomial), lowpass3, gauss5, median5,
/// bilateral5. Throws on unknown names.
FilterSpec filter_preset(const std::string& name);

const std::vector<std::string>& filter_preset_names();

/// Default Gaussian width for an odd window size:
/// 0.3 * ((size - 1) / 2 - 1) + 0.8.
double gaussian_sigma_from_size(int size);

/// Reflect-101 border index: ...2 1 | 0 1 2 ... n-1 | n-2 n-3...
int reflect101(int i, int n);

/// Applies the filter per channel with reflect-101 borders. Output values
/// are rounded half away from zero and clamped to [0, 255]. None returns an
/// identical copy.
Image smooth(const Image& img, const FilterSpec& spec);

}  // namespace bikegen
