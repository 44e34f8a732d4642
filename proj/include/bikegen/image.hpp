#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bikegen {

/// Row-major 8-bit RGB image.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width * height * 3

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::uint8_t* pixel(int x, int y) {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const std::uint8_t* pixel(int x, int y) const {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }

  bool empty() const { return width <= 0 || height <= 0; }

  friend bool operator==(const Image& a, const Image& b) {
    return a.width == b.width && a.height == b.height && a.data == b.data;
  }
};

/// PNG with fixed encoder settings so identical pixels give identical bytes.
void write_png(const Image& img, const std::string& path);
Image read_png(const std::string& path);

void write_jpeg(const Image& img, const std::string& path, int quality);
Image read_jpeg(const std::string& path);

/// Dispatches on the extension (.png/.jpg/.jpeg). Throws on anything else or
/// on unreadable files.
Image read_image(const std::string& path);

}  // namespace bikegen
