#include "bikegen/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bikegen {

namespace {

void check_spec(const Image& img, const FilterSpec& spec) {
  if (img.empty()) throw std::invalid_argument("smooth: empty image");
  if (spec.kind == FilterKind::None) return;
  if (spec.size < 1 || spec.size % 2 == 0) {
    throw std::invalid_argument("smooth: window size must be odd and positive");
  }
  if (spec.kind == FilterKind::Conv &&
      spec.kernel.size() != static_cast<std::size_t>(spec.size) * spec.size) {
    throw std::invalid_argument("smooth: kernel length must be size*size");
  }
  if (spec.kind == FilterKind::Gaussian && spec.sigma < 0.0) {
    throw std::invalid_argument("smooth: negative sigma");
  }
  if (spec.kind == FilterKind::Bilateral &&
      (spec.sigma_space <= 0.0 || spec.sigma_color <= 0.0)) {
    throw std::invalid_argument("smooth: bilateral sigmas must be positive");
  }
}

std::uint8_t to_byte(double v) {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

Image convolve(const Image& img, const std::vector<double>& k, int size) {
  const int h = size / 2;
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int dy = -h; dy <= h; ++dy) {
        const int sy = reflect101(y + dy, img.height);
        for (int dx = -h; dx <= h; ++dx) {
          const int sx = reflect101(x + dx, img.width);
          const double w = k[static_cast<std::size_t>(dy + h) * size + (dx + h)];
          const std::uint8_t* p = img.pixel(sx, sy);
          acc[0] += w * p[0];
          acc[1] += w * p[1];
          acc[2] += w * p[2];
        }
      }
      std::uint8_t* q = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) q[c] = to_byte(acc[c]);
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  const int h = size / 2;
  std::vector<double> k(static_cast<std::size_t>(size) * size);
  double sum = 0.0;
  for (int dy = -h; dy <= h; ++dy) {
    for (int dx = -h; dx <= h; ++dx) {
      const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      k[static_cast<std::size_t>(dy + h) * size + (dx + h)] = w;
      sum += w;
    }
  }
  for (double& w : k) w /= sum;
  return k;
}

Image median_filter(const Image& img, int size) {
  const int h = size / 2;
  Image out(img.width, img.height);
  std::vector<std::uint8_t> window(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      std::uint8_t* q = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        std::size_t n = 0;
        for (int dy = -h; dy <= h; ++dy) {
          const int sy = reflect101(y + dy, img.height);
          for (int dx = -h; dx <= h; ++dx) {
            const int sx = reflect101(x + dx, img.width);
            window[n++] = img.pixel(sx, sy)[c];
          }
        }
        auto mid = window.begin() + static_cast<std::ptrdiff_t>(n / 2);
        std::nth_element(window.begin(), mid, window.begin() + static_cast<std::ptrdiff_t>(n));
        q[c] = *mid;
      }
    }
  }
  return out;
}

Image bilateral_filter(const Image& img, int size, double sigma_space, double sigma_color) {
  const int h = size / 2;
  const double inv_2ss = 1.0 / (2.0 * sigma_space * sigma_space);
  const double inv_2sc = 1.0 / (2.0 * sigma_color * sigma_color);
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t* center = img.pixel(x, y);
      std::uint8_t* q = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0, wsum = 0.0;
        for (int dy = -h; dy <= h; ++dy) {
          const int sy = reflect101(y + dy, img.height);
          for (int dx = -h; dx <= h; ++dx) {
            const int sx = reflect101(x + dx, img.width);
            const double v = img.pixel(sx, sy)[c];
            const double dc = v - center[c];
            const double w = std::exp(-(dx * dx + dy * dy) * inv_2ss) *
                             std::exp(-dc * dc * inv_2sc);
            acc += w * v;
            wsum += w;
          }
        }
        q[c] = to_byte(acc / wsum);
      }
    }
  }
  return out;
}

}  // namespace

int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

double gaussian_sigma_from_size(int size) {
  if (size < 1 || size % 2 == 0) {
    throw std::invalid_argument("gaussian_sigma_from_size: size must be odd and positive");
  }
  return 0.3 * ((size - 1) / 2 - 1) + 0.8;
}

FilterSpec filter_preset(const std::string& name) {
  FilterSpec spec;
  if (name == "none") {
    spec.kind = FilterKind::None;
  } else if (name == "conv5") {
    spec.kind = FilterKind::Conv;
    spec.size = 5;
    // Outer product of the binomial row [1 4 6 4 1] / 16.
    const double row[5] = {1, 4, 6, 4, 1};
    spec.kernel.resize(25);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) spec.kernel[static_cast<std::size_t>(i) * 5 + j] =
          row[i] * row[j] / 256.0;
    }
  } else if (name == "lowpass3") {
    spec.kind = FilterKind::Lowpass;
    spec.size = 3;
  } else if (name == "gauss5") {
    spec.kind = FilterKind::Gaussian;
    spec.size = 5;
  } else if (name == "median5") {
    spec.kind = FilterKind::Median;
    spec.size = 5;
  } else if (name == "bilateral5") {
    spec.kind = FilterKind::Bilateral;
    spec.size = 5;
  } else {
    throw std::invalid_argument("unknown filter preset: " + name);
  }
  return spec;
}

const std::vector<std::string>& filter_preset_names() {
  static const std::vector<std::string> names{"none",    "conv5",   "lowpass3",
                                              "gauss5",  "median5", "bilateral5"};
  return names;
}

Image smooth(const Image& img, const FilterSpec& spec) {
  check_spec(img, spec);
  switch (spec.kind) {
    case FilterKind::None:
      return img;
    case FilterKind::Conv:
      return convolve(img, spec.kernel, spec.size);
    case FilterKind::Lowpass: {
      const double w = 1.0 / (static_cast<double>(spec.size) * spec.size);
      return convolve(img, std::vector<double>(static_cast<std::size_t>(spec.size) * spec.size, w),
                      spec.size);
    }
    case FilterKind::Gaussian: {
      const double sigma =
          spec.sigma > 0.0 ? spec.sigma : gaussian_sigma_from_size(spec.size);
      return convolve(img, gaussian_kernel(spec.size, sigma), spec.size);
    }
    case FilterKind::Median:
      return median_filter(img, spec.size);
    case FilterKind::Bilateral:
      return bilateral_filter(img, spec.size, spec.sigma_space, spec.sigma_color);
  }
  throw std::logic_error("smooth: unhandled filter kind");
}

}  // namespace bikegen
