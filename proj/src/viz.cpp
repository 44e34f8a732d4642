#include "bikegen/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bikegen {

namespace {

// 5x7 glyphs, one byte per row, low five bits used.
struct Glyph {
  char ch;
  std::uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'-', {0x00, 0x00, 0x00, 0x0E, 0x00, 0x00, 0x00}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x06, 0x06}},
};

const std::uint8_t* glyph_rows(char ch) {
  for (const Glyph& g : kFont) {
    if (g.ch == ch) return g.rows;
  }
  return nullptr;
}

void set_pixel(Image& img, int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  std::uint8_t* p = img.pixel(x, y);
  p[0] = c[0];
  p[1] = c[1];
  p[2] = c[2];
}

void draw_line(Image& img, int x0, int y0, int x1, int y1, Rgb c) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    set_pixel(img, x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_rect_outline(Image& img, int x0, int y0, int x1, int y1, int thickness, Rgb c) {
  for (int t = 0; t < thickness; ++t) {
    const int a = x0 + t, b = y0 + t, cx = x1 - t, cy = y1 - t;
    if (a > cx || b > cy) break;
    draw_line(img, a, b, cx, b, c);
    draw_line(img, a, cy, cx, cy, c);
    draw_line(img, a, b, a, cy, c);
    draw_line(img, cx, b, cx, cy, c);
  }
}

void draw_circle(Image& img, int cx, int cy, int r, Rgb c) {
  int x = r, y = 0, err = 1 - r;
  while (x >= y) {
    for (auto [px, py] : {std::pair{x, y}, {y, x}, {-y, x}, {-x, y},
                          {-x, -y}, {-y, -x}, {y, -x}, {x, -y}}) {
      set_pixel(img, cx + px, cy + py, c);
    }
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
}

void draw_arc(Image& img, int cx, int cy, double radius, double sweep_deg, Rgb c) {
  const int steps = std::max(2, static_cast<int>(std::ceil(std::abs(sweep_deg) / 2.0)));
  for (int i = 0; i <= steps; ++i) {
    const double a = sweep_deg * i / steps;
    const double t = deg_to_rad(a);
    const int x = cx + static_cast<int>(std::lround(radius * std::sin(t)));
    const int y = cy - static_cast<int>(std::lround(radius * std::cos(t)));
    set_pixel(img, x, y, c);
  }
}

void draw_text(Image& img, int x, int y, const std::string& s, Rgb c) {
  int pen = x;
  for (char ch : s) {
    const std::uint8_t* rows = glyph_rows(ch);
    if (rows) {
      for (int ry = 0; ry < 7; ++ry) {
        for (int rx = 0; rx < 5; ++rx) {
          if (rows[ry] & (1 << (4 - rx))) set_pixel(img, pen + rx, y + ry, c);
        }
      }
    }
    pen += 6;
  }
}

std::string deg_label(double u) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%d",
                static_cast<int>(std::lround(from_unit(u).degrees())));
  return buf;
}

}  // namespace

void validate_style(const DialStyle& style) {
  if (style.inner_radius_px <= 0 || style.outer_radius_px <= style.inner_radius_px) {
    throw std::invalid_argument("dial style: need 0 < inner radius < outer radius");
  }
  if (style.box_thickness < 1) {
    throw std::invalid_argument("dial style: box thickness must be >= 1");
  }
}

Rgb class_color(const DialStyle& style, int class_id) {
  switch (class_id) {
    case 0: return style.parked;
    case 1: return style.rotated;
    case 2: return style.fallen;
    default: throw std::invalid_argument("class_color: class id outside {0, 1, 2}");
  }
}

Vec2 dial_geometry(Angle a, double radius_px) {
  if (!(radius_px > 0.0)) throw std::invalid_argument("dial_geometry: radius must be > 0");
  const double t = a.radians();
  return {radius_px * std::sin(t), -radius_px * std::cos(t)};
}

Image draw_overlay(const Image& img, const std::vector<AnnotationRecord>& records,
                   const DialStyle& style) {
  validate_style(style);
  Image out = img;
  for (const AnnotationRecord& rec : records) {
    const Rgb col = class_color(style, rec.class_id);
    const int x0 = static_cast<int>(std::lround((rec.box.cx - rec.box.w / 2) * img.width));
    const int x1 = static_cast<int>(std::lround((rec.box.cx + rec.box.w / 2) * img.width));
    const int y0 = static_cast<int>(std::lround((rec.box.cy - rec.box.h / 2) * img.height));
    const int y1 = static_cast<int>(std::lround((rec.box.cy + rec.box.h / 2) * img.height));
    draw_rect_outline(out, x0, y0, x1, y1, style.box_thickness, col);

    const int cx = (x0 + x1) / 2;
    const int cy = (y0 + y1) / 2;
    const double ry_deg = from_unit(rec.ry_u).degrees();
    const double rz_deg = from_unit(rec.rz_u).degrees();

    draw_circle(out, cx, cy, style.outer_radius_px, style.ring);
    draw_circle(out, cx, cy, style.inner_radius_px, style.ring);
    // Zero marks at the top of both rings.
    draw_line(out, cx, cy - style.outer_radius_px - 2, cx, cy - style.outer_radius_px + 2,
              style.ring);

    draw_arc(out, cx, cy, style.outer_radius_px, ry_deg, col);
    draw_arc(out, cx, cy, style.inner_radius_px, rz_deg, col);

    const Vec2 tip_y = dial_geometry(from_unit(rec.ry_u), style.outer_radius_px);
    const Vec2 tip_z = dial_geometry(from_unit(rec.rz_u), style.inner_radius_px);
    draw_line(out, cx, cy, cx + static_cast<int>(std::lround(tip_y.x)),
              cy + static_cast<int>(std::lround(tip_y.y)), col);
    draw_line(out, cx, cy, cx + static_cast<int>(std::lround(tip_z.x)),
              cy + static_cast<int>(std::lround(tip_z.y)), col);

    // Whole-degree readouts above the box: lean first, heading below it.
    draw_text(out, x0 + 2, y0 - 18, deg_label(rec.ry_u), style.text);
    draw_text(out, x0 + 2, y0 - 9, deg_label(rec.rz_u), style.text);
  }
  return out;
}

std::string overlay_svg(int width, int height, const std::vector<AnnotationRecord>& records,
                        const DialStyle& style) {
  validate_style(style);
  if (width <= 0 || height <= 0) throw std::invalid_argument("overlay_svg: empty canvas");

  char buf[512];
  std::string svg;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                width, height, width, height);
  svg += buf;

  auto color_attr = [](Rgb c) {
    char cb[16];
    std::snprintf(cb, sizeof(cb), "#%02x%02x%02x", c[0], c[1], c[2]);
    return std::string(cb);
  };

  for (const AnnotationRecord& rec : records) {
    const std::string col = color_attr(class_color(style, rec.class_id));
    const double x0 = (rec.box.cx - rec.box.w / 2) * width;
    const double y0 = (rec.box.cy - rec.box.h / 2) * height;
    const double cx = rec.box.cx * width;
    const double cy = rec.box.cy * height;

    std::snprintf(buf, sizeof(buf),
                  "  <rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                  "fill=\"none\" stroke=\"%s\" stroke-width=\"%d\"/>\n",
                  x0, y0, rec.box.w * width, rec.box.h * height, col.c_str(),
                  style.box_thickness);
    svg += buf;

    for (int r : {style.outer_radius_px, style.inner_radius_px}) {
      std::snprintf(buf, sizeof(buf),
                    "  <circle cx=\"%.2f\" cy=\"%.2f\" r=\"%d\" fill=\"none\" "
                    "stroke=\"%s\"/>\n",
                    cx, cy, r, color_attr(style.ring).c_str());
      svg += buf;
    }

    const struct {
      double u;
      int radius;
    } dials[2] = {{rec.ry_u, style.outer_radius_px}, {rec.rz_u, style.inner_radius_px}};
    for (const auto& d : dials) {
      const Angle a = from_unit(d.u);
      const Vec2 tip = dial_geometry(a, d.radius);
      std::snprintf(buf, sizeof(buf),
                    "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                    "stroke=\"%s\" stroke-width=\"2\"/>\n",
                    cx, cy, cx + tip.x, cy + tip.y, col.c_str());
      svg += buf;
    }

    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%.2f\" y=\"%.2f\" fill=\"%s\" font-family=\"monospace\" "
                  "font-size=\"10\">%s %s</text>\n",
                  x0 + 2, y0 - 4, color_attr(style.text).c_str(),
                  deg_label(rec.ry_u).c_str(), deg_label(rec.rz_u).c_str());
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace bikegen
