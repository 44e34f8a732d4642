#pragma once

#include <string>
#include <vector>

#include "bikegen/annotate.hpp"
#include "bikegen/image.hpp"
#include "bikegen/rotation.hpp"

namespace bikegen {

/// Nested-dial styling. The outer circle carries the lean (ry), the inner
/// circle the heading (rz). Class colors: parked green, rotated blue,
/// fallen orange.
struct DialStyle {
  int outer_radius_px = 22;
  int inner_radius_px = 13;
  Rgb parked{60, 180, 75};
  Rgb rotated{40, 110, 255};
  Rgb fallen{255, 140, 0};
  Rgb ring{235, 235, 235};
  Rgb text{255, 255, 255};
  int box_thickness = 2;
};

/// Throws unless 0 < inner radius < outer radius.
void validate_style(const DialStyle& style);

Rgb class_color(const DialStyle& style, int class_id);

/// Offset of the dial needle tip from the dial center for a signed angle:
/// radius * (sin t, -cos t). Zero degrees points straight up in image
/// coordinates; positive angles sweep clockwise.
Vec2 dial_geometry(Angle a, double radius_px);

/// Returns a copy of the image with, per record: the class-colored box
/// outline, two dial rings at the box center, arcs sweeping from the top to
/// ry (outer) and rz (inner) with needles, and the two angles printed in
/// whole degrees. The input image and records are never modified;
/// re-running produces identical bytes.
Image draw_overlay(const Image& img, const std::vector<AnnotationRecord>& records,
                   const DialStyle& style);

/// Same geometry as draw_overlay in vector form.
std::string overlay_svg(int width, int height, const std::vector<AnnotationRecord>& records,
                        const DialStyle& style);

}  // namespace bikegen
