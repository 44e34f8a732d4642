#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace bikegen {

/// Wraps an arbitrary degree reading onto (-180, 180]. A reading of 330
/// becomes -30; -180 and 180 both map to 180. Throws on non-finite input.
double wrap_signed_deg(double raw_deg);

/// Signed angle in degrees, invariant: value in (-180, 180].
class Angle {
 public:
  Angle() = default;
  explicit Angle(double raw_deg) : deg_(wrap_signed_deg(raw_deg)) {}

  double degrees() const { return deg_; }
  double radians() const { return deg_ * (3.14159265358979323846 / 180.0); }

  friend bool operator==(const Angle& a, const Angle& b) { return a.deg_ == b.deg_; }

 private:
  double deg_ = 0.0;
};

/// Object-to-spot rotation in the two annotated axes. ry is the lean about
/// the bike's long axis (back view, +/-90 means fallen); rz is the heading
/// about the vertical axis (top view).
struct RotationPair {
  Angle ry;
  Angle rz;
};

/// Parking status derived from the rotation pair.
enum class ParkClass : std::uint8_t { Parked = 0, Rotated = 1, Fallen = 2 };

inline const char* park_class_name(ParkClass c) {
  switch (c) {
    case ParkClass::Parked: return "parked";
    case ParkClass::Rotated: return "rotated";
    default: return "fallen";
  }
}

/// Angular boundaries of the three classes, in degrees.
/// Invariant: 0 < theta_rotated < theta_fallen <= 90.
struct ClassThresholds {
  double theta_fallen = 45.0;
  double theta_rotated = 10.0;
};

ClassThresholds make_thresholds(double theta_fallen, double theta_rotated);

/// Maps an angle to the network target space [0, 1]. Equivalent to
/// (radians + pi) / (2 pi); computed as (deg + 180) / 360 so that the grid
/// values 0 -> 0.5 and 90 -> 0.75 are exact.
double to_unit(Angle a);

/// Inverse of to_unit. u = 0 and u = 1 both decode to the boundary angle 180
/// under the wrap convention. Throws if u is outside [0, 1].
Angle from_unit(double u);

/// Rotation of an object heading relative to the spot heading, wrapped.
Angle relative_rotation(double object_heading_deg, double spot_heading_deg);

/// Snaps a lean angle to the nearest of {-90, 0, 90}; ties go to 0.
Angle quantize_lean(Angle ry);

/// parked / rotated / fallen decision: fallen wins when |ry| reaches
/// theta_fallen, otherwise rotated when |rz| reaches theta_rotated.
ParkClass derive_park_class(const RotationPair& rot, const ClassThresholds& th);

}  // namespace bikegen
