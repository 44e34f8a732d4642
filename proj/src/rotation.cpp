#include "bikegen/rotation.hpp"

namespace bikegen {

double wrap_signed_deg(double raw_deg) {
  if (!std::isfinite(raw_deg)) {
    throw std::invalid_argument("wrap_signed_deg: non-finite angle");
  }
  double r = std::fmod(raw_deg, 360.0);  // (-360, 360)
  if (r <= -180.0) {
    r += 360.0;
  } else if (r > 180.0) {
    r -= 360.0;
  }
  return r + 0.0;  // flush -0.0 to +0.0
}

ClassThresholds make_thresholds(double theta_fallen, double theta_rotated) {
  if (!(theta_rotated > 0.0 && theta_rotated < theta_fallen && theta_fallen <= 90.0)) {
    throw std::invalid_argument("class thresholds must satisfy 0 < rotated < fallen <= 90");
  }
  return ClassThresholds{theta_fallen, theta_rotated};
}

double to_unit(Angle a) { return (a.degrees() + 180.0) / 360.0; }

Angle from_unit(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("from_unit: value outside [0, 1]");
  }
  return Angle(u * 360.0 - 180.0);
}

Angle relative_rotation(double object_heading_deg, double spot_heading_deg) {
  if (!std::isfinite(object_heading_deg) || !std::isfinite(spot_heading_deg)) {
    throw std::invalid_argument("relative_rotation: non-finite heading");
  }
  return Angle(object_heading_deg - spot_heading_deg);
}

Angle quantize_lean(Angle ry) {
  const double d = ry.degrees();
  if (std::fabs(d) <= 45.0) return Angle(0.0);  // tie at 45 resolves to 0
  return Angle(d > 0.0 ? 90.0 : -90.0);
}

ParkClass derive_park_class(const RotationPair& rot, const ClassThresholds& th) {
  if (std::fabs(rot.ry.degrees()) >= th.theta_fallen) return ParkClass::Fallen;
  if (std::fabs(rot.rz.degrees()) >= th.theta_rotated) return ParkClass::Rotated;
  return ParkClass::Parked;
}

}  // namespace bikegen
