#pragma once

#include <cmath>

namespace l2r {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// Equirectangular approximation, adequate at region scales (tens of km).
inline double distance_m(double lon1, double lat1, double lon2, double lat2) {
  const double mean_lat = 0.5 * (lat1 + lat2) * kDegToRad;
  const double dx = (lon2 - lon1) * kDegToRad * std::cos(mean_lat) * kEarthRadiusM;
  const double dy = (lat2 - lat1) * kDegToRad * kEarthRadiusM;
  return std::hypot(dx, dy);
}

} // namespace l2r
