#pragma once

#include <cmath>
#include <numbers>

// Internal units are SI: metres, watts, 1/m^2, radians. Human units only
// appear at config boundaries.
namespace sap::units {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double per_km2_to_per_m2(double v) { return v * 1e-6; }
inline double per_m2_to_per_km2(double v) { return v * 1e6; }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace sap::units
