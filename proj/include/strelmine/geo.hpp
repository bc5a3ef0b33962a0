#pragma once

#include <string>
#include <vector>

namespace strelmine {

// Earth radius used by the haversine distance, in meters.
inline constexpr double kEarthRadiusM = 6'371'000.0;

struct Location {
  std::string id;
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
  std::string name;  // optional display name
};

// Great-circle distance between two coordinates in meters.
double haversine_m(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);
double haversine_m(const Location& a, const Location& b);

// Throws data_error on duplicate ids or out-of-range coordinates.
void validate_locations(const std::vector<Location>& locations);

// CSV with header `id,lat,lon[,name]`.
std::vector<Location> load_locations_csv(const std::string& path);
void write_locations_csv(const std::string& path, const std::vector<Location>& locations);

}  // namespace strelmine
