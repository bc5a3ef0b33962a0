#include "strelmine/geo.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "strelmine/csvio.hpp"
#include "strelmine/errors.hpp"

namespace strelmine {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

double haversine_m(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
  if (lat1_deg == lat2_deg && lon1_deg == lon2_deg) return 0.0;
  const double phi1 = lat1_deg * kDegToRad;
  const double phi2 = lat2_deg * kDegToRad;
  const double dphi = (lat2_deg - lat1_deg) * kDegToRad;
  const double dlam = (lon2_deg - lon1_deg) * kDegToRad;
  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dlam / 2.0);
  const double a = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

double haversine_m(const Location& a, const Location& b) {
  return haversine_m(a.lat, a.lon, b.lat, b.lon);
}

void validate_locations(const std::vector<Location>& locations) {
  std::set<std::string> seen;
  for (const auto& loc : locations) {
    if (loc.id.empty()) throw data_error("location with empty id");
    if (!seen.insert(loc.id).second) throw data_error("duplicate location id: " + loc.id);
    if (!(loc.lat >= -90.0 && loc.lat <= 90.0)) {
      throw data_error("latitude out of range for location " + loc.id);
    }
    if (!(loc.lon >= -180.0 && loc.lon <= 180.0)) {
      throw data_error("longitude out of range for location " + loc.id);
    }
  }
}

std::vector<Location> load_locations_csv(const std::string& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw data_error("empty locations file: " + path);
  const auto& header = rows.front();
  if (header.size() < 3 || header[0] != "id" || header[1] != "lat" || header[2] != "lon") {
    throw data_error("locations CSV must start with header id,lat,lon[,name]: " + path);
  }
  const bool has_name = header.size() >= 4 && header[3] == "name";
  std::vector<Location> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 3) throw data_error("short row in locations CSV: " + path);
    Location loc;
    loc.id = row[0];
    auto lat = csv::parse_cell(row[1], "lat of " + loc.id);
    auto lon = csv::parse_cell(row[2], "lon of " + loc.id);
    if (!lat || !lon) throw data_error("missing coordinate for location " + loc.id);
    loc.lat = *lat;
    loc.lon = *lon;
    if (has_name && row.size() >= 4) loc.name = row[3];
    out.push_back(std::move(loc));
  }
  validate_locations(out);
  return out;
}

void write_locations_csv(const std::string& path, const std::vector<Location>& locations) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path);
  out << "id,lat,lon,name\n";
  for (const auto& loc : locations) {
    out << loc.id << ',' << csv::format_double(loc.lat) << ',' << csv::format_double(loc.lon)
        << ',' << loc.name << '\n';
  }
}

}  // namespace strelmine
