#include "strelmine/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "strelmine/errors.hpp"

namespace strelmine {

std::string model_to_geojson(const SpatialModel& model,
                             const std::map<std::string, int>* cluster_of_id) {
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const auto& loc : model.locations()) {
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "Point"}, {"coordinates", {loc.lon, loc.lat}}};
    nlohmann::ordered_json props;
    props["id"] = loc.id;
    if (!loc.name.empty()) props["name"] = loc.name;
    if (cluster_of_id) {
      auto it = cluster_of_id->find(loc.id);
      if (it != cluster_of_id->end()) props["cluster"] = it->second;
    }
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  for (const auto& e : model.edges()) {
    const auto& a = model.locations()[e.u];
    const auto& b = model.locations()[e.v];
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "LineString"},
                     {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}};
    f["properties"] = {{"weight_m", e.weight_m}};
    features.push_back(std::move(f));
  }
  nlohmann::ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color_for(int label) {
  return kPalette[static_cast<std::size_t>(std::max(0, label - 1)) %
                  (sizeof(kPalette) / sizeof(kPalette[0]))];
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string scatter_svg(const PstrelTemplate& tmpl, const Points& points,
                        const std::vector<int>& labels,
                        const std::map<int, std::vector<HyperBox>>& boxes) {
  if (tmpl.params.empty() || tmpl.priority.empty()) {
    throw config_error("scatter plot needs at least one parameter");
  }
  const int xi = tmpl.priority[0];
  const int yi = tmpl.priority.size() > 1 ? tmpl.priority[1] : -1;
  const double x_lo = tmpl.params[xi].inf, x_hi = tmpl.params[xi].sup;
  const double y_lo = yi >= 0 ? tmpl.params[yi].inf : 0.0;
  const double y_hi = yi >= 0 ? tmpl.params[yi].sup : 1.0;

  const double width = 640.0, height = 480.0, margin = 56.0;
  auto sx = [&](double v) {
    return margin + (v - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
  };
  auto sy = [&](double v) {
    return height - margin - (v - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const auto& [label, group] : boxes) {
    for (const auto& box : group) {
      const double bx0 = sx(box.dims[xi].lo), bx1 = sx(box.dims[xi].hi);
      const double by0 = yi >= 0 ? sy(box.dims[yi].hi) : sy(1.0);
      const double by1 = yi >= 0 ? sy(box.dims[yi].lo) : sy(0.0);
      svg += "<rect x=\"" + fmt(bx0) + "\" y=\"" + fmt(by0) + "\" width=\"" + fmt(bx1 - bx0) +
             "\" height=\"" + fmt(by1 - by0) + "\" fill=\"" + color_for(label) +
             "\" fill-opacity=\"0.12\" stroke=\"" + color_for(label) +
             "\" stroke-dasharray=\"5,3\"/>\n";
    }
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const double px = sx(points[i][xi]);
    const double py = yi >= 0 ? sy(points[i][yi]) : sy(0.5);
    svg += "<circle cx=\"" + fmt(px) + "\" cy=\"" + fmt(py) + "\" r=\"4\" fill=\"" +
           color_for(labels[i]) + "\"/>\n";
  }

  // Axes with end labels.
  svg += "<line x1=\"" + fmt(margin) + "\" y1=\"" + fmt(height - margin) + "\" x2=\"" +
         fmt(width - margin) + "\" y2=\"" + fmt(height - margin) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(margin) + "\" y1=\"" + fmt(height - margin) + "\" x2=\"" +
         fmt(margin) + "\" y2=\"" + fmt(margin) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fmt(width / 2) + "\" y=\"" + fmt(height - 16.0) +
         "\" text-anchor=\"middle\" font-size=\"14\">" + tmpl.params[xi].name + "</text>\n";
  svg += "<text x=\"" + fmt(margin) + "\" y=\"" + fmt(height - margin + 18.0) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + fmt(x_lo) + "</text>\n";
  svg += "<text x=\"" + fmt(width - margin) + "\" y=\"" + fmt(height - margin + 18.0) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + fmt(x_hi) + "</text>\n";
  if (yi >= 0) {
    svg += "<text x=\"16\" y=\"" + fmt(height / 2) + "\" text-anchor=\"middle\" font-size=\"14\""
           " transform=\"rotate(-90 16 " + fmt(height / 2) + ")\">" + tmpl.params[yi].name +
           "</text>\n";
    svg += "<text x=\"" + fmt(margin - 8.0) + "\" y=\"" + fmt(height - margin) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fmt(y_lo) + "</text>\n";
    svg += "<text x=\"" + fmt(margin - 8.0) + "\" y=\"" + fmt(margin + 4.0) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fmt(y_hi) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace strelmine
