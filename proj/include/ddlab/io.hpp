#pragma once

// JSON point-set files (an array of ["num/den", "num/den"] pairs), distance
// profile serialization and the one-line CSV profile summary.

#include "ddlab/distance_stats.hpp"
#include "ddlab/geometry.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddlab {

inline nlohmann::json to_json(const Point& p) { return nlohmann::json::array({to_string(p.x), to_string(p.y)}); }

inline Point point_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("point must be a two-element array");
  const auto coord = [](const nlohmann::json& c) -> Scalar {
    if (c.is_string()) return parse_scalar(c.get<std::string>());
    if (c.is_number_integer()) return Scalar(Integer(std::to_string(c.get<long long>())));
    throw std::invalid_argument("coordinates must be \"num/den\" strings");
  };
  return {coord(j[0]), coord(j[1])};
}

inline nlohmann::json to_json(const PointSet& set) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Point& p : set) arr.push_back(to_json(p));
  return arr;
}

inline PointSet point_set_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("point set must be a JSON array");
  std::vector<Point> pts;
  pts.reserve(j.size());
  for (const auto& e : j) pts.push_back(point_from_json(e));
  return PointSet(std::move(pts));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary sibling and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline PointSet load_point_set(const std::filesystem::path& path) {
  return point_set_from_json(nlohmann::json::parse(read_file(path)));
}

inline nlohmann::json to_json(const DistanceProfile& profile) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [v, c] : profile.histogram) hist.push_back({to_string(v), c});
  nlohmann::json j = {{"metric", std::string(to_string(profile.metric))},
                      {"bipartite", profile.bipartite},
                      {"pairs", profile.pairs},
                      {"distinct_count", profile.distinct_count()},
                      {"max_multiplicity", profile.max_multiplicity()},
                      {"histogram", hist}};
  if (profile.bipartite) j["a_subset_of_p"] = profile.a_subset_of_p;
  return j;
}

inline constexpr const char* kProfileCsvHeader = "metric,n,distinct_count,max_multiplicity";

inline std::string profile_csv_row(const DistanceProfile& profile, std::size_t n) {
  return std::string(to_string(profile.metric)) + "," + std::to_string(n) + "," +
         std::to_string(profile.distinct_count()) + "," + std::to_string(profile.max_multiplicity());
}

}  // namespace ddlab
