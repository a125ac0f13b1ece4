// Serialization and configuration: JSON encodings of points, invariants and
// boundary-value answers, CSV writers for trajectories and sphere samples,
// and the tool configuration with its provenance hash.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot47/dynamics.hpp"
#include "carnot47/expmap.hpp"

namespace carnot47 {

inline constexpr const char* kToolName = "carnot47";
inline constexpr const char* kToolVersion = "0.1.0";

struct Config {
  double tol_collinearity = 1e-9;
  double tol_newton = 1e-10;
  double tol_oracle = 1e-8;
  double rk4_step = 1e-3;
  double grid_tau_max = 50.0;
  double grid_step = 1e-3;
  std::uint64_t seed = 1;
  std::string out_path;
};

/// Loads a JSON config file; absent keys keep their defaults.
Config load_config(const std::string& path);
void apply_config_json(Config& cfg, const nlohmann::json& j);
nlohmann::json config_json(const Config& cfg);

/// FNV-1a hash of the canonical JSON dump; stable provenance tag for
/// output metadata.
std::string config_hash(const Config& cfg);

nlohmann::json meta_json(const Config& cfg);
std::vector<std::string> meta_lines(const Config& cfg);

nlohmann::json to_json(const GroupPoint& q);
GroupPoint group_point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const InvariantTuple& v);
InvariantTuple invariants_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GeodesicAnswer& a);

/// Parses a comma-separated list of exactly n reals.
std::vector<double> parse_reals(const std::string& text, std::size_t n);

/// Full-precision decimal rendering (round-trips doubles exactly).
std::string format_double(double v);

/// Header t,x,l1,l2,l3,y1,y2,y3,h0,h1,h2,h3,w1,w2,w3; comment lines first.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& comments);

/// Columns x,l1,l2,l3,y1,y2,y3, or the (x, l1, y2) slice projection when
/// slice is true; rows outside the slice band are dropped.
void write_sphere_csv(std::ostream& os,
                      const std::vector<SphereSample>& samples,
                      const std::vector<std::string>& comments, bool slice,
                      double band);

}  // namespace carnot47
