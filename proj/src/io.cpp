#include "carnot47/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace carnot47 {

using nlohmann::json;

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  Config cfg;
  apply_config_json(cfg, j);
  return cfg;
}

void apply_config_json(Config& cfg, const json& j) {
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (t.contains("collinearity")) cfg.tol_collinearity = t.at("collinearity");
    if (t.contains("newton")) cfg.tol_newton = t.at("newton");
    if (t.contains("oracle")) cfg.tol_oracle = t.at("oracle");
  }
  if (j.contains("rk4_step")) cfg.rk4_step = j.at("rk4_step");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.contains("tau_max")) cfg.grid_tau_max = g.at("tau_max");
    if (g.contains("step")) cfg.grid_step = g.at("step");
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();

  if (!(cfg.tol_collinearity > 0.0) || !(cfg.tol_newton > 0.0) ||
      !(cfg.tol_oracle > 0.0) || !(cfg.rk4_step > 0.0) ||
      !(cfg.grid_step > 0.0) || !(cfg.grid_tau_max > 0.0))
    throw std::invalid_argument("config: tolerances and steps must be > 0");
}

json config_json(const Config& cfg) {
  return json{{"tolerances",
               {{"collinearity", cfg.tol_collinearity},
                {"newton", cfg.tol_newton},
                {"oracle", cfg.tol_oracle}}},
              {"rk4_step", cfg.rk4_step},
              {"grid", {{"tau_max", cfg.grid_tau_max}, {"step", cfg.grid_step}}},
              {"seed", cfg.seed}};
}

std::string config_hash(const Config& cfg) {
  const std::string dump = config_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json meta_json(const Config& cfg) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"config_hash", config_hash(cfg)},
              {"seed", cfg.seed}};
}

std::vector<std::string> meta_lines(const Config& cfg) {
  return {std::string("# tool: ") + kToolName + " " + kToolVersion,
          "# config_hash: " + config_hash(cfg),
          "# seed: " + std::to_string(cfg.seed)};
}

json to_json(const GroupPoint& q) {
  return json{{"x", q.x},
              {"ell", {q.ell(0), q.ell(1), q.ell(2)}},
              {"y", {q.y(0), q.y(1), q.y(2)}}};
}

GroupPoint group_point_from_json(const json& j) {
  GroupPoint q;
  q.x = j.at("x");
  for (int i = 0; i < 3; ++i) {
    q.ell(i) = j.at("ell").at(i);
    q.y(i) = j.at("y").at(i);
  }
  return q;
}

json to_json(const InvariantTuple& v) {
  return json{{"x", v.x}, {"ll", v.ll}, {"ly", v.ly}, {"yy", v.yy}};
}

InvariantTuple invariants_from_json(const json& j) {
  return InvariantTuple{j.at("x"), j.at("ll"), j.at("ly"), j.at("yy")};
}

json to_json(const GeodesicAnswer& a) {
  const char* branch = a.branch == Branch::Line    ? "line"
                       : a.branch == Branch::InCn ? "incn"
                                                  : "offcn";
  json R = json::array();
  for (int i = 0; i < 3; ++i)
    R.push_back({a.R(i, 0), a.R(i, 1), a.R(i, 2)});
  json out{{"params",
            {{"C1", a.params.c1},
             {"C2", a.params.c2},
             {"C3bar", a.params.c3bar},
             {"tau", a.params.tau}}},
           {"K", a.K},
           {"R", R},
           {"length", a.length},
           {"branch", branch},
           {"residual", a.residual},
           {"maxwell", a.maxwell}};
  if (!a.alternates.empty()) {
    json alts = json::array();
    for (const auto& p : a.alternates)
      alts.push_back({{"C1", p.c1},
                      {"C2", p.c2},
                      {"C3bar", p.c3bar},
                      {"tau", p.tau},
                      {"length", p.length()}});
    out["alternates"] = alts;
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text, std::size_t n) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    out.push_back(v);
  }
  if (out.size() != n)
    throw std::invalid_argument("expected " + std::to_string(n) +
                                " comma-separated reals, got " +
                                std::to_string(out.size()));
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& comments) {
  for (const auto& line : comments) os << line << "\n";
  os << "t,x,l1,l2,l3,y1,y2,y3,h0,h1,h2,h3,w1,w2,w3\n";
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const FullState& s = traj.states[i];
    os << format_double(traj.t[i]);
    const Vec7 qc = s.q.coords();
    for (int k = 0; k < 7; ++k) os << ',' << format_double(qc(k));
    for (int k = 0; k < 4; ++k) os << ',' << format_double(s.lambda.h(k));
    for (int k = 0; k < 3; ++k) os << ',' << format_double(s.lambda.w(k));
    os << '\n';
  }
}

void write_sphere_csv(std::ostream& os,
                      const std::vector<SphereSample>& samples,
                      const std::vector<std::string>& comments, bool slice,
                      double band) {
  for (const auto& line : comments) os << line << "\n";
  if (slice) {
    os << "x,l1,y2\n";
    for (const auto& s : samples) {
      const GroupPoint& p = s.point;
      if (std::abs(p.ell(1)) > band || std::abs(p.ell(2)) > band ||
          std::abs(p.y(0)) > band || std::abs(p.y(2)) > band)
        continue;
      os << format_double(p.x) << ',' << format_double(p.ell(0)) << ','
         << format_double(p.y(1)) << '\n';
    }
    return;
  }
  os << "x,l1,l2,l3,y1,y2,y3\n";
  for (const auto& s : samples) {
    const Vec7 c = s.point.coords();
    os << format_double(c(0));
    for (int k = 1; k < 7; ++k) os << ',' << format_double(c(k));
    os << '\n';
  }
}

}  // namespace carnot47
