// Command-line front end: geodesic evaluation, boundary-value solving,
// optimality reports, sphere data export and the verification suite.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "carnot47/io.hpp"
#include "carnot47/verify.hpp"

namespace c47 = carnot47;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitOutOfRange = 3;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

c47::GeodesicParams parse_params(const std::string& text) {
  const auto v = c47::parse_reals(text, 7);
  c47::GeodesicParams p;
  p.C = c47::Vec4(v[0], v[1], v[2], v[3]);
  p.Kvec = c47::Vec3(v[4], v[5], v[6]);
  return p;
}

c47::GroupPoint parse_endpoint(const std::string& text) {
  const auto v = c47::parse_reals(text, 7);
  c47::GroupPoint q;
  q.x = v[0];
  q.ell = c47::Vec3(v[1], v[2], v[3]);
  q.y = c47::Vec3(v[4], v[5], v[6]);
  return q;
}

const char* kind_name(c47::GeodesicKind k) {
  switch (k) {
    case c47::GeodesicKind::Line:
      return "line";
    case c47::GeodesicKind::InCn:
      return "incn";
    default:
      return "offcn";
  }
}

json classification_json(const c47::GeodesicClass& cls) {
  json j{{"class", kind_name(cls.kind)}};
  if (cls.kind == c47::GeodesicKind::Line)
    j["cut_time"] = "inf";
  else if (cls.kind == c47::GeodesicKind::InCn)
    j["cut_time"] = cls.cut_time;
  else
    j["cut_time"] = nullptr;  // not computed off C_n
  if (cls.kind != c47::GeodesicKind::Line)
    j["canonical"] = {{"C1", cls.canonical.C1},
                      {"C2", cls.canonical.C2},
                      {"C3bar", cls.canonical.c3bar},
                      {"K", cls.canonical.K}};
  return j;
}

int cmd_geodesic(const c47::Config& cfg, const std::string& params_text,
                 double tmax, int samples, bool oracle, bool canonical) {
  c47::GeodesicParams p = parse_params(params_text).normalized();
  const c47::GeodesicClass cls =
      c47::classify(p, cfg.tol_collinearity,
                    {cfg.grid_tau_max, cfg.grid_step, true});

  c47::Mat3 Rt = c47::Mat3::Identity();
  if (canonical && !p.is_line()) Rt = cls.canonical.R.transpose();

  c47::Trajectory traj;
  traj.t.reserve(samples + 1);
  traj.states.reserve(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    const double t = tmax * double(i) / double(samples);
    c47::FullState s;
    s.q = c47::geodesic_point(t, p);
    s.lambda.h = c47::fiber_solution(t, p);
    s.lambda.w = p.Kvec;
    if (canonical && !p.is_line()) {
      s.q = c47::act(Rt, s.q);
      s.lambda.h.tail<3>() = Rt * s.lambda.h.tail<3>();
      s.lambda.w = Rt * p.Kvec;
    }
    traj.t.push_back(t);
    traj.states.push_back(s);
  }

  double oracle_dev = 0.0;
  if (oracle) {
    c47::FullState s0;
    s0.lambda = p.initial_covector();
    const c47::Trajectory ref = c47::integrate_numeric(s0, tmax, cfg.rk4_step);
    for (std::size_t k = 0; k < ref.t.size(); ++k) {
      const double t = ref.t[k];
      oracle_dev = std::max(
          oracle_dev, (ref.states[k].q.coords() -
                       c47::geodesic_point(t, p).coords())
                          .cwiseAbs()
                          .maxCoeff());
      oracle_dev = std::max(
          oracle_dev,
          (ref.states[k].lambda.h - c47::fiber_solution(t, p)).cwiseAbs().maxCoeff());
    }
  }

  auto comments = c47::meta_lines(cfg);
  comments.push_back("# canonical_rotation: " +
                     std::string(canonical ? "true" : "false"));
  if (oracle)
    comments.push_back("# oracle_max_deviation: " +
                       c47::format_double(oracle_dev));

  std::ofstream file;
  std::ostream& os = open_out(file, cfg.out_path);
  c47::write_trajectory_csv(os, traj, comments);

  json summary = classification_json(cls);
  summary["level_residual"] = p.level_residual();
  summary["K"] = p.K();
  if (oracle) summary["oracle_max_deviation"] = oracle_dev;
  (cfg.out_path.empty() ? std::cerr : std::cout) << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_connect(const c47::Config& cfg, const std::string& endpoint_text) {
  const c47::GroupPoint q = parse_endpoint(endpoint_text);
  c47::ConnectOptions opts;
  opts.newton_tol = cfg.tol_newton;
  opts.cn_tol = cfg.tol_collinearity;
  const c47::GeodesicAnswer ans = c47::connect(q, opts);

  json out = c47::to_json(ans);
  out["meta"] = c47::meta_json(cfg);
  out["endpoint"] = c47::to_json(q);
  if (ans.maxwell)
    out["note"] =
        "endpoint is a Maxwell point: a one-parameter family of distinct "
        "minimizers arrives simultaneously";

  std::ofstream file;
  std::ostream& os = open_out(file, cfg.out_path);
  os << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_cut(const c47::Config& cfg, const std::string& params_text) {
  c47::GeodesicParams p = parse_params(params_text).normalized();
  const c47::GeodesicClass cls =
      c47::classify(p, cfg.tol_collinearity,
                    {cfg.grid_tau_max, cfg.grid_step, true});
  json out = classification_json(cls);
  out["meta"] = c47::meta_json(cfg);
  std::ofstream file;
  std::ostream& os = open_out(file, cfg.out_path);
  os << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_sphere(const c47::Config& cfg, int count, const std::string& family,
               const std::string& slice, double band) {
  c47::SphereOptions opts;
  opts.seed = cfg.seed;
  if (family == "generic")
    opts.family = c47::ParamFamily::Generic;
  else if (family == "incn")
    opts.family = c47::ParamFamily::InCn;
  else if (family == "line")
    opts.family = c47::ParamFamily::Line;
  else
    throw CLI::ValidationError("--family must be generic, incn or line");

  bool use_slice = false;
  if (!slice.empty()) {
    if (slice != "x,l1,y2")
      throw CLI::ValidationError("--slice supports the projection x,l1,y2");
    use_slice = true;
  }

  const auto samples = c47::sphere_sample(count, opts);
  auto comments = c47::meta_lines(cfg);
  comments.push_back("# count: " + std::to_string(count));
  comments.push_back("# family: " + family);
  comments.push_back("# slice: " + (slice.empty() ? std::string("none") : slice));
  if (use_slice) comments.push_back("# band: " + c47::format_double(band));

  std::ofstream file;
  std::ostream& os = open_out(file, cfg.out_path);
  c47::write_sphere_csv(os, samples, comments, use_slice, band);
  return kExitOk;
}

int cmd_verify(const c47::Config& cfg) {
  const auto results = c47::run_verify(cfg);
  json out{{"meta", c47::meta_json(cfg)},
           {"checks", c47::verify_report(results)}};
  std::ofstream file;
  std::ostream& os = open_out(file, cfg.out_path);
  os << out.dump(2) << "\n";
  bool all = true;
  for (const auto& r : results) {
    std::cerr << (r.pass ? "pass " : "FAIL ") << r.check << "\n";
    all = all && r.pass;
  }
  return all ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-Riemannian geodesics on the rank-4 step-2 Carnot group"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");

  c47::Config cfg;

  std::string params_text, endpoint_text, family = "generic", slice;
  double tmax = 10.0, band = 0.05;
  int samples = 1000, count = 0;
  bool oracle = false, canonical = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--tol", cfg.tol_newton, "solver tolerance");
    sub->add_option("--cn-tol", cfg.tol_collinearity,
                    "collinearity tolerance for C_n membership");
  };

  CLI::App* geo = app.add_subcommand(
      "geodesic", "evaluate a geodesic trajectory as CSV");
  geo->add_option("--params", params_text,
                  "C1,C2,C3,C4,K1,K2,K3 (rescaled onto the unit level set)")
      ->required();
  geo->add_option("--tmax", tmax, "final time");
  geo->add_option("--samples", samples, "number of sample intervals")
      ->check(CLI::PositiveNumber);
  geo->add_flag("--oracle", oracle,
                "append max deviation between closed form and RK4");
  geo->add_flag("--canonical", canonical,
                "emit the curve rotated into its canonical frame");
  add_common(geo);

  CLI::App* con = app.add_subcommand(
      "connect", "solve the boundary-value problem from the origin");
  con->add_option("--endpoint", endpoint_text, "x,l1,l2,l3,y1,y2,y3")
      ->required();
  add_common(con);

  CLI::App* cut = app.add_subcommand("cut", "classification and cut time");
  cut->add_option("--params", params_text, "C1,C2,C3,C4,K1,K2,K3")->required();
  add_common(cut);

  CLI::App* sph = app.add_subcommand("sphere", "sample the unit sphere");
  sph->add_option("--count", count, "number of parameter draws")->required();
  sph->add_option("--family", family, "generic | incn | line");
  sph->add_option("--slice", slice, "projection slice (x,l1,y2)");
  sph->add_option("--band", band, "slice half-width");
  add_common(sph);

  CLI::App* ver = app.add_subcommand("verify", "run the invariant suite");
  add_common(ver);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      c47::Config loaded = c47::load_config(config_path);
      // Flags already parsed win over file values only when given.
      const c47::Config defaults;
      if (cfg.seed == defaults.seed) cfg.seed = loaded.seed;
      if (cfg.out_path == defaults.out_path) cfg.out_path = loaded.out_path;
      if (cfg.tol_newton == defaults.tol_newton)
        cfg.tol_newton = loaded.tol_newton;
      if (cfg.tol_collinearity == defaults.tol_collinearity)
        cfg.tol_collinearity = loaded.tol_collinearity;
      cfg.tol_oracle = loaded.tol_oracle;
      cfg.rk4_step = loaded.rk4_step;
      cfg.grid_tau_max = loaded.grid_tau_max;
      cfg.grid_step = loaded.grid_step;
    }

    if (geo->parsed())
      return cmd_geodesic(cfg, params_text, tmax, samples, oracle, canonical);
    if (con->parsed()) return cmd_connect(cfg, endpoint_text);
    if (cut->parsed()) return cmd_cut(cfg, params_text);
    if (sph->parsed()) return cmd_sphere(cfg, count, family, slice, band);
    if (ver->parsed()) return cmd_verify(cfg);
  } catch (const c47::NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const c47::OutOfValidatedRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOutOfRange;
  } catch (const c47::SolveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
