#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smlab/error.hpp"
#include "smlab/geometry.hpp"
#include "smlab/hardy.hpp"
#include "smlab/params.hpp"
#include "smlab/perturbation.hpp"
#include "smlab/reduction.hpp"
#include "smlab/regression.hpp"
#include "smlab/report.hpp"
#include "smlab/spectral.hpp"

namespace smlab::cli {

enum ExitCode : int { ok = 0, validation = 2, numerical = 3, insufficient = 4, io = 5 };

struct RunConfig {
  std::string command;
  double gamma = 0.0;
  int dim = 2;
  int mode = 0;
  std::size_t k = 3;
  std::optional<double> eps_min;
  std::optional<double> eps_max;
  std::size_t eps_count = 12;
  std::size_t mesh_nodes = 4096;  // elements of the base radial mesh
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 20240601;
  std::string route = "radial";
  std::string refine = "7..12";
  double tol = 1e-12;
  int grid = 512;
  int stencil = 16;
  double c = 2.0;
  double a = 0.0;
  std::size_t points = 200;

  ModelParams params() const { return ModelParams::make(dim, gamma, mode, a); }

  void validate() const {
    params();
    if (format != "csv" && format != "json") throw InputError("--format must be csv or json");
    if (k < 1) throw InputError("--k must be >= 1");
    if (eps_count < 2) throw InputError("--eps-count must be >= 2");
    if (!(tol > 0.0)) throw InputError("--tol must be positive");
  }
};

// Keys accepted in a --config JSON file; flags given on the command line win.
inline void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "gamma") cfg.gamma = v.get<double>();
      else if (key == "dim") cfg.dim = v.get<int>();
      else if (key == "mode" || key == "n") cfg.mode = v.get<int>();
      else if (key == "k") cfg.k = v.get<std::size_t>();
      else if (key == "eps_min") cfg.eps_min = v.get<double>();
      else if (key == "eps_max") cfg.eps_max = v.get<double>();
      else if (key == "eps_count") cfg.eps_count = v.get<std::size_t>();
      else if (key == "mesh_nodes") cfg.mesh_nodes = v.get<std::size_t>();
      else if (key == "format") cfg.format = v.get<std::string>();
      else if (key == "out") cfg.out = v.get<std::string>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "route") cfg.route = v.get<std::string>();
      else if (key == "refine") cfg.refine = v.get<std::string>();
      else if (key == "tol") cfg.tol = v.get<double>();
      else if (key == "grid") cfg.grid = v.get<int>();
      else if (key == "stencil") cfg.stencil = v.get<int>();
      else if (key == "c") cfg.c = v.get<double>();
      else if (key == "a") cfg.a = v.get<double>();
      else if (key == "points") cfg.points = v.get<std::size_t>();
      else throw InputError("unknown config key: " + key);
    } catch (const nlohmann::json::exception& e) {
      throw InputError("config key " + key + ": " + e.what());
    }
  }
}

inline nlohmann::json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file: " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config file is not valid JSON: ") + e.what());
  }
}

namespace detail {

using report::fmt;
using Json = nlohmann::ordered_json;

inline std::vector<double> eps_grid(const RunConfig& cfg, double lo, double hi) {
  return log_space(cfg.eps_min.value_or(lo), cfg.eps_max.value_or(hi), cfg.eps_count);
}

inline report::Provenance provenance(const RunConfig& cfg) {
  report::Provenance p(cfg.command);
  p.add("gamma", cfg.gamma).add("dim", cfg.dim).add("mode", cfg.mode);
  return p;
}

inline std::string finish(const RunConfig& cfg, const report::Table& t, const report::Provenance& prov,
                          Json extra = Json::object()) {
  std::ostringstream os;
  if (cfg.format == "csv") {
    t.write_csv(os, prov);
  } else {
    Json j = Json::object();
    j["provenance"] = prov.json();
    for (auto& [k, v] : extra.items()) j[k] = v;
    j["rows"] = t.json_rows();
    os << j.dump(2) << '\n';
  }
  return os.str();
}

inline double r12(double v) { return report::round12(v); }

inline std::string cmd_spectrum(const RunConfig& cfg) {
  const auto p = cfg.params();
  if (p.dim != 2) throw ConfigurationError("spectrum: the radial eigenproblem is set up for N = 2");
  if (cfg.route != "radial" && cfg.route != "schrodinger" && cfg.route != "both") {
    throw InputError("--route must be radial, schrodinger or both");
  }
  SpectrumOptions opt;
  opt.radial.elements = cfg.mesh_nodes;
  opt.schrodinger.elements = cfg.mesh_nodes;
  opt.tol = cfg.tol;
  std::vector<RouteResult> routes;
  if (cfg.route != "schrodinger") routes.push_back(solve_radial(p, cfg.k, opt));
  if (cfg.route != "radial") routes.push_back(solve_schrodinger(p, cfg.k, opt));

  const bool both = routes.size() == 2;
  std::vector<std::string> cols{"route", "gamma", "n", "k", "eigenvalue", "mesh_nodes"};
  if (both) cols.push_back("rel_diff");
  report::Table t(cols);
  double max_diff = 0.0;
  for (const auto& r : routes) {
    for (std::size_t i = 0; i < cfg.k; ++i) {
      std::vector<std::string> row{r.route, fmt(p.gamma), fmt(p.mode), fmt(i + 1), fmt(r.extrapolated[i]),
                                   fmt(r.fine.provenance.mesh_nodes)};
      if (both) {
        const double a = routes[0].extrapolated[i], b = routes[1].extrapolated[i];
        const double d = std::abs(a - b) / std::abs(a);
        max_diff = std::max(max_diff, d);
        row.push_back(fmt(d));
      }
      t.row(row);
    }
  }
  auto prov = provenance(cfg);
  prov.add("k", cfg.k).add("route", cfg.route).add("tol", cfg.tol).add("extrapolation", "richardson-order-2");
  for (const auto& r : routes) prov.add(r.route + "_mesh", r.coarse.provenance.mesh);
  Json extra = Json::object();
  if (both) {
    t.note("max_rel_diff=" + fmt(max_diff));
    extra["max_rel_diff"] = r12(max_diff);
  }
  return finish(cfg, t, prov, extra);
}

inline std::string cmd_rate(const RunConfig& cfg) {
  const auto p = cfg.params();
  if (p.dim != 2) throw ConfigurationError("rate: the truncated radial problem is set up for N = 2");
  const auto grid = eps_grid(cfg, 3e-4, 3e-2);
  const auto fp = perturbation::FixedMeshProblem::make(p, MeshSpec{cfg.mesh_nodes, 0.9, 1e-10});
  const auto sweep = perturbation::truncated_sweep(fp, grid, cfg.k, cfg.tol);
  const auto full = eigenvalues_sturm(fp.pencil, cfg.k, cfg.tol, true);

  report::Table t({"gamma", "n", "k", "eps", "lambda_full", "lambda_eps", "gap", "variational_bound",
                   "closed_form_bound"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps = sweep.snaps[i].eps_effective;
    for (std::size_t j = 0; j < cfg.k; ++j) {
      const auto vb = perturbation::variational_bound(fp, full, eps, j + 1, p.shift);
      t.row({fmt(p.gamma), fmt(p.mode), fmt(j + 1), fmt(eps), fmt(sweep.lambda_full[j]), fmt(sweep.lambda_eps[i][j]),
             fmt(sweep.gaps[i][j]), fmt(vb.bound), vb.closed_form ? fmt(*vb.closed_form) : "unavailable"});
    }
  }
  const double target = 1.0 / (1.0 - p.gamma);
  Json fits = Json::array();
  for (std::size_t j = 0; j < cfg.k; ++j) {
    const auto f = perturbation::rate_fit(sweep, j);
    const bool pass = std::abs(f.exponent - target) <= 0.05;
    Json o = Json::object();
    o["gamma"] = p.gamma;
    o["n"] = p.mode;
    o["k"] = j + 1;
    o["exponent"] = r12(f.exponent);
    o["target"] = r12(target);
    o["stderr"] = r12(f.stderr_);
    o["r2"] = r12(f.r2);
    o["points_used"] = f.points_used;
    o["excluded"] = f.excluded;
    o["pass"] = pass;
    fits.push_back(o);
    t.note("fit k=" + fmt(j + 1) + " exponent=" + fmt(f.exponent) + " target=" + fmt(target) + " stderr=" +
           fmt(f.stderr_) + " r2=" + fmt(f.r2) + " points_used=" + fmt(f.points_used) +
           " pass=" + (pass ? "true" : "false"));
  }
  auto prov = provenance(cfg);
  prov.add("k", cfg.k).add("mesh", fp.mesh->describe()).add("tol", cfg.tol).add("eps_count", grid.size());
  Json extra = Json::object();
  extra["fits"] = fits;
  return finish(cfg, t, prov, extra);
}

inline std::pair<int, int> parse_refine(const std::string& s) {
  const auto pos = s.find("..");
  try {
    if (pos == std::string::npos) throw InputError("");
    const int lo = std::stoi(s.substr(0, pos));
    const int hi = std::stoi(s.substr(pos + 2));
    if (lo < 3 || hi < lo || hi > 16) throw InputError("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw InputError("--refine must look like LO..HI with 3 <= LO <= HI <= 16 (node counts 2^LO .. 2^HI)");
  }
}

inline std::string cmd_hardy(const RunConfig& cfg) {
  const auto p = cfg.params();
  const auto [lo, hi] = parse_refine(cfg.refine);
  hardy::StudyOptions opt;
  opt.base_nodes = std::size_t{1} << lo;
  opt.refinements = hi - lo;
  const auto est = hardy::riemannian_hardy_study(p, opt);
  const auto mc = hardy::davies_mandouvalos_check(est.extrapolated, p);
  report::Table t({"mesh_nodes", "c_estimate", "target", "gap"});
  for (std::size_t i = 0; i < est.mesh_sizes.size(); ++i) {
    t.row({fmt(est.mesh_sizes[i]), fmt(est.estimates_by_mesh[i]), fmt(est.target),
           fmt(est.target - est.estimates_by_mesh[i])});
  }
  const double rel = (est.extrapolated - est.target) / est.target;
  t.note("extrapolated=" + fmt(est.extrapolated) + " error_estimate=" + fmt(est.extrapolation_error) +
         " rel_error=" + fmt(rel) + " monotone=" + (est.monotone() ? "true" : "false"));
  t.note("minkowski_product=" + fmt(mc.product) + " minkowski_ok=" + (mc.ok ? "true" : "false"));
  auto prov = provenance(cfg);
  prov.add("refine", cfg.refine).add("base_mesh", est.mesh).add("extrapolation", "richardson-order-2");
  Json extra = Json::object();
  extra["extrapolated"] = r12(est.extrapolated);
  extra["error_estimate"] = r12(est.extrapolation_error);
  extra["target"] = r12(est.target);
  extra["rel_error"] = r12(rel);
  extra["monotone"] = est.monotone();
  extra["minkowski_product"] = r12(mc.product);
  extra["minkowski_ok"] = mc.ok;
  return finish(cfg, t, prov, extra);
}

inline std::string cmd_minkowski(const RunConfig& cfg) {
  const auto p = cfg.params();
  const auto grid = eps_grid(cfg, 1e-4, 1e-2);
  const auto fit = geometry::minkowski_fit(grid, p);
  report::Table t({"eps", "collar_volume"});
  for (double e : grid) t.row({fmt(e), fmt(geometry::collar_volume(e, p))});
  const double target = p.dim - p.mink_dim();
  t.note("exponent=" + fmt(fit.exponent) + " target=" + fmt(target) + " stderr=" + fmt(fit.stderr_) +
         " r2=" + fmt(fit.r2) + " points_used=" + fmt(fit.points_used));
  auto prov = provenance(cfg);
  prov.add("eps_count", grid.size());
  Json extra = Json::object();
  extra["exponent"] = r12(fit.exponent);
  extra["target"] = r12(target);
  extra["stderr"] = r12(fit.stderr_);
  extra["r2"] = r12(fit.r2);
  extra["points_used"] = fit.points_used;
  extra["mink_dim"] = r12(p.mink_dim());
  return finish(cfg, t, prov, extra);
}

inline std::string cmd_geodesic(const RunConfig& cfg) {
  const auto p = cfg.params();
  if (p.dim != 2) throw ConfigurationError("geodesic: the grid field lives on the unit disc (N = 2)");
  const auto field = geometry::geodesic_field(cfg.grid, p.gamma, cfg.stencil);
  report::Table t({"x", "y", "sigma", "d_exact", "d_graph"});
  if (cfg.format == "csv") {
    for (const auto& n : field.nodes) t.row({fmt(n.x), fmt(n.y), fmt(n.sigma), fmt(n.d_exact), fmt(n.d_graph)});
  }
  const auto& centre = field.closest_to(0.0, 0.0);
  const double sup = field.sup_norm_relative_error();
  t.note("sup_norm_relative_error=" + fmt(sup) + " max_pointwise_relative_error=" + fmt(field.max_relative_error()) +
         " min_signed_error=" + fmt(field.min_signed_error()) + " centre_d_graph=" + fmt(centre.d_graph) +
         " t_max=" + fmt(p.t_max()));
  auto prov = provenance(cfg);
  prov.add("grid", cfg.grid).add("stencil", cfg.stencil);
  Json extra = Json::object();
  extra["nodes"] = field.nodes.size();
  extra["sup_norm_relative_error"] = r12(sup);
  extra["max_pointwise_relative_error"] = r12(field.max_relative_error());
  extra["mean_relative_error"] = r12(field.mean_relative_error());
  extra["min_signed_error"] = r12(field.min_signed_error());
  extra["centre_d_graph"] = r12(centre.d_graph);
  extra["t_max"] = r12(p.t_max());
  return finish(cfg, t, prov, extra);
}

inline std::string cmd_decay(const RunConfig& cfg) {
  const auto p = cfg.params();
  if (p.dim != 2) throw ConfigurationError("decay: the radial eigenfunctions are set up for N = 2");
  const auto grid = eps_grid(cfg, 3e-4, 3e-2);
  const auto fp = perturbation::FixedMeshProblem::make(p, MeshSpec{cfg.mesh_nodes, 0.9, 1e-10});
  const auto full = eigenvalues_sturm(fp.pencil, cfg.k, cfg.tol, true);
  const auto kc = perturbation::bound_constants(p.hardy_c(), p.shift);
  report::Table t({"k", "eps", "mass", "mass_bound", "gradient", "gradient_bound", "ok"});
  Json fits = Json::array();
  for (std::size_t j = 0; j < cfg.k; ++j) {
    const auto rep = perturbation::boundary_decay_check(fp, full.eigenvalues[j], full.eigenvectors[j], grid, kc);
    for (const auto& r : rep.rows) {
      t.row({fmt(j + 1), fmt(r.eps), fmt(r.mass), fmt(r.mass_bound), fmt(r.gradient), fmt(r.gradient_bound),
             r.mass_ok && r.gradient_ok ? "true" : "false"});
    }
    t.note("decay k=" + fmt(j + 1) + " mass_exponent=" + fmt(rep.mass_fit.exponent) + " target=" +
           fmt(kc.decay_exp) + " gradient_exponent=" + fmt(rep.gradient_fit.exponent) + " all_ok=" +
           (rep.all_ok ? "true" : "false"));
    Json o = Json::object();
    o["k"] = j + 1;
    o["mass_exponent"] = r12(rep.mass_fit.exponent);
    o["gradient_exponent"] = r12(rep.gradient_fit.exponent);
    o["target"] = r12(kc.decay_exp);
    o["all_ok"] = rep.all_ok;
    fits.push_back(o);
  }
  perturbation::NormChainOptions nco;
  nco.seed = cfg.seed;
  const auto chain = perturbation::discrete_norm_inequality_check(p, nco);
  t.note("norm_chain premise_ok=" + std::string(chain.premise_ok ? "true" : "false") + " a=" + fmt(chain.a) +
         " a_inflated=" + (chain.a_inflated ? "true" : "false") + " premise1=" + fmt(chain.premise1_norm) + "/" +
         fmt(chain.premise1_bound) + " premise2=" + fmt(chain.premise2_norm) + "/" + fmt(chain.premise2_bound) +
         " samples=" + fmt(chain.samples) + " violations=" + fmt(chain.violations) + " min_margin=" +
         fmt(chain.min_margin) + " seed=" + std::to_string(chain.seed));
  auto prov = provenance(cfg);
  prov.add("k", cfg.k).add("mesh", fp.mesh->describe()).add("seed", std::to_string(cfg.seed));
  Json extra = Json::object();
  extra["decay"] = fits;
  Json ch = Json::object();
  ch["premise_ok"] = chain.premise_ok;
  ch["a"] = r12(chain.a);
  ch["a_inflated"] = chain.a_inflated;
  ch["premise1_norm"] = r12(chain.premise1_norm);
  ch["premise1_bound"] = r12(chain.premise1_bound);
  ch["premise2_norm"] = r12(chain.premise2_norm);
  ch["premise2_bound"] = r12(chain.premise2_bound);
  ch["samples"] = chain.samples;
  ch["violations"] = chain.violations;
  ch["min_margin"] = r12(chain.min_margin);
  ch["eigenvector_ok"] = chain.eigvec_ok;
  ch["seed"] = chain.seed;
  extra["norm_chain"] = ch;
  return finish(cfg, t, prov, extra);
}

inline std::string cmd_potential(const RunConfig& cfg) {
  const auto p = cfg.params();
  if (p.dim != 2) throw ConfigurationError("potential: the change of variables is set up for N = 2");
  const auto prob = reduction::RadialProblem::make(p.gamma, p.abs_mode());
  if (cfg.points < 2) throw InputError("--points must be >= 2");
  report::Table t({"t", "V_closed", "V_derivative_form", "abs_diff"});
  double max_abs = 0.0, max_rel = 0.0;
  const double lo = 0.01, hi = prob.t_max - 0.01;
  for (std::size_t i = 0; i < cfg.points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cfg.points - 1);
    const double a = reduction::potential_closed(x, prob);
    const double b = reduction::potential_derivative_form(x, prob);
    const double d = std::abs(a - b);
    max_abs = std::max(max_abs, d);
    if (a != 0.0) max_rel = std::max(max_rel, d / std::abs(a));
    t.row({fmt(x), fmt(a), fmt(b), fmt(d)});
  }
  const auto as = reduction::potential_asymptotics(prob);
  t.note("max_abs_diff=" + fmt(max_abs) + " max_rel_diff=" + fmt(max_rel));
  t.note("coeff_origin=" + fmt(as.coeff_origin) + " coeff_boundary=" + fmt(as.coeff_boundary) +
         " origin_correction_order=" + fmt(as.origin_correction_order) + " observed=" +
         fmt(as.observed_origin_order) + " boundary_correction_order=" + fmt(as.boundary_correction_order) +
         " observed=" + fmt(as.observed_boundary_order));
  auto prov = provenance(cfg);
  prov.add("points", cfg.points).add("t_max", prob.t_max);
  Json extra = Json::object();
  extra["max_abs_diff"] = r12(max_abs);
  extra["max_rel_diff"] = r12(max_rel);
  extra["coeff_origin"] = r12(as.coeff_origin);
  extra["coeff_boundary"] = r12(as.coeff_boundary);
  extra["origin_correction_order"] = r12(as.origin_correction_order);
  extra["boundary_correction_order"] = r12(as.boundary_correction_order);
  return finish(cfg, t, prov, extra);
}

inline std::string cmd_bounds(const RunConfig& cfg) {
  const auto k = perturbation::bound_constants(cfg.c, cfg.a);
  report::Table t({"c", "a", "c1", "c_prime", "decay_exp", "rate_exp"});
  t.row({fmt(k.c), fmt(k.a), fmt(k.c1), fmt(k.c_prime), fmt(k.decay_exp), fmt(k.rate_exp)});
  report::Provenance prov(cfg.command);
  prov.add("c", cfg.c).add("a", cfg.a);
  return finish(cfg, t, prov);
}

}  // namespace detail

inline std::string execute(RunConfig cfg) {
  if (cfg.command != "bounds") cfg.validate();
  else if (cfg.format != "csv" && cfg.format != "json") throw InputError("--format must be csv or json");
  if (cfg.command == "spectrum") return detail::cmd_spectrum(cfg);
  if (cfg.command == "rate") return detail::cmd_rate(cfg);
  if (cfg.command == "hardy") return detail::cmd_hardy(cfg);
  if (cfg.command == "minkowski") return detail::cmd_minkowski(cfg);
  if (cfg.command == "geodesic") return detail::cmd_geodesic(cfg);
  if (cfg.command == "decay") return detail::cmd_decay(cfg);
  if (cfg.command == "potential") return detail::cmd_potential(cfg);
  if (cfg.command == "bounds") return detail::cmd_bounds(cfg);
  throw InputError("unknown command: " + cfg.command);
}

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return io;
  if (dynamic_cast<const InsufficientDataError*>(&e)) return insufficient;
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const MeshResolutionError*>(&e)) return numerical;
  if (dynamic_cast<const Error*>(&e)) return validation;
  return numerical;
}

// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral laboratory for the metric sigma^(-2 gamma) |dx|^2 on the unit disc", "smlab"};
  app.require_subcommand(1);
  RunConfig given;
  std::string config_path;
  std::vector<std::function<void(RunConfig&)>> overrides;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"spectrum", "radial eigenvalues (radial and/or Schrodinger route)"},
      {"rate", "truncated-domain sweep and convergence-rate fit"},
      {"hardy", "sharp Hardy constant refinement study"},
      {"minkowski", "collar volumes and Minkowski exponent"},
      {"geodesic", "grid shortest-path distance field"},
      {"decay", "boundary decay of eigenfunctions and the discrete norm chain"},
      {"potential", "transformed potential in closed and derivative form"},
      {"bounds", "constants of the perturbation bounds"}};

  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto add = [&](const std::string& flag, auto member, const std::string& desc) {
      sub->add_option(flag, given.*member, desc);
      const std::string key = flag.substr(0, flag.find(','));
      overrides.push_back([sub, key, member, &given](RunConfig& c) {
        if (sub->parsed() && sub->count(key) > 0) c.*member = given.*member;
      });
    };
    add("--gamma", &RunConfig::gamma, "singularity exponent gamma");
    add("--dim", &RunConfig::dim, "dimension N");
    add("--mode,--n", &RunConfig::mode, "angular mode n");
    add("--k", &RunConfig::k, "number of eigenvalues");
    add("--eps-min", &RunConfig::eps_min, "smallest eps of the sweep grid");
    add("--eps-max", &RunConfig::eps_max, "largest eps of the sweep grid");
    add("--eps-count", &RunConfig::eps_count, "number of log-spaced eps values");
    add("--mesh-nodes", &RunConfig::mesh_nodes, "elements of the base radial mesh");
    add("--format", &RunConfig::format, "csv or json");
    add("--out", &RunConfig::out, "output path (default stdout)");
    add("--seed", &RunConfig::seed, "seed for random test functions");
    add("--tol", &RunConfig::tol, "bisection tolerance");
    add("--a", &RunConfig::a, "Hardy shift a");
    if (name == "spectrum") add("--route", &RunConfig::route, "radial, schrodinger or both");
    if (name == "hardy") add("--refine", &RunConfig::refine, "node counts 2^LO..2^HI, e.g. 7..12");
    if (name == "geodesic") {
      add("--grid", &RunConfig::grid, "grid nodes per side");
      add("--stencil", &RunConfig::stencil, "8 or 16 neighbours");
    }
    if (name == "bounds") add("--c", &RunConfig::c, "Hardy constant c");
    if (name == "potential") add("--points", &RunConfig::points, "number of sample points");
    sub->add_option("--config", config_path, "JSON config file; flags override it");
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return validation;
  }

  RunConfig cfg;
  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  try {
    if (!config_path.empty()) apply_json(cfg, load_config(config_path));
    for (auto& f : overrides) f(cfg);
    const std::string text = execute(cfg);
    report::emit(cfg.out, out, text);
    return ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace smlab::cli
