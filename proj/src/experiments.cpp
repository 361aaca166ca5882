#include "fujitalab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fujitalab/covering.hpp"
#include "fujitalab/geometry.hpp"
#include "fujitalab/heat_kernel.hpp"
#include "fujitalab/maximal.hpp"
#include "fujitalab/measures.hpp"
#include "fujitalab/numerics.hpp"
#include "fujitalab/solver.hpp"

namespace fujitalab {

namespace {

using nlohmann::json;

ModelManifold manifold_from_json(const json& j) {
  const std::string kind = j.value("kind", "euclidean");
  const int dim = j.value("dim", 1);
  const double kappa = j.value("kappa", 0.0);
  const int ell = j.value("sphere_factor_dim", 0);
  return make_manifold(manifold_kind_from_string(kind), dim, kappa, ell);
}

RadonMeasure measure_from_json(const json& j, const ModelManifold& M, double p, double T) {
  const std::string variant = j.value("variant", "zero");
  if (variant == "zero") return RadonMeasure::zero();
  if (variant == "dirac") {
    const double mass = j.value("mass", 1.0);
    return RadonMeasure::dirac(axis_point(M.dim(), j.value("offset", 0.0)), mass);
  }
  if (variant == "uniform") {
    const double density = j.value("density", 1.0);
    double cutoff = j.value("cutoff", 1.0);
    if (std::isfinite(M.diameter())) cutoff = std::min(cutoff, M.diameter());
    return RadonMeasure::uniform(density, cutoff);
  }
  if (variant == "lebesgue") return RadonMeasure::lebesgue();
  if (variant == "critical") return critical_profile(M, p, T);
  if (variant == "singular") return singular_profile(M, p, j.value("C", 1.0));
  if (variant == "cantor") {
    const int n_max = j.value("n_max", 3);
    const int level = j.value("level", 1);
    CantorSet S = cantor_levels(M.dim(), p, n_max);
    return RadonMeasure::cantor(S, level, M);
  }
  throw std::invalid_argument("unknown measure variant: " + variant);
}

void add_check(ExperimentOutput& out, const std::string& name, bool pass, double value,
               double threshold) {
  out.checks.push_back({name, pass, value, threshold});
}

void finish(ExperimentOutput& out) {
  out.pass = true;
  for (const auto& c : out.checks) out.pass = out.pass && c.pass;
}

// ---- individual experiments ----------------------------------------------

ExperimentOutput run_geometry_check(const json& cfg) {
  ExperimentOutput out;
  out.experiment = "geometry-check";
  const ModelManifold M = manifold_from_json(cfg.at("manifold"));
  const int samples = cfg.value("samples", 100);
  const double hi = std::min({M.pi_over_4_sqrt_kappa(), M.injectivity_radius(), 4.0});
  std::vector<double> rs;
  for (int i = 1; i <= samples; ++i) rs.push_back(hi * i / (samples + 1.0));
  const ComparisonReport rep = comparison_report(M, rs);
  out.files["comparison.csv"] = rep.to_csv();
  int in_range = 0, passed = 0;
  for (const auto& row : rep.rows)
    if (row.in_range) {
      ++in_range;
      if (row.pass) ++passed;
    }
  add_check(out, "comparison_bounds", rep.all_in_range_pass(), passed, in_range);
  finish(out);
  return out;
}

ExperimentOutput run_kernel_check(const json& cfg) {
  ExperimentOutput out;
  out.experiment = "kernel-check";
  const ModelManifold M = manifold_from_json(cfg.at("manifold"));
  HeatKernelEvaluator E(M);
  const double mass_tol = cfg.value("mass_tol", 1e-6);
  const double semigroup_tol = cfg.value("semigroup_tol", 1e-6);
  std::vector<double> ts = cfg.value("t_samples", std::vector<double>{0.01, 0.1, 1.0});
  std::ostringstream csv;
  csv << "check,t,value,threshold,pass\n";
  csv.precision(17);
  for (double t : ts) {
    const double mass = E.kernel_mass(t);
    const bool mp = std::abs(mass - 1.0) < mass_tol;
    csv << "mass," << t << ',' << std::abs(mass - 1.0) << ',' << mass_tol << ',' << mp << '\n';
    add_check(out, "mass_t" + std::to_string(t), mp, std::abs(mass - 1.0), mass_tol);
    const double d = 0.5 * std::sqrt(t);
    const double direct = E.kernel_radial(d, t);
    const double defect = E.semigroup_defect(d, 0.5 * t, 0.5 * t) / direct;
    const bool sp = defect < semigroup_tol;
    csv << "semigroup," << t << ',' << defect << ',' << semigroup_tol << ',' << sp << '\n';
    add_check(out, "semigroup_t" + std::to_string(t), sp, defect, semigroup_tol);
  }
  // prep8 / prep9 / prep10 sweeps.
  KernelBoundReport harnack = harnack_sweep(E, 10, ts);
  add_check(out, "prep8_sup_finite", std::isfinite(harnack.sup_ratio), harnack.sup_ratio, 0.0);
  std::vector<double> ds;
  for (int i = 0; i <= 12; ++i) ds.push_back(0.05 + i * 0.08);
  KernelBoundReport env = gaussian_bounds_sweep(E, ds, ts, 4.0);
  add_check(out, "prep10_lower_positive", env.inf_ratio > 0.0, env.inf_ratio, 0.0);
  add_check(out, "prep9_upper_finite", std::isfinite(env.sup_ratio), env.sup_ratio, 0.0);
  KernelBoundReport scal = scaling_sweep(E, {0.25, 0.5, 0.9}, {0.05, 0.2});
  add_check(out, "prep11_positive", scal.inf_ratio > 0.0, scal.inf_ratio, 0.0);
  for (const auto& row : harnack.rows) env.rows.push_back(row);
  for (const auto& row : scal.rows) env.rows.push_back(row);
  out.files["kernel_checks.csv"] = csv.str();
  out.files["kernel_bounds.csv"] = env.to_csv();
  finish(out);
  return out;
}

ExperimentOutput run_trace(const json& cfg) {
  ExperimentOutput out;
  out.experiment = "trace";
  const ModelManifold M = manifold_from_json(cfg.at("manifold"));
  HeatKernelEvaluator E(M);
  const double p = cfg.value("p", 2.0);
  const double T = cfg.value("T", 0.25);
  const RadonMeasure mu = measure_from_json(cfg.at("measure"), M, p, T);
  const int kmax = cfg.value("k_max", 12);
  const double tol = cfg.value("tolerance", 1e-3);
  Grid g = M.kind() == ManifoldKind::Circle
               ? Grid::circle(M, cfg.value("grid_points", 512))
               : Grid::line(M, cfg.value("extent", 8.0), cfg.value("grid_points", 1025));
  auto psi = [&](const Point& x) {
    const double d = M.geodesic_distance(x, axis_point(M.dim(), 0.0));
    return cutoff_profile(d / std::min(2.0, 0.9 * (std::isfinite(M.diameter())
                                                       ? M.diameter()
                                                       : 2.2)));
  };
  const double target = measure_pairing(mu, M, psi);
  std::vector<Field> fields;
  std::ostringstream csv;
  csv << "k,t,pairing,target,rel_err\n";
  csv.precision(17);
  double final_rel = 0.0;
  for (int k = 4; k <= kmax; ++k) {
    const double t = std::pow(2.0, -k);
    Field f = linear_evolve(E, mu, g, t);
    const double pairing = trace_pairings(g, {f}, psi)[0];
    final_rel = std::abs(pairing - target) / std::max(std::abs(target), 1e-300);
    csv << k << ',' << t << ',' << pairing << ',' << target << ',' << final_rel << '\n';
  }
  out.files["trace.csv"] = csv.str();
  add_check(out, "trace_converges", final_rel < tol, final_rel, tol);
  finish(out);
  return out;
}

ExperimentOutput run_sweep_threshold(const json& cfg) {
  ExperimentOutput out;
  out.experiment = "sweep-threshold";
  const ModelManifold M = manifold_from_json(cfg.at("manifold"));
  HeatKernelEvaluator E(M);
  const double p = cfg.value("p", 5.0);
  const double horizon = cfg.value("horizon", 0.25);
  const int steps = cfg.value("steps", 192);
  Grid g = Grid::line(M, cfg.value("extent", 6.0), cfg.value("grid_points", 481));
  const double h = g.nodes[1] - g.nodes[0];
  auto family = [&](double C) {
    RadonMeasure mu = singular_profile(M, p, C);
    Field f;
    f.time = 0.0;
    f.values.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      // cell averages keep the singular profile integrable on the grid
      const double lo = std::max(std::abs(g.nodes[i]) - 0.5 * h, 0.0);
      const double hi = std::abs(g.nodes[i]) + 0.5 * h;
      f.values[i] =
          integrate([&](double r) { return mu.radial_profile(std::abs(r)); }, lo, hi, 1e-9,
                    1e-300) /
          (hi - lo);
    }
    return f;
  };
  ThresholdResult res = threshold_bisect(family, E, g, p, horizon, steps, 0.05, 4.0,
                                         cfg.value("rel_width", 1e-2));
  std::ostringstream csv;
  csv << "C,blew_up\n";
  csv.precision(17);
  for (const auto& [C, blew] : res.trajectory) csv << C << ',' << blew << '\n';
  out.files["threshold.csv"] = csv.str();
  out.summary["C_lo"] = res.C_lo;
  out.summary["C_hi"] = res.C_hi;
  add_check(out, "bracket_width", (res.C_hi - res.C_lo) / res.C_lo <= cfg.value("rel_width", 1e-2),
            (res.C_hi - res.C_lo) / res.C_lo, cfg.value("rel_width", 1e-2));
  add_check(out, "classification_monotone", res.monotone, res.monotone ? 1.0 : 0.0, 1.0);
  finish(out);
  return out;
}

ExperimentOutput run_supersolution(const json& cfg) {
  ExperimentOutput out;
  out.experiment = "supersolution";
  const ModelManifold M = manifold_from_json(cfg.at("manifold"));
  HeatKernelEvaluator E(M);
  const double p = cfg.value("p", 2.0);
  const double T = cfg.value("T", 0.25);
  const double c = cfg.value("c", 0.05);
  Grid g = M.kind() == ManifoldKind::Circle
               ? Grid::circle(M, cfg.value("grid_points", 192))
               : Grid::line(M, cfg.value("extent", 6.0), cfg.value("grid_points", 301));
  const int levels_n = cfg.value("time_levels", 40);
  const std::vector<double> levels = graded_time_levels(T, levels_n);
  // u_bar = 2 U with U the linear evolution of the scaled measure.
  RadonMeasure mu = RadonMeasure::uniform(c, std::isfinite(M.diameter()) ? M.diameter() : 2.0);
  std::vector<Field> ubar(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    ubar[k] = linear_evolve(E, mu, g, levels[k]);
    for (auto& v : ubar[k].values) v *= 2.0;
  }
  const double defect = supersolution_check(E, mu, g, levels, ubar, p);
  double ubar_sup = 0.0;
  for (const auto& f : ubar)
    for (double v : f.values) ubar_sup = std::max(ubar_sup, v);
  out.summary["min_defect"] = defect;
  // nonnegative up to quadrature noise at the scale of u_bar
  add_check(out, "supersolution_defect", defect >= -1e-6 * ubar_sup, defect,
            -1e-6 * ubar_sup);

  // Picard run artifacts: status plus the (t, sup u, mass) time series.
  IterationConfig icfg;
  icfg.time_levels = levels_n;
  PicardResult pr = picard_solve(E, mu, g, p, T, icfg);
  out.summary["picard_status"] = pr.status == PicardStatus::Converged ? "converged"
                                 : pr.status == PicardStatus::CeilingHit ? "ceiling_hit"
                                                                         : "max_iters";
  out.summary["picard_iterations"] = pr.iterations;
  std::ostringstream series;
  series << "t,sup_u,mass\n";
  series.precision(17);
  for (std::size_t k = 0; k < pr.levels.size(); ++k) {
    double sup = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      sup = std::max(sup, pr.solution[k].values[i]);
      mass += pr.solution[k].values[i] * g.weights[i];
    }
    series << pr.levels[k] << ',' << sup << ',' << mass << "\n";
  }
  out.files["picard_series.csv"] = series.str();
  add_check(out, "picard_monotone", pr.monotonicity_defect >= -1e-10,
            pr.monotonicity_defect, 0.0);
  bool dominated = pr.status == PicardStatus::Converged;
  for (std::size_t k = 0; k < pr.levels.size() && dominated; ++k)
    for (std::size_t i = 0; i < g.size(); ++i)
      dominated = dominated && pr.solution[k].values[i] <= ubar[k].values[i] + 1e-8;
  add_check(out, "limit_below_supersolution", dominated, dominated ? 1.0 : 0.0, 1.0);
  finish(out);
  return out;
}

ExperimentOutput run_cantor(const json& cfg) {
  ExperimentOutput out;
  out.experiment = "cantor";
  const int N = cfg.value("N", 1);
  const double p = cfg.value("p", 3.0);
  const int n_max = cfg.value("n_max", 8);
  CantorSet S = cantor_levels(N, p, n_max);
  out.files["cantor.json"] = S.to_json();
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) worst = std::max(worst, S.levels[n].identity_residual);
  const double tol = cfg.value("identity_tol", 1e-10);
  add_check(out, "identity_residual", worst <= tol, worst, tol);
  add_check(out, "ratio_below_half", S.r_bar < 0.5, S.r_bar, 0.5);
  finish(out);
  return out;
}

ExperimentOutput run_maximal_ratio(const json& cfg) {
  ExperimentOutput out;
  out.experiment = "maximal-ratio";
  const int N = cfg.value("N", 1);
  const double p = cfg.value("p", 3.0);
  const int n_max = cfg.value("n_max", 8);
  const ModelManifold M = manifold_from_json(
      cfg.value("manifold", json{{"kind", "euclidean"}, {"dim", N}, {"kappa", 0.0}}));
  CantorSet S = cantor_levels(N, p, n_max);
  RatioCurve rc = ratio_curve(S, M, n_max, cfg.value("s_grid", 240));
  out.files["ratio_curve.csv"] = rc.to_csv();
  bool monotone = true;
  for (std::size_t i = 1; i < rc.ratio.size(); ++i)
    monotone = monotone && rc.ratio[i] > rc.ratio[i - 1];
  add_check(out, "ratio_strictly_increasing", monotone, monotone ? 1.0 : 0.0, 1.0);
  out.summary["ratio"] = rc.ratio;
  out.summary["fitted_c"] = rc.fitted_c;
  out.summary["fitted_C"] = rc.fitted_C;
  finish(out);
  return out;
}

ExperimentOutput run_cover(const json& cfg, std::uint64_t seed) {
  ExperimentOutput out;
  out.experiment = "cover";
  const ModelManifold M = manifold_from_json(cfg.at("manifold"));
  const double rho = cfg.value("rho", 0.5);
  const Point a = axis_point(M.dim(), 0.0);
  PackingResult pack = pac_greedy(M, a, rho, cfg.value("candidates", 8192), 8, seed);
  add_check(out, "packing_certificate", pack.min_pairwise >= pack.separation || pack.count < 2,
            pack.min_pairwise, pack.separation);
  add_check(out, "packing_count_bound", pack.count <= packing_count_bound(M.dim()),
            pack.count, packing_count_bound(M.dim()));
  CoverResult cover = half_ball_cover(M, a, rho, cfg.value("samples", 10000), seed);
  add_check(out, "cover_verified", cover.covered, cover.worst_gap, 0.5 * rho);
  add_check(out, "cover_count_bound", cover.count <= packing_count_bound(M.dim()),
            cover.count, packing_count_bound(M.dim()));

  // Random family for the partition check.
  BallFamily F;
  const double xi = cfg.value("xi", 0.45 * std::min(M.injectivity_radius(), 4.0));
  std::size_t halton_idx = 17 + seed;
  const int n_balls = cfg.value("n_balls", 300);
  for (int i = 0; i < n_balls; ++i) {
    auto h = halton_point(halton_idx++, M.dim() + 1);
    Point c = a;
    for (int d = 0; d < M.dim(); ++d) c.x[d] = (2.0 * h[d] - 1.0) * rho;
    F.push_back({c, 0.04 * xi + 0.4 * xi * h[M.dim()]});
  }
  BesicovitchResult part = besicovitch_partition(M, F, xi, 1.0 / 6.0);
  add_check(out, "partition_disjoint", part.disjoint_ok, part.disjoint_ok ? 1.0 : 0.0, 1.0);
  add_check(out, "partition_covers_centers", part.centers_covered,
            part.centers_covered ? 1.0 : 0.0, 1.0);
  if (part.bound_asserted)
    add_check(out, "partition_bound", part.n_subfamilies <= part.bound_2zeta_1,
              part.n_subfamilies, part.bound_2zeta_1);

  json js;
  js["packing_count"] = pack.count;
  js["cover_count"] = cover.count;
  js["subfamilies"] = part.n_subfamilies;
  js["zeta"] = part.zeta;
  js["bound_2zeta_1"] = part.bound_2zeta_1;
  js["separation"] = pack.separation;
  json centers = json::array();
  for (const auto& pt : pack.centers) centers.push_back(pt.x);
  js["packing_centers"] = centers;
  json balls = json::array();
  for (std::size_t i = 0; i < F.size(); ++i)
    balls.push_back({{"center", F[i].center.x},
                     {"radius", F[i].radius},
                     {"subfamily", part.subfamily_of[i]},
                     {"selected", static_cast<bool>(part.selected[i])}});
  js["partition"] = balls;
  out.files["cover.json"] = js.dump(1) + "\n";

  // coverage-sample audit: distance from each quasi-random probe to the
  // nearest cover center
  std::ostringstream audit;
  audit << "sample,nearest_center_distance,covered\n";
  audit.precision(17);
  std::size_t idx = 2000003;
  for (int i = 0; i < 512; ++i) {
    auto h = halton_point(idx++, M.dim());
    Point q = a;
    for (int d = 0; d < M.dim(); ++d) q.x[d] = (2.0 * h[d] - 1.0) * 2.0 * rho;
    if (M.geodesic_distance(a, q) >= rho) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& cpt : cover.centers)
      nearest = std::min(nearest, M.geodesic_distance(q, cpt));
    audit << i << ',' << nearest << ',' << (nearest < 0.5 * rho ? 1 : 0) << "\n";
  }
  out.files["coverage_audit.csv"] = audit.str();
  finish(out);
  return out;
}

ExperimentOutput run_classify_growth(const json& cfg) {
  ExperimentOutput out;
  out.experiment = "classify-growth";
  const ModelManifold M = manifold_from_json(cfg.at("manifold"));
  const double p = cfg.value("p", 5.0);
  const double T = cfg.value("T", 1.0);
  const RadonMeasure mu = measure_from_json(cfg.at("measure"), M, p, T);
  GrowthVerdict v = growth_classify(mu, M, p, T, cfg.value("eps_suf", 0.1));
  out.files["growth.csv"] = v.to_csv();
  if (cfg.at("measure").value("variant", "") == "critical") {
    LumuReport lumu = lumu_bracket_check(mu, M, p, T);
    out.files["profile_bracket.csv"] = lumu.to_csv();
    add_check(out, "profile_bracket", lumu.bracket_ok && lumu.C_tightest <= 50.0,
              lumu.C_tightest, 50.0);
  }
  out.summary["C_subcritical"] = v.C_subcritical;
  out.summary["C_critical"] = v.C_critical;
  out.summary["C_supercritical"] = v.C_supercritical;
  out.summary["C_nex"] = v.C_nex;
  out.summary["supercritical_finite"] = v.supercritical_finite;
  add_check(out, "classified", true, 1.0, 1.0);
  finish(out);
  return out;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "geometry-check", "kernel-check",  "trace", "sweep-threshold", "supersolution",
      "cantor",         "maximal-ratio", "cover", "classify-growth"};
  return ids;
}

json default_config(const std::string& experiment) {
  json j;
  j["experiment"] = experiment;
  if (experiment == "geometry-check") {
    j["manifold"] = {{"kind", "sphere"}, {"dim", 2}, {"kappa", 1.0}};
  } else if (experiment == "kernel-check") {
    j["manifold"] = {{"kind", "euclidean"}, {"dim", 1}, {"kappa", 0.0}};
  } else if (experiment == "trace") {
    j["manifold"] = {{"kind", "euclidean"}, {"dim", 1}, {"kappa", 0.0}};
    j["measure"] = {{"variant", "dirac"}, {"mass", 1.0}};
  } else if (experiment == "sweep-threshold") {
    j["manifold"] = {{"kind", "euclidean"}, {"dim", 1}, {"kappa", 0.0}};
    j["p"] = 5.0;
    j["grid_points"] = 321;
    j["steps"] = 128;
  } else if (experiment == "supersolution") {
    j["manifold"] = {{"kind", "circle"}, {"dim", 1}, {"kappa", 1.0}};
    j["p"] = 2.0;
    j["grid_points"] = 128;
    j["time_levels"] = 24;
  } else if (experiment == "cantor") {
    j["N"] = 1;
    j["p"] = 3.0;
    j["n_max"] = 8;
  } else if (experiment == "maximal-ratio") {
    j["N"] = 1;
    j["p"] = 3.0;
    j["n_max"] = 6;
  } else if (experiment == "cover") {
    j["manifold"] = {{"kind", "euclidean"}, {"dim", 2}, {"kappa", 0.0}};
    j["rho"] = 0.5;
  } else if (experiment == "classify-growth") {
    j["manifold"] = {{"kind", "euclidean"}, {"dim", 1}, {"kappa", 0.0}};
    j["p"] = 5.0;
    j["measure"] = {{"variant", "critical"}};
  } else if (experiment == "all") {
    // nothing else
  } else {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  return j;
}

ExperimentOutput run_experiment(const json& config, std::uint64_t seed) {
  ExperimentOutput out;
  std::string experiment;
  try {
    experiment = config.at("experiment").get<std::string>();
  } catch (const std::exception& e) {
    out.config_error = true;
    out.error = std::string("missing experiment id: ") + e.what();
    return out;
  }
  try {
    if (experiment == "all") {
      out.experiment = "all";
      out.pass = true;
      for (const auto& id : experiment_ids()) {
        ExperimentOutput sub = run_experiment(default_config(id), seed);
        for (auto& [name, contents] : sub.files) out.files[id + "_" + name] = contents;
        for (auto& c : sub.checks) out.checks.push_back({id + ":" + c.name, c.pass, c.value,
                                                         c.threshold});
        out.pass = out.pass && sub.pass;
      }
      return out;
    }
    if (experiment == "geometry-check") return run_geometry_check(config);
    if (experiment == "kernel-check") return run_kernel_check(config);
    if (experiment == "trace") return run_trace(config);
    if (experiment == "sweep-threshold") return run_sweep_threshold(config);
    if (experiment == "supersolution") return run_supersolution(config);
    if (experiment == "cantor") return run_cantor(config);
    if (experiment == "maximal-ratio") return run_maximal_ratio(config);
    if (experiment == "cover") return run_cover(config, seed);
    if (experiment == "classify-growth") return run_classify_growth(config);
    out.config_error = true;
    out.error = "unknown experiment: " + experiment;
  } catch (const std::invalid_argument& e) {
    out.config_error = true;
    out.error = e.what();
  } catch (const std::exception& e) {
    out.experiment = experiment;
    out.pass = false;
    out.error = e.what();
    out.checks.push_back({"run_completed", false, 0.0, 1.0});
  }
  return out;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << contents;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

int run_experiment_to_dir(const json& config, const std::string& out_dir, std::uint64_t seed) {
  ExperimentOutput out = run_experiment(config, seed);
  std::filesystem::create_directories(out_dir);
  json manifest;
  manifest["schema_version"] = 1;
  manifest["experiment"] = out.experiment.empty() ? "?" : out.experiment;
  manifest["config"] = config;
  manifest["seed"] = seed;
  manifest["pass"] = out.pass;
  manifest["config_error"] = out.config_error;
  if (!out.error.empty()) manifest["error"] = out.error;
  const char* threads = std::getenv("FUJITALAB_THREADS");
  manifest["threads"] = threads ? threads : "1";
  json checks = json::array();
  for (const auto& c : out.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value},
                      {"threshold", c.threshold}});
  manifest["checks"] = checks;
  json files = json::array();
  for (const auto& [name, contents] : out.files) {
    atomic_write(std::filesystem::path(out_dir) / name, contents);
    files.push_back(name);
  }
  manifest["outputs"] = files;
  const auto now = std::chrono::system_clock::now();
  manifest["timestamp"] =
      static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                    now.time_since_epoch())
                                    .count());
  atomic_write(std::filesystem::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
  if (out.config_error) return 2;
  return out.pass ? 0 : 1;
}

}  // namespace fujitalab
