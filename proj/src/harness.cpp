#include "su2geom/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "su2geom/errors.hpp"
#include "su2geom/parallel.hpp"
#include "su2geom/rng.hpp"
#include "su2geom/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace su2 {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string point_key(double a1, double a3) {
  std::ostringstream os;
  os << "a1_" << a1 << "_a3_";
  if (std::isinf(a3))
    os << "inf";
  else
    os << a3;
  std::string s = os.str();
  for (auto& c : s)
    if (c == '.') c = 'p';
  return s;
}

json params_json(const std::array<double, 3>& p) {
  json a = json::array();
  for (double v : p) {
    if (std::isinf(v))
      a.push_back("inf");
    else
      a.push_back(v);
  }
  return a;
}

std::array<double, 3> params_from_json(const json& a) {
  std::array<double, 3> p{};
  for (int i = 0; i < 3; ++i) {
    if (a.at(i).is_string()) {
      const std::string s = a.at(i).get<std::string>();
      if (s != "inf" && s != "Infinity")
        throw std::invalid_argument("params: bad string value " + s);
      p[i] = kInf;
    } else {
      p[i] = a.at(i).get<double>();
    }
  }
  return p;
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) known = true;
    if (!known)
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " +
                                  where);
  }
}

}  // namespace

SweepConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"a1_grid", "a3_grid", "n_samples", "k_neighbors", "seed",
                  "r_grid", "time_grid", "include_subriemannian",
                  "anisotropy_cap", "output_dir", "workers"},
                 "top level");
  SweepConfig c;
  if (j.contains("a1_grid")) c.a1_grid = j["a1_grid"].get<std::vector<double>>();
  if (j.contains("a3_grid")) c.a3_grid = j["a3_grid"].get<std::vector<double>>();
  if (j.contains("n_samples")) c.n_samples = j["n_samples"].get<int>();
  if (j.contains("k_neighbors")) c.k_neighbors = j["k_neighbors"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("r_grid")) {
    const auto& g = j["r_grid"];
    reject_unknown(g, {"lo_factor", "hi_factor", "per_octave"}, "r_grid");
    if (g.contains("lo_factor")) c.r_grid.lo_factor = g["lo_factor"].get<double>();
    if (g.contains("hi_factor")) c.r_grid.hi_factor = g["hi_factor"].get<double>();
    if (g.contains("per_octave")) c.r_grid.per_octave = g["per_octave"].get<int>();
  }
  if (j.contains("time_grid")) {
    const auto& g = j["time_grid"];
    reject_unknown(g, {"count", "hi_diam_sq_factor"}, "time_grid");
    if (g.contains("count")) c.time_grid.count = g["count"].get<int>();
    if (g.contains("hi_diam_sq_factor"))
      c.time_grid.hi_diam_sq_factor = g["hi_diam_sq_factor"].get<double>();
  }
  if (j.contains("include_subriemannian"))
    c.include_subriemannian = j["include_subriemannian"].get<bool>();
  if (j.contains("anisotropy_cap"))
    c.anisotropy_cap = j["anisotropy_cap"].get<double>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("workers")) c.workers = j["workers"].get<int>();

  for (double a1 : c.a1_grid)
    if (!(a1 > 0.0 && a1 <= 1.0))
      throw std::invalid_argument("config: a1 grid entries must lie in (0,1]");
  for (double a3 : c.a3_grid)
    if (!(a3 >= 1.0) || std::isinf(a3))
      throw std::invalid_argument("config: a3 grid entries must be finite and >= 1");
  if (c.n_samples < 1000) throw std::invalid_argument("config: n_samples < 1000");
  if (c.k_neighbors < 8) throw std::invalid_argument("config: k_neighbors < 8");
  if (c.anisotropy_cap <= 0) throw std::invalid_argument("config: anisotropy_cap <= 0");
  if (c.r_grid.per_octave < 2) throw std::invalid_argument("config: per_octave < 2");
  if (c.time_grid.count < 5) throw std::invalid_argument("config: time_grid.count < 5");
  return c;
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j;
  in >> j;
  return parse_config(j);
}

MetricSpec parse_metric_json(const json& j) {
  reject_unknown(j, {"params", "Q"}, "metric");
  if (j.contains("params") == j.contains("Q"))
    throw std::invalid_argument("metric: provide exactly one of params, Q");
  if (j.contains("params")) {
    const auto p = params_from_json(j["params"]);
    return MetricSpec::from_params(p[0], p[1], p[2]);
  }
  Mat3 Q{};
  const auto& rows = j["Q"];
  if (rows.size() != 3) throw std::invalid_argument("metric: Q must be 3x3");
  for (int i = 0; i < 3; ++i) {
    if (rows[i].size() != 3) throw std::invalid_argument("metric: Q must be 3x3");
    for (int k = 0; k < 3; ++k) Q[i][k] = rows[i][k].get<double>();
  }
  return diagonalize(Q);
}

json PointReport::to_json() const {
  json j;
  j["key"] = key;
  j["params"] = params_json(params);
  j["sub"] = sub;
  j["ok"] = ok;
  if (!error.empty()) j["error"] = error;
  j["doubling_estimate"] = {{"value", d_hat}, {"threshold", 80.0}};
  j["ratio_band"] = {{"lo", band.lo}, {"hi", band.hi}};
  auto slope_json = [](const std::optional<double>& s, double expo) {
    json v;
    v["model_exponent"] = expo;
    v["tolerance"] = 0.5;
    if (s)
      v["value"] = *s;
    else
      v["value"] = nullptr;
    return v;
  };
  j["slopes"] = {{"euclidean", slope_json(slopes.euclidean, 3)},
                 {"heisenberg", slope_json(slopes.heisenberg, 4)},
                 {"collapse", slope_json(slopes.collapse, 2)},
                 {"flat", slope_json(slopes.flat, 0)}};
  j["diameter"] = {{"value", diam.value},
                   {"lo_threshold", diam.lo},
                   {"hi_threshold", diam.hi},
                   {"pass", diam.pass}};
  j["lambda1"] = {{"exact", sub ? json(nullptr) : json(lambda1_exact_val)},
                  {"spectral", lambda1_spectral},
                  {"difference", lambda1_diff},
                  {"threshold", 1e-9}};
  j["lambda1_diam_sq"] = lambda1_diam_sq;
  j["heat_band"] = {{"lo", heat_band.lo},
                    {"hi", heat_band.hi},
                    {"t_lo", heat_t_lo},
                    {"t_hi", heat_t_hi}};
  j["weyl_band"] = {{"lo", weyl_band.lo},
                    {"hi", weyl_band.hi},
                    {"s_lo", weyl_s_lo},
                    {"s_hi", weyl_s_hi}};
  j["graph_tol"] = graph_tol;
  j["anisotropy_gate"] = {{"value", gate_value},
                          {"threshold", 0.5},
                          {"overridden", gate_overridden}};
  j["j_max"] = j_max;
  if (!eps_schedule.empty()) {
    j["eps_schedule"] = eps_schedule;
    j["eps_distances"] = eps_distances;
    j["eps_monotone"] = eps_monotone;
  }
  j["timings_ms"] = {{"field", field_ms}, {"spectrum", spectrum_ms},
                     {"total", total_ms}};
  return j;
}

PointReport PointReport::from_json(const json& j) {
  PointReport r;
  r.key = j.at("key").get<std::string>();
  r.params = params_from_json(j.at("params"));
  r.sub = j.at("sub").get<bool>();
  r.ok = j.at("ok").get<bool>();
  if (j.contains("error")) r.error = j["error"].get<std::string>();
  r.d_hat = j.at("doubling_estimate").at("value").get<double>();
  r.band.lo = j.at("ratio_band").at("lo").get<double>();
  r.band.hi = j.at("ratio_band").at("hi").get<double>();
  auto get_slope = [&](const char* name) -> std::optional<double> {
    const auto& v = j.at("slopes").at(name).at("value");
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  };
  r.slopes.euclidean = get_slope("euclidean");
  r.slopes.heisenberg = get_slope("heisenberg");
  r.slopes.collapse = get_slope("collapse");
  r.slopes.flat = get_slope("flat");
  r.diam.value = j.at("diameter").at("value").get<double>();
  r.diam.lo = j.at("diameter").at("lo_threshold").get<double>();
  r.diam.hi = j.at("diameter").at("hi_threshold").get<double>();
  r.diam.pass = j.at("diameter").at("pass").get<bool>();
  if (!j.at("lambda1").at("exact").is_null())
    r.lambda1_exact_val = j.at("lambda1").at("exact").get<double>();
  r.lambda1_spectral = j.at("lambda1").at("spectral").get<double>();
  r.lambda1_diff = j.at("lambda1").at("difference").get<double>();
  r.lambda1_diam_sq = j.at("lambda1_diam_sq").get<double>();
  r.heat_band.lo = j.at("heat_band").at("lo").get<double>();
  r.heat_band.hi = j.at("heat_band").at("hi").get<double>();
  r.heat_t_lo = j.at("heat_band").at("t_lo").get<double>();
  r.heat_t_hi = j.at("heat_band").at("t_hi").get<double>();
  r.weyl_band.lo = j.at("weyl_band").at("lo").get<double>();
  r.weyl_band.hi = j.at("weyl_band").at("hi").get<double>();
  r.weyl_s_lo = j.at("weyl_band").at("s_lo").get<double>();
  r.weyl_s_hi = j.at("weyl_band").at("s_hi").get<double>();
  r.graph_tol = j.at("graph_tol").get<double>();
  r.gate_value = j.at("anisotropy_gate").at("value").get<double>();
  r.gate_overridden = j.at("anisotropy_gate").at("overridden").get<bool>();
  r.j_max = j.at("j_max").get<double>();
  if (j.contains("eps_schedule")) {
    r.eps_schedule = j["eps_schedule"].get<std::vector<double>>();
    r.eps_distances = j["eps_distances"].get<std::vector<std::vector<double>>>();
    r.eps_monotone = j["eps_monotone"].get<bool>();
  }
  r.field_ms = j.at("timings_ms").at("field").get<double>();
  r.spectrum_ms = j.at("timings_ms").at("spectrum").get<double>();
  r.total_ms = j.at("timings_ms").at("total").get<double>();
  return r;
}

json SweepAggregate::to_json() const {
  json j;
  j["points_ok"] = points_ok;
  j["points_failed"] = points_failed;
  j["skipped_over_anisotropy_cap"] = skipped;
  j["max_doubling_estimate"] = {{"value", max_d_hat}, {"threshold", 80.0}};
  j["ratio_spread"] = {{"value", ratio_spread}, {"threshold", 50.0}};
  j["worst_lambda1_mismatch"] = {{"value", worst_lambda1_diff},
                                 {"threshold", 1e-9}};
  j["lambda1_diam_sq_range"] = {{"min", lambda1_diam_sq_min},
                                {"max", lambda1_diam_sq_max},
                                {"recorded_band", {2.4, 50.0}}};
  j["heat_band_global"] = {{"lo", heat_global.lo},
                           {"hi", heat_global.hi},
                           {"max_factor", 100.0}};
  j["weyl_band_global"] = {{"lo", weyl_global.lo},
                           {"hi", weyl_global.hi},
                           {"max_factor", 100.0}};
  j["worst_slope_deviation"] = {{"value", worst_slope_dev}, {"threshold", 0.5}};
  j["hard_failure"] = hard_failure;
  return j;
}

void write_field_csv(const DistanceField& f, const std::string& path) {
  std::ofstream out(path);
  out << "index,q0,q1,q2,q3,dist\n";
  for (size_t i = 0; i < f.points.size(); ++i) {
    const auto& p = f.points[i];
    out << i << ',' << fmt17(p.q0) << ',' << fmt17(p.q1) << ',' << fmt17(p.q2)
        << ',' << fmt17(p.q3) << ',' << fmt17(f.dist[i]) << '\n';
  }
}

void write_curve_csv(const VolumeCurve& c, const VolumeModel& p,
                     const std::string& path) {
  std::ofstream out(path);
  out << "a1,a2,a3,r,v_hat,stderr,v_model,ratio\n";
  for (size_t i = 0; i < c.r.size(); ++i) {
    const double vm = model_volume(p, c.r[i]);
    out << fmt17(c.params[0]) << ',' << fmt17(c.params[1]) << ','
        << fmt17(c.params[2]) << ',' << fmt17(c.r[i]) << ',' << fmt17(c.v_hat[i])
        << ',' << fmt17(c.stderr_[i]) << ',' << fmt17(vm) << ','
        << fmt17(vm > 0 ? c.v_hat[i] / vm : 0.0) << '\n';
  }
}

void write_spectrum_csv(const SpectrumTable& t, const std::string& path) {
  std::ofstream out(path);
  out << "a1,a2,a3,lambda,multiplicity\n";
  for (const auto& [lam, mult] : t.entries) {
    out << fmt17(t.params[0]) << ',' << fmt17(t.params[1]) << ','
        << fmt17(t.params[2]) << ',' << fmt17(lam) << ',' << mult << '\n';
  }
}

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g;
  if (count < 2 || !(hi > lo)) return {lo};
  for (int i = 0; i < count; ++i)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return g;
}

std::vector<double> sweep_r_grid(const SweepConfig& cfg, double a1, double a2,
                                 double a3) {
  const double b1 = std::isinf(a3) ? a1 : a1 * a2 / a3;
  const double lo = cfg.r_grid.lo_factor * std::min(a1, b1);
  const double hi = cfg.r_grid.hi_factor * a2;
  const double step = std::pow(2.0, 1.0 / cfg.r_grid.per_octave);
  std::vector<double> grid;
  for (double r = lo; r < hi * step; r *= step) grid.push_back(r);
  return grid;
}

// Heat-trace and Weyl sandwich bands over the truncation-safe windows.
void spectral_bands(const MetricSpec& m, const SweepConfig& cfg,
                    const VolumeModel& model, double diam_sq, PointReport& r) {
  const double b1 = std::isinf(m.a3()) ? m.a1() : m.a1() * m.a2() / m.a3();
  const double t_req = std::max(b1 * b1 / 20.0, 1e-9);
  const double jmax = adaptive_j_max(m, t_req);
  r.j_max = jmax;
  const SpectrumTable table = spectrum_table(m, jmax);

  r.lambda1_spectral = table.lambda1();
  if (m.riemannian()) {
    r.lambda1_exact_val = lambda1_exact(m);
    r.lambda1_diff = std::fabs(r.lambda1_spectral - r.lambda1_exact_val);
  }
  r.lambda1_diam_sq = r.lambda1_spectral * diam_sq;

  const double t_lo = std::max(heat_trace_safe_time(table) * 1.001, 1e-12);
  const double t_hi =
      std::max(t_lo * 2.0, cfg.time_grid.hi_diam_sq_factor * diam_sq);
  r.heat_t_lo = t_lo;
  r.heat_t_hi = t_hi;
  r.heat_band = {kInf, 0.0};
  for (double t : log_grid(t_lo, t_hi, cfg.time_grid.count)) {
    const double v = heat_trace(table, t) * model_volume(model, std::sqrt(t));
    r.heat_band.lo = std::min(r.heat_band.lo, v);
    r.heat_band.hi = std::max(r.heat_band.hi, v);
  }

  const double s_lo = 0.5 * r.lambda1_spectral;
  const double s_hi = weyl_safe_threshold(table) * 0.999;
  r.weyl_s_lo = s_lo;
  r.weyl_s_hi = s_hi;
  r.weyl_band = {kInf, 0.0};
  for (double s : log_grid(s_lo, s_hi, cfg.time_grid.count)) {
    const double v = static_cast<double>(weyl_count(table, s)) *
                     model_volume(model, 1.0 / std::sqrt(s));
    r.weyl_band.lo = std::min(r.weyl_band.lo, v);
    r.weyl_band.hi = std::max(r.weyl_band.hi, v);
  }

  write_spectrum_csv(table, (fs::path(cfg.output_dir) /
                             ("spectrum_" + r.key + ".csv")).string());
}

}  // namespace

PointReport analyze_point(const MetricSpec& m, const SweepConfig& cfg,
                          std::uint64_t point_seed, const std::string& key,
                          const std::string& out_dir) {
  PointReport r;
  r.key = key;
  r.params = m.params;
  const double t_start = now_ms();
  try {
    DistanceFieldOptions opt;
    // The sweep runs the gate in advisory mode: the acceptance thresholds
    // absorb the bias, and the gate value is recorded in the report.
    opt.allow_high_anisotropy = true;
    opt.threads = 1;

    const double t0 = now_ms();
    const DistanceField field =
        build_distance_field(m, cfg.n_samples, cfg.k_neighbors, point_seed, opt);
    r.field_ms = now_ms() - t0;
    r.graph_tol = field.graph_tol;
    r.gate_value = field.gate_value;
    r.gate_overridden = field.gate_overridden;

    const double diam = diameter_estimate(field);
    r.diam.value = diam;
    r.diam.lo = 0.9 * kPi * m.a2();
    r.diam.hi = 1.1 * 2.0 * kPi * m.a2();
    r.diam.pass = diam >= r.diam.lo && diam <= r.diam.hi;

    const VolumeModel model = VolumeModel::from_metric(m);
    const VolumeCurve curve =
        estimate_curve(field, sweep_r_grid(cfg, m.a1(), m.a2(), m.a3()));
    r.d_hat = doubling_estimate(curve);
    r.band = ratio_band(curve, model);
    r.slopes = regime_slopes(curve, model, 1.05 * diam);
    write_curve_csv(curve, model,
                    (fs::path(out_dir) / ("curve_" + key + ".csv")).string());

    const double t1 = now_ms();
    spectral_bands(m, cfg, model, diam * diam, r);
    r.spectrum_ms = now_ms() - t1;

    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.total_ms = now_ms() - t_start;
  return r;
}

PointReport analyze_sub_point(const SweepConfig& cfg, std::uint64_t point_seed,
                              const std::string& out_dir) {
  PointReport r;
  r.key = "sub_a1_1_a3_inf";
  r.params = {1.0, 1.0, kInf};
  r.sub = true;
  const double t_start = now_ms();
  try {
    const MetricSpec m = MetricSpec::from_params(1.0, 1.0, kInf);
    const std::vector<double> schedule{1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32,
                                       1.0 / 64};
    r.eps_schedule = schedule;

    // targets: vertical one-parameter points plus Haar draws
    std::vector<GroupElement> targets;
    for (double s : {0.25, 0.5, 1.0})
      targets.push_back(exp_map(AlgebraVector{0, 0, s}));
    GaussianSource gauss(mix_seed(point_seed, 7, 7));
    for (int i = 0; i < 17; ++i) targets.push_back(haar_sample(gauss));

    std::vector<double> tols;
    const auto sub_results = sub_distance_batch(m, targets, schedule,
                                                cfg.n_samples, cfg.k_neighbors,
                                                point_seed, &tols);
    r.eps_distances.resize(sub_results.size());
    r.eps_monotone = true;
    for (size_t t = 0; t < sub_results.size(); ++t) {
      r.eps_distances[t] = sub_results[t].values;
      for (size_t e = 1; e < schedule.size(); ++e) {
        const double tol = std::max(tols[e], tols[e - 1]);
        if (sub_results[t].values[e - 1] >
            sub_results[t].values[e] * (1.0 + 2.0 * tol))
          r.eps_monotone = false;
      }
    }
    r.graph_tol = tols.back();

    // volume statistics from the finest truncation
    const MetricSpec fine = epsilon_truncate(m, schedule.back());
    DistanceFieldOptions opt;
    opt.allow_high_anisotropy = true;
    opt.threads = 1;
    const double t0 = now_ms();
    const DistanceField field = build_distance_field(
        fine, cfg.n_samples, cfg.k_neighbors, mix_seed(point_seed, 11, 3), opt);
    r.field_ms = now_ms() - t0;
    r.gate_value = field.gate_value;
    r.gate_overridden = field.gate_overridden;

    const double diam = diameter_estimate(field);
    r.diam.value = diam;
    r.diam.lo = 0.9 * kPi;
    r.diam.hi = 1.1 * 2.0 * kPi;
    r.diam.pass = diam >= r.diam.lo && diam <= r.diam.hi;

    // the sub-Riemannian volume model (empty cubic branch)
    const VolumeModel model = VolumeModel::from_params(1.0, 1.0, kInf);
    const VolumeCurve curve =
        estimate_curve(field, sweep_r_grid(cfg, 1.0, 1.0, kInf));
    r.d_hat = doubling_estimate(curve);
    r.band = ratio_band(curve, model);
    r.slopes = regime_slopes(curve, model, 1.05 * diam);
    write_curve_csv(curve, model,
                    (fs::path(out_dir) / ("curve_" + r.key + ".csv")).string());

    const double t1 = now_ms();
    spectral_bands(m, cfg, model, diam * diam, r);
    r.spectrum_ms = now_ms() - t1;

    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.total_ms = now_ms() - t_start;
  return r;
}

namespace {

SweepAggregate aggregate_reports(const std::vector<PointReport>& reports,
                                 std::vector<std::string> skipped) {
  SweepAggregate agg;
  agg.skipped = std::move(skipped);
  agg.heat_global = {kInf, 0.0};
  agg.weyl_global = {kInf, 0.0};
  double band_lo = kInf, band_hi = 0.0;
  double ld_min = kInf, ld_max = 0.0;
  for (const auto& r : reports) {
    if (!r.ok) {
      ++agg.points_failed;
      agg.hard_failure = true;
      continue;
    }
    ++agg.points_ok;
    agg.max_d_hat = std::max(agg.max_d_hat, r.d_hat);
    band_lo = std::min(band_lo, r.band.lo);
    band_hi = std::max(band_hi, r.band.hi);
    if (!r.sub)
      agg.worst_lambda1_diff = std::max(agg.worst_lambda1_diff, r.lambda1_diff);
    ld_min = std::min(ld_min, r.lambda1_diam_sq);
    ld_max = std::max(ld_max, r.lambda1_diam_sq);
    agg.heat_global.lo = std::min(agg.heat_global.lo, r.heat_band.lo);
    agg.heat_global.hi = std::max(agg.heat_global.hi, r.heat_band.hi);
    agg.weyl_global.lo = std::min(agg.weyl_global.lo, r.weyl_band.lo);
    agg.weyl_global.hi = std::max(agg.weyl_global.hi, r.weyl_band.hi);
    auto dev = [&](const std::optional<double>& s, double expo) {
      if (s) agg.worst_slope_dev = std::max(agg.worst_slope_dev,
                                            std::fabs(*s - expo));
    };
    dev(r.slopes.euclidean, 3.0);
    dev(r.slopes.heisenberg, 4.0);
    dev(r.slopes.collapse, 2.0);
    dev(r.slopes.flat, 0.0);
  }
  agg.ratio_spread = (band_lo > 0 && band_hi > 0) ? band_hi / band_lo : 0.0;
  agg.lambda1_diam_sq_min = ld_min;
  agg.lambda1_diam_sq_max = ld_max;
  return agg;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  fs::create_directories(cfg.output_dir);

  struct Task {
    std::string key;
    std::array<double, 3> params;
    std::uint64_t seed;
    bool sub;
  };
  std::vector<Task> tasks;
  std::vector<std::string> skipped;
  for (size_t i1 = 0; i1 < cfg.a1_grid.size(); ++i1) {
    for (size_t i3 = 0; i3 < cfg.a3_grid.size(); ++i3) {
      const double a1 = cfg.a1_grid[i1];
      const double a3 = cfg.a3_grid[i3];
      const std::string key = point_key(a1, a3);
      if (a3 / a1 > cfg.anisotropy_cap) {
        skipped.push_back(key);
        continue;
      }
      tasks.push_back({key, {a1, 1.0, a3}, mix_seed(cfg.seed, i1, i3), false});
    }
  }
  if (cfg.include_subriemannian)
    tasks.push_back({"sub_a1_1_a3_inf",
                     {1.0, 1.0, kInf},
                     mix_seed(cfg.seed, 999, 999),
                     true});

  std::vector<PointReport> reports(tasks.size());
  std::mutex io_mutex;
  const unsigned workers = cfg.workers > 0
                               ? static_cast<unsigned>(cfg.workers)
                               : hardware_threads();

  parallel_for(
      0, tasks.size(),
      [&](std::size_t idx) {
        const Task& task = tasks[idx];
        const fs::path report_path =
            fs::path(cfg.output_dir) / ("point_" + task.key + ".json");

        // resume: reuse a stored report when the run parameters match
        if (fs::exists(report_path)) {
          try {
            std::ifstream in(report_path);
            json stored_wrap;
            in >> stored_wrap;
            if (stored_wrap.at("n_samples") == cfg.n_samples &&
                stored_wrap.at("k_neighbors") == cfg.k_neighbors &&
                stored_wrap.at("seed") == task.seed) {
              reports[idx] = PointReport::from_json(stored_wrap.at("report"));
              return;
            }
          } catch (...) {
            // unreadable or mismatched: recompute below
          }
        }

        PointReport rep;
        if (task.sub) {
          rep = analyze_sub_point(cfg, task.seed, cfg.output_dir);
        } else {
          const MetricSpec m = MetricSpec::from_params(
              task.params[0], task.params[1], task.params[2]);
          rep = analyze_point(m, cfg, task.seed, task.key, cfg.output_dir);
        }

        json wrap;
        wrap["n_samples"] = cfg.n_samples;
        wrap["k_neighbors"] = cfg.k_neighbors;
        wrap["seed"] = task.seed;
        wrap["report"] = rep.to_json();
        {
          std::lock_guard<std::mutex> lock(io_mutex);
          std::ofstream out(report_path);
          out << wrap.dump(2) << '\n';
        }
        reports[idx] = std::move(rep);
      },
      workers);

  SweepResult result;
  result.reports = std::move(reports);
  result.aggregate = aggregate_reports(result.reports, std::move(skipped));

  std::ofstream agg_out(fs::path(cfg.output_dir) / "aggregate.json");
  agg_out << result.aggregate.to_json().dump(2) << '\n';
  emit_plots(result.reports, cfg, cfg.output_dir);
  return result;
}

SweepResult regenerate_from_dir(const std::string& dir,
                                const std::string& out_dir) {
  std::vector<PointReport> reports;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("point_", 0) == 0 && entry.path().extension() == ".json") {
      std::ifstream in(entry.path());
      json wrap;
      in >> wrap;
      reports.push_back(PointReport::from_json(wrap.at("report")));
    }
  }
  std::sort(reports.begin(), reports.end(),
            [](const PointReport& a, const PointReport& b) { return a.key < b.key; });
  SweepResult result;
  result.reports = std::move(reports);
  result.aggregate = aggregate_reports(result.reports, {});
  fs::create_directories(out_dir);
  std::ofstream agg_out(fs::path(out_dir) / "aggregate.json");
  agg_out << result.aggregate.to_json().dump(2) << '\n';
  SweepConfig cfg;
  cfg.output_dir = out_dir;
  emit_plots(result.reports, cfg, out_dir);
  return result;
}

void emit_plots(const std::vector<PointReport>& reports, const SweepConfig& cfg,
                const std::string& dir) {
  // per-point volume curves with the model overlay, re-read from the CSVs
  for (const auto& r : reports) {
    if (!r.ok) continue;
    const fs::path csv = fs::path(dir) / ("curve_" + r.key + ".csv");
    std::ifstream in(csv);
    if (!in) continue;
    SvgPlot plot;
    plot.title = "ball volume, params (" + std::to_string(r.params[0]) + ", " +
                 std::to_string(r.params[1]) + ", " +
                 (std::isinf(r.params[2]) ? std::string("inf")
                                          : std::to_string(r.params[2])) +
                 ")";
    plot.x_label = "radius r";
    plot.y_label = "mu0(B(e,r))";
    plot.log_x = true;
    plot.log_y = true;
    SvgSeries mc, model;
    mc.label = "Monte Carlo";
    model.label = "piecewise model";
    model.color = "#b23b3b";
    model.dashed = true;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      double a1, a2, rr, v, se, vm, ratio;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      std::string a3tok;  // may be "inf"
      ls >> a1 >> a2 >> a3tok >> rr >> v >> se >> vm >> ratio;
      (void)a1;
      (void)a2;
      mc.x.push_back(rr);
      mc.y.push_back(v);
      model.x.push_back(rr);
      model.y.push_back(vm);
    }
    plot.series = {mc, model};
    std::ofstream out(fs::path(dir) / ("volume_" + r.key + ".svg"));
    out << render_line_plot(plot);
  }

  // doubling-estimate heat map over the (a1, a3) grid
  SvgHeatMap map;
  map.title = "empirical doubling estimate over the parameter grid";
  map.x_label = "a3";
  map.y_label = "a1";
  map.x_ticks = cfg.a3_grid;
  map.y_ticks = cfg.a1_grid;
  map.annotation =
      "uniform doubling holds for every left-invariant metric; "
      "color shows the desk-scale estimate (calibrated bound 80)";
  map.values.assign(cfg.a1_grid.size(),
                    std::vector<double>(cfg.a3_grid.size(),
                                        std::numeric_limits<double>::quiet_NaN()));
  for (size_t i1 = 0; i1 < cfg.a1_grid.size(); ++i1)
    for (size_t i3 = 0; i3 < cfg.a3_grid.size(); ++i3) {
      const std::string key = point_key(cfg.a1_grid[i1], cfg.a3_grid[i3]);
      for (const auto& r : reports)
        if (r.key == key && r.ok) map.values[i1][i3] = r.d_hat;
    }
  {
    std::ofstream out(fs::path(dir) / "doubling_heatmap.svg");
    out << render_heat_map(map);
  }

  // lambda1 * diam^2 scatter
  SvgScatter sc;
  sc.title = "spectral gap vs diameter";
  sc.x_label = "point index";
  sc.y_label = "lambda1 * diam^2";
  sc.hlines = {2.4, 50.0};
  int idx = 0;
  for (const auto& r : reports) {
    if (!r.ok) continue;
    sc.x.push_back(static_cast<double>(idx++));
    sc.y.push_back(r.lambda1_diam_sq);
  }
  {
    std::ofstream out(fs::path(dir) / "lambda1_diam.svg");
    out << render_scatter(sc);
  }
}

}  // namespace su2
