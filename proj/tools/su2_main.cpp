// Command-line front end: sweep orchestration plus one-off volume, spectrum,
// distance and model queries.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "su2geom/errors.hpp"
#include "su2geom/harness.hpp"
#include "su2geom/parallel.hpp"
#include "su2geom/rng.hpp"

using namespace su2;

namespace {

// "a1,a2,a3" with "inf" accepted for a3 (and a2, diagnostics only)
MetricSpec metric_from_string(const std::string& s) {
  std::array<double, 3> p{};
  std::stringstream in(s);
  std::string tok;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(in, tok, ','))
      throw std::invalid_argument("--params needs three comma-separated values");
    if (tok == "inf" || tok == "Infinity") {
      p[i] = kInf;
    } else {
      p[i] = std::stod(tok);
    }
  }
  return MetricSpec::from_params(p[0], p[1], p[2]);
}

MetricSpec resolve_metric(const std::string& params, const std::string& file) {
  if (!params.empty() && !file.empty())
    throw std::invalid_argument("give --params or --metric, not both");
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open metric file " + file);
    nlohmann::json j;
    in >> j;
    return parse_metric_json(j);
  }
  if (params.empty()) throw std::invalid_argument("need --params or --metric");
  return metric_from_string(params);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"left-invariant geometry on SU(2): distances, volumes, spectra"};
  app.require_subcommand(1);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "run the full parameter sweep");
  std::string config_path;
  int sweep_workers = 0;
  std::uint64_t sweep_seed = 0;
  bool seed_given = false;
  sweep->add_option("--config", config_path, "JSON config file");
  sweep->add_option("--workers", sweep_workers, "worker pool size");
  sweep->add_option("--seed", sweep_seed, "master seed override")
      ->each([&](const std::string&) { seed_given = true; });

  // ---- volume ----
  auto* volume = app.add_subcommand("volume", "Monte Carlo volume curve");
  std::string vol_params, vol_metric, vol_out = "curve.csv";
  int vol_n = 20000, vol_k = 16;
  std::uint64_t vol_seed = 1;
  bool vol_force = false;
  volume->add_option("--params", vol_params, "a1,a2,a3 (inf allowed for a3)");
  volume->add_option("--metric", vol_metric, "metric JSON file");
  volume->add_option("--n", vol_n, "sample count");
  volume->add_option("--k", vol_k, "neighbors");
  volume->add_option("--seed", vol_seed, "seed");
  volume->add_option("--out", vol_out, "output CSV");
  volume->add_flag("--force", vol_force,
                   "override the anisotropy gate (with a warning)");

  // ---- spectrum ----
  auto* spectrum = app.add_subcommand("spectrum", "Laplacian spectrum table");
  std::string spec_params, spec_metric, spec_out = "spectrum.csv";
  double spec_jmax = -1.0;
  spectrum->add_option("--params", spec_params, "a1,a2,a3 (inf allowed for a3)");
  spectrum->add_option("--metric", spec_metric, "metric JSON file");
  spectrum->add_option("--jmax", spec_jmax, "spin cutoff (half-integer)");
  spectrum->add_option("--out", spec_out, "output CSV");

  // ---- distance ----
  auto* distance = app.add_subcommand("distance", "distance to a group element");
  std::string dist_params, dist_metric, dist_point, dist_field_out;
  int dist_n = 20000, dist_k = 16;
  std::uint64_t dist_seed = 1;
  bool dist_force = false;
  distance->add_option("--params", dist_params, "a1,a2,a3");
  distance->add_option("--metric", dist_metric, "metric JSON file");
  distance->add_option("--point", dist_point, "q0,q1,q2,q3")->required();
  distance->add_option("--n", dist_n, "sample count");
  distance->add_option("--k", dist_k, "neighbors");
  distance->add_option("--seed", dist_seed, "seed");
  distance->add_option("--field-out", dist_field_out,
                       "also export the distance field CSV");
  distance->add_flag("--force", dist_force, "override the anisotropy gate");

  // ---- model ----
  auto* model_cmd = app.add_subcommand("model", "piecewise volume model value");
  std::string model_params, model_metric;
  double model_r = 1.0;
  model_cmd->add_option("--params", model_params, "a1,a2,a3");
  model_cmd->add_option("--metric", model_metric, "metric JSON file");
  model_cmd->add_option("--r", model_r, "radius")->required();

  // ---- report ----
  auto* report = app.add_subcommand("report", "regenerate plots and aggregate");
  std::string report_dir, report_out;
  report->add_option("--dir", report_dir, "directory of stored point reports")
      ->required();
  report->add_option("--out", report_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      SweepConfig cfg;
      if (!config_path.empty()) {
        try {
          cfg = parse_config_file(config_path);
        } catch (const std::exception& e) {
          std::cerr << "config error: " << e.what() << "\n";
          return 2;
        }
      }
      if (sweep_workers > 0) cfg.workers = sweep_workers;
      if (seed_given) cfg.seed = sweep_seed;
      const SweepResult result = run_sweep(cfg);
      std::cout << "sweep: " << result.aggregate.points_ok << " points ok, "
                << result.aggregate.points_failed << " failed, "
                << result.aggregate.skipped.size() << " skipped\n"
                << "max doubling estimate " << result.aggregate.max_d_hat
                << ", ratio spread " << result.aggregate.ratio_spread
                << ", worst lambda1 mismatch "
                << result.aggregate.worst_lambda1_diff << "\n"
                << "outputs in " << cfg.output_dir << "\n";
      return result.aggregate.hard_failure ? 3 : 0;
    }

    if (*volume) {
      const MetricSpec m = resolve_metric(vol_params, vol_metric);
      MetricSpec work = m;
      if (!m.riemannian()) work = epsilon_truncate(m, 1.0 / 64);
      DistanceFieldOptions opt;
      opt.allow_high_anisotropy = vol_force;
      const DistanceField f =
          build_distance_field(work, vol_n, vol_k, vol_seed, opt);
      if (f.gate_overridden)
        std::cerr << "warning: anisotropy gate " << f.gate_value
                  << " > 0.5 overridden; distances carry extra bias\n";
      const VolumeModel p = VolumeModel::from_metric(m);
      const VolumeCurve c =
          estimate_curve(f, default_r_grid(m.a1(), m.a2(), m.a3()));
      write_curve_csv(c, p, vol_out);
      std::cout << "wrote " << vol_out << " (n=" << vol_n
                << ", graph_tol=" << f.graph_tol << ")\n";
      return 0;
    }

    if (*spectrum) {
      const MetricSpec m = resolve_metric(spec_params, spec_metric);
      const double jmax = spec_jmax >= 0 ? spec_jmax : adaptive_j_max(m, 0.05);
      const SpectrumTable t = spectrum_table(m, jmax, hardware_threads());
      write_spectrum_csv(t, spec_out);
      std::cout << "wrote " << spec_out << " (j_max=" << jmax
                << ", lambda1=" << t.lambda1() << ")\n";
      return 0;
    }

    if (*distance) {
      const MetricSpec m = resolve_metric(dist_params, dist_metric);
      std::array<double, 4> q{};
      {
        std::stringstream in(dist_point);
        std::string tok;
        for (int i = 0; i < 4; ++i) {
          if (!std::getline(in, tok, ','))
            throw std::invalid_argument("--point needs q0,q1,q2,q3");
          q[i] = std::stod(tok);
        }
      }
      const GroupElement x = GroupElement{q[0], q[1], q[2], q[3]}.renormalized();
      if (!m.riemannian()) {
        const auto res = sub_distance(m, x, {1.0 / 4, 1.0 / 8, 1.0 / 16,
                                             1.0 / 32, 1.0 / 64},
                                      dist_n, dist_k, dist_seed);
        std::cout << "cc distance (eps schedule limit): " << res.value << "\n";
        std::cout << "schedule values:";
        for (double v : res.values) std::cout << " " << v;
        std::cout << "\n";
        return 0;
      }
      DistanceFieldOptions opt;
      opt.allow_high_anisotropy = dist_force;
      opt.extra_points = {x};
      const DistanceField f =
          build_distance_field(m, dist_n, dist_k, dist_seed, opt);
      if (f.gate_overridden)
        std::cerr << "warning: anisotropy gate " << f.gate_value
                  << " > 0.5 overridden\n";
      if (!dist_field_out.empty()) write_field_csv(f, dist_field_out);
      const double graph = f.dist[1];
      const double refined = refine_distance(m, x, graph);
      const double d111 = round_distance(x);
      std::cout << "graph estimate:   " << graph << "\n"
                << "refined estimate: " << refined << "\n"
                << "sandwich: [" << m.a1() * d111 << ", " << m.a3() * d111
                << "]  (a1*d111, a3*d111)\n"
                << "graph tolerance:  " << f.graph_tol << "\n";
      return 0;
    }

    if (*model_cmd) {
      const MetricSpec m = resolve_metric(model_params, model_metric);
      const VolumeModel p = VolumeModel::from_metric(m);
      std::cout << "V(" << model_r << ") = " << model_volume(p, model_r)
                << "  (branch exponent " << model_branch_exponent(p, model_r)
                << ")\n";
      return 0;
    }

    if (*report) {
      const SweepResult result = regenerate_from_dir(report_dir, report_out);
      std::cout << "regenerated " << result.reports.size() << " reports into "
                << report_out << "\n";
      return result.aggregate.hard_failure ? 3 : 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
