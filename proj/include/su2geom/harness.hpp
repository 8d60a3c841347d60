#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "su2geom/distance.hpp"
#include "su2geom/metric.hpp"
#include "su2geom/spectrum.hpp"
#include "su2geom/volume.hpp"

#include <json.hpp>

namespace su2 {

struct RGridSpec {
  double lo_factor = 0.02;  // times min(a1, a1 a2 / a3)
  double hi_factor = 12.0;  // times a2; leaves >= 6 grid points past the
                            // 2*pi*a2 diameter ceiling for the flat-tail fit
  int per_octave = 8;       // log spacing 2^(1/per_octave): exact (r,2r) pairs
};

struct TimeGridSpec {
  int count = 25;
  double hi_diam_sq_factor = 10.0;  // t up to this multiple of diam^2
};

struct SweepConfig {
  std::vector<double> a1_grid{1.0, 0.5, 0.2, 0.1, 0.05};
  std::vector<double> a3_grid{1.0, 2.0, 5.0, 10.0, 20.0};
  int n_samples = 20000;
  int k_neighbors = 16;
  std::uint64_t seed = 1;
  RGridSpec r_grid;
  TimeGridSpec time_grid;
  bool include_subriemannian = true;
  double anisotropy_cap = 100.0;
  std::string output_dir = "sweep_out";
  int workers = 0;  // 0 = hardware
};

// Strict parse: unknown keys anywhere are an error (std::invalid_argument).
SweepConfig parse_config(const nlohmann::json& j);
SweepConfig parse_config_file(const std::string& path);

// Metric input: {"params":[a1,a2,a3]} ("inf" allowed for a3) or {"Q":[[...]]}.
MetricSpec parse_metric_json(const nlohmann::json& j);

// A judged quantity together with the thresholds it was judged against.
struct Verdict {
  double value = 0.0;
  double lo = 0.0, hi = 0.0;
  bool pass = false;
};

struct PointReport {
  std::string key;
  std::array<double, 3> params{1, 1, 1};
  bool sub = false;
  bool ok = false;
  std::string error;

  double d_hat = 0.0;             // empirical doubling estimate
  RatioBand band{};               // v_hat / model band
  RegimeSlopes slopes{};          // per-regime log-log slopes
  Verdict diam{};                 // against [0.9 pi a2, 1.1 * 2 pi a2]
  double lambda1_exact_val = 0.0; // nan-like 0 for sub points
  double lambda1_spectral = 0.0;
  double lambda1_diff = 0.0;
  double lambda1_diam_sq = 0.0;
  RatioBand heat_band{};          // heat_trace(t) * model(sqrt t)
  double heat_t_lo = 0.0, heat_t_hi = 0.0;
  RatioBand weyl_band{};          // weyl_count(s) * model(s^-1/2)
  double weyl_s_lo = 0.0, weyl_s_hi = 0.0;
  double graph_tol = 0.0;
  double gate_value = 0.0;
  bool gate_overridden = false;
  double j_max = 0.0;

  // sub-Riemannian extras
  std::vector<double> eps_schedule;
  std::vector<std::vector<double>> eps_distances;  // per target
  bool eps_monotone = true;

  double field_ms = 0.0, spectrum_ms = 0.0, total_ms = 0.0;

  nlohmann::json to_json() const;
  static PointReport from_json(const nlohmann::json& j);
};

struct SweepAggregate {
  int points_ok = 0;
  int points_failed = 0;
  std::vector<std::string> skipped;  // over the anisotropy cap
  double max_d_hat = 0.0;
  double ratio_spread = 0.0;  // max band.hi / min band.lo
  double worst_lambda1_diff = 0.0;
  double lambda1_diam_sq_min = 0.0, lambda1_diam_sq_max = 0.0;
  RatioBand heat_global{};
  RatioBand weyl_global{};
  double worst_slope_dev = 0.0;  // max |slope - exponent| over fitted regimes
  bool hard_failure = false;

  nlohmann::json to_json() const;
};

struct SweepResult {
  std::vector<PointReport> reports;
  SweepAggregate aggregate;
};

// One report per admissible grid point plus the aggregate; per-point files
// land in cfg.output_dir and are reused on re-runs (resume by key).
SweepResult run_sweep(const SweepConfig& cfg);

// Regenerate plots (and the aggregate) from stored per-point reports.
SweepResult regenerate_from_dir(const std::string& dir,
                                const std::string& out_dir);

void emit_plots(const std::vector<PointReport>& reports,
                const SweepConfig& cfg, const std::string& dir);

// CSV writers (deterministic %.17g formatting).
void write_field_csv(const DistanceField& f, const std::string& path);
void write_curve_csv(const VolumeCurve& c, const VolumeModel& p,
                     const std::string& path);
void write_spectrum_csv(const SpectrumTable& t, const std::string& path);

// Shared helper: analyze one Riemannian grid point end to end.
PointReport analyze_point(const MetricSpec& m, const SweepConfig& cfg,
                          std::uint64_t point_seed, const std::string& key,
                          const std::string& out_dir);

// The sub-Riemannian (1,1,inf) pipeline used when include_subriemannian.
PointReport analyze_sub_point(const SweepConfig& cfg, std::uint64_t point_seed,
                              const std::string& out_dir);

}  // namespace su2
