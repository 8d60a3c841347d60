#include "su2geom/volume.hpp"

#include <algorithm>
#include <cmath>

#include "su2geom/errors.hpp"

namespace su2 {

namespace {
constexpr double kPi2 = 9.86960440108935861883;  // pi^2
}

VolumeModel VolumeModel::from_params(double a1, double a2, double a3) {
  if (std::isinf(a2))
    throw SubRiemannianUnsupportedError(
        "VolumeModel: degenerate geometry (a2 = inf) has no volume model");
  VolumeModel p;
  p.a1 = a1;
  p.a2 = a2;
  p.a3 = a3;
  p.b1 = std::isinf(a3) ? 0.0 : a1 * a2 / a3;
  p.b2 = a1;
  p.b3 = a2;
  return p;
}

VolumeModel VolumeModel::from_metric(const MetricSpec& m) {
  return from_params(m.a1(), m.a2(), m.a3());
}

double model_volume(const VolumeModel& p, double r) {
  if (r <= 0.0) return 0.0;
  if (r <= p.b1) return r * r * r / (p.a1 * p.a2 * p.a3);
  if (r <= p.b2) {
    const double s = r / (p.a1 * p.a2);
    return s * s * r * r;
  }
  if (r <= p.b3) {
    const double s = r / p.a2;
    return s * s;
  }
  return 1.0;
}

int model_branch_exponent(const VolumeModel& p, double r) {
  if (r <= p.b1) return 3;
  if (r <= p.b2) return 4;
  if (r <= p.b3) return 2;
  return 0;
}

double model_doubling(const VolumeModel& p, double r, double k) {
  if (k < 1.0) throw std::invalid_argument("model_doubling: k < 1");
  if (r < 0.0) throw std::invalid_argument("model_doubling: r < 0");
  if (r == 0.0) {
    const int e = p.b1 > 0.0 ? 3 : 4;
    return std::pow(k, e);
  }
  return model_volume(p, k * r) / model_volume(p, r);
}

double model_inverse(const VolumeModel& p, double v) {
  if (!(v > 0.0 && v <= 1.0))
    throw std::invalid_argument("model_inverse: v outside (0,1]");
  const double v1 = p.b1 > 0 ? model_volume(p, p.b1) : 0.0;
  if (v <= v1) return std::cbrt(v * p.a1 * p.a2 * p.a3);
  const double v2 = model_volume(p, p.b2);
  if (v <= v2) return std::sqrt(p.a1 * p.a2) * std::pow(v, 0.25);
  return p.a2 * std::sqrt(v);
}

double riemannian_total_volume(double a1, double a2, double a3) {
  return 16.0 * kPi2 * a1 * a2 * a3;
}

VolumeCurve estimate_curve(const DistanceField& f,
                           const std::vector<double>& r_grid) {
  for (size_t i = 1; i < r_grid.size(); ++i)
    if (!(r_grid[i] > r_grid[i - 1]))
      throw std::invalid_argument("estimate_curve: r_grid must be ascending");

  VolumeCurve c;
  c.params = f.metric.params;
  c.r = r_grid;
  c.n = static_cast<long>(f.dist.size());
  c.graph_tol = f.graph_tol;

  std::vector<double> sorted = f.dist;
  std::sort(sorted.begin(), sorted.end());
  c.v_hat.resize(r_grid.size());
  c.stderr_.resize(r_grid.size());
  const double n = static_cast<double>(c.n);
  for (size_t i = 0; i < r_grid.size(); ++i) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), r_grid[i]);
    const double v = static_cast<double>(it - sorted.begin()) / n;
    c.v_hat[i] = v;
    c.stderr_[i] = std::sqrt(std::max(0.0, v * (1.0 - v) / n));
  }
  return c;
}

std::vector<double> default_r_grid(double a1, double a2, double a3) {
  const double b1 = std::isinf(a3) ? a1 : a1 * a2 / a3;
  const double lo = 0.02 * std::min(a1, b1);
  const double hi = 2.5 * a2;
  const double step = std::pow(2.0, 1.0 / 8.0);
  std::vector<double> grid;
  for (double r = lo; r < hi * step; r *= step) grid.push_back(r);
  return grid;
}

namespace {

// indices whose count passes the variance gate
std::vector<size_t> eligible_indices(const VolumeCurve& c, double min_count) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < c.r.size(); ++i)
    if (c.v_hat[i] * static_cast<double>(c.n) >= min_count) idx.push_back(i);
  return idx;
}

}  // namespace

double doubling_estimate(const VolumeCurve& c) {
  // locate (r, 2r) pairs on the grid
  double best = 0.0;
  int pairs = 0;
  for (size_t i = 0; i < c.r.size(); ++i) {
    if (c.v_hat[i] * static_cast<double>(c.n) < 50.0) continue;
    for (size_t j = i + 1; j < c.r.size(); ++j) {
      const double k = c.r[j] / c.r[i];
      if (std::fabs(k - 2.0) <= 1e-9 * 2.0) {
        ++pairs;
        best = std::max(best, c.v_hat[j] / c.v_hat[i]);
        break;
      }
      if (k > 2.0 + 1e-6) break;
    }
  }
  if (pairs < 5)
    throw InsufficientResolutionError(
        "doubling_estimate: fewer than 5 eligible (r, 2r) pairs");
  return best;
}

RatioBand ratio_band(const VolumeCurve& c, const VolumeModel& p) {
  const auto idx = eligible_indices(c, 50.0);
  if (idx.size() < 5)
    throw InsufficientResolutionError(
        "ratio_band: fewer than 5 eligible grid radii");
  RatioBand band{kInf, 0.0};
  for (size_t i : idx) {
    const double ratio = c.v_hat[i] / model_volume(p, c.r[i]);
    band.lo = std::min(band.lo, ratio);
    band.hi = std::max(band.hi, ratio);
  }
  return band;
}

namespace {

std::optional<double> slope_over(const VolumeCurve& c, double lo, double hi) {
  // least squares on (log r, log v) for eligible points in (lo, hi)
  std::vector<double> xs, ys;
  for (size_t i = 0; i < c.r.size(); ++i) {
    if (c.r[i] <= lo || c.r[i] > hi) continue;
    if (c.v_hat[i] * static_cast<double>(c.n) < 100.0) continue;
    if (c.v_hat[i] <= 0.0) continue;
    xs.push_back(std::log(c.r[i]));
    ys.push_back(std::log(c.v_hat[i]));
  }
  if (xs.size() < 6) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::fabs(denom) < 1e-12) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace

RegimeSlopes regime_slopes(const VolumeCurve& c, const VolumeModel& p,
                           double flat_from) {
  RegimeSlopes s;
  if (p.b1 > 0.0) s.euclidean = slope_over(c, 0.0, p.b1);
  s.heisenberg = slope_over(c, p.b1, p.b2);
  s.collapse = slope_over(c, p.b2, p.b3);
  s.flat = slope_over(c, flat_from > 0.0 ? flat_from : p.b3, kInf);
  return s;
}

}  // namespace su2
