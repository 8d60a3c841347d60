#pragma once

#include <optional>
#include <vector>

#include "su2geom/distance.hpp"
#include "su2geom/metric.hpp"

namespace su2 {

// The explicit piecewise volume model
//   V(r) = (a1 a2 a3)^-1 r^3        on [0, a1 a2 / a3]
//          (a1 a2)^-2   r^4        on [a1 a2 / a3, a1]
//          a2^-2        r^2        on [a1, a2]
//          1                        on [a2, inf),
// continuous at each breakpoint; volumes are fractions of the Haar
// probability measure.  For a3 = inf the cubic branch is empty.
struct VolumeModel {
  double a1 = 1.0, a2 = 1.0, a3 = 1.0;
  double b1 = 1.0;  // a1*a2/a3 (0 when a3 = inf)
  double b2 = 1.0;  // a1
  double b3 = 1.0;  // a2

  static VolumeModel from_params(double a1, double a2, double a3);
  static VolumeModel from_metric(const MetricSpec& m);
};

double model_volume(const VolumeModel& p, double r);

// Branch index at radius r: 3, 4, 2 or 0 (the growth exponent).
int model_branch_exponent(const VolumeModel& p, double r);

// V(k r) / V(r); at r = 0 the ratio is k^e with e the exponent of the first
// nonempty branch.  Always <= k^4.
double model_doubling(const VolumeModel& p, double r, double k);

// Radius at which the model reaches volume v (inverse of model_volume on
// [0, a2]); v in (0, 1].
double model_inverse(const VolumeModel& p, double v);

// Riemannian volume of the whole group, mu_g(SU(2)) = 16 pi^2 a1 a2 a3.
// Conversion factor between the Haar probability measure and mu_g.
double riemannian_total_volume(double a1, double a2, double a3);

// Monte Carlo ball-volume curve read off a distance field.
struct VolumeCurve {
  std::array<double, 3> params{1, 1, 1};
  std::vector<double> r;
  std::vector<double> v_hat;    // fraction of samples with dist < r
  std::vector<double> stderr_;  // binomial standard error
  long n = 0;                   // sample count
  double graph_tol = 0.0;       // inherited from the field
};

VolumeCurve estimate_curve(const DistanceField& f,
                           const std::vector<double>& r_grid);

// Default radius grid: log-spaced at 8 points per octave (so every radius has
// its exact double on the grid) from 0.02*min(a1, a1 a2/a3) up to 2.5*a2.
std::vector<double> default_r_grid(double a1, double a2, double a3);

// Empirical doubling constant: max over grid radii r (with 2r on the grid) of
// v(2r)/v(r), restricted to radii with v(r)*n >= 50.  Throws
// InsufficientResolutionError with fewer than 5 eligible ratio points.
double doubling_estimate(const VolumeCurve& c);

// min and max of v_hat(r)/model_volume(r) over the eligible radii.
struct RatioBand {
  double lo = 0.0;
  double hi = 0.0;
};
RatioBand ratio_band(const VolumeCurve& c, const VolumeModel& p);

// Least-squares log-log slope of the curve inside one model regime, fitted
// over grid points with v*n >= 100; absent when fewer than 6 points qualify.
// The flat fit starts at flat_from when positive (callers pass a diameter
// estimate: the true curve keeps rising between a2 and the diameter, so the
// exponent-0 tail only shows past it); by default it starts at b3.
struct RegimeSlopes {
  std::optional<double> euclidean;   // exponent 3
  std::optional<double> heisenberg;  // exponent 4
  std::optional<double> collapse;    // exponent 2
  std::optional<double> flat;        // exponent 0
};
RegimeSlopes regime_slopes(const VolumeCurve& c, const VolumeModel& p,
                           double flat_from = -1.0);

}  // namespace su2
