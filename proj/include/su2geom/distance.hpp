#pragma once

#include <cstdint>
#include <vector>

#include "su2geom/algebra.hpp"
#include "su2geom/metric.hpp"

namespace su2 {

// Distance from the identity in the bi-invariant metric g_(1,1,1), under
// which SU(2) is a round sphere of circumference 4*pi.
double round_distance(const GroupElement& x);

// d_111 distance between two elements.
double round_distance(const GroupElement& x, const GroupElement& y);

// First-order local approximation |log(x^-1 y)|_g: the g-length of the
// one-parameter-subgroup path from x to y, hence always >= d_g(x,y).
// Exactly symmetric and left-invariant.
double chord_length(const MetricSpec& m, const GroupElement& x,
                    const GroupElement& y);

struct DistanceFieldOptions {
  // Gate: error out when (a3/(a1 a2)) * expected sample spacing > 0.5, the
  // expected spacing being the model radius of the ball holding one sample.
  bool allow_high_anisotropy = false;
  // Extra points inserted right after the identity (index 1..), before the
  // Haar samples; used to query distances at chosen targets.
  std::vector<GroupElement> extra_points;
  unsigned threads = 0;  // 0 = hardware
};

// Haar samples with Dijkstra distances from the identity on the chord-weight
// k-nearest-neighbor graph.
struct DistanceField {
  MetricSpec metric;
  std::vector<GroupElement> points;  // points[0] = identity
  std::vector<double> dist;          // dist[0] = 0
  int n_samples = 0;
  int k_neighbors = 0;
  std::uint64_t seed = 0;

  // symmetrized adjacency in CSR form (for re-rooted runs)
  std::vector<int> adj_offsets;
  std::vector<int> adj_index;
  std::vector<double> adj_weight;

  double median_edge = 0.0;  // reported step scale h
  double graph_tol = 0.0;    // 2 * median_edge / (a1 * pi)
  double gate_value = 0.0;   // anisotropy gate diagnostic
  bool gate_overridden = false;
};

// Build the field.  Requires a Riemannian metric (callers approximate
// sub-Riemannian geometries through epsilon_truncate / sub_distance),
// n >= 1000, k >= 8.  Deterministic given the seed.
DistanceField build_distance_field(const MetricSpec& m, int n, int k,
                                   std::uint64_t seed,
                                   const DistanceFieldOptions& opt = {});

// Single-source shortest paths from an arbitrary sample index on the stored
// graph; dijkstra_from(f, 0) reproduces f.dist.
std::vector<double> dijkstra_from(const DistanceField& f, int source);

// Max over sampled distances.
double diameter_estimate(const DistanceField& f);

// State of the rigid-body (Euler-Arnold) geodesic flow: position plus body
// momentum in the diagonalizing Milnor frame.
struct GeodesicState {
  GroupElement position;
  Vec3 momentum{0, 0, 0};
  double energy = 0.0;  // (1/2) m^T Q^{-1} m, conserved
};

// Integrate the geodesic flow with classical RK4 at fixed step dt from the
// identity with initial body momentum m0.  Throws StepTooLargeError when
// relative drift of energy or |m|_2 exceeds 1e-6.
std::vector<GeodesicState> shoot_geodesic(const MetricSpec& m, const Vec3& m0,
                                          double T, double dt);

// Shooting refinement of a graph-distance upper bound: coordinate descent
// over initial momenta near the chord direction; returns the best geodesic
// length reaching x within tolerance, never exceeding d_init.
double refine_distance(const MetricSpec& m, const GroupElement& x,
                       double d_init);

struct SubDistanceResult {
  std::vector<double> eps_schedule;
  std::vector<double> values;  // d_{g_eps}(e, x) per schedule entry
  double value = 0.0;          // last element
};

// Carnot-Caratheodory distance estimate for a subriemannian2 metric via the
// monotone epsilon-truncation schedule.
SubDistanceResult sub_distance(const MetricSpec& m, const GroupElement& x,
                               const std::vector<double>& eps_schedule,
                               int n = 20000, int k = 16,
                               std::uint64_t seed = 1);

// Batch version: one field per epsilon serves every target.
std::vector<SubDistanceResult> sub_distance_batch(
    const MetricSpec& m, const std::vector<GroupElement>& targets,
    const std::vector<double>& eps_schedule, int n, int k, std::uint64_t seed,
    std::vector<double>* graph_tols = nullptr);

}  // namespace su2
