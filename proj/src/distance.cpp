#include "su2geom/distance.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <string>

#include "su2geom/errors.hpp"
#include "su2geom/parallel.hpp"
#include "su2geom/rng.hpp"
#include "su2geom/volume.hpp"

namespace su2 {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp1(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

double round_distance(const GroupElement& x) {
  return 2.0 * std::acos(clamp1(x.q0));
}

double round_distance(const GroupElement& x, const GroupElement& y) {
  // chordal form of 2*acos(<x,y>), which resolves separations below the
  // sqrt(eps) floor of acos near 1
  const double dq0 = x.q0 - y.q0, dq1 = x.q1 - y.q1, dq2 = x.q2 - y.q2,
               dq3 = x.q3 - y.q3;
  const double chord =
      0.5 * std::sqrt(dq0 * dq0 + dq1 * dq1 + dq2 * dq2 + dq3 * dq3);
  return 4.0 * std::asin(clamp1(chord));
}

double chord_length(const MetricSpec& m, const GroupElement& x,
                    const GroupElement& y) {
  return metric_norm(m, log_map(multiply(x.inverse(), y)));
}

namespace {

// chord_length(m, points[i], points[j]) inlined for the kNN scan; diagonal
// fast path avoids the frame rotation.
struct ChordEvaluator {
  const MetricSpec& m;
  bool diagonal;
  double w1, w2, w3;  // a_i^2

  explicit ChordEvaluator(const MetricSpec& m_) : m(m_) {
    diagonal = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (std::fabs(m.frame[i][j] - (i == j ? 1.0 : 0.0)) > 0.0)
          diagonal = false;
    w1 = m.params[0] * m.params[0];
    w2 = m.params[1] * m.params[1];
    w3 = m.params[2] * m.params[2];
  }

  // squared chord; +inf for (near-)antipodal pairs, which therefore never
  // become graph neighbors
  double sq(const GroupElement& x, const GroupElement& y) const {
    const double p0 = x.q0 * y.q0 + x.q1 * y.q1 + x.q2 * y.q2 + x.q3 * y.q3;
    const double p1 = x.q0 * y.q1 - x.q1 * y.q0 - x.q2 * y.q3 + x.q3 * y.q2;
    const double p2 = x.q0 * y.q2 - x.q2 * y.q0 - x.q3 * y.q1 + x.q1 * y.q3;
    const double p3 = x.q0 * y.q3 - x.q3 * y.q0 - x.q1 * y.q2 + x.q2 * y.q1;
    const double s2 = p1 * p1 + p2 * p2 + p3 * p3;
    if (p0 < -1.0 + 1e-12 && s2 < 1e-24) return kInf;
    const double s = std::sqrt(s2);
    const double rho = std::atan2(s, p0);
    double f;  // (2 rho / s)^2
    if (s < 1e-8) {
      f = 4.0;
    } else {
      f = 2.0 * rho / s;
      f *= f;
    }
    if (diagonal) return f * (w1 * p1 * p1 + w2 * p2 * p2 + w3 * p3 * p3);
    const Vec3 w = matvec_t(m.frame, {p1, p2, p3});
    return f * (w1 * w[0] * w[0] + w2 * w[1] * w[1] + w3 * w[2] * w[2]);
  }
};

}  // namespace

DistanceField build_distance_field(const MetricSpec& m, int n, int k,
                                   std::uint64_t seed,
                                   const DistanceFieldOptions& opt) {
  if (!m.riemannian())
    throw SubRiemannianUnsupportedError(
        "build_distance_field: needs a Riemannian metric; use epsilon_truncate "
        "or sub_distance");
  if (n < 1000) throw std::invalid_argument("build_distance_field: n < 1000");
  if (k < 8) throw std::invalid_argument("build_distance_field: k < 8");

  DistanceField f;
  f.metric = m;
  f.n_samples = n;
  f.k_neighbors = k;
  f.seed = seed;

  // Anisotropy gate: expected spacing = model radius of the 1/n-volume ball.
  const VolumeModel model = VolumeModel::from_metric(m);
  const double spacing = model_inverse(model, 1.0 / static_cast<double>(n));
  f.gate_value = (m.a3() / (m.a1() * m.a2())) * spacing;
  if (f.gate_value > 0.5) {
    if (!opt.allow_high_anisotropy)
      throw AnisotropyTooHighError(
          "build_distance_field: anisotropy gate " + std::to_string(f.gate_value) +
              " > 0.5; chord approximation invalid (raise n or override)",
          f.gate_value);
    f.gate_overridden = true;
  }

  f.points.reserve(static_cast<size_t>(n));
  f.points.push_back(GroupElement::identity());
  for (const auto& p : opt.extra_points) f.points.push_back(p.renormalized());
  GaussianSource gauss(seed);
  while (f.points.size() < static_cast<size_t>(n)) f.points.push_back(haar_sample(gauss));
  const int total = static_cast<int>(f.points.size());

  // k nearest neighbors per point under the chord metric itself
  // (anisotropy-aware); plain O(n^2) scan, row-parallel.
  const ChordEvaluator chord(m);
  std::vector<int> knn(static_cast<size_t>(total) * k);
  std::vector<double> knn_d2(static_cast<size_t>(total) * k);
  parallel_for(
      0, static_cast<size_t>(total),
      [&](std::size_t i) {
        // max-heap of the k best squared chords seen so far
        std::vector<std::pair<double, int>> heap;
        heap.reserve(k + 1);
        const GroupElement xi = f.points[i];
        for (int j = 0; j < total; ++j) {
          if (j == static_cast<int>(i)) continue;
          const double d2 = chord.sq(xi, f.points[j]);
          if (heap.size() < static_cast<size_t>(k)) {
            heap.emplace_back(d2, j);
            std::push_heap(heap.begin(), heap.end());
          } else if (d2 < heap.front().first) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = {d2, j};
            std::push_heap(heap.begin(), heap.end());
          }
        }
        std::sort(heap.begin(), heap.end());
        for (int a = 0; a < k; ++a) {
          knn[i * k + a] = heap[a].second;
          knn_d2[i * k + a] = heap[a].first;
        }
      },
      opt.threads);

  // symmetrize: edge if either endpoint selected the other
  std::vector<std::vector<std::pair<int, double>>> adj(total);
  for (int i = 0; i < total; ++i)
    for (int a = 0; a < k; ++a) {
      const int j = knn[static_cast<size_t>(i) * k + a];
      const double w = std::sqrt(knn_d2[static_cast<size_t>(i) * k + a]);
      adj[i].emplace_back(j, w);
      adj[j].emplace_back(i, w);
    }
  // The identity additionally gets a direct chord edge to every sample: each
  // is the length of an actual one-parameter path, so distances stay upper
  // bounds while the root loses most of its hop-discretization bias.
  for (int j = 1; j < total; ++j) {
    const double w2 = chord.sq(f.points[0], f.points[j]);
    if (std::isinf(w2)) continue;
    const double w = std::sqrt(w2);
    adj[0].emplace_back(j, w);
    adj[j].emplace_back(0, w);
  }
  f.adj_offsets.assign(total + 1, 0);
  for (int i = 0; i < total; ++i) {
    auto& row = adj[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end(),
                          [](const auto& a, const auto& b) {
                            return a.first == b.first;
                          }),
              row.end());
    f.adj_offsets[i + 1] = f.adj_offsets[i] + static_cast<int>(row.size());
  }
  f.adj_index.resize(f.adj_offsets[total]);
  f.adj_weight.resize(f.adj_offsets[total]);
  for (int i = 0; i < total; ++i) {
    int o = f.adj_offsets[i];
    for (const auto& [j, w] : adj[i]) {
      f.adj_index[o] = j;
      f.adj_weight[o] = w;
      ++o;
    }
  }

  // step-scale proxy: median over the kNN selections (star edges excluded)
  std::vector<double> edge_lengths(knn_d2.size());
  for (size_t i = 0; i < knn_d2.size(); ++i)
    edge_lengths[i] = std::sqrt(knn_d2[i]);
  std::sort(edge_lengths.begin(), edge_lengths.end());
  f.median_edge =
      edge_lengths.empty() ? 0.0 : edge_lengths[edge_lengths.size() / 2];
  f.graph_tol = 2.0 * f.median_edge / (m.a1() * kPi);

  f.dist = dijkstra_from(f, 0);
  for (double d : f.dist)
    if (std::isinf(d))
      throw DisconnectedGraphError(
          "build_distance_field: graph disconnected; raise n or k");
  return f;
}

std::vector<double> dijkstra_from(const DistanceField& f, int source) {
  const int total = static_cast<int>(f.points.size());
  std::vector<double> dist(total, kInf);
  dist[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (int o = f.adj_offsets[u]; o < f.adj_offsets[u + 1]; ++o) {
      const int v = f.adj_index[o];
      const double nd = d + f.adj_weight[o];
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  return dist;
}

double diameter_estimate(const DistanceField& f) {
  double m = 0.0;
  for (double d : f.dist) m = std::max(m, d);
  return m;
}

namespace {

struct FlowDeriv {
  GroupElement dq;
  Vec3 dm;
};

// Left-invariant geodesic flow: Omega = Q^{-1} m in the Milnor frame,
// mdot = m x Omega, qdot = (1/2) q * (0, frame * Omega).
FlowDeriv flow(const MetricSpec& spec, const GroupElement& q, const Vec3& mom) {
  const double i1 = 1.0 / (spec.params[0] * spec.params[0]);
  const double i2 = 1.0 / (spec.params[1] * spec.params[1]);
  const double i3 = 1.0 / (spec.params[2] * spec.params[2]);
  const Vec3 omega{mom[0] * i1, mom[1] * i2, mom[2] * i3};
  const Vec3 omega_pauli = matvec(spec.frame, omega);
  const GroupElement vel = multiply_raw(
      q, GroupElement{0.0, 0.5 * omega_pauli[0], 0.5 * omega_pauli[1],
                      0.5 * omega_pauli[2]});
  return {vel, cross3(mom, omega)};
}

}  // namespace

std::vector<GeodesicState> shoot_geodesic(const MetricSpec& spec, const Vec3& m0,
                                          double T, double dt) {
  if (!spec.riemannian())
    throw SubRiemannianUnsupportedError("shoot_geodesic: infinite parameter");
  if (!(dt <= T / 100.0))
    throw std::invalid_argument("shoot_geodesic: need dt <= T/100");

  auto energy = [&](const Vec3& mom) {
    double e = 0.0;
    for (int i = 0; i < 3; ++i)
      e += mom[i] * mom[i] / (spec.params[i] * spec.params[i]);
    return 0.5 * e;
  };

  const int steps = static_cast<int>(std::ceil(T / dt - 1e-9));
  std::vector<GeodesicState> traj;
  traj.reserve(steps + 1);
  GroupElement q = GroupElement::identity();
  Vec3 mom = m0;
  const double e0 = energy(m0);
  const double n0 = norm3(m0);
  traj.push_back({q, mom, e0});

  double t = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double h = std::min(dt, T - t);
    const auto k1 = flow(spec, q, mom);
    auto advq = [&](const GroupElement& dq, double c) {
      return GroupElement{q.q0 + c * dq.q0, q.q1 + c * dq.q1, q.q2 + c * dq.q2,
                          q.q3 + c * dq.q3};
    };
    auto advm = [&](const Vec3& dm, double c) {
      return Vec3{mom[0] + c * dm[0], mom[1] + c * dm[1], mom[2] + c * dm[2]};
    };
    const auto k2 = flow(spec, advq(k1.dq, 0.5 * h), advm(k1.dm, 0.5 * h));
    const auto k3 = flow(spec, advq(k2.dq, 0.5 * h), advm(k2.dm, 0.5 * h));
    const auto k4 = flow(spec, advq(k3.dq, h), advm(k3.dm, h));
    q = GroupElement{
        q.q0 + h / 6.0 * (k1.dq.q0 + 2 * k2.dq.q0 + 2 * k3.dq.q0 + k4.dq.q0),
        q.q1 + h / 6.0 * (k1.dq.q1 + 2 * k2.dq.q1 + 2 * k3.dq.q1 + k4.dq.q1),
        q.q2 + h / 6.0 * (k1.dq.q2 + 2 * k2.dq.q2 + 2 * k3.dq.q2 + k4.dq.q2),
        q.q3 + h / 6.0 * (k1.dq.q3 + 2 * k2.dq.q3 + 2 * k3.dq.q3 + k4.dq.q3)};
    q = q.renormalized();
    for (int i = 0; i < 3; ++i)
      mom[i] += h / 6.0 * (k1.dm[i] + 2 * k2.dm[i] + 2 * k3.dm[i] + k4.dm[i]);
    t += h;
    traj.push_back({q, mom, energy(mom)});
  }

  const double e_drift = std::fabs(traj.back().energy - e0) / std::max(e0, 1e-300);
  const double n_drift =
      std::fabs(norm3(traj.back().momentum) - n0) / std::max(n0, 1e-300);
  if (e_drift > 1e-6 || n_drift > 1e-6)
    throw StepTooLargeError("shoot_geodesic: conservation drift exceeds 1e-6");
  return traj;
}

namespace {

// endpoint of the unit-speed geodesic with momentum direction (theta, phi)
// integrated for length T; returns the d_111 gap to the target
double shooting_gap(const MetricSpec& spec, const GroupElement& target,
                    double theta, double phi, double T, double dt) {
  const Vec3 dir{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                 std::cos(theta)};
  // momentum giving unit g-speed along dir: m = Q v / |v|_g with v = dir
  double vnorm = 0.0;
  for (int i = 0; i < 3; ++i)
    vnorm += spec.params[i] * spec.params[i] * dir[i] * dir[i];
  vnorm = std::sqrt(vnorm);
  if (vnorm < 1e-300) return kInf;
  Vec3 mom;
  for (int i = 0; i < 3; ++i)
    mom[i] = spec.params[i] * spec.params[i] * dir[i] / vnorm;
  const auto traj = shoot_geodesic(spec, mom, T, dt);
  return round_distance(traj.back().position, target);
}

}  // namespace

double refine_distance(const MetricSpec& spec, const GroupElement& x,
                       double d_init) {
  if (!spec.riemannian()) return d_init;
  if (round_distance(x) < 1e-12) return 0.0;

  AlgebraVector v;
  try {
    v = log_map(x);
  } catch (const AntipodeError&) {
    return d_init;
  }

  // initial direction: the chord direction in frame coordinates
  const Vec3 vf = matvec_t(spec.frame, {v.x1, v.x2, v.x3});
  const double vn = norm3(vf);
  if (vn < 1e-300) return d_init;
  double theta = std::acos(clamp1(vf[2] / vn));
  double phi = std::atan2(vf[1], vf[0]);

  const double chord = metric_norm(spec, v);
  double T = std::min(d_init, chord);
  // best certified bound: arc length plus the cost of closing the endpoint
  // gap (at most a3 * d_111 gap), over arcs landing within 1e-6
  double accepted = kInf;
  const double a3 = spec.a3();

  // coordinate descent on (theta, phi, T) with a shrinking 3x3x3 stencil
  double step_ang = 0.3, step_T = 0.1 * T;
  const double dt_frac = 1e-3;
  struct Candidate {
    double theta, phi, T;
  };
  std::optional<Candidate> best;
  auto offer = [&](double th, double ph, double tt, double gap) {
    if (gap < 1e-6 && tt + a3 * gap < accepted) {
      accepted = tt + a3 * gap;
      best = Candidate{th, ph, tt};
    }
  };

  double center_gap = shooting_gap(spec, x, theta, phi, T, T * dt_frac);
  offer(theta, phi, T, center_gap);
  for (int iter = 0; iter < 60; ++iter) {
    double bt = theta, bp = phi, bT = T, bgap = center_gap;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          const double th = theta + a * step_ang;
          const double ph = phi + b * step_ang;
          const double tt = std::max(1e-6, T + c * step_T);
          const double gap = shooting_gap(spec, x, th, ph, tt, tt * dt_frac);
          offer(th, ph, tt, gap);
          if (gap < bgap) {
            bgap = gap;
            bt = th;
            bp = ph;
            bT = tt;
          }
        }
    if (bgap >= center_gap) {
      step_ang *= 0.35;
      step_T *= 0.35;
    } else {
      theta = bt;
      phi = bp;
      T = bT;
      center_gap = bgap;
    }
    if (center_gap < 1e-10 && step_T < 1e-10 * std::max(1.0, T)) break;
    if (step_ang < 1e-9 && step_T < 1e-9 * std::max(1.0, T)) break;
  }

  // certify the winner with a finer integration step (the coarse endpoint
  // error is what would otherwise let the bound undercut the true distance)
  if (best) {
    const double fine_gap =
        shooting_gap(spec, x, best->theta, best->phi, best->T, best->T * 1e-4);
    accepted = best->T + a3 * fine_gap;
  }
  return std::min(accepted, d_init);
}

SubDistanceResult sub_distance(const MetricSpec& m, const GroupElement& x,
                               const std::vector<double>& eps_schedule,
                               int n, int k, std::uint64_t seed) {
  auto all = sub_distance_batch(m, {x}, eps_schedule, n, k, seed, nullptr);
  return all.front();
}

std::vector<SubDistanceResult> sub_distance_batch(
    const MetricSpec& m, const std::vector<GroupElement>& targets,
    const std::vector<double>& eps_schedule, int n, int k, std::uint64_t seed,
    std::vector<double>* graph_tols) {
  if (m.kind != MetricKind::subriemannian2)
    throw SubRiemannianUnsupportedError(
        "sub_distance: needs a subriemannian2 metric");
  for (size_t i = 1; i < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] < eps_schedule[i - 1]))
      throw std::invalid_argument("sub_distance: schedule must be strictly decreasing");

  std::vector<SubDistanceResult> out(targets.size());
  for (auto& r : out) r.eps_schedule = eps_schedule;
  if (graph_tols) graph_tols->clear();

  DistanceFieldOptions opt;
  opt.allow_high_anisotropy = true;  // the schedule tail always trips the gate
  opt.extra_points = targets;
  for (size_t e = 0; e < eps_schedule.size(); ++e) {
    const MetricSpec trunc = epsilon_truncate(m, eps_schedule[e]);
    const DistanceField f =
        build_distance_field(trunc, n, k, mix_seed(seed, e, 0), opt);
    if (graph_tols) graph_tols->push_back(f.graph_tol);
    for (size_t t = 0; t < targets.size(); ++t)
      out[t].values.push_back(f.dist[1 + t]);
  }
  for (auto& r : out) r.value = r.values.back();
  return out;
}

}  // namespace su2
