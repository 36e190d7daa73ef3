#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "wsnow/error.hpp"
#include "wsnow/graphs.hpp"
#include "wsnow/markov.hpp"
#include "wsnow/measure.hpp"
#include "wsnow/metric_space.hpp"

// Seeded random generators for test sweeps. Everything draws from one
// caller-owned mt19937_64 so a run is reproduced by its seed alone.

namespace wsnow::samplers {

inline std::vector<double> simplex_weights(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) {
    v = exp1(rng) + 1e-6;
    total += v;
  }
  for (double& v : w) v /= total;
  // nudge the last entry so the sum is exactly representable as 1
  double s = std::accumulate(w.begin(), w.end() - 1, 0.0);
  w.back() = 1.0 - s;
  return w;
}

// Distances drawn from [lo, hi] with hi <= 2 lo satisfy the triangle
// inequality outright; aspect ratio is at most hi/lo.
inline FiniteMetricSpace metric_in_interval(int n, double lo, double hi,
                                            std::mt19937_64& rng) {
  if (!(lo > 0.0 && hi >= lo && hi <= 2.0 * lo))
    throw validation_error("BadInterval", "need 0 < lo <= hi <= 2 lo");
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      d[static_cast<size_t>(i) * n + j] = d[static_cast<size_t>(j) * n + i] = u(rng);
  return FiniteMetricSpace(unchecked, n, std::move(d));
}

inline std::vector<std::vector<double>> gaussian_points(int n, int dim,
                                                        std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (double& c : p) c = gauss(rng);
  return pts;
}

inline std::vector<double> euclidean_distance_matrix(
    const std::vector<std::vector<double>>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (size_t c = 0; c < pts[i].size(); ++c) {
        double t = pts[i][c] - pts[j][c];
        s += t * t;
      }
      d[static_cast<size_t>(i) * n + j] = d[static_cast<size_t>(j) * n + i] = std::sqrt(s);
    }
  return d;
}

// Shortest-path metric of a random connected weighted graph; the triangle
// inequality holds by construction.
inline FiniteMetricSpace graph_metric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<double> d(static_cast<size_t>(n) * n,
                        std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) d[static_cast<size_t>(i) * n + i] = 0.0;
  auto add_edge = [&](int u, int v, double len) {
    auto& a = d[static_cast<size_t>(u) * n + v];
    auto& b = d[static_cast<size_t>(v) * n + u];
    a = b = std::min(a, len);
  };
  for (int v = 1; v < n; ++v) add_edge(std::uniform_int_distribution<int>(0, v - 1)(rng),
                                       v, w(rng));
  for (int extra = 0; extra < n; ++extra) {
    int u = pick(rng), v = pick(rng);
    if (u != v) add_edge(u, v, w(rng));
  }
  for (int k = 0; k < n; ++k)  // Floyd-Warshall
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[static_cast<size_t>(i) * n + j] =
            std::min(d[static_cast<size_t>(i) * n + j],
                     d[static_cast<size_t>(i) * n + k] + d[static_cast<size_t>(k) * n + j]);
  return FiniteMetricSpace(unchecked, n, std::move(d));
}

// Metric of a random weighted tree: a Hadamard-embeddable configuration
// source for soundness sweeps.
inline FiniteMetricSpace tree_metric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::vector<int> parent(n, 0);
  std::vector<double> len(n, 0.0);
  for (int v = 1; v < n; ++v) {
    parent[v] = std::uniform_int_distribution<int>(0, v - 1)(rng);
    len[v] = w(rng);
  }
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  // distances accumulate along root paths; n is small, walk pairs directly
  auto depth_path = [&](int v) {
    std::vector<int> path;
    for (int x = v; x != 0; x = parent[x]) path.push_back(x);
    path.push_back(0);
    return path;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto pi = depth_path(i), pj = depth_path(j);
      std::vector<char> on_pi(n, 0);
      for (int x : pi) on_pi[x] = 1;
      int meet = 0;
      for (int x : pj)
        if (on_pi[x]) {
          meet = x;
          break;
        }
      double dist = 0.0;
      for (int x = i; x != meet; x = parent[x]) dist += len[x];
      for (int x = j; x != meet; x = parent[x]) dist += len[x];
      d[static_cast<size_t>(i) * n + j] = d[static_cast<size_t>(j) * n + i] = dist;
    }
  return FiniteMetricSpace(unchecked, n, std::move(d));
}

// Reversible chain from symmetric positive weights: P_ij = w_ij / row_i,
// pi_i = row_i / total. Detailed balance holds by symmetry of w.
inline ReversibleChain reversible_chain(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<std::vector<double>> w(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) w[i][j] = w[j][i] = u(rng);
  std::vector<std::vector<double>> P(n, std::vector<double>(n));
  std::vector<double> pi(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = std::accumulate(w[i].begin(), w[i].end(), 0.0);
    for (int j = 0; j < n; ++j) P[i][j] = w[i][j] / row;
    pi[i] = row;
    total += row;
  }
  for (double& v : pi) v /= total;
  double s = std::accumulate(pi.begin(), pi.end() - 1, 0.0);
  pi.back() = 1.0 - s;
  return validate_chain(P, pi);
}

inline std::vector<double> symmetric_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> psi(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      psi[static_cast<size_t>(i) * n + j] = psi[static_cast<size_t>(j) * n + i] = u(rng);
  return psi;
}

inline DiscreteMeasure discrete_measure(int dim, int max_atoms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> na(1, max_atoms);
  const int n = na(rng);
  auto pts = gaussian_points(n, dim, rng);
  std::vector<double> flat;
  for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
  return DiscreteMeasure(dim, std::move(flat), simplex_weights(n, rng));
}

struct HarmonicInstance {
  std::vector<double> p, q, A, B;
};

// Random feasible input for the harmonic recipe. The budget constraint
// sum_k a_ik + sum_k b_kj = p_i + q_j forces row sums of A to be p_i + t and
// column sums of B to be q_j - t for one scalar t; rows and columns are then
// filled with random simplex splits.
inline HarmonicInstance harmonic_instance(int n, std::mt19937_64& rng) {
  HarmonicInstance inst;
  inst.p = simplex_weights(n, rng);
  inst.q = simplex_weights(n, rng);
  const double t_lo = -*std::min_element(inst.p.begin(), inst.p.end());
  const double t_hi = *std::min_element(inst.q.begin(), inst.q.end());
  const double t = std::uniform_real_distribution<double>(t_lo, t_hi)(rng);
  inst.A.assign(static_cast<size_t>(n) * n, 0.0);
  inst.B.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    auto split = simplex_weights(n, rng);
    for (int k = 0; k < n; ++k)
      inst.A[static_cast<size_t>(i) * n + k] = (inst.p[i] + t) * split[k];
  }
  for (int j = 0; j < n; ++j) {
    auto split = simplex_weights(n, rng);
    for (int k = 0; k < n; ++k)
      inst.B[static_cast<size_t>(k) * n + j] = (inst.q[j] - t) * split[k];
  }
  return inst;
}

inline std::vector<int> permutation(int n, std::mt19937_64& rng) {
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::shuffle(sigma.begin(), sigma.end(), rng);
  return sigma;
}

}  // namespace wsnow::samplers
