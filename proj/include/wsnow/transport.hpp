#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "wsnow/error.hpp"
#include "wsnow/measure.hpp"

namespace wsnow {

struct TransportSolution {
  double cost = 0.0;       // W_p = objective^(1/p)
  double objective = 0.0;  // sum of mass * ||x-y||^p
  Coupling plan;
  std::vector<double> mu_duals, nu_duals;  // alpha_i + beta_j <= c_ij, tight on support
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact min-cost transportation on the complete bipartite support graph via
// successive shortest augmenting paths with node potentials. Supplies and
// demands are probability weights; costs are arbitrary nonnegative reals.
// Returns flows plus LP duals for the optimality certificate.
struct SspResult {
  double objective = 0.0;
  std::vector<double> flow;            // m x k dense
  std::vector<double> alpha, beta;     // duals
};

inline SspResult solve_transportation(int m, int k, const std::vector<double>& cost,
                                      std::vector<double> supply,
                                      std::vector<double> demand) {
  SspResult out;
  out.flow.assign(static_cast<size_t>(m) * k, 0.0);
  // node layout: sources 0..m-1, sinks m..m+k-1
  std::vector<double> pot(m + k, 0.0);
  std::vector<double> dist(m + k);
  std::vector<int> parent(m + k);
  std::vector<char> done(m + k);

  auto c = [&](int i, int j) { return cost[static_cast<size_t>(i) * k + j]; };
  auto f = [&](int i, int j) -> double& { return out.flow[static_cast<size_t>(i) * k + j]; };

  const double mass_eps = 1e-15;
  double remaining = std::accumulate(supply.begin(), supply.end(), 0.0);
  long iterations = 0;
  const long max_iterations = 50L * (m + k) + 1000;

  while (remaining > mass_eps) {
    if (++iterations > max_iterations)
      throw internal_error("SolverNonconvergence: augmentation limit exceeded");

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), char{0});
    std::fill(parent.begin(), parent.end(), -1);
    for (int i = 0; i < m; ++i)
      if (supply[i] > mass_eps) dist[i] = 0.0;

    int target = -1;
    for (;;) {
      int u = -1;
      double best = kInf;
      for (int x = 0; x < m + k; ++x)
        if (!done[x] && dist[x] < best) {
          best = dist[x];
          u = x;
        }
      if (u < 0) break;
      done[u] = 1;
      if (u >= m && demand[u - m] > mass_eps) {
        target = u - m;
        break;  // nearest sink with remaining demand
      }
      if (u < m) {
        for (int j = 0; j < k; ++j) {
          double w = std::max(0.0, c(u, j) + pot[u] - pot[m + j]);
          if (dist[u] + w < dist[m + j]) {
            dist[m + j] = dist[u] + w;
            parent[m + j] = u;
          }
        }
      } else {
        int j = u - m;
        for (int i = 0; i < m; ++i)
          if (f(i, j) > 0.0) {
            double w = std::max(0.0, -(c(i, j) + pot[i] - pot[m + j]));
            if (dist[u] + w < dist[i]) {
              dist[i] = dist[u] + w;
              parent[i] = u;
            }
          }
      }
    }
    if (target < 0)
      throw internal_error("SolverNonconvergence: no augmenting path (infeasible?)");

    const double dt = dist[m + target];
    for (int x = 0; x < m + k; ++x) pot[x] += std::min(dist[x], dt);

    // bottleneck along the augmenting path
    double delta = demand[target];
    for (int x = m + target; parent[x] >= 0; x = parent[x]) {
      int q = parent[x];
      if (q >= m) delta = std::min(delta, f(x, q - m));  // backward arc sink->source
      if (parent[q] < 0 && q < m) delta = std::min(delta, supply[q]);
    }
    // apply
    int x = m + target;
    while (parent[x] >= 0) {
      int q = parent[x];
      if (q < m)
        f(q, x - m) += delta;  // forward arc source->sink
      else
        f(x, q - m) -= delta;  // backward arc
      x = q;
    }
    supply[x] -= delta;
    demand[target] -= delta;
    remaining -= delta;
  }

  out.alpha.resize(m);
  out.beta.resize(k);
  for (int i = 0; i < m; ++i) out.alpha[i] = -pot[i];
  for (int j = 0; j < k; ++j) out.beta[j] = pot[m + j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) out.objective += f(i, j) * c(i, j);
  return out;
}

}  // namespace detail

// The Wasserstein-p distance between finitely supported measures, computed
// by an exact transportation solve with edge cost ||x-y||_2^p. Optimality is
// certified by dual feasibility and complementary slackness; a failed
// certificate signals an internal bug, never bad input.
inline TransportSolution wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                     double p) {
  if (mu.dim() != nu.dim())
    throw validation_error("DimensionMismatch", "measures live in different dimensions");
  if (!(p >= 1.0)) throw validation_error("BadExponent", "p must be >= 1");
  const int m = mu.size(), k = nu.size(), dim = mu.dim();

  std::vector<double> cost(static_cast<size_t>(m) * k);
  double cmax = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) {
      double v = pow_from_sq(sq_dist(mu.point(i), nu.point(j), dim), p);
      cost[static_cast<size_t>(i) * k + j] = v;
      cmax = std::max(cmax, v);
    }

  auto ssp = detail::solve_transportation(m, k, cost, mu.weights(), nu.weights());

  // certificate: alpha_i + beta_j <= c_ij everywhere, equal on the support,
  // and strong duality within 1e-9 relative
  const double tol = 1e-9 * std::max(1.0, cmax);
  double dual_obj = 0.0;
  for (int i = 0; i < m; ++i) dual_obj += mu.weight(i) * ssp.alpha[i];
  for (int j = 0; j < k; ++j) dual_obj += nu.weight(j) * ssp.beta[j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) {
      double rc = cost[static_cast<size_t>(i) * k + j] - ssp.alpha[i] - ssp.beta[j];
      if (rc < -tol)
        throw internal_error("SolverNonconvergence: dual infeasibility");
      if (ssp.flow[static_cast<size_t>(i) * k + j] > 1e-12 && std::abs(rc) > tol)
        throw internal_error("SolverNonconvergence: complementary slackness violated");
    }
  if (std::abs(dual_obj - ssp.objective) > tol)
    throw internal_error("SolverNonconvergence: duality gap");

  TransportSolution sol;
  sol.objective = ssp.objective;
  sol.cost = std::pow(ssp.objective, 1.0 / p);
  sol.plan.mu_size = m;
  sol.plan.nu_size = k;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j)
      if (ssp.flow[static_cast<size_t>(i) * k + j] > 0.0)
        sol.plan.entries.push_back({i, j, ssp.flow[static_cast<size_t>(i) * k + j]});
  sol.mu_duals = std::move(ssp.alpha);
  sol.nu_duals = std::move(ssp.beta);
  return sol;
}

// W_p on the real line: the monotone (sorted) matching is optimal, so the
// distance reduces to quantile matching in linear time after sorting.
inline double wasserstein_line(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               double p) {
  if (mu.dim() != 1 || nu.dim() != 1)
    throw validation_error("DimensionMismatch", "wasserstein_line needs 1-d supports");
  if (!(p >= 1.0)) throw validation_error("BadExponent", "p must be >= 1");

  auto sorted = [](const DiscreteMeasure& m_) {
    std::vector<std::pair<double, double>> v(m_.size());
    for (int i = 0; i < m_.size(); ++i) v[i] = {m_.point(i)[0], m_.weight(i)};
    std::sort(v.begin(), v.end());
    return v;
  };
  auto a = sorted(mu), b = sorted(nu);

  double obj = 0.0;
  size_t i = 0, j = 0;
  double ra = a[0].second, rb = b[0].second;
  while (i < a.size() && j < b.size()) {
    double mass = std::min(ra, rb);
    double diff = a[i].first - b[j].first;
    obj += mass * pow_from_sq(diff * diff, p);
    ra -= mass;
    rb -= mass;
    if (ra == 0.0 && ++i < a.size()) ra = a[i].second;
    if (rb == 0.0 && ++j < b.size()) rb = b[j].second;
  }
  return std::pow(obj, 1.0 / p);
}

namespace detail {

// Dense label-setting shortest paths with edge weight ||u-v||_2^p, from a
// source point over an implicit complete graph on `count` nodes. The node
// set is never materialized as an edge list: memory stays O(count).
// nodes: flat coordinates, count x dim. Fills dist (and parents if given,
// with -1 meaning "reached directly from the source").
inline void power_shortest_paths(const double* nodes, int count, int dim,
                                 const double* source, double p,
                                 std::vector<double>& dist,
                                 std::vector<int>* parent = nullptr) {
  dist.assign(count, kInf);
  if (parent) parent->assign(count, -2);
  std::vector<char> done(count, 0);
  for (int v = 0; v < count; ++v) {
    dist[v] = pow_from_sq(sq_dist(source, nodes + static_cast<size_t>(v) * dim, dim), p);
    if (parent) (*parent)[v] = -1;
  }
  for (int round = 0; round < count; ++round) {
    int u = -1;
    double best = kInf;
    for (int v = 0; v < count; ++v)
      if (!done[v] && dist[v] < best) {
        best = dist[v];
        u = v;
      }
    if (u < 0) break;
    done[u] = 1;
    const double* pu = nodes + static_cast<size_t>(u) * dim;
    for (int v = 0; v < count; ++v) {
      if (done[v]) continue;
      double w = pow_from_sq(sq_dist(pu, nodes + static_cast<size_t>(v) * dim, dim), p);
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        if (parent) (*parent)[v] = u;
      }
    }
  }
}

}  // namespace detail

struct OneAtomSwapResult {
  double cost = 0.0;                       // W_p between the two uniform measures
  double path_power_cost = 0.0;            // minimal sum of ||step||^p along the relay
  std::vector<std::vector<double>> path;   // a = path.front(), b = path.back()
};

// W_p between uniform measures on S u {a} and S u {b}: the optimal coupling
// decomposes into a relay path from a to b through the shared atoms plus
// fixed points, so W_p^p = (1/N) * (shortest ||.||^p path from a to b).
// Weights ||u-v||^p are nonnegative but not a metric for p > 1; label-setting
// search needs only nonnegativity.
inline OneAtomSwapResult wasserstein_one_atom_swap(
    const std::vector<std::vector<double>>& shared, const std::vector<double>& a,
    const std::vector<double>& b, double p, long long N) {
  const int dim = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != dim)
    throw validation_error("DimensionMismatch", "endpoints differ in dimension");
  if (N != static_cast<long long>(shared.size()) + 1)
    throw validation_error("BadN", "N must equal |shared| + 1");
  std::vector<double> flat;
  flat.reserve(shared.size() * dim);
  for (const auto& s : shared) {
    if (static_cast<int>(s.size()) != dim)
      throw validation_error("DimensionMismatch", "shared point dimension mismatch");
    bool eq_a = true, eq_b = true;
    for (int c = 0; c < dim; ++c) {
      eq_a = eq_a && detail::coord_bits(s[c]) == detail::coord_bits(a[c]);
      eq_b = eq_b && detail::coord_bits(s[c]) == detail::coord_bits(b[c]);
    }
    if (eq_a || eq_b)
      throw validation_error("EndpointInShared", "a and b must not be shared atoms");
    flat.insert(flat.end(), s.begin(), s.end());
  }

  const int count = static_cast<int>(shared.size());
  std::vector<double> dist;
  std::vector<int> parent;
  detail::power_shortest_paths(flat.data(), count, dim, a.data(), p, dist, &parent);

  OneAtomSwapResult out;
  double best = pow_from_sq(sq_dist(a.data(), b.data(), dim), p);
  int via = -1;
  for (int v = 0; v < count; ++v) {
    double w = dist[v] + pow_from_sq(sq_dist(flat.data() + static_cast<size_t>(v) * dim,
                                             b.data(), dim), p);
    if (w < best) {
      best = w;
      via = v;
    }
  }
  out.path_power_cost = best;
  out.cost = std::pow(best / static_cast<double>(N), 1.0 / p);
  std::vector<int> rev;
  for (int v = via; v >= 0; v = parent[v]) rev.push_back(v);
  out.path.push_back(a);
  for (auto it = rev.rbegin(); it != rev.rend(); ++it)
    out.path.push_back(shared[*it]);
  out.path.push_back(b);
  return out;
}

}  // namespace wsnow
