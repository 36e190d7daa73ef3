#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wsnow/error.hpp"
#include "wsnow/metric_space.hpp"

namespace wsnow {

// A simple undirected graph. Regularity is a property, not a requirement;
// the spectral operations check it.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;
  std::vector<std::pair<int, int>> edges;  // u < v
};

inline Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw validation_error("TooSmall", "graph needs at least one vertex");
  Graph g;
  g.n = n;
  g.adj.resize(n);
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw validation_error("ShapeMismatch", "edge endpoint out of range");
    if (u == v) throw validation_error("SelfLoop", "self-loops are not allowed");
    auto e = std::minmax(u, v);
    if (!seen.insert({e.first, e.second}).second)
      throw validation_error("MultiEdge", "duplicate edge");
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
    g.edges.emplace_back(e.first, e.second);
  }
  for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

inline bool is_connected(const Graph& g) {
  std::vector<char> seen(g.n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        q.push(v);
      }
  }
  return visited == g.n;
}

inline int regular_degree(const Graph& g) {
  const int d = static_cast<int>(g.adj[0].size());
  for (const auto& nbrs : g.adj)
    if (static_cast<int>(nbrs.size()) != d)
      throw validation_error("NotRegular", "vertex degrees differ");
  return d;
}

inline Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return make_graph(n, e);
}

inline Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

// k-fold subdivision: every edge becomes a k-edge path with fresh interior
// vertices. Original vertices keep their ids; interior vertex t of edge e is
// n + e*(k-1) + t, a deterministic naming.
inline Graph subdivide(const Graph& g, int k) {
  if (k < 1) throw validation_error("KZero", "k must be >= 1");
  if (k == 1) return g;
  std::vector<std::pair<int, int>> e;
  int next = g.n;
  for (auto [u, v] : g.edges) {
    int prev = u;
    for (int t = 0; t < k - 1; ++t) {
      e.emplace_back(prev, next);
      prev = next++;
    }
    e.emplace_back(prev, v);
  }
  return make_graph(g.n + (k - 1) * static_cast<int>(g.edges.size()), e);
}

// BFS from every vertex; integer distances stored as reals.
inline FiniteMetricSpace shortest_path_metric(const Graph& g) {
  if (!is_connected(g)) throw validation_error("Disconnected", "graph is not connected");
  std::vector<double> d(static_cast<size_t>(g.n) * g.n, 0.0);
  std::vector<int> dist(g.n);
  for (int s = 0; s < g.n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : g.adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    for (int t = 0; t < g.n; ++t) d[static_cast<size_t>(s) * g.n + t] = dist[t];
  }
  return FiniteMetricSpace(unchecked, g.n, std::move(d));
}

// Second largest eigenvalue of the normalized adjacency matrix A_G of a
// connected regular graph. Dense symmetric solve up to `dense_cap` vertices,
// shift-deflated power iteration above it. The eigenpair residual is checked
// to 1e-9.
inline double lambda2(const Graph& g, int dense_cap = 1500) {
  if (!is_connected(g)) throw validation_error("Disconnected", "graph is not connected");
  const int d = regular_degree(g);
  if (d == 0) throw validation_error("NotRegular", "degree-zero graph");
  const int n = g.n;
  if (n < 2) throw validation_error("TooSmall", "need at least two vertices");

  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int u = 0; u < n; ++u)
      for (int v : g.adj[u]) y[u] += x[v];
    return Eigen::VectorXd(y / static_cast<double>(d));
  };

  double lam;
  Eigen::VectorXd vec;
  if (n <= dense_cap) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u)
      for (int v : g.adj[u]) A(u, v) = 1.0 / static_cast<double>(d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    lam = es.eigenvalues()(n - 2);  // eigenvalues ascending; top is 1
    vec = es.eigenvectors().col(n - 2);
  } else {
    // power iteration on (A + I)/2 restricted to the complement of the
    // constant eigenvector; the shift keeps the spectrum nonnegative so the
    // dominant direction there is lambda_2
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = gauss(rng);
    x.array() -= x.mean();
    x.normalize();
    double prev = 2.0;
    for (int it = 0; it < 200000; ++it) {
      Eigen::VectorXd y = 0.5 * (apply(x) + x);
      y.array() -= y.mean();
      double norm = y.norm();
      if (norm == 0.0) break;
      y /= norm;
      double cur = y.dot(0.5 * (apply(y) + y));
      x = y;
      if (std::abs(cur - prev) < 1e-14) break;
      prev = cur;
    }
    vec = x;
    lam = x.dot(apply(x));
  }
  Eigen::VectorXd res = apply(vec) - lam * vec;
  if (res.norm() > 1e-9 * vec.norm())
    throw internal_error("lambda2 eigenpair residual too large");
  return lam;
}

// Both sides of the spectral Poincare inequality for g: V -> R^d:
// lhs = (1/n^2) sum_{x,y} ||g(x)-g(y)||^2,
// rhs = 1/(1-lambda_2) * (2/|E|) * sum_{edges} ||g(x)-g(y)||^2.
inline std::pair<double, double> poincare_defect(const Graph& g,
                                                 const std::vector<std::vector<double>>& f) {
  if (f.size() != static_cast<size_t>(g.n))
    throw validation_error("ShapeMismatch", "need one vector per vertex");
  const size_t dim = f[0].size();
  for (const auto& v : f)
    if (v.size() != dim)
      throw validation_error("DimensionMismatch", "vertex images differ in dimension");
  auto sq = [&](int a, int b) {
    double s = 0.0;
    for (size_t c = 0; c < dim; ++c) {
      double t = f[a][c] - f[b][c];
      s += t * t;
    }
    return s;
  };
  double lhs = 0.0;
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y) lhs += sq(x, y);
  lhs /= static_cast<double>(g.n) * g.n;
  double edge_sum = 0.0;
  for (auto [u, v] : g.edges) edge_sum += sq(u, v);
  const double lam = lambda2(g);
  const double rhs = 2.0 * edge_sum / (static_cast<double>(g.edges.size()) * (1.0 - lam));
  return {lhs, rhs};
}

struct SubdivisionBound {
  double term_a = 0.0;        // sqrt(k log n / log d)
  double term_b = 0.0;        // sqrt(1 - lambda_2) log n / log d
  double rms_distance = 0.0;  // sqrt((1/n^2) sum d_G(x,y)^2), for the counting bound
};

// The two constant-free branches of the subdivision distortion floor, plus
// the exact mean-square distance the counting argument compares against.
inline SubdivisionBound subdivision_lower_bound(const Graph& g, int k) {
  if (k < 1) throw validation_error("KZero", "k must be >= 1");
  const int d = regular_degree(g);
  if (d < 3) throw validation_error("DegreeLTTwo", "need degree >= 3");
  auto metric = shortest_path_metric(g);
  const double n = static_cast<double>(g.n);
  double sum_sq = 0.0;
  for (double v : metric.flat()) sum_sq += v * v;
  SubdivisionBound out;
  out.rms_distance = std::sqrt(sum_sq / (n * n));
  const double ratio = std::log(n) / std::log(static_cast<double>(d));
  out.term_a = std::sqrt(static_cast<double>(k) * ratio);
  out.term_b = std::sqrt(1.0 - lambda2(g)) * ratio;
  return out;
}

// Random d-regular graph from the pairing model, rejecting pairings with
// self-loops or multi-edges, then rejecting disconnected outcomes.
inline Graph random_regular_graph(int n, int d, std::mt19937_64& rng,
                                  int max_attempts = 20000) {
  if (n * d % 2 != 0)
    throw validation_error("ShapeMismatch", "n*d must be even");
  if (d >= n) throw validation_error("ShapeMismatch", "need d < n");
  std::vector<int> stubs(static_cast<size_t>(n) * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) stubs[static_cast<size_t>(i) * d + j] = i;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> edges;
    bool ok = true;
    for (size_t s = 0; s < stubs.size() && ok; s += 2) {
      int u = stubs[s], v = stubs[s + 1];
      if (u == v) ok = false;
      else {
        auto e = std::minmax(u, v);
        ok = edges.insert({e.first, e.second}).second;
      }
    }
    if (!ok) continue;
    Graph g = make_graph(n, {edges.begin(), edges.end()});
    if (is_connected(g)) return g;
  }
  throw internal_error("pairing model failed to produce a simple connected graph");
}

}  // namespace wsnow
