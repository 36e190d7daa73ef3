#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "wsnow/error.hpp"
#include "wsnow/measure.hpp"
#include "wsnow/transport.hpp"

namespace wsnow {

// A stationary reversible Markov chain: row-stochastic P with stationary
// distribution pi satisfying detailed balance pi_i P_ij = pi_j P_ji.
struct ReversibleChain {
  int n = 0;
  std::vector<double> P;   // n x n row-major
  std::vector<double> pi;  // length n
  double at(int i, int j) const { return P[static_cast<size_t>(i) * n + j]; }
};

inline ReversibleChain validate_chain(const std::vector<std::vector<double>>& P,
                                      const std::vector<double>& pi) {
  const int n = static_cast<int>(P.size());
  if (n == 0 || pi.size() != static_cast<size_t>(n))
    throw validation_error("ShapeMismatch", "P must be square with matching pi");
  for (const auto& row : P)
    if (row.size() != static_cast<size_t>(n))
      throw validation_error("ShapeMismatch", "P is not square");
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : P[i]) {
      if (!(v >= 0.0)) throw validation_error("NotStochastic", "negative entry", i);
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12)
      throw validation_error("NotStochastic", "row " + std::to_string(i) +
                                 " sums to " + std::to_string(s), i);
  }
  double spi = 0.0;
  for (double v : pi) {
    if (!(v >= 0.0)) throw validation_error("NotStationary", "negative pi entry");
    spi += v;
  }
  if (std::abs(spi - 1.0) > 1e-12)
    throw validation_error("NotStationary", "pi does not sum to 1");
  for (int j = 0; j < n; ++j) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += pi[i] * P[i][j];
    if (std::abs(v - pi[j]) > 1e-10)
      throw validation_error("NotStationary", "pi P != pi at state " + std::to_string(j),
                             j);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(pi[i] * P[i][j] - pi[j] * P[j][i]) > 1e-10)
        throw validation_error("NotReversible", "pi_i P_ij != pi_j P_ji at (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")",
                               i, j);
  ReversibleChain c;
  c.n = n;
  c.pi = pi;
  c.P.reserve(static_cast<size_t>(n) * n);
  for (const auto& row : P) c.P.insert(c.P.end(), row.begin(), row.end());
  return c;
}

namespace detail {

inline std::vector<double> mat_mul(const std::vector<double>& A,
                                   const std::vector<double>& B, int n) {
  std::vector<double> C(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double a = A[static_cast<size_t>(i) * n + k];
      if (a == 0.0) continue;
      for (int j = 0; j < n; ++j)
        C[static_cast<size_t>(i) * n + j] += a * B[static_cast<size_t>(k) * n + j];
    }
  return C;
}

inline std::vector<double> mat_pow(std::vector<double> A, int n, long long m) {
  std::vector<double> R(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) R[static_cast<size_t>(i) * n + i] = 1.0;
  while (m > 0) {
    if (m & 1) R = mat_mul(R, A, n);
    A = mat_mul(A, A, n);
    m >>= 1;
  }
  return R;
}

}  // namespace detail

// E[d(Z_m, Z_0)^p] / (m * E[d(Z_1, Z_0)^p]), evaluated exactly through the
// stationary distribution and the m-step transition matrix. One witness term
// of the Markov type p constant at time m.
inline double markov_ratio(const ReversibleChain& chain,
                           const std::vector<double>& dist, double p, long long m) {
  const int n = chain.n;
  if (dist.size() != static_cast<size_t>(n) * n)
    throw validation_error("ShapeMismatch", "distance matrix must be n x n");
  if (m < 1) throw validation_error("BadTime", "m must be >= 1");
  auto expect = [&](const std::vector<double>& Pt) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = dist[static_cast<size_t>(i) * n + j];
        s += chain.pi[i] * Pt[static_cast<size_t>(i) * n + j] *
             pow_from_sq(d * d, p);
      }
    return s;
  };
  const double den = expect(chain.P);
  if (den <= 0.0)
    throw validation_error("DegenerateChain", "one-step expectation is zero");
  const double num = expect(detail::mat_pow(chain.P, n, m));
  return num / (static_cast<double>(m) * den);
}

// Both sides of the reversibility identity E[psi(Z_t, Z_t')] = E[psi(Z_2t, Z_0)]
// for a symmetric psi, where Z' re-runs the chain from Z_0 independently.
// lhs = sum_{i,j,k} pi_i P^t_ij P^t_ik psi(j,k); rhs = sum_{j,k} pi_j P^{2t}_jk psi(j,k).
inline std::pair<double, double> two_point_identity_check(
    const ReversibleChain& chain, const std::vector<double>& psi, long long t) {
  const int n = chain.n;
  if (psi.size() != static_cast<size_t>(n) * n)
    throw validation_error("ShapeMismatch", "psi must be n x n");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (psi[static_cast<size_t>(i) * n + j] != psi[static_cast<size_t>(j) * n + i])
        throw validation_error("AsymmetricPsi", "psi must be symmetric", i, j);
  if (t < 1) throw validation_error("BadTime", "t must be >= 1");

  auto Pt = detail::mat_pow(chain.P, n, t);
  auto P2t = detail::mat_mul(Pt, Pt, n);
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double w = chain.pi[i] * Pt[static_cast<size_t>(i) * n + j];
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k)
        lhs += w * Pt[static_cast<size_t>(i) * n + k] * psi[static_cast<size_t>(j) * n + k];
    }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      rhs += chain.pi[j] * P2t[static_cast<size_t>(j) * n + k] *
             psi[static_cast<size_t>(j) * n + k];
  return {lhs, rhs};
}

// Exact distribution of the Hamming distance from the start after m steps of
// the standard walk on {0,1}^dim, via the induced birth-death chain on
// distance values (flip a uniformly random coordinate each step).
inline std::vector<double> hypercube_displacement(int dim, long long m) {
  if (dim < 1) throw validation_error("SizeLimit", "dim must be >= 1");
  if (m < 0) throw validation_error("BadTime", "m must be >= 0");
  std::vector<double> q(dim + 1, 0.0), next(dim + 1);
  q[0] = 1.0;
  const double inv = 1.0 / static_cast<double>(dim);
  for (long long step = 0; step < m; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int h = 0; h <= dim; ++h) {
      if (q[h] == 0.0) continue;
      if (h > 0) next[h - 1] += q[h] * h * inv;
      if (h < dim) next[h + 1] += q[h] * (dim - h) * inv;
    }
    q.swap(next);
  }
  return q;
}

// E[H^q] for a distribution over distance values and real q > 0.
inline double displacement_moment(const std::vector<double>& distribution, double q) {
  double s = 0.0;
  for (size_t h = 1; h < distribution.size(); ++h)
    s += distribution[h] * std::pow(static_cast<double>(h), q);
  return s;
}

// Constant-explicit distortion floor for embedding the alpha-snowflake of
// the 4m-dimensional hypercube into a space whose Markov type p constant at
// time m is at most K_target m^{theta(p-1)/p}:
//   D >= (E[H_m^{alpha p}] / (K_target^p m^{1+theta(p-1)}))^{1/p},
// with the exact displacement distribution in place of the universal
// constant of the asymptotic statement.
inline double snowflake_lower_bound(double K_target, double p, double theta,
                                    long long m, double alpha) {
  if (!(K_target > 0.0)) throw validation_error("BadK", "K_target must be > 0");
  if (m < 1) throw validation_error("BadTime", "m must be >= 1");
  const double alpha_lo = (1.0 + theta * (p - 1.0)) / p;
  if (!(alpha > alpha_lo && alpha <= 1.0))
    throw validation_error("AlphaOutOfRange",
                           "alpha must lie in ((1+theta(p-1))/p, 1]");
  const int dim = static_cast<int>(4 * m);
  const double moment = displacement_moment(hypercube_displacement(dim, m), alpha * p);
  const double denom =
      std::pow(K_target, p) * std::pow(static_cast<double>(m), 1.0 + theta * (p - 1.0));
  return std::pow(moment / denom, 1.0 / p);
}

// Both sides of the curvature-type inequality transferred to Wasserstein
// space: lhs = sum_{i,j} q_i q_j W_p(mu_i, mu_j)^p,
// rhs = 2^{theta p} sum_i q_i W_p(mu_i, mu)^p, all via the exact solver.
inline std::pair<double, double> sturm_transfer_check(
    const std::vector<DiscreteMeasure>& measures, const std::vector<double>& q,
    const DiscreteMeasure& mu, double p, double theta) {
  if (measures.size() != q.size())
    throw validation_error("ShapeMismatch", "one weight per measure required");
  double qs = 0.0;
  for (double v : q) {
    if (!(v >= 0.0)) throw validation_error("NegativeWeight", "weights must be >= 0");
    qs += v;
  }
  if (std::abs(qs - 1.0) > 1e-12)
    throw validation_error("WeightSum", "weights must sum to 1");
  for (const auto& m_ : measures)
    if (m_.dim() != mu.dim())
      throw validation_error("DimensionMismatch", "measures must share a dimension");

  const int n = static_cast<int>(measures.size());
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double w = wasserstein(measures[i], measures[j], p).objective;
      lhs += 2.0 * q[i] * q[j] * w;
    }
    rhs += q[i] * wasserstein(measures[i], mu, p).objective;
  }
  rhs *= std::pow(2.0, theta * p);
  return {lhs, rhs};
}

// One-sided Lang-Schroeder-Sturm check with the infimum restricted to a
// candidate set: (min over candidates x of 2 E[d(Z,x)^2]) - E[d(Z,Z')^2].
// Nonnegative = necessary-condition pass only; the true infimum ranges over
// the whole space.
inline double lss_defect(const std::vector<double>& dist, int n,
                         const std::vector<double>& weights,
                         const std::vector<int>& candidates) {
  if (dist.size() != static_cast<size_t>(n) * n || weights.size() != static_cast<size_t>(n))
    throw validation_error("ShapeMismatch", "dist must be n x n with n weights");
  if (candidates.empty())
    throw validation_error("EmptyCandidates", "need at least one candidate");
  double pair_term = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = dist[static_cast<size_t>(i) * n + j];
      pair_term += weights[i] * weights[j] * d * d;
    }
  double best = std::numeric_limits<double>::infinity();
  for (int c : candidates) {
    if (c < 0 || c >= n)
      throw validation_error("ShapeMismatch", "candidate index out of range");
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = dist[static_cast<size_t>(i) * n + c];
      s += weights[i] * d * d;
    }
    best = std::min(best, 2.0 * s);
  }
  return best - pair_term;
}

// theta_p = max(1/p, 1 - 1/p): the exponent with which the real line
// satisfies the two-point moment inequality.
inline double theta_p(double p) { return std::max(1.0 / p, 1.0 - 1.0 / p); }

// Both sides of E|Z - Z'|^p <= 2^{theta_p p} E|Z - a|^p for a finitely
// supported real distribution and a shift a.
inline std::pair<double, double> shift_moment_check(const std::vector<double>& values,
                                                    const std::vector<double>& weights,
                                                    double p, double a) {
  if (values.size() != weights.size())
    throw validation_error("ShapeMismatch", "one weight per value required");
  double lhs = 0.0, rhs = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    for (size_t j = 0; j < values.size(); ++j)
      lhs += weights[i] * weights[j] * std::pow(std::abs(values[i] - values[j]), p);
    rhs += weights[i] * std::pow(std::abs(values[i] - a), p);
  }
  rhs *= std::pow(2.0, theta_p(p) * p);
  return {lhs, rhs};
}

}  // namespace wsnow
