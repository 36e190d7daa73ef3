#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "wsnow/error.hpp"

namespace wsnow {

// An (A,B)-quadratic metric inequality: sum a_ij d(x_i,x_j)^2 <= sum b_ij
// d(x_i,x_j)^2, coefficients nonnegative. `provenance` names the recipe that
// generated it.
struct QuadraticInequality {
  int n = 0;
  std::vector<double> A, B;  // n x n row-major
  std::string provenance;

  double a(int i, int j) const { return A[static_cast<size_t>(i) * n + j]; }
  double b(int i, int j) const { return B[static_cast<size_t>(i) * n + j]; }
};

struct DefectReport {
  double lhs = 0.0, rhs = 0.0;
  double defect = 0.0;  // rhs - lhs; positive = satisfied
  double min_D = 1.0;   // smallest D >= 1 with lhs <= D^2 rhs
};

namespace detail {
inline void check_coeffs(const QuadraticInequality& q) {
  if (q.A.size() != static_cast<size_t>(q.n) * q.n || q.B.size() != q.A.size())
    throw validation_error("ShapeMismatch", "coefficient matrices must be n x n");
  for (double v : q.A)
    if (!(v >= 0.0)) throw validation_error("NegativeEntry", "A has a negative entry");
  for (double v : q.B)
    if (!(v >= 0.0)) throw validation_error("NegativeEntry", "B has a negative entry");
}
inline double min_D_from(double lhs, double rhs) {
  if (lhs <= rhs) return 1.0;
  if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(lhs / rhs);
}
}  // namespace detail

// Evaluates both sides on a distance configuration (any symmetric matrix
// with zero diagonal; it need not be a metric).
inline DefectReport evaluate_quadratic(const QuadraticInequality& q,
                                       const std::vector<double>& dist) {
  detail::check_coeffs(q);
  if (dist.size() != static_cast<size_t>(q.n) * q.n)
    throw validation_error("ShapeMismatch", "distance matrix must match n");
  DefectReport rep;
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) {
      double d2 = dist[static_cast<size_t>(i) * q.n + j];
      d2 *= d2;
      rep.lhs += q.a(i, j) * d2;
      rep.rhs += q.b(i, j) * d2;
    }
  rep.defect = rep.rhs - rep.lhs;
  rep.min_D = detail::min_D_from(rep.lhs, rep.rhs);
  return rep;
}

// The barycenter recipe: given row/column budgets matching p_i + q_j, the
// harmonic means a_ij b_ij / (a_ij + b_ij) bound the p (x) q average.
// 0/0 is taken as 0 (the limit of the harmonic mean).
inline QuadraticInequality harmonic_inequality(const std::vector<double>& p,
                                               const std::vector<double>& q,
                                               const std::vector<double>& A,
                                               const std::vector<double>& B) {
  const int n = static_cast<int>(p.size());
  if (q.size() != static_cast<size_t>(n) || A.size() != static_cast<size_t>(n) * n ||
      B.size() != static_cast<size_t>(n) * n)
    throw validation_error("ShapeMismatch", "need p,q of length n and n x n A,B");
  double sp = 0.0, sq = 0.0;
  for (double v : p) sp += v;
  for (double v : q) sq += v;
  if (std::abs(sp - 1.0) > 1e-12 || std::abs(sq - 1.0) > 1e-12)
    throw validation_error("WeightSum", "p and q must each sum to 1");
  for (double v : A)
    if (!(v >= 0.0)) throw validation_error("NegativeEntry", "A has a negative entry");
  for (double v : B)
    if (!(v >= 0.0)) throw validation_error("NegativeEntry", "B has a negative entry");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double row = 0.0, col = 0.0;
      for (int k = 0; k < n; ++k) {
        row += A[static_cast<size_t>(i) * n + k];
        col += B[static_cast<size_t>(k) * n + j];
      }
      if (std::abs(row + col - (p[i] + q[j])) > 1e-10)
        throw validation_error("ConstraintViolated",
                               "sum_k a_ik + sum_k b_kj != p_i + q_j at (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")",
                               i, j);
    }

  QuadraticInequality out;
  out.n = n;
  out.provenance = "harmonic";
  out.A.assign(static_cast<size_t>(n) * n, 0.0);
  out.B.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double a = A[static_cast<size_t>(i) * n + j], b = B[static_cast<size_t>(i) * n + j];
      out.A[static_cast<size_t>(i) * n + j] = (a + b > 0.0) ? a * b / (a + b) : 0.0;
      out.B[static_cast<size_t>(i) * n + j] = p[i] * q[j];
    }
  return out;
}

// Specialization of the recipe to a permutation: mass p_i p_{sigma(i)} /
// (p_i + p_{sigma(i)}) on the matched pairs against the full p (x) p average.
inline QuadraticInequality permutation_inequality(const std::vector<double>& p,
                                                  const std::vector<int>& sigma) {
  const int n = static_cast<int>(p.size());
  if (sigma.size() != static_cast<size_t>(n))
    throw validation_error("ShapeMismatch", "permutation length must match p");
  std::vector<char> seen(n, 0);
  for (int v : sigma) {
    if (v < 0 || v >= n || seen[v])
      throw validation_error("NotAPermutation", "sigma is not a permutation of 0..n-1");
    seen[v] = 1;
  }
  double sp = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw validation_error("NegativeEntry", "p has a negative entry");
    sp += v;
  }
  if (std::abs(sp - 1.0) > 1e-12)
    throw validation_error("WeightSum", "p must sum to 1");

  QuadraticInequality out;
  out.n = n;
  out.provenance = "permutation";
  out.A.assign(static_cast<size_t>(n) * n, 0.0);
  out.B.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double denom = p[i] + p[sigma[i]];
    if (denom > 0.0)
      out.A[static_cast<size_t>(i) * n + sigma[i]] += p[i] * p[sigma[i]] / denom;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.B[static_cast<size_t>(i) * n + j] = p[i] * p[j];
  return out;
}

// The three-degrees-of-freedom quadruple inequality: cycle terms
// p1p2 d12^2 + p2p3 d23^2 + p3p4 d34^2 + p4p1 d41^2 dominate
// p1p3(p2+p4)/(p1+p3) d13^2 + p2p4(p1+p3)/(p2+p4) d24^2.
inline QuadraticInequality quadruple_inequality(double p1, double p2, double p3,
                                                double p4) {
  if (!(p1 >= 0.0 && p2 >= 0.0 && p3 >= 0.0 && p4 >= 0.0))
    throw validation_error("NegativeEntry", "weights must be >= 0");
  if (!(p1 + p3 > 0.0 && p2 + p4 > 0.0))
    throw validation_error("DegenerateWeights", "need p1+p3 > 0 and p2+p4 > 0");
  QuadraticInequality out;
  out.n = 4;
  out.provenance = "quadruple(" + std::to_string(p1) + "," + std::to_string(p2) + "," +
                   std::to_string(p3) + "," + std::to_string(p4) + ")";
  out.A.assign(16, 0.0);
  out.B.assign(16, 0.0);
  // the inequality reads lhs(diagonals) <= rhs(cycle)
  out.A[0 * 4 + 2] = p1 * p3 * (p2 + p4) / (p1 + p3);
  out.A[1 * 4 + 3] = p2 * p4 * (p1 + p3) / (p2 + p4);
  out.B[0 * 4 + 1] = p1 * p2;
  out.B[1 * 4 + 2] = p2 * p3;
  out.B[2 * 4 + 3] = p3 * p4;
  out.B[3 * 4 + 0] = p4 * p1;
  return out;
}

// Sturm's weighted quadruple inequality: the p1+p3 = p2+p4 = 1 slice.
inline QuadraticInequality sturm_quadruple(double s, double t) {
  if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0))
    throw validation_error("DegenerateWeights", "s,t must lie in [0,1]");
  auto q = quadruple_inequality(s, t, 1.0 - s, 1.0 - t);
  q.provenance = "sturm(" + std::to_string(s) + "," + std::to_string(t) + ")";
  return q;
}

// Roundness 2 / the short-diagonal inequality: s = t = 1/2, cleared of the
// common factor (quadruple weights all 1).
inline QuadraticInequality roundness2() {
  auto q = quadruple_inequality(1.0, 1.0, 1.0, 1.0);
  q.provenance = "roundness2";
  return q;
}

struct PtolemyReport {
  double slack = 0.0;         // d12 d34 + d23 d41 - d13 d24
  double defect_lower = 0.0;  // quantitative floor under the slack
  double quadruple_gap = 0.0; // |quadruple defect - 2(slack - defect_lower)|
};

// Quantitative Ptolemy: slack >= defect_lower >= 0 in Hadamard geometry.
// The distance-dependent weights from the quadruple inequality reproduce the
// bound; the report records the algebraic cross-check residual.
inline PtolemyReport ptolemy_defect(const std::vector<double>& dist) {
  if (dist.size() != 16)
    throw validation_error("ShapeMismatch", "ptolemy_defect needs a 4 x 4 matrix");
  auto d = [&](int i, int j) { return dist[static_cast<size_t>(i) * 4 + j]; };
  const double d12 = d(0, 1), d23 = d(1, 2), d34 = d(2, 3), d41 = d(3, 0);
  const double d13 = d(0, 2), d24 = d(1, 3);
  for (double v : {d12, d23, d34, d41, d13, d24})
    if (!(v > 0.0))
      throw validation_error("ZeroDistance", "off-diagonal distances must be positive");

  PtolemyReport rep;
  rep.slack = d12 * d34 + d23 * d41 - d13 * d24;
  const double u = d12 * d23 + d34 * d41;
  const double v = d12 * d41 + d23 * d34;
  rep.defect_lower = (u * d13 - v * d24) * (u * d13 - v * d24) / (2.0 * u * v);

  // the corollary's weights, fed back through the general quadruple form
  const double p1 = d34 / d41 * (d23 + d41) / (d12 + d34);
  const double p2 = d41 / d12 * (d12 + d34) / (d23 + d41);
  const double p3 = d12 / d23 * (d23 + d41) / (d12 + d34);
  const double p4 = d23 / d34 * (d12 + d34) / (d23 + d41);
  auto rep_q = evaluate_quadratic(quadruple_inequality(p1, p2, p3, p4), dist);
  rep.quadruple_gap = std::abs(rep_q.defect - 2.0 * (rep.slack - rep.defect_lower));
  double scale = std::max({d12, d23, d34, d41, d13, d24});
  if (rep.quadruple_gap > 1e-9 * scale * scale)
    throw internal_error("ptolemy weights do not reproduce the quadruple bound");
  return rep;
}

// Reshetnyak's quadruple comparison: d12^2 + d23^2 + 2 d34 d41 - d13^2 - d24^2.
inline double reshetnyak_defect(const std::vector<double>& dist) {
  if (dist.size() != 16)
    throw validation_error("ShapeMismatch", "reshetnyak_defect needs a 4 x 4 matrix");
  auto d = [&](int i, int j) { return dist[static_cast<size_t>(i) * 4 + j]; };
  return d(0, 1) * d(0, 1) + d(1, 2) * d(1, 2) + 2.0 * d(2, 3) * d(3, 0) -
         d(0, 2) * d(0, 2) - d(1, 3) * d(1, 3);
}

// Both sides of the Enflo type 2 inequality on the dim-cube: diagonal sums
// against edge sums of squared distances. `dist` is a 2^dim x 2^dim matrix
// over vertex ranks (bit i of the rank encodes coordinate i).
inline std::pair<double, double> enflo_defect(int dim, const std::vector<double>& dist) {
  if (dim < 1 || dim > 20) throw validation_error("SizeLimit", "dim out of range");
  const size_t n = size_t{1} << dim;
  if (dist.size() != n * n)
    throw validation_error("MissingVertex", "need distances on all 2^dim vertices");
  double lhs = 0.0, rhs = 0.0;
  const size_t full = n - 1;
  for (size_t x = 0; x < n; ++x) {
    double dd = dist[x * n + (x ^ full)];
    lhs += dd * dd;
    for (int i = 0; i < dim; ++i) {
      double e = dist[x * n + (x ^ (size_t{1} << i))];
      rhs += e * e;
    }
  }
  return {lhs, rhs};
}

// Weighted sum of inequalities, re-split by sign so no pair contributes to
// both sides: net c_k (A_k - B_k) per cell, positive part -> A, negative -> B.
inline QuadraticInequality aggregate_inequality(
    const std::vector<std::pair<double, QuadraticInequality>>& terms) {
  if (terms.empty()) throw validation_error("EmptyInput", "nothing to aggregate");
  const int n = terms.front().second.n;
  QuadraticInequality out;
  out.n = n;
  out.provenance = "aggregate";
  std::vector<double> net(static_cast<size_t>(n) * n, 0.0);
  for (const auto& [c, q] : terms) {
    if (!(c > 0.0)) throw validation_error("NegativeEntry", "weights must be positive");
    if (q.n != n) throw validation_error("SizeMismatch", "inequality sizes differ");
    detail::check_coeffs(q);
    for (size_t idx = 0; idx < net.size(); ++idx) net[idx] += c * (q.A[idx] - q.B[idx]);
  }
  out.A.assign(net.size(), 0.0);
  out.B.assign(net.size(), 0.0);
  for (size_t idx = 0; idx < net.size(); ++idx)
    (net[idx] > 0.0 ? out.A[idx] : out.B[idx]) = std::abs(net[idx]);
  return out;
}

struct NoSquaresReport {
  double lhs = 0.0, rhs = 0.0;
  double defect = 0.0;      // rhs - lhs on first powers
  bool factor3_checked = false;
  bool factor3_ok = true;   // lhs <= 3 rhs + 1e-9, for harmonic-recipe instances
};

// Evaluates the inequality with first powers instead of squares. Valid
// quadratic inequalities for nonnegatively curved spaces trivialize to
// triangle-inequality consequences here; harmonic-recipe instances also obey
// the factor-3 bound in any square root of a metric space.
inline NoSquaresReport no_squares_defect(const QuadraticInequality& q,
                                         const std::vector<double>& dist) {
  detail::check_coeffs(q);
  if (dist.size() != static_cast<size_t>(q.n) * q.n)
    throw validation_error("ShapeMismatch", "distance matrix must match n");
  NoSquaresReport rep;
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) {
      double d = dist[static_cast<size_t>(i) * q.n + j];
      rep.lhs += q.a(i, j) * d;
      rep.rhs += q.b(i, j) * d;
    }
  rep.defect = rep.rhs - rep.lhs;
  if (q.provenance.rfind("harmonic", 0) == 0 || q.provenance.rfind("permutation", 0) == 0) {
    rep.factor3_checked = true;
    rep.factor3_ok = rep.lhs <= 3.0 * rep.rhs + 1e-9;
  }
  return rep;
}

// Midpoint comparison defects, with w a designated metric midpoint of x,y:
// nonneg curvature needs dxy^2 + 4 dzw^2 - 2 dxz^2 - 2 dyz^2 >= 0, Hadamard
// needs its negation >= 0. Hilbert space gives both exactly 0.
inline std::pair<double, double> alexandrov_midpoint_defects(double dxy, double dzw,
                                                             double dxz, double dyz) {
  const double nonneg = dxy * dxy + 4.0 * dzw * dzw - 2.0 * dxz * dxz - 2.0 * dyz * dyz;
  return {nonneg, -nonneg};
}

// d(x,w)^2 + d(y,w)^2 + d(z,w)^2 - (d(x,y)^2 + d(x,z)^2 + d(y,z)^2)/3 for the
// quadruple (x,y,z,w) = rows 0..3.
inline double lebedeva_petrunin_defect(const std::vector<double>& dist) {
  if (dist.size() != 16)
    throw validation_error("ShapeMismatch", "lebedeva_petrunin_defect needs 4 x 4");
  auto d = [&](int i, int j) { return dist[static_cast<size_t>(i) * 4 + j]; };
  return d(0, 3) * d(0, 3) + d(1, 3) * d(1, 3) + d(2, 3) * d(2, 3) -
         (d(0, 1) * d(0, 1) + d(0, 2) * d(0, 2) + d(1, 2) * d(1, 2)) / 3.0;
}

}  // namespace wsnow
