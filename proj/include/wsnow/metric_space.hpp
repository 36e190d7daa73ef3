#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "wsnow/error.hpp"

namespace wsnow {

struct unchecked_t {};
inline constexpr unchecked_t unchecked{};

// A finite metric space: n points and a symmetric n x n distance matrix.
// Instances are immutable after construction. Use validate_metric() for
// untrusted matrices; generators that are correct by construction use the
// unchecked constructor.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(unchecked_t, int n, std::vector<double> d,
                    std::vector<std::string> labels = {})
      : n_(n), d_(std::move(d)), labels_(std::move(labels)) {
    if (n_ < 1 || d_.size() != static_cast<size_t>(n_) * n_)
      throw validation_error("ShapeMismatch", "distance matrix is not n x n");
  }

  int size() const { return n_; }
  double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<double>& flat() const { return d_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double diameter() const { return *std::max_element(d_.begin(), d_.end()); }

  // Smallest positive distance. Requires n >= 2.
  double min_distance() const {
    if (n_ < 2) throw validation_error("SinglePoint", "min_distance needs n >= 2");
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) m = std::min(m, (*this)(i, j));
    return m;
  }

 private:
  int n_;
  std::vector<double> d_;  // row-major
  std::vector<std::string> labels_;
};

namespace detail {
inline void check_square(const std::vector<std::vector<double>>& raw) {
  if (raw.empty()) throw validation_error("EmptyMatrix", "empty distance matrix");
  for (const auto& row : raw)
    if (row.size() != raw.size())
      throw validation_error("ShapeMismatch", "distance matrix is not square");
  for (const auto& row : raw)
    for (double v : row)
      if (!std::isfinite(v))
        throw validation_error("NonFinite", "distance matrix has a non-finite entry");
}
}  // namespace detail

// Validates the metric axioms and returns the space, or throws a
// validation_error naming the first violated axiom with indices.
// tri_tol is the triangle-inequality slack; pass 0 for an exact check.
inline FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& raw,
                                         double tri_tol,
                                         std::vector<std::string> labels = {}) {
  detail::check_square(raw);
  const int n = static_cast<int>(raw.size());
  for (int i = 0; i < n; ++i)
    if (raw[i][i] != 0.0)
      throw validation_error("NonzeroDiagonal", "d[" + std::to_string(i) + "][" +
                                 std::to_string(i) + "] != 0", i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (raw[i][j] != raw[j][i])
        throw validation_error("Asymmetric", "d[" + std::to_string(i) + "][" +
                                   std::to_string(j) + "] != d[" + std::to_string(j) +
                                   "][" + std::to_string(i) + "]", i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(raw[i][j] > 0.0))
        throw validation_error("NegativeOrZeroOffDiagonal", "d[" + std::to_string(i) +
                                   "][" + std::to_string(j) + "] <= 0", i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (raw[i][j] > raw[i][k] + raw[k][j] + tri_tol)
          throw validation_error("TriangleViolation", "d[" + std::to_string(i) + "][" +
                                     std::to_string(j) + "] > d[" + std::to_string(i) +
                                     "][" + std::to_string(k) + "] + d[" +
                                     std::to_string(k) + "][" + std::to_string(j) + "]",
                                 i, j, k);
  std::vector<double> flat(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) flat[static_cast<size_t>(i) * n + j] = raw[i][j];
  return FiniteMetricSpace(unchecked, n, std::move(flat), std::move(labels));
}

// Default tolerance absorbs floating rounding in user-supplied matrices:
// 1e-9 * diam.
inline FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& raw,
                                         std::vector<std::string> labels = {}) {
  detail::check_square(raw);
  double diam = 0.0;
  for (const auto& row : raw)
    for (double v : row) diam = std::max(diam, v);
  return validate_metric(raw, 1e-9 * diam, std::move(labels));
}

struct SymmetrizeResult {
  std::vector<std::vector<double>> d;
  double max_deviation;  // max |d_ij - d_ji| / 2 absorbed by averaging
};

// Optional pre-symmetrization pass: averages (d + d^T)/2 and reports the
// largest deviation so data errors are visible rather than silently fixed.
inline SymmetrizeResult symmetrize(const std::vector<std::vector<double>>& raw) {
  detail::check_square(raw);
  const int n = static_cast<int>(raw.size());
  SymmetrizeResult out{raw, 0.0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.d[i][j] = 0.5 * (raw[i][j] + raw[j][i]);
      out.max_deviation = std::max(out.max_deviation, std::abs(raw[i][j] - raw[j][i]));
    }
  return out;
}

// The alpha-snowflake (X, d^alpha), alpha in (0,1]. t -> t^alpha is
// subadditive, so the result is again a metric.
inline FiniteMetricSpace snowflake(const FiniteMetricSpace& X, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw validation_error("AlphaOutOfRange", "snowflake exponent must be in (0,1]");
  std::vector<double> d(X.flat().size());
  for (size_t idx = 0; idx < d.size(); ++idx)
    d[idx] = X.flat()[idx] == 0.0 ? 0.0 : std::pow(X.flat()[idx], alpha);
  return FiniteMetricSpace(unchecked, X.size(), std::move(d), X.labels());
}

// diam(X) divided by the smallest positive distance.
inline double aspect_ratio(const FiniteMetricSpace& X) {
  return X.diameter() / X.min_distance();
}

// Distortion bound sqrt(aspect ratio) for embedding X itself (p = 2) into
// Wasserstein-2 space over R^3.
inline double aspect_distortion_bound(const FiniteMetricSpace& X) {
  return std::sqrt(aspect_ratio(X));
}

// The k-dimensional discrete hypercube {0,1}^k with Hamming distance,
// vertices enumerated in binary order.
inline FiniteMetricSpace hamming_cube(int k, int max_k = 12) {
  if (k < 1) throw validation_error("TooLarge", "hamming_cube needs k >= 1");
  if (k > max_k)
    throw validation_error("TooLarge", "hamming_cube(" + std::to_string(k) +
                               ") exceeds the size limit");
  const int n = 1 << k;
  std::vector<double> d(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d[static_cast<size_t>(i) * n + j] =
          static_cast<double>(__builtin_popcount(static_cast<unsigned>(i ^ j)));
  return FiniteMetricSpace(unchecked, n, std::move(d));
}

// The path P_n = {1,...,n} with the metric inherited from R.
inline FiniteMetricSpace path_metric(int n) {
  if (n < 2) throw validation_error("TooSmall", "path_metric needs n >= 2");
  std::vector<double> d(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d[static_cast<size_t>(i) * n + j] = std::abs(i - j);
  return FiniteMetricSpace(unchecked, n, std::move(d));
}

}  // namespace wsnow
