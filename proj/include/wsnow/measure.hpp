#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include "wsnow/error.hpp"

namespace wsnow {

namespace detail {
// Canonical bit pattern of a coordinate: -0.0 folds into +0.0 so bitwise
// point identity matches value identity.
inline std::uint64_t coord_bits(double x) {
  if (x == 0.0) x = 0.0;
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}
}  // namespace detail

// A finitely supported probability measure on R^dim. Construction merges
// bitwise-equal support points (weights summed) and checks that weights are
// nonnegative and sum to 1 within 1e-12.
class DiscreteMeasure {
 public:
  DiscreteMeasure(int dim, std::vector<double> points, std::vector<double> weights)
      : dim_(dim) {
    if (dim_ < 1) throw validation_error("BadDimension", "dimension must be >= 1");
    if (points.size() != weights.size() * static_cast<size_t>(dim_))
      throw validation_error("ShapeMismatch", "points/weights size mismatch");
    if (weights.empty())
      throw validation_error("EmptyInput", "measure needs at least one atom");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw validation_error("NegativeWeight", "weights must be >= 0");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw validation_error("WeightSum", "weights sum to " + std::to_string(total) +
                                 ", expected 1");
    for (double c : points)
      if (!std::isfinite(c))
        throw validation_error("NonFinite", "support point has a non-finite coordinate");

    // merge duplicates: sort by coordinate bit patterns, then fold runs
    const size_t n = weights.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    auto key_less = [&](size_t a, size_t b) {
      for (int c = 0; c < dim_; ++c) {
        auto ka = detail::coord_bits(points[a * dim_ + c]);
        auto kb = detail::coord_bits(points[b * dim_ + c]);
        if (ka != kb) return ka < kb;
      }
      return false;
    };
    auto key_eq = [&](size_t a, size_t b) {
      for (int c = 0; c < dim_; ++c)
        if (detail::coord_bits(points[a * dim_ + c]) !=
            detail::coord_bits(points[b * dim_ + c]))
          return false;
      return true;
    };
    std::sort(order.begin(), order.end(), key_less);
    for (size_t s = 0; s < n;) {
      size_t e = s + 1;
      double w = weights[order[s]];
      while (e < n && key_eq(order[s], order[e])) w += weights[order[e++]];
      if (w > 0.0) {
        for (int c = 0; c < dim_; ++c) pts_.push_back(points[order[s] * dim_ + c]);
        w_.push_back(w);
      }
      s = e;
    }
    if (w_.empty()) {  // all-zero weights cannot happen (sum is 1), keep guard
      throw validation_error("EmptyInput", "measure has no positive-mass atom");
    }
  }

  static DiscreteMeasure dirac(std::vector<double> x) {
    int d = static_cast<int>(x.size());
    return DiscreteMeasure(d, std::move(x), {1.0});
  }

  static DiscreteMeasure uniform(int dim, std::vector<double> points) {
    size_t n = points.size() / static_cast<size_t>(dim);
    return DiscreteMeasure(dim, std::move(points),
                           std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(w_.size()); }
  const double* point(int i) const { return &pts_[static_cast<size_t>(i) * dim_]; }
  double weight(int i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& points_flat() const { return pts_; }

  bool same_support(const DiscreteMeasure& other, double weight_tol = 1e-12) const {
    if (dim_ != other.dim_ || size() != other.size()) return false;
    // both supports are sorted by coordinate bits after merging
    for (int i = 0; i < size(); ++i) {
      for (int c = 0; c < dim_; ++c)
        if (detail::coord_bits(point(i)[c]) != detail::coord_bits(other.point(i)[c]))
          return false;
      if (std::abs(weight(i) - other.weight(i)) > weight_tol) return false;
    }
    return true;
  }

 private:
  int dim_;
  std::vector<double> pts_;  // size * dim, row-major, sorted by coordinate bits
  std::vector<double> w_;
};

// ||x - y||_2^2 for dim-dimensional points.
inline double sq_dist(const double* x, const double* y, int dim) {
  double s = 0.0;
  for (int c = 0; c < dim; ++c) {
    double t = x[c] - y[c];
    s += t * t;
  }
  return s;
}

// ||.||^p from a squared norm; p is a real exponent >= 1.
inline double pow_from_sq(double sq, double p) {
  if (p == 2.0) return sq;
  if (p == 1.0) return std::sqrt(sq);
  return sq == 0.0 ? 0.0 : std::pow(sq, 0.5 * p);
}

// A coupling of two discrete measures, stored sparsely.
struct Coupling {
  struct Entry {
    int row, col;
    double mass;
  };
  int mu_size = 0, nu_size = 0;
  std::vector<Entry> entries;
};

struct MarginalReport {
  double row_defect = 0.0;  // max |row sum - mu weight|
  double col_defect = 0.0;  // max |col sum - nu weight|
};

// Reports the largest row- and column-marginal deviations of pi from the
// weights of mu and nu.
inline MarginalReport validate_coupling(const Coupling& pi, const DiscreteMeasure& mu,
                                        const DiscreteMeasure& nu) {
  if (pi.mu_size != mu.size() || pi.nu_size != nu.size())
    throw validation_error("ShapeMismatch", "coupling shape does not match measures");
  std::vector<double> row(mu.size(), 0.0), col(nu.size(), 0.0);
  for (const auto& e : pi.entries) {
    if (e.row < 0 || e.row >= mu.size() || e.col < 0 || e.col >= nu.size())
      throw validation_error("ShapeMismatch", "coupling entry out of range");
    row[e.row] += e.mass;
    col[e.col] += e.mass;
  }
  MarginalReport rep;
  for (int i = 0; i < mu.size(); ++i)
    rep.row_defect = std::max(rep.row_defect, std::abs(row[i] - mu.weight(i)));
  for (int j = 0; j < nu.size(); ++j)
    rep.col_defect = std::max(rep.col_defect, std::abs(col[j] - nu.weight(j)));
  return rep;
}

// (sum of mass * ||x - y||^p)^(1/p) for the plan pi between mu and nu.
inline double coupling_cost(const Coupling& pi, const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p) {
  if (mu.dim() != nu.dim())
    throw validation_error("DimensionMismatch", "measures live in different dimensions");
  if (pi.mu_size != mu.size() || pi.nu_size != nu.size())
    throw validation_error("ShapeMismatch", "coupling shape does not match measures");
  double obj = 0.0;
  for (const auto& e : pi.entries)
    obj += e.mass * pow_from_sq(sq_dist(mu.point(e.row), nu.point(e.col), mu.dim()), p);
  return std::pow(obj, 1.0 / p);
}

// The product coupling mu (x) nu.
inline Coupling product_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  Coupling pi;
  pi.mu_size = mu.size();
  pi.nu_size = nu.size();
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j)
      pi.entries.push_back({i, j, mu.weight(i) * nu.weight(j)});
  return pi;
}

}  // namespace wsnow
