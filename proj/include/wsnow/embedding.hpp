#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsnow/error.hpp"
#include "wsnow/measure.hpp"
#include "wsnow/metric_space.hpp"
#include "wsnow/transport.hpp"

namespace wsnow {

// Smallest K for which the construction below is guaranteed to reach
// distortion 1 + eps: ceil( (5 M^p n^{2p} / (p m^p eps))^{1/(p-1)} ).
// Here M^p and m^p are the max/min distances of X. Advisory only: the
// lower band of the audit holds for every K >= 1.
inline long long min_k_for_epsilon(const FiniteMetricSpace& X, double p, double eps) {
  if (!(p > 1.0))
    throw validation_error("PEqualsOne", "the K bound diverges as p -> 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw validation_error("EpsOutOfRange", "eps must be in (0,1)");
  if (X.size() < 2) throw validation_error("SinglePoint", "need n >= 2");
  const double n = static_cast<double>(X.size());
  const double base =
      5.0 * X.diameter() * std::pow(n, 2.0 * p) / (p * X.min_distance() * eps);
  const double val = std::pow(base, 1.0 / (p - 1.0));
  if (!std::isfinite(val) || val >= 9.0e18)
    throw validation_error("TooLarge", "required K does not fit in 64 bits");
  // nudge before ceil so values that are exact integers in real arithmetic
  // do not round up from the last-ulp excess of pow
  return std::max<long long>(
      1, static_cast<long long>(std::ceil(val - 1e-9 * std::max(1.0, val))));
}

using Point3 = std::array<double, 3>;

namespace detail {

struct Point3Key {
  std::uint64_t b[3];
  bool operator==(const Point3Key& o) const {
    return b[0] == o.b[0] && b[1] == o.b[1] && b[2] == o.b[2];
  }
};
struct Point3KeyHash {
  size_t operator()(const Point3Key& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::uint64_t v : k.b) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<size_t>(h);
  }
};
inline Point3Key key_of(const Point3& q) {
  return {coord_bits(q[0]), coord_bits(q[1]), coord_bits(q[2])};
}

}  // namespace detail

struct PairInfo {
  int i = 0, j = 0;          // 1-based
  long long b_size = 0;      // |B_ij| after identifying coincident points
  bool degenerate = false;   // the whole Q^3 family collapses to one point
};

// The measure-valued snowflake embedding of a finite metric space into
// Wasserstein-p space over R^3: five point families per pair trace a ribbon
// between the two axis atoms, f(x_i) is uniform over the shared off-axis
// set C plus the axis atom of x_i.
class SnowflakeEmbedding {
 public:
  FiniteMetricSpace space;
  double p = 2.0;
  long long K = 1;
  double m = 0.0, M = 0.0;  // min/max distance^(1/p)
  long long N = 0;          // |C| + 1

  std::vector<double> shared;     // C, flat 3*|C|
  std::vector<int> shared_owner;  // S_a membership of each C point (1-based a)
  std::vector<double> axis;       // axis atoms, flat 3*n, (M i / m) e1
  std::vector<PairInfo> pairs;

  SnowflakeEmbedding(FiniteMetricSpace X) : space(std::move(X)) {}

  int n() const { return space.size(); }
  long long shared_count() const { return static_cast<long long>(shared_owner.size()); }

  // row-major pair index; the paper leaves the bijection arbitrary, a fixed
  // choice keeps builds reproducible
  long long phi(int i, int j) const {
    return static_cast<long long>(i - 1) * n() + j;
  }

  Point3 axis_point(int i) const {  // 1-based
    return {axis[3 * (i - 1)], axis[3 * (i - 1) + 1], axis[3 * (i - 1) + 2]};
  }

  // f(x_i): the uniform probability measure over C u {axis_i}
  DiscreteMeasure measure(int i) const {  // 1-based
    std::vector<double> pts = shared;
    Point3 a = axis_point(i);
    pts.insert(pts.end(), a.begin(), a.end());
    return DiscreteMeasure::uniform(3, std::move(pts));
  }
};

namespace detail {

// One ribbon point, coordinates given as integer combinations
// (M*a + e*b) / (m*K) per axis, with e = d_X(x_i,x_j)^{1/p}.
struct RibbonGen {
  double M, e, denom;  // denom = m*K
  bool e_is_M;         // bitwise; makes degenerate collapses exact

  double coeff(long long a, long long b) const {
    double num;
    if (b == 0)
      num = M * static_cast<double>(a);
    else if (e_is_M)
      num = M * static_cast<double>(a + b);
    else
      num = M * static_cast<double>(a) + e * static_cast<double>(b);
    return num / denom;
  }

  // family t in 1..5, step s in 0..K
  Point3 point(int t, long long s, long long i, long long j, long long phi,
               long long K) const {
    switch (t) {
      case 1: return {coeff(i * K, 0), coeff(phi * s, 0), 0.0};
      case 2: return {coeff(i * K, 0), coeff(phi * K, 0), coeff(s, 0)};
      case 3:
        return {coeff(s * (j - i) + K * i, K - s), coeff(phi * K, 0), coeff(K, 0)};
      case 4: return {coeff(j * K, 0), coeff(phi * K, 0), coeff(K - s, 0)};
      default: return {coeff(j * K, 0), coeff(phi * (K - s), 0), 0.0};
    }
  }
};

}  // namespace detail

// Materializes the full point system for all pairs i < j, identifies
// coincident points exactly, and verifies the construction invariants:
// the three designated family coincidences, the S_1..S_n partition
// (every point owned by exactly one index), and the one-atom support
// difference between any two measures.
inline SnowflakeEmbedding build_snowflake_embedding(const FiniteMetricSpace& X, double p,
                                                    long long K,
                                                    long long max_points = 2'000'000) {
  if (X.size() < 2)
    throw validation_error("SinglePoint", "the construction needs n >= 2 (m undefined)");
  if (!(p > 1.0)) throw validation_error("PEqualsOne", "p must be > 1");
  if (K < 1) throw validation_error("KOutOfRange", "K must be >= 1");

  SnowflakeEmbedding emb(X);
  emb.p = p;
  emb.K = K;
  const int n = X.size();
  emb.m = std::pow(X.min_distance(), 1.0 / p);
  emb.M = std::pow(X.diameter(), 1.0 / p);

  const long long nominal =
      (5 * (K + 1)) * (static_cast<long long>(n) * (n - 1) / 2);
  if (nominal > max_points)
    throw validation_error("SizeLimitExceeded",
                           "embedding would exceed the point cap (" +
                               std::to_string(nominal) + " > " +
                               std::to_string(max_points) + ")");

  struct Slot {
    int owner;
    int index = -1;  // position in emb.shared once assigned
  };
  std::unordered_map<detail::Point3Key, Slot, detail::Point3KeyHash> table;
  table.reserve(static_cast<size_t>(nominal));
  std::vector<Point3> in_order;  // insertion-ordered distinct points
  in_order.reserve(static_cast<size_t>(nominal));

  const double denom = emb.m * static_cast<double>(K);

  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const double dij = X(i - 1, j - 1);
      detail::RibbonGen gen;
      gen.M = emb.M;
      gen.e = std::pow(dij, 1.0 / p);
      gen.denom = denom;
      gen.e_is_M = (gen.e == emb.M);
      const long long phi = emb.phi(i, j);

      PairInfo info;
      info.i = i;
      info.j = j;
      info.degenerate = gen.e_is_M && (j - i == 1);

      // designated coincidences must be exact
      auto same = [](const Point3& a, const Point3& b) {
        return a[0] == b[0] && a[1] == b[1] && a[2] == b[2];
      };
      if (!same(gen.point(1, K, i, j, phi, K), gen.point(2, 0, i, j, phi, K)) ||
          !same(gen.point(3, K, i, j, phi, K), gen.point(4, 0, i, j, phi, K)) ||
          !same(gen.point(4, K, i, j, phi, K), gen.point(5, 0, i, j, phi, K)))
        throw internal_error("family endpoint coincidence failed for pair (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");

      long long fresh_for_pair = 0;
      std::unordered_map<detail::Point3Key, char, detail::Point3KeyHash> local;
      local.reserve(static_cast<size_t>(5 * (K + 1)));
      for (int t = 1; t <= 5; ++t) {
        const int owner = (t <= 2) ? i : j;
        for (long long s = 0; s <= K; ++s) {
          Point3 q = gen.point(t, s, i, j, phi, K);
          auto key = detail::key_of(q);
          if (local.emplace(key, 1).second) ++fresh_for_pair;
          auto [it, inserted] = table.emplace(key, Slot{owner});
          if (!inserted && it->second.owner != owner)
            throw validation_error(
                "PartitionGap",
                "point owned by two partition classes: S_" +
                    std::to_string(it->second.owner) + " and S_" + std::to_string(owner));
          if (inserted) in_order.push_back(q);
        }
      }
      info.b_size = fresh_for_pair;
      const long long expect = info.degenerate ? 4 * K + 2 : 5 * K + 2;
      if (info.b_size > expect || info.b_size < 4 * K + 2)
        throw internal_error("unexpected |B_ij| = " + std::to_string(info.b_size) +
                             " for pair (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
      emb.pairs.push_back(info);
    }
  }

  // split off the axis atoms (M i / m) e1 = Q^1_0(i, .) = Q^5_K(., i)
  std::vector<detail::Point3Key> axis_keys(n);
  for (int i = 1; i <= n; ++i) {
    detail::RibbonGen gen{emb.M, emb.M, denom, true};
    Point3 a = {gen.coeff(static_cast<long long>(i) * K, 0), 0.0, 0.0};
    axis_keys[i - 1] = detail::key_of(a);
    auto it = table.find(axis_keys[i - 1]);
    if (it == table.end() || it->second.owner != i)
      throw internal_error("axis atom of index " + std::to_string(i) +
                           " missing or misowned");
    it->second.index = -2;  // mark as axis
    emb.axis.insert(emb.axis.end(), a.begin(), a.end());
  }

  for (const Point3& q : in_order) {
    auto& slot = table[detail::key_of(q)];
    if (slot.index == -2) continue;  // axis atom
    slot.index = static_cast<int>(emb.shared_owner.size());
    emb.shared.insert(emb.shared.end(), q.begin(), q.end());
    emb.shared_owner.push_back(slot.owner);
  }
  emb.N = emb.shared_count() + 1;
  if (emb.N > max_points)
    throw validation_error("SizeLimitExceeded", "N exceeds the point cap");
  return emb;
}

struct PairAudit {
  int i = 0, j = 0;       // 1-based
  double target_lo = 0.0;  // (d_X(x_i,x_j) / (m^p N))^(1/p)
  double target_hi = 0.0;  // (1 + eps) * target_lo
  double measured = 0.0;   // W_p(f(x_i), f(x_j))
  double ratio = 0.0;      // measured / target_lo
  bool in_band = false;
};

struct DistortionReport {
  std::vector<PairAudit> pairs;
  double min_ratio = 0.0, max_ratio = 0.0;
  double distortion = 0.0;  // max_ratio / min_ratio
  std::pair<int, int> worst_pair{0, 0};
  double eps = 0.0, p = 0.0;
  long long K = 0, N = 0;
  bool all_in_band = false;
};

namespace detail {

inline std::vector<std::vector<double>> shared_as_points(const SnowflakeEmbedding& e) {
  std::vector<std::vector<double>> pts(e.shared_owner.size());
  for (size_t v = 0; v < pts.size(); ++v)
    pts[v] = {e.shared[3 * v], e.shared[3 * v + 1], e.shared[3 * v + 2]};
  return pts;
}

}  // namespace detail

// Measures every pairwise W_p(f(x_i), f(x_j)) with the structured one-atom
// swap reduction (one label-setting pass per source index, all targets read
// off that pass) and records the ratio against the target band. The lower
// edge of the band holds for all K; the upper edge needs K at the advisory
// scale. `generic` forces the bipartite solver instead, for cross-checks at
// small N.
inline DistortionReport audit_distortion(const SnowflakeEmbedding& emb, double eps,
                                         bool generic = false,
                                         long long generic_cap = 400) {
  const int n = emb.n();
  const double mind = emb.space.min_distance();
  const double tau = 1e-9;
  DistortionReport rep;
  rep.eps = eps;
  rep.p = emb.p;
  rep.K = emb.K;
  rep.N = emb.N;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;

  const int count = static_cast<int>(emb.shared_owner.size());
  std::vector<double> dist;
  for (int i = 1; i < n; ++i) {
    Point3 ai = emb.axis_point(i);
    if (!generic)
      detail::power_shortest_paths(emb.shared.data(), count, 3, ai.data(), emb.p, dist);
    for (int j = i + 1; j <= n; ++j) {
      Point3 aj = emb.axis_point(j);
      double measured;
      if (generic) {
        if (emb.N > generic_cap)
          throw validation_error("SizeLimitExceeded",
                                 "generic audit capped at N <= " +
                                     std::to_string(generic_cap));
        measured = wasserstein(emb.measure(i), emb.measure(j), emb.p).cost;
      } else {
        double best = pow_from_sq(sq_dist(ai.data(), aj.data(), 3), emb.p);
        for (int v = 0; v < count; ++v) {
          double w = dist[v] +
                     pow_from_sq(sq_dist(&emb.shared[3 * static_cast<size_t>(v)],
                                         aj.data(), 3), emb.p);
          best = std::min(best, w);
        }
        measured = std::pow(best / static_cast<double>(emb.N), 1.0 / emb.p);
      }

      PairAudit a;
      a.i = i;
      a.j = j;
      a.target_lo =
          std::pow(emb.space(i - 1, j - 1) / (mind * static_cast<double>(emb.N)),
                   1.0 / emb.p);
      a.target_hi = (1.0 + eps) * a.target_lo;
      a.measured = measured;
      a.ratio = measured / a.target_lo;
      a.in_band = a.ratio >= 1.0 - tau && a.ratio <= 1.0 + eps + tau;
      if (a.ratio > rep.max_ratio) {
        rep.max_ratio = a.ratio;
        rep.worst_pair = {i, j};
      }
      rep.min_ratio = std::min(rep.min_ratio, a.ratio);
      rep.pairs.push_back(a);
    }
  }
  rep.distortion = rep.max_ratio / rep.min_ratio;
  rep.all_in_band = std::all_of(rep.pairs.begin(), rep.pairs.end(),
                                [](const PairAudit& a) { return a.in_band; });
  return rep;
}

struct LowerBoundCertificate {
  bool pass = false;
  bool partition_ok = false;
  double worst_rel_margin = 0.0;  // min over blocks of (min||u-v||^p - thr)/thr
  int worst_a = 0, worst_b = 0;
};

// Verifies the separation property behind the lower distortion band: for
// every a < b and (u,v) in S_a x S_b, ||u-v||^p >= d_X(x_a,x_b) / m^p, up to
// 1e-9 relative. Blocks are compared through squared norms against the
// p-free threshold thr^{2/p}, one pow per block.
inline LowerBoundCertificate lower_bound_certificate(const SnowflakeEmbedding& emb) {
  const int n = emb.n();
  const double mind = emb.space.min_distance();

  // S_a = owned shared points plus the axis atom of a
  std::vector<std::vector<int>> blocks(n + 1);
  const int count = static_cast<int>(emb.shared_owner.size());
  for (int v = 0; v < count; ++v) {
    int a = emb.shared_owner[v];
    if (a < 1 || a > n) throw validation_error("PartitionGap", "unowned ribbon point");
    blocks[a].push_back(v);
  }
  long long covered = count;

  auto point_of = [&](int a, int idx) -> const double* {
    return idx >= 0 ? &emb.shared[3 * static_cast<size_t>(idx)] : &emb.axis[3 * (a - 1)];
  };
  for (int a = 1; a <= n; ++a) {
    blocks[a].push_back(-1);  // axis atom sentinel
    ++covered;
  }
  LowerBoundCertificate cert;
  cert.partition_ok = (covered == emb.shared_count() + n);
  cert.worst_rel_margin = std::numeric_limits<double>::infinity();

  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const double thr = emb.space(a - 1, b - 1) / mind;  // d / m^p
      const double thr_sq = std::pow(thr, 2.0 / emb.p);
      double min_sq = std::numeric_limits<double>::infinity();
      for (int u : blocks[a]) {
        const double* pu = point_of(a, u);
        for (int v : blocks[b])
          min_sq = std::min(min_sq, sq_dist(pu, point_of(b, v), 3));
      }
      (void)thr_sq;
      const double min_p = pow_from_sq(min_sq, emb.p);
      const double rel = (min_p - thr) / thr;
      if (rel < cert.worst_rel_margin) {
        cert.worst_rel_margin = rel;
        cert.worst_a = a;
        cert.worst_b = b;
      }
    }
  }
  cert.pass = cert.partition_ok && cert.worst_rel_margin >= -1e-9;
  return cert;
}

// The explicit ribbon-shift coupling between f(x_i) and f(x_j): walk the
// five families in order, shift each support point to its successor, keep
// everything off the ribbon fixed. Upper-bounds the optimal cost.
inline Coupling shift_coupling(const SnowflakeEmbedding& emb, int i, int j,
                               const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (!(1 <= i && i < j && j <= emb.n()))
    throw validation_error("BadPair", "need 1 <= i < j <= n");
  detail::RibbonGen gen;
  gen.M = emb.M;
  gen.e = std::pow(emb.space(i - 1, j - 1), 1.0 / emb.p);
  gen.denom = emb.m * static_cast<double>(emb.K);
  gen.e_is_M = (gen.e == emb.M);
  const long long phi = emb.phi(i, j);

  std::vector<Point3> path;
  for (int t = 1; t <= 5; ++t)
    for (long long s = 0; s <= emb.K; ++s) {
      Point3 q = gen.point(t, s, i, j, phi, emb.K);
      if (path.empty() || detail::key_of(q) != detail::key_of(path.back()))
        path.push_back(q);
    }

  auto index_of = [](const DiscreteMeasure& m_) {
    std::unordered_map<detail::Point3Key, int, detail::Point3KeyHash> idx;
    idx.reserve(static_cast<size_t>(m_.size()));
    for (int v = 0; v < m_.size(); ++v)
      idx[detail::key_of({m_.point(v)[0], m_.point(v)[1], m_.point(v)[2]})] = v;
    return idx;
  };
  auto mu_idx = index_of(mu), nu_idx = index_of(nu);
  const double w = 1.0 / static_cast<double>(emb.N);

  Coupling pi;
  pi.mu_size = mu.size();
  pi.nu_size = nu.size();
  std::unordered_map<detail::Point3Key, char, detail::Point3KeyHash> on_ribbon;
  for (const auto& q : path) on_ribbon.emplace(detail::key_of(q), 1);
  for (size_t s = 0; s + 1 < path.size(); ++s)
    pi.entries.push_back(
        {mu_idx.at(detail::key_of(path[s])), nu_idx.at(detail::key_of(path[s + 1])), w});
  for (int v = 0; v < static_cast<int>(emb.shared_owner.size()); ++v) {
    Point3 q = {emb.shared[3 * static_cast<size_t>(v)],
                emb.shared[3 * static_cast<size_t>(v) + 1],
                emb.shared[3 * static_cast<size_t>(v) + 2]};
    auto key = detail::key_of(q);
    if (!on_ribbon.count(key)) pi.entries.push_back({mu_idx.at(key), nu_idx.at(key), w});
  }
  return pi;
}

// Distortion-1 embedding of a finite subset of l_2 into measures on the
// line: spread the coordinates of each point along R with gaps wide enough
// that the monotone matching pairs coordinates in order. Atoms are scaled by
// sqrt(dim) so the normalized measures reproduce ||x-y||_2 exactly.
inline std::vector<DiscreteMeasure> embed_l2_line(
    const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw validation_error("EmptyInput", "need at least one point");
  const size_t dim = points[0].size();
  if (dim == 0) throw validation_error("EmptyInput", "points must have a coordinate");
  for (const auto& x : points)
    if (x.size() != dim)
      throw validation_error("DimensionMismatch", "points differ in dimension");

  double gap = 0.0;
  for (const auto& x : points)
    for (size_t c = 0; c + 1 < dim; ++c) gap = std::max(gap, std::abs(x[c + 1] - x[c]));
  const double offset = 1.0 + gap;
  const double scale = std::sqrt(static_cast<double>(dim));

  std::vector<DiscreteMeasure> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    std::vector<double> atoms(dim);
    for (size_t c = 0; c < dim; ++c)
      atoms[c] = scale * (x[c] + offset * static_cast<double>(c + 1));
    out.push_back(DiscreteMeasure::uniform(1, std::move(atoms)));
  }
  return out;
}

}  // namespace wsnow
