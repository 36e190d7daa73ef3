#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsnow/error.hpp"
#include "wsnow/graphs.hpp"
#include "wsnow/markov.hpp"
#include "wsnow/measure.hpp"
#include "wsnow/metric_space.hpp"

// File schemas shared by the CLI and external callers:
//   metric space  {"n": int, "d": [[..]], "labels": [..]?}
//   measure       {"dim": int, "points": [[..]], "weights": [..]}
//   chain         {"P": [[..]], "pi": [..]}
//   graph         {"n": int, "edges": [[u,v], ..]}
// Reports are emitted with insertion-ordered keys so identical runs produce
// byte-identical files.

namespace wsnow {

using json = nlohmann::ordered_json;

namespace detail {
inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("MalformedInput", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw validation_error("MalformedInput", path + ": " + e.what());
  }
  return j;
}

template <typename T>
T field(const json& j, const std::string& name, const std::string& what) {
  if (!j.contains(name))
    throw validation_error("MalformedInput", what + ": missing field '" + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const std::exception& e) {
    throw validation_error("MalformedInput",
                           what + ": field '" + name + "': " + e.what());
  }
}
}  // namespace detail

inline FiniteMetricSpace metric_from_json(const json& j, double tri_tol = -1.0) {
  auto d = detail::field<std::vector<std::vector<double>>>(j, "d", "metric space");
  auto n = detail::field<int>(j, "n", "metric space");
  if (static_cast<size_t>(n) != d.size())
    throw validation_error("MalformedInput", "metric space: n does not match d");
  std::vector<std::string> labels;
  if (j.contains("labels"))
    labels = detail::field<std::vector<std::string>>(j, "labels", "metric space");
  return tri_tol < 0.0 ? validate_metric(d, std::move(labels))
                       : validate_metric(d, tri_tol, std::move(labels));
}

inline FiniteMetricSpace load_metric(const std::string& path, double tri_tol = -1.0) {
  return metric_from_json(detail::parse_file(path), tri_tol);
}

inline json metric_to_json(const FiniteMetricSpace& X) {
  json j;
  j["n"] = X.size();
  std::vector<std::vector<double>> rows(X.size(), std::vector<double>(X.size()));
  for (int i = 0; i < X.size(); ++i)
    for (int k = 0; k < X.size(); ++k) rows[i][k] = X(i, k);
  j["d"] = rows;
  if (!X.labels().empty()) j["labels"] = X.labels();
  return j;
}

inline DiscreteMeasure measure_from_json(const json& j) {
  auto dim = detail::field<int>(j, "dim", "measure");
  auto pts = detail::field<std::vector<std::vector<double>>>(j, "points", "measure");
  auto w = detail::field<std::vector<double>>(j, "weights", "measure");
  if (pts.size() != w.size())
    throw validation_error("MalformedInput", "measure: points/weights length mismatch");
  std::vector<double> flat;
  flat.reserve(pts.size() * static_cast<size_t>(dim));
  for (const auto& p : pts) {
    if (p.size() != static_cast<size_t>(dim))
      throw validation_error("MalformedInput", "measure: point of wrong dimension");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return DiscreteMeasure(dim, std::move(flat), std::move(w));
}

inline DiscreteMeasure load_measure(const std::string& path) {
  return measure_from_json(detail::parse_file(path));
}

inline json measure_to_json(const DiscreteMeasure& mu) {
  json j;
  j["dim"] = mu.dim();
  std::vector<std::vector<double>> pts(mu.size(), std::vector<double>(mu.dim()));
  for (int i = 0; i < mu.size(); ++i)
    for (int c = 0; c < mu.dim(); ++c) pts[i][c] = mu.point(i)[c];
  j["points"] = pts;
  j["weights"] = mu.weights();
  return j;
}

inline ReversibleChain chain_from_json(const json& j) {
  auto P = detail::field<std::vector<std::vector<double>>>(j, "P", "chain");
  auto pi = detail::field<std::vector<double>>(j, "pi", "chain");
  return validate_chain(P, pi);
}

inline ReversibleChain load_chain(const std::string& path) {
  return chain_from_json(detail::parse_file(path));
}

inline Graph graph_from_json(const json& j) {
  auto n = detail::field<int>(j, "n", "graph");
  auto raw = detail::field<std::vector<std::vector<int>>>(j, "edges", "graph");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  for (const auto& e : raw) {
    if (e.size() != 2)
      throw validation_error("MalformedInput", "graph: edge is not a pair");
    edges.emplace_back(e[0], e[1]);
  }
  return make_graph(n, edges);
}

inline Graph load_graph(const std::string& path) {
  return graph_from_json(detail::parse_file(path));
}

inline json graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.n;
  std::vector<std::vector<int>> edges;
  edges.reserve(g.edges.size());
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  j["edges"] = edges;
  return j;
}

}  // namespace wsnow
