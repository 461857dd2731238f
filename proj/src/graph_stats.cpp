#include "lobstur/graph_stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace lobstur {

GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  s.num_nodes = g.n;
  s.num_edges = static_cast<long long>(g.edges.size());
  if (g.n > 0) s.avg_degree = 2.0 * s.num_edges / g.n;
  if (g.n > 1)
    s.density = 2.0 * s.num_edges /
                (static_cast<double>(g.n) * (g.n - 1.0));

  const auto adj = adjacency_lists(g);
  const auto deg = degrees(g);

  // triangles: per edge, intersect the sorted neighbor lists; each triangle
  // is found once per edge, crediting its third vertex
  std::vector<long long> node_triangles(g.n, 0);
  long long triangle_incidences = 0;
  for (const auto& [u, v] : g.edges) {
    const auto& a = adj[u];
    const auto& b = adj[v];
    std::size_t p = 0, q = 0;
    while (p < a.size() && q < b.size()) {
      if (a[p] < b[q])
        ++p;
      else if (a[p] > b[q])
        ++q;
      else {
        ++node_triangles[a[p]];
        ++triangle_incidences;
        ++p;
        ++q;
      }
    }
  }
  s.num_triangles = triangle_incidences / 3;

  double clustering_sum = 0.0;
  long long triples = 0;
  for (int v = 0; v < g.n; ++v) {
    const long long d = deg[v];
    const long long wedges = d * (d - 1) / 2;
    triples += wedges;
    if (wedges > 0)
      clustering_sum += static_cast<double>(node_triangles[v]) / wedges;
  }
  if (g.n > 0) s.avg_clustering_coefficient = clustering_sum / g.n;
  if (triples > 0)
    s.transitivity = 3.0 * s.num_triangles / static_cast<double>(triples);

  // connected components
  std::vector<int> comp(g.n, -1);
  long long components = 0;
  long long giant = 0;
  std::deque<int> queue;
  for (int sta = 0; sta < g.n; ++sta) {
    if (comp[sta] >= 0) continue;
    long long size = 0;
    comp[sta] = static_cast<int>(components);
    queue.assign(1, sta);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      ++size;
      for (int v : adj[u])
        if (comp[v] < 0) {
          comp[v] = static_cast<int>(components);
          queue.push_back(v);
        }
    }
    giant = std::max(giant, size);
    ++components;
  }
  s.num_connected_components = components;
  s.giant_component_size = giant;

  // degree assortativity: Pearson correlation of endpoint degrees over the
  // 2m ordered edge incidences
  if (!g.edges.empty()) {
    double sx = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [u, v] : g.edges) {
      const double du = deg[u];
      const double dv = deg[v];
      sx += du + dv;
      sxx += du * du + dv * dv;
      sxy += 2.0 * du * dv;
    }
    const double m2 = 2.0 * static_cast<double>(g.edges.size());
    const double mean = sx / m2;
    const double var = sxx / m2 - mean * mean;
    const double cov = sxy / m2 - mean * mean;
    if (var > 1e-12 * std::max(1.0, sxx / m2)) {
      s.degree_assortativity = cov / var;
    } else {
      s.degree_assortativity = 0.0;
      s.assortativity_degenerate = true;
    }
  } else {
    s.assortativity_degenerate = true;
  }

  const Eigen::VectorXd pr = pagerank(g);
  s.pagerank_sum = pr.size() > 0 ? pr.sum() : 0.0;
  s.pagerank_index_sum = g.n > 0 ? (g.n - 1) / 2.0 : 0.0;
  return s;
}

Eigen::VectorXd pagerank(const Graph& g, double damping, double tol,
                         int max_iter) {
  const int n = g.n;
  if (n == 0) return Eigen::VectorXd();
  const auto adj = adjacency_lists(g);
  const auto deg = degrees(g);

  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
  Eigen::VectorXd next(n);
  for (int it = 0; it < max_iter; ++it) {
    double dangling = 0.0;
    for (int u = 0; u < n; ++u)
      if (deg[u] == 0) dangling += v[u];
    next.setConstant((1.0 - damping) / n + damping * dangling / n);
    for (int u = 0; u < n; ++u) {
      if (deg[u] == 0) continue;
      const double share = damping * v[u] / deg[u];
      for (int w : adj[u]) next[w] += share;
    }
    const double delta = (next - v).lpNorm<1>();
    v.swap(next);
    if (delta < tol) break;
  }
  return v;
}

namespace {

std::vector<std::pair<std::string, double>> stat_values(const GraphStats& s) {
  return {
      {"num_nodes", static_cast<double>(s.num_nodes)},
      {"num_edges", static_cast<double>(s.num_edges)},
      {"avg_degree", s.avg_degree},
      {"density", s.density},
      {"avg_clustering_coefficient", s.avg_clustering_coefficient},
      {"num_connected_components",
       static_cast<double>(s.num_connected_components)},
      {"giant_component_size", static_cast<double>(s.giant_component_size)},
      {"degree_assortativity", s.degree_assortativity},
      {"pagerank_sum", s.pagerank_sum},
      {"pagerank_index_sum", s.pagerank_index_sum},
      {"transitivity", s.transitivity},
      {"num_triangles", static_cast<double>(s.num_triangles)},
  };
}

}  // namespace

StatsComparison stats_report(const GraphStats& original,
                             const std::vector<GraphStats>& replicas) {
  if (replicas.empty())
    throw std::invalid_argument("stats_report needs at least one replica");

  const auto base = stat_values(original);
  const long long count = static_cast<long long>(replicas.size());

  StatsComparison out;
  out.reserve(base.size());
  for (std::size_t idx = 0; idx < base.size(); ++idx) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& r : replicas) {
      const double x = stat_values(r)[idx].second;
      sum += x;
      sumsq += x * x;
    }
    const double mean = sum / count;
    const double var = std::max(0.0, sumsq / count - mean * mean);
    out.emplace_back(base[idx].first,
                     StatSummary{base[idx].second, mean, std::sqrt(var), count});
  }
  return out;
}

StatsComparison stats_report(const Graph& original,
                             const std::vector<Graph>& replicas) {
  std::vector<GraphStats> rs;
  rs.reserve(replicas.size());
  for (const auto& g : replicas) rs.push_back(graph_stats(g));
  return stats_report(graph_stats(original), rs);
}

}  // namespace lobstur
