#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "lobstur/graph.hpp"

namespace lobstur {

// Scalar validation statistics of a graph. pagerank_sum is the mass of the
// PageRank vector (1 for any non-empty graph); pagerank_index_sum is the
// compatibility value (n - 1) / 2 matching reports that sum node indices
// instead. Degree assortativity of a degree-regular graph is undefined; it
// is reported as 0 with the degenerate flag set.
struct GraphStats {
  long long num_nodes = 0;
  long long num_edges = 0;
  double avg_degree = 0.0;
  double density = 0.0;
  double avg_clustering_coefficient = 0.0;
  long long num_connected_components = 0;
  long long giant_component_size = 0;
  double degree_assortativity = 0.0;
  bool assortativity_degenerate = false;
  double pagerank_sum = 0.0;
  double pagerank_index_sum = 0.0;
  double transitivity = 0.0;
  long long num_triangles = 0;
};

GraphStats graph_stats(const Graph& g);

// Power iteration with uniform teleport; dangling mass is redistributed
// uniformly. Converges when the L1 change drops below tol.
Eigen::VectorXd pagerank(const Graph& g, double damping = 0.85,
                         double tol = 1e-9, int max_iter = 1000);

struct StatSummary {
  double original = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
  long long count = 0;
};

// Ordered (statistic name, summary) rows.
using StatsComparison = std::vector<std::pair<std::string, StatSummary>>;

StatsComparison stats_report(const Graph& original,
                             const std::vector<Graph>& replicas);
StatsComparison stats_report(const GraphStats& original,
                             const std::vector<GraphStats>& replicas);

}  // namespace lobstur
