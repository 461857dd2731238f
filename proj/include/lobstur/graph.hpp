#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

namespace lobstur {

// Canonical edge: first < second.
using Edge = std::pair<int, int>;

// Undirected simple attributed graph. Edges are stored once, in canonical
// (u < v) order, sorted lexicographically. Features, when present, carry one
// row per node. Instances are immutable by convention after construction;
// build them through make_graph so the invariants hold.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
  std::optional<Eigen::MatrixXd> features;

  bool has_features() const { return features.has_value(); }
  std::size_t num_edges() const { return edges.size(); }
};

// Canonicalizes the edge list (symmetrize, dedup, drop self-loops) and
// validates node ids and feature shape. Throws std::invalid_argument on
// violation.
Graph make_graph(int n, std::vector<Edge> edges,
                 std::optional<Eigen::MatrixXd> features = std::nullopt);

// Sorted neighbor lists.
std::vector<std::vector<int>> adjacency_lists(const Graph& g);
std::vector<int> degrees(const Graph& g);
bool has_edge(const Graph& g, int u, int v);

// Edge file: lines "u v" (ASCII integers). An optional line "#n <count>"
// pins the node count; otherwise n = 1 + max node id (or the feature row
// count when larger). Feature file: headerless CSV, one row per node.
Graph load_graph(
    const std::filesystem::path& edge_path,
    const std::optional<std::filesystem::path>& feature_path = std::nullopt);
void save_graph(
    const Graph& g, const std::filesystem::path& edge_path,
    const std::optional<std::filesystem::path>& feature_path = std::nullopt);

// Headerless CSV, row-major, '.' decimal separator, LF line endings.
// save_matrix writes 17 significant digits, so round-trips are exact.
Eigen::MatrixXd load_matrix(const std::filesystem::path& path);
void save_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m,
                 const std::filesystem::path& path);

}  // namespace lobstur
