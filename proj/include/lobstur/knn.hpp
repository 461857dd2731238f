#pragma once

#include <Eigen/Core>
#include <vector>

#include "lobstur/graph.hpp"

namespace lobstur {

enum class KnnSource {
  GraphShortestPath,
  GraphJaccard,
  FeatureEuclidean,
  OracleLatent,
};

// Directed k-nearest-neighbor lists, nearest first. Lists may be shorter
// than k when fewer peers are reachable or similar; exact distance ties are
// broken by ascending node id. A node never appears in its own list.
struct KnnGraph {
  int k = 0;
  std::vector<std::vector<int>> lists;
  KnnSource source = KnnSource::GraphShortestPath;
};

// Unweighted hop distance (breadth-first); unreachable nodes excluded.
KnnGraph shortest_path_knn(const Graph& g, int k);

// Distance 1 - |N[i] ∩ N[j]| / |N[i] ∪ N[j]| over closed neighborhoods
// (each node counts as its own neighbor, so adjacent degree-1 nodes have
// nonzero similarity). Nodes with zero similarity are excluded.
KnnGraph jaccard_knn(const Graph& g, int k);

// Exact Euclidean-distance kNN over feature rows.
KnnGraph feature_knn(const Eigen::Ref<const Eigen::MatrixXd>& X, int k);

// One-dimensional kNN over true latent positions (oracle access).
KnnGraph latent_knn(const Eigen::Ref<const Eigen::VectorXd>& latents, int k);

}  // namespace lobstur
