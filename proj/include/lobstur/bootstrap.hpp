#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "lobstur/graph.hpp"
#include "lobstur/knn.hpp"

namespace lobstur {

enum class BootstrapMode { Conditional, Marginal };
enum class Rewiring { Exact, ApproxA2 };

struct BootstrapConfig {
  BootstrapMode mode = BootstrapMode::Conditional;
  KnnSource knn_for_features = KnnSource::GraphShortestPath;
  KnnSource knn_for_edges = KnnSource::GraphShortestPath;
  int k = 20;
  Rewiring rewiring = Rewiring::Exact;
  std::uint64_t seed = 0;
};

// Solution 1: resample features with the graph-distance kNN, rewire edges
// with the feature kNN. Solution 2: graph-distance kNN for both.
BootstrapConfig solution1_config(int k = 20, std::uint64_t seed = 0);
BootstrapConfig solution2_config(int k = 20, std::uint64_t seed = 0);

// Each row of the result is drawn uniformly from the node's candidate set
// {own row} ∪ {kNN rows}; an empty kNN list keeps the node's own row.
Eigen::MatrixXd resample_features(const Graph& g, const KnnGraph& knn,
                                  std::uint64_t seed);

// Stem-matching edge resampler. The stem multiset starts with deg(v) copies
// of each node; each round pops a uniform stem u, samples a partner v from
// the neighbors of u's kNN peers (weight = how many peers are adjacent to v,
// restricted to nodes with stems left), consumes v's stem and adds {u, v}.
// Self-loops and duplicates consume their stems without adding an edge, and
// a stem with no candidates is discarded, so |E'| <= |E|.
std::vector<Edge> rewire_edges(const Graph& g, const KnnGraph& knn,
                               std::uint64_t seed);

// Same stem loop, but candidates for u are the nodes reachable in exactly
// two hops, weighted by the number of 2-hop paths (the entries of A^2).
std::vector<Edge> rewire_edges_approx(const Graph& g, std::uint64_t seed);

// Origin-mapped variants backing the marginal bootstrap: replica node j
// plays the role of origins[j]. A candidate origin with c replicas
// contributes c candidate stems. origins = identity reproduces the
// conditional versions bit-for-bit.
Eigen::MatrixXd resample_features_from_origins(const Graph& g,
                                               const KnnGraph& knn,
                                               const std::vector<int>& origins,
                                               std::uint64_t seed);
std::vector<Edge> rewire_edges_from_origins(const Graph& g,
                                            const KnnGraph& knn,
                                            const std::vector<int>& origins,
                                            std::uint64_t seed);
std::vector<Edge> rewire_edges_approx_from_origins(
    const Graph& g, const std::vector<int>& origins, std::uint64_t seed);

// Number of 2-hop paths between distinct nodes: sorted (neighbor, count)
// rows of A^2 with the diagonal removed.
std::vector<std::vector<std::pair<int, int>>> two_hop_counts(const Graph& g);

Graph bootstrap_conditional(
    const Graph& g, const BootstrapConfig& cfg,
    const std::optional<Eigen::VectorXd>& latents = std::nullopt);
Graph bootstrap_marginal(
    const Graph& g, const BootstrapConfig& cfg,
    const std::optional<Eigen::VectorXd>& latents = std::nullopt);

// Replica i uses the derived seed derive(cfg.seed, i). workers <= 0 picks
// LOBSTUR_THREADS or the hardware concurrency.
std::vector<Graph> make_replicas(
    const Graph& g, int count, const BootstrapConfig& cfg,
    const std::optional<Eigen::VectorXd>& latents = std::nullopt,
    int workers = 0);

// Baseline comparators; both keep the node count (dropped nodes are
// isolated, not removed).
Graph edge_drop(const Graph& g, double rate, std::uint64_t seed);
Graph node_drop(const Graph& g, double rate, std::uint64_t seed);

struct PointGraphBuilder {
  enum class Kind { Knn, Radius };
  Kind kind = Kind::Knn;
  int k = 10;
  double radius = 1.0;
};

// Square-cell shuffle of 2-d coordinates: cells of side grid_size tile the
// bounding box, a uniform permutation swaps cell contents, points keep
// their within-cell offsets.
Eigen::MatrixXd block_shuffle(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                              double grid_size, std::uint64_t seed);
Graph build_point_graph(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                        const PointGraphBuilder& builder);
Graph block_bootstrap(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                      double grid_size, const PointGraphBuilder& builder,
                      std::uint64_t seed);

// Rows scaled by sqrt(|eigenvalue|) of the top-d adjacency eigenpairs by
// magnitude.
Eigen::MatrixXd adjacency_spectral_embedding(const Graph& g, int d);

// Latent-position resampling: bootstrap rows of the spectral embedding,
// connect pairs with probability clip(<H_i, H_j>, 0, 1), and copy features
// from a uniformly chosen member of each new node's k nearest latent
// neighbors.
Graph network_bootstrap(const Graph& g, int d, int k, std::uint64_t seed);

}  // namespace lobstur
