#include "lobstur/bootstrap.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "lobstur/parallel.hpp"
#include "lobstur/rng.hpp"

namespace lobstur {

namespace {

std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

std::vector<int> identity_origins(int n) {
  std::vector<int> origins(n);
  std::iota(origins.begin(), origins.end(), 0);
  return origins;
}

void check_origins(const std::vector<int>& origins, int n) {
  for (int o : origins)
    if (o < 0 || o >= n)
      throw std::invalid_argument("origin id outside [0, n)");
}

// Multiset of stems with O(1) uniform pop and O(deg) targeted removal.
class StemBag {
 public:
  explicit StemBag(const std::vector<int>& counts)
      : count_(counts), where_(counts.size()) {
    for (std::size_t v = 0; v < counts.size(); ++v)
      for (int c = 0; c < counts[v]; ++c) {
        where_[v].push_back(bag_.size());
        bag_.push_back(static_cast<int>(v));
      }
  }

  bool empty() const { return bag_.empty(); }
  std::size_t size() const { return bag_.size(); }
  int count(int v) const { return count_[v]; }

  int pop_random(rng::SplitMix64& stream) {
    const std::size_t idx = stream.below(bag_.size());
    const int v = bag_[idx];
    remove_at(idx);
    return v;
  }

  void remove_one(int v) { remove_at(where_[v].back()); }

 private:
  void remove_at(std::size_t idx) {
    const int v = bag_[idx];
    auto& wv = where_[v];
    *std::find(wv.begin(), wv.end(), idx) = wv.back();
    wv.pop_back();
    --count_[v];

    const std::size_t last = bag_.size() - 1;
    if (idx != last) {
      const int moved = bag_[last];
      bag_[idx] = moved;
      auto& wm = where_[moved];
      *std::find(wm.begin(), wm.end(), last) = idx;
    }
    bag_.pop_back();
  }

  std::vector<int> bag_;
  std::vector<int> count_;
  std::vector<std::vector<std::size_t>> where_;
};

// Shared stem loop. candidates_for(origin_of_u) fills (weight, touched)
// over replica nodes with stems remaining; weights are positive integers.
template <typename CandidateFn>
std::vector<Edge> stem_rewire(int n_origin, const std::vector<int>& origins,
                              const std::vector<int>& origin_degrees,
                              std::uint64_t seed, CandidateFn candidates_for) {
  check_origins(origins, n_origin);
  const int n_replica = static_cast<int>(origins.size());

  std::vector<int> stems(n_replica);
  for (int j = 0; j < n_replica; ++j) stems[j] = origin_degrees[origins[j]];
  StemBag bag(stems);

  rng::SplitMix64 stream(rng::derive(seed, rng::tag::kRewire));
  std::vector<std::uint64_t> weight(n_replica, 0);
  std::vector<int> touched;
  std::unordered_set<std::uint64_t> present;
  std::vector<Edge> edges;

  while (!bag.empty()) {
    const int u = bag.pop_random(stream);
    candidates_for(origins[u], bag, weight, touched);

    std::uint64_t total = 0;
    for (int r : touched) total += weight[r];
    if (total == 0) {
      touched.clear();
      continue;  // stem discarded
    }

    std::uint64_t pick = stream.below(total);
    int v = touched.back();
    for (int r : touched) {
      if (pick < weight[r]) {
        v = r;
        break;
      }
      pick -= weight[r];
    }
    for (int r : touched) weight[r] = 0;
    touched.clear();

    bag.remove_one(v);
    if (u == v) continue;  // self-loop: pair discarded
    if (present.insert(edge_key(u, v)).second)
      edges.emplace_back(std::min(u, v), std::max(u, v));
    // duplicate: pair discarded
  }
  return edges;
}

}  // namespace

BootstrapConfig solution1_config(int k, std::uint64_t seed) {
  return {BootstrapMode::Conditional, KnnSource::GraphShortestPath,
          KnnSource::FeatureEuclidean, k, Rewiring::Exact, seed};
}

BootstrapConfig solution2_config(int k, std::uint64_t seed) {
  return {BootstrapMode::Conditional, KnnSource::GraphShortestPath,
          KnnSource::GraphShortestPath, k, Rewiring::Exact, seed};
}

Eigen::MatrixXd resample_features_from_origins(const Graph& g,
                                               const KnnGraph& knn,
                                               const std::vector<int>& origins,
                                               std::uint64_t seed) {
  if (!g.has_features())
    throw std::invalid_argument("graph has no features to resample");
  if (knn.lists.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("kNN graph does not cover the node set");
  check_origins(origins, g.n);

  const Eigen::MatrixXd& X = *g.features;
  const std::uint64_t key = rng::derive(seed, rng::tag::kResampleFeatures);

  Eigen::MatrixXd out(origins.size(), X.cols());
  for (std::size_t j = 0; j < origins.size(); ++j) {
    const int o = origins[j];
    const auto& list = knn.lists[o];
    rng::SplitMix64 stream(rng::derive(key, j));
    const std::uint64_t pick = stream.below(list.size() + 1);
    out.row(j) = pick == 0 ? X.row(o) : X.row(list[pick - 1]);
  }
  return out;
}

Eigen::MatrixXd resample_features(const Graph& g, const KnnGraph& knn,
                                  std::uint64_t seed) {
  return resample_features_from_origins(g, knn, identity_origins(g.n), seed);
}

std::vector<Edge> rewire_edges_from_origins(const Graph& g,
                                            const KnnGraph& knn,
                                            const std::vector<int>& origins,
                                            std::uint64_t seed) {
  if (knn.lists.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("kNN graph does not cover the node set");
  const auto adj = adjacency_lists(g);
  const auto deg = degrees(g);

  std::vector<std::vector<int>> replicas_of(g.n);
  for (std::size_t j = 0; j < origins.size(); ++j)
    replicas_of[origins[j]].push_back(static_cast<int>(j));

  return stem_rewire(
      g.n, origins, deg, seed,
      [&](int origin_u, const StemBag& bag, std::vector<std::uint64_t>& weight,
          std::vector<int>& touched) {
        for (int m : knn.lists[origin_u])
          for (int x : adj[m])
            for (int r : replicas_of[x])
              if (bag.count(r) > 0) {
                if (weight[r] == 0) touched.push_back(r);
                ++weight[r];
              }
      });
}

std::vector<Edge> rewire_edges(const Graph& g, const KnnGraph& knn,
                               std::uint64_t seed) {
  return rewire_edges_from_origins(g, knn, identity_origins(g.n), seed);
}

std::vector<std::vector<std::pair<int, int>>> two_hop_counts(const Graph& g) {
  const auto adj = adjacency_lists(g);
  std::vector<std::vector<std::pair<int, int>>> out(g.n);
  std::vector<int> count(g.n, 0);
  std::vector<int> touched;
  for (int u = 0; u < g.n; ++u) {
    for (int m : adj[u])
      for (int x : adj[m]) {
        if (x == u) continue;
        if (count[x] == 0) touched.push_back(x);
        ++count[x];
      }
    std::sort(touched.begin(), touched.end());
    out[u].reserve(touched.size());
    for (int x : touched) {
      out[u].emplace_back(x, count[x]);
      count[x] = 0;
    }
    touched.clear();
  }
  return out;
}

std::vector<Edge> rewire_edges_approx_from_origins(
    const Graph& g, const std::vector<int>& origins, std::uint64_t seed) {
  const auto deg = degrees(g);
  const auto a2 = two_hop_counts(g);

  std::vector<std::vector<int>> replicas_of(g.n);
  for (std::size_t j = 0; j < origins.size(); ++j)
    replicas_of[origins[j]].push_back(static_cast<int>(j));

  return stem_rewire(
      g.n, origins, deg, seed,
      [&](int origin_u, const StemBag& bag, std::vector<std::uint64_t>& weight,
          std::vector<int>& touched) {
        for (const auto& [x, paths] : a2[origin_u])
          for (int r : replicas_of[x])
            if (bag.count(r) > 0) {
              if (weight[r] == 0) touched.push_back(r);
              weight[r] += static_cast<std::uint64_t>(paths);
            }
      });
}

std::vector<Edge> rewire_edges_approx(const Graph& g, std::uint64_t seed) {
  return rewire_edges_approx_from_origins(g, identity_origins(g.n), seed);
}

namespace {

KnnGraph build_knn(const Graph& g, KnnSource source, int k,
                   const std::optional<Eigen::VectorXd>& latents) {
  switch (source) {
    case KnnSource::GraphShortestPath:
      return shortest_path_knn(g, k);
    case KnnSource::GraphJaccard:
      return jaccard_knn(g, k);
    case KnnSource::FeatureEuclidean:
      if (!g.has_features())
        throw std::invalid_argument(
            "feature kNN requested but the graph has no features");
      return feature_knn(*g.features, k);
    case KnnSource::OracleLatent:
      if (!latents)
        throw std::invalid_argument(
            "oracle-latent kNN requested but no latents supplied");
      return latent_knn(*latents, k);
  }
  throw std::invalid_argument("unknown kNN source");
}

Graph bootstrap_with_origins(const Graph& g, const BootstrapConfig& cfg,
                             const std::optional<Eigen::VectorXd>& latents,
                             const std::vector<int>& origins) {
  const std::uint64_t feature_seed =
      rng::derive(cfg.seed, rng::tag::kResampleFeatures);
  const std::uint64_t edge_seed = rng::derive(cfg.seed, rng::tag::kRewire);

  std::vector<Edge> edges;
  if (cfg.rewiring == Rewiring::Exact) {
    const KnnGraph knn_e = build_knn(g, cfg.knn_for_edges, cfg.k, latents);
    edges = rewire_edges_from_origins(g, knn_e, origins, edge_seed);
  } else {
    edges = rewire_edges_approx_from_origins(g, origins, edge_seed);
  }

  std::optional<Eigen::MatrixXd> features;
  if (g.has_features()) {
    const KnnGraph knn_f = build_knn(g, cfg.knn_for_features, cfg.k, latents);
    features =
        resample_features_from_origins(g, knn_f, origins, feature_seed);
  }
  return make_graph(static_cast<int>(origins.size()), std::move(edges),
                    std::move(features));
}

}  // namespace

Graph bootstrap_conditional(const Graph& g, const BootstrapConfig& cfg,
                            const std::optional<Eigen::VectorXd>& latents) {
  return bootstrap_with_origins(g, cfg, latents, identity_origins(g.n));
}

Graph bootstrap_marginal(const Graph& g, const BootstrapConfig& cfg,
                         const std::optional<Eigen::VectorXd>& latents) {
  rng::SplitMix64 stream(rng::derive(cfg.seed, rng::tag::kOrigins));
  std::vector<int> origins(g.n);
  for (int j = 0; j < g.n; ++j)
    origins[j] = static_cast<int>(stream.below(g.n));
  return bootstrap_with_origins(g, cfg, latents, origins);
}

std::vector<Graph> make_replicas(const Graph& g, int count,
                                 const BootstrapConfig& cfg,
                                 const std::optional<Eigen::VectorXd>& latents,
                                 int workers) {
  if (count < 1) throw std::invalid_argument("replica count must be >= 1");

  // the kNN construction is deterministic; do it once up front so the
  // parallel replica loop only runs the samplers
  std::optional<KnnGraph> knn_e, knn_f;
  if (cfg.rewiring == Rewiring::Exact)
    knn_e = build_knn(g, cfg.knn_for_edges, cfg.k, latents);
  if (g.has_features())
    knn_f = build_knn(g, cfg.knn_for_features, cfg.k, latents);

  std::vector<Graph> replicas(count);
  detail::parallel_for(count, workers, [&](std::size_t i) {
    const std::uint64_t seed = rng::derive(cfg.seed, i);
    std::vector<int> origins;
    if (cfg.mode == BootstrapMode::Marginal) {
      rng::SplitMix64 stream(rng::derive(seed, rng::tag::kOrigins));
      origins.resize(g.n);
      for (int j = 0; j < g.n; ++j)
        origins[j] = static_cast<int>(stream.below(g.n));
    } else {
      origins = identity_origins(g.n);
    }

    std::vector<Edge> edges;
    if (cfg.rewiring == Rewiring::Exact)
      edges = rewire_edges_from_origins(g, *knn_e, origins,
                                        rng::derive(seed, rng::tag::kRewire));
    else
      edges = rewire_edges_approx_from_origins(
          g, origins, rng::derive(seed, rng::tag::kRewire));

    std::optional<Eigen::MatrixXd> features;
    if (knn_f)
      features = resample_features_from_origins(
          g, *knn_f, origins, rng::derive(seed, rng::tag::kResampleFeatures));
    replicas[i] = make_graph(static_cast<int>(origins.size()),
                             std::move(edges), std::move(features));
  });
  return replicas;
}

Graph edge_drop(const Graph& g, double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0)
    throw std::invalid_argument("drop rate must lie in [0, 1]");
  std::vector<Edge> edges = g.edges;
  const std::size_t drop =
      static_cast<std::size_t>(rate * static_cast<double>(edges.size()));
  rng::SplitMix64 stream(rng::derive(seed, rng::tag::kDrop));
  // partial Fisher-Yates: move `drop` uniform picks to the tail, discard
  for (std::size_t t = 0; t < drop; ++t) {
    const std::size_t remaining = edges.size() - t;
    std::swap(edges[stream.below(remaining)], edges[remaining - 1]);
  }
  edges.resize(edges.size() - drop);
  return make_graph(g.n, std::move(edges), g.features);
}

Graph node_drop(const Graph& g, double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0)
    throw std::invalid_argument("drop rate must lie in [0, 1]");
  const std::size_t drop =
      static_cast<std::size_t>(rate * static_cast<double>(g.n));
  std::vector<int> ids(g.n);
  std::iota(ids.begin(), ids.end(), 0);
  rng::SplitMix64 stream(rng::derive(seed, rng::tag::kDrop));
  std::vector<char> dropped(g.n, 0);
  for (std::size_t t = 0; t < drop; ++t) {
    const std::size_t remaining = ids.size() - t;
    const std::size_t pick = stream.below(remaining);
    std::swap(ids[pick], ids[remaining - 1]);
    dropped[ids[remaining - 1]] = 1;
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges)
    if (!dropped[e.first] && !dropped[e.second]) edges.push_back(e);
  return make_graph(g.n, std::move(edges), g.features);
}

Eigen::MatrixXd block_shuffle(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                              double grid_size, std::uint64_t seed) {
  if (grid_size <= 0.0)
    throw std::invalid_argument("grid size must be positive");
  if (coords.cols() != 2)
    throw std::invalid_argument("coordinates must be n x 2");
  if (!coords.allFinite())
    throw std::invalid_argument("coordinates contain non-finite values");
  const int n = static_cast<int>(coords.rows());
  if (n == 0) return coords;

  const double xmin = coords.col(0).minCoeff();
  const double ymin = coords.col(1).minCoeff();
  const double xmax = coords.col(0).maxCoeff();
  const double ymax = coords.col(1).maxCoeff();
  const int nx = std::max(
      1, static_cast<int>(std::ceil((xmax - xmin) / grid_size)));
  const int ny = std::max(
      1, static_cast<int>(std::ceil((ymax - ymin) / grid_size)));

  auto cell_of = [&](double x, double y) {
    const int cx = std::min(
        nx - 1, static_cast<int>(std::floor((x - xmin) / grid_size)));
    const int cy = std::min(
        ny - 1, static_cast<int>(std::floor((y - ymin) / grid_size)));
    return cy * nx + cx;
  };

  // uniform permutation of the grid cells
  std::vector<int> perm(static_cast<std::size_t>(nx) * ny);
  std::iota(perm.begin(), perm.end(), 0);
  rng::SplitMix64 stream(rng::derive(seed, rng::tag::kBlockShuffle));
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[stream.below(i)]);

  Eigen::MatrixXd out(n, 2);
  for (int i = 0; i < n; ++i) {
    const int c = cell_of(coords(i, 0), coords(i, 1));
    const int t = perm[c];
    const double ax = xmin + (c % nx) * grid_size;
    const double ay = ymin + (c / nx) * grid_size;
    const double bx = xmin + (t % nx) * grid_size;
    const double by = ymin + (t / nx) * grid_size;
    out(i, 0) = bx + (coords(i, 0) - ax);
    out(i, 1) = by + (coords(i, 1) - ay);
  }
  return out;
}

Graph build_point_graph(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                        const PointGraphBuilder& builder) {
  const int n = static_cast<int>(coords.rows());
  std::vector<Edge> edges;
  if (builder.kind == PointGraphBuilder::Kind::Knn) {
    const KnnGraph knn = feature_knn(coords, builder.k);
    for (int i = 0; i < n; ++i)
      for (int j : knn.lists[i]) edges.emplace_back(i, j);
  } else {
    if (builder.radius <= 0.0)
      throw std::invalid_argument("radius must be positive");
    const double r2 = builder.radius * builder.radius;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((coords.row(i) - coords.row(j)).squaredNorm() <= r2)
          edges.emplace_back(i, j);
  }
  return make_graph(n, std::move(edges));
}

Graph block_bootstrap(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                      double grid_size, const PointGraphBuilder& builder,
                      std::uint64_t seed) {
  return build_point_graph(block_shuffle(coords, grid_size, seed), builder);
}

Eigen::MatrixXd adjacency_spectral_embedding(const Graph& g, int d) {
  if (d < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  if (d > g.n) throw std::invalid_argument("embedding dimension exceeds n");

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& [u, v] : g.edges) {
    A(u, v) = 1.0;
    A(v, u) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("adjacency eigendecomposition failed");

  // top-d eigenpairs by |eigenvalue|; ties resolved by index for determinism
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  const auto& vals = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(vals[a]) > std::abs(vals[b]);
  });

  Eigen::MatrixXd H(g.n, d);
  for (int t = 0; t < d; ++t)
    H.col(t) =
        es.eigenvectors().col(order[t]) * std::sqrt(std::abs(vals[order[t]]));
  return H;
}

Graph network_bootstrap(const Graph& g, int d, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("neighborhood size must be >= 1");
  if (k > g.n) throw std::invalid_argument("neighborhood size exceeds n");
  const Eigen::MatrixXd H = adjacency_spectral_embedding(g, d);
  const int n = g.n;

  rng::SplitMix64 idx_stream(rng::derive(seed, rng::tag::kNetworkIndices));
  std::vector<int> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = static_cast<int>(idx_stream.below(n));

  const std::uint64_t edge_key_ = rng::derive(seed, rng::tag::kNetworkEdges);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double p =
          std::clamp(H.row(idx[i]).dot(H.row(idx[j])), 0.0, 1.0);
      if (p <= 0.0) continue;
      rng::SplitMix64 stream(rng::derive(edge_key_, i, j));
      if (stream.bernoulli(p)) edges.emplace_back(i, j);
    }

  std::optional<Eigen::MatrixXd> features;
  if (g.has_features()) {
    const std::uint64_t feat_key =
        rng::derive(seed, rng::tag::kNetworkFeatures);
    Eigen::MatrixXd X(n, g.features->cols());
    std::vector<std::pair<double, int>> cand(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        cand[j] = {(H.row(idx[i]) - H.row(j)).squaredNorm(), j};
      std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
      rng::SplitMix64 stream(rng::derive(feat_key, i));
      X.row(i) = g.features->row(cand[stream.below(k)].second);
    }
    features = std::move(X);
  }
  return make_graph(n, std::move(edges), std::move(features));
}

}  // namespace lobstur
