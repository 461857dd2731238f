#include "lobstur/knn.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>

namespace lobstur {

namespace {

void check_k(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
}

// sort (distance, id) pairs and keep the k nearest ids
std::vector<int> take_k(std::vector<std::pair<double, int>>& cand, int k) {
  std::sort(cand.begin(), cand.end());
  const std::size_t m = std::min<std::size_t>(cand.size(), k);
  std::vector<int> out(m);
  for (std::size_t t = 0; t < m; ++t) out[t] = cand[t].second;
  return out;
}

}  // namespace

KnnGraph shortest_path_knn(const Graph& g, int k) {
  check_k(k);
  if (g.n < 2) throw std::invalid_argument("graph must have at least 2 nodes");
  const auto adj = adjacency_lists(g);

  KnnGraph out{k, std::vector<std::vector<int>>(g.n),
               KnnSource::GraphShortestPath};
  std::vector<int> dist(g.n);
  std::deque<int> queue;
  for (int s = 0; s < g.n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    std::vector<std::pair<double, int>> cand;
    for (int j = 0; j < g.n; ++j)
      if (dist[j] > 0) cand.emplace_back(static_cast<double>(dist[j]), j);
    out.lists[s] = take_k(cand, k);
  }
  return out;
}

KnnGraph jaccard_knn(const Graph& g, int k) {
  check_k(k);
  const auto adj = adjacency_lists(g);

  // closed neighborhoods, sorted
  std::vector<std::vector<int>> closed(g.n);
  for (int i = 0; i < g.n; ++i) {
    closed[i] = adj[i];
    closed[i].insert(
        std::lower_bound(closed[i].begin(), closed[i].end(), i), i);
  }

  KnnGraph out{k, std::vector<std::vector<int>>(g.n), KnnSource::GraphJaccard};
  std::vector<char> seen(g.n, 0);
  for (int i = 0; i < g.n; ++i) {
    // candidates share at least one member of closed[i]
    std::vector<int> cand_ids;
    for (int x : closed[i])
      for (int j : closed[x])
        if (j != i && !seen[j]) {
          seen[j] = 1;
          cand_ids.push_back(j);
        }
    for (int j : cand_ids) seen[j] = 0;

    struct Scored {
      long long inter, uni;
      int id;
    };
    std::vector<Scored> scored;
    scored.reserve(cand_ids.size());
    for (int j : cand_ids) {
      long long inter = 0;
      const auto& a = closed[i];
      const auto& b = closed[j];
      std::size_t p = 0, q = 0;
      while (p < a.size() && q < b.size()) {
        if (a[p] < b[q])
          ++p;
        else if (a[p] > b[q])
          ++q;
        else {
          ++inter;
          ++p;
          ++q;
        }
      }
      const long long uni =
          static_cast<long long>(a.size() + b.size()) - inter;
      scored.push_back({inter, uni, j});
    }
    // higher similarity first; exact fraction comparison, ties by id
    std::sort(scored.begin(), scored.end(),
              [](const Scored& a, const Scored& b) {
                const long long lhs = a.inter * b.uni;
                const long long rhs = b.inter * a.uni;
                if (lhs != rhs) return lhs > rhs;
                return a.id < b.id;
              });
    const std::size_t m = std::min<std::size_t>(scored.size(), k);
    out.lists[i].resize(m);
    for (std::size_t t = 0; t < m; ++t) out.lists[i][t] = scored[t].id;
  }
  return out;
}

KnnGraph feature_knn(const Eigen::Ref<const Eigen::MatrixXd>& X, int k) {
  check_k(k);
  const int n = static_cast<int>(X.rows());
  if (n < 2) throw std::invalid_argument("need at least 2 rows");
  if (k > n - 1) throw std::invalid_argument("k must be <= n - 1");
  if (!X.allFinite())
    throw std::invalid_argument("feature matrix contains non-finite values");

  KnnGraph out{k, std::vector<std::vector<int>>(n),
               KnnSource::FeatureEuclidean};
  std::vector<std::pair<double, int>> cand;
  for (int i = 0; i < n; ++i) {
    cand.clear();
    cand.reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) cand.emplace_back((X.row(i) - X.row(j)).squaredNorm(), j);
    out.lists[i] = take_k(cand, k);
  }
  return out;
}

KnnGraph latent_knn(const Eigen::Ref<const Eigen::VectorXd>& latents, int k) {
  check_k(k);
  const int n = static_cast<int>(latents.size());
  if (n < 2) throw std::invalid_argument("need at least 2 latents");
  if (k > n - 1) throw std::invalid_argument("k must be <= n - 1");

  KnnGraph out{k, std::vector<std::vector<int>>(n), KnnSource::OracleLatent};
  std::vector<std::pair<double, int>> cand;
  for (int i = 0; i < n; ++i) {
    cand.clear();
    cand.reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) cand.emplace_back(std::abs(latents[i] - latents[j]), j);
    out.lists[i] = take_k(cand, k);
  }
  return out;
}

}  // namespace lobstur
