#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace lobstur {

// Result of the canonical-correlation alignment between two embeddings of
// the same nodes. correlations holds the canonical correlations in
// descending order; alignment is the Frobenius distance between the two
// embeddings after their whitened canonical maps. With ridge = 0 the
// identity alignment^2 = 2 n sum_k (1 - rho_k) is exact.
struct CcaResult {
  Eigen::VectorXd correlations;
  double alignment = 0.0;
  int r = 0;
  double ridge = 0.0;
};

// Columns are mean-centered and covariances normalized by 1/n. r == 0 picks
// min(p_a, p_b); ridge < 0 picks the default 1e-6 * trace(cov)/p (averaged
// over the two sides). ridge = 0 demands full-rank covariances.
CcaResult cca_alignment(const Eigen::Ref<const Eigen::MatrixXd>& Ha,
                        const Eigen::Ref<const Eigen::MatrixXd>& Hb, int r = 0,
                        double ridge = -1.0);

// ||H||_F^2 / sigma_1^2, in [1, min(n, p)] for nonzero H.
double stable_rank(const Eigen::Ref<const Eigen::MatrixXd>& H);

// exp of the Shannon entropy of the normalized singular values; eps keeps
// the computation stable and the probabilities are renormalized after
// adding it.
double rank_me(const Eigen::Ref<const Eigen::MatrixXd>& H,
               double eps = 1e-12);

// max_i ||U_i||^2 * n / p_eff over the reduced left singular matrix, where
// p_eff counts singular values above 1e-12 * sigma_1.
double coherence(const Eigen::Ref<const Eigen::MatrixXd>& H);

// sigma_1 / sigma_p over the p singular values; throws on rank-deficient
// input instead of returning infinity.
double pseudo_condition(const Eigen::Ref<const Eigen::MatrixXd>& H);

// How clustered the row-normalized embeddings are relative to uniform
// directions on the sphere: 1 for identical rows, ~0 for uniform rows.
// Uses the squared Frobenius norm of the normalized Gram matrix.
double self_cluster(const Eigen::Ref<const Eigen::MatrixXd>& H);

// Mean per-node overlap of the m-nearest-neighbor sets of the two
// embeddings, in [0, 1].
double neighbor_kept_ratio(const Eigen::Ref<const Eigen::MatrixXd>& Ha,
                           const Eigen::Ref<const Eigen::MatrixXd>& Hb,
                           int m);

// Contingency-table label agreement. nmi uses arithmetic-mean
// normalization; both return 1 for identical partitions.
double ari(const std::vector<int>& a, const std::vector<int>& b);
double nmi(const std::vector<int>& a, const std::vector<int>& b);

// Lloyd's algorithm with k-means++ seeding, 50 restarts, tolerance 1e-6.
// Deterministic given the seed; labels lie in [0, k).
std::vector<int> kmeans(const Eigen::Ref<const Eigen::MatrixXd>& H, int k,
                        std::uint64_t seed);

}  // namespace lobstur
