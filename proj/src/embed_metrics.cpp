#include "lobstur/embed_metrics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "lobstur/rng.hpp"

namespace lobstur {

namespace {

void check_nonzero(const Eigen::Ref<const Eigen::MatrixXd>& H) {
  if (H.rows() == 0 || H.cols() == 0)
    throw std::invalid_argument("empty matrix");
  if (!H.allFinite())
    throw std::invalid_argument("matrix contains non-finite values");
  if (H.squaredNorm() == 0.0) throw std::domain_error("zero matrix");
}

Eigen::VectorXd singular_values(const Eigen::Ref<const Eigen::MatrixXd>& H) {
  return Eigen::BDCSVD<Eigen::MatrixXd>(H).singularValues();
}

// Symmetric inverse square root of cov + ridge I. Eigenvalues are floored
// at max(ridge, 1e-12 * lambda_max); a rank-deficient covariance with
// ridge = 0 is an error rather than a silent regularization.
Eigen::MatrixXd inv_sqrt_psd(const Eigen::MatrixXd& cov, double ridge) {
  Eigen::MatrixXd reg = cov;
  reg.diagonal().array() += ridge;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reg);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("covariance eigendecomposition failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double lam_max = lam.maxCoeff();
  if (lam_max <= 0.0)
    throw std::domain_error("covariance is zero; add ridge regularization");
  const double floor = std::max(ridge, 1e-12 * lam_max);
  if (ridge <= 0.0 && lam.minCoeff() < 1e-12 * lam_max)
    throw std::domain_error(
        "covariance is rank-deficient; use ridge > 0");
  Eigen::VectorXd d(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    d[i] = 1.0 / std::sqrt(std::max(lam[i], floor));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

CcaResult cca_alignment(const Eigen::Ref<const Eigen::MatrixXd>& Ha,
                        const Eigen::Ref<const Eigen::MatrixXd>& Hb, int r,
                        double ridge) {
  const Eigen::Index n = Ha.rows();
  if (n != Hb.rows())
    throw std::invalid_argument("embeddings must have the same row count");
  if (n < 2) throw std::invalid_argument("need at least 2 rows");
  if (Ha.cols() < 1 || Hb.cols() < 1)
    throw std::invalid_argument("embeddings must have at least 1 column");
  if (!Ha.allFinite() || !Hb.allFinite())
    throw std::invalid_argument("embeddings contain non-finite values");

  const int pa = static_cast<int>(Ha.cols());
  const int pb = static_cast<int>(Hb.cols());
  const int r_max = std::min(pa, pb);
  const int r_used = r == 0 ? r_max : r;
  if (r_used < 1 || r_used > r_max)
    throw std::invalid_argument("r must lie in [1, min(p_a, p_b)]");

  const Eigen::MatrixXd A = Ha.rowwise() - Ha.colwise().mean();
  const Eigen::MatrixXd B = Hb.rowwise() - Hb.colwise().mean();
  const Eigen::MatrixXd cov_a = A.transpose() * A / static_cast<double>(n);
  const Eigen::MatrixXd cov_b = B.transpose() * B / static_cast<double>(n);
  const Eigen::MatrixXd cov_ab = A.transpose() * B / static_cast<double>(n);

  if (ridge < 0.0)
    ridge = 1e-6 * 0.5 * (cov_a.trace() / pa + cov_b.trace() / pb);

  const Eigen::MatrixXd wa = inv_sqrt_psd(cov_a, ridge);
  const Eigen::MatrixXd wb = inv_sqrt_psd(cov_b, ridge);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(wa * cov_ab * wb,
                                        Eigen::ComputeFullU |
                                            Eigen::ComputeFullV);
  Eigen::VectorXd rho = svd.singularValues().head(r_used);
  for (Eigen::Index i = 0; i < rho.size(); ++i)
    rho[i] = std::clamp(rho[i], 0.0, 1.0);

  const Eigen::MatrixXd u_hat = wa * svd.matrixU().leftCols(r_used);
  const Eigen::MatrixXd v_hat = wb * svd.matrixV().leftCols(r_used);
  const double alignment = (A * u_hat - B * v_hat).norm();

  return {std::move(rho), alignment, r_used, ridge};
}

double stable_rank(const Eigen::Ref<const Eigen::MatrixXd>& H) {
  check_nonzero(H);
  const Eigen::VectorXd sv = singular_values(H);
  return H.squaredNorm() / (sv[0] * sv[0]);
}

double rank_me(const Eigen::Ref<const Eigen::MatrixXd>& H, double eps) {
  check_nonzero(H);
  if (eps < 0.0) throw std::invalid_argument("eps must be non-negative");
  const Eigen::VectorXd sv = singular_values(H);
  const double total = sv.sum();
  double norm = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) norm += sv[i] / total + eps;
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double p = (sv[i] / total + eps) / norm;
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

double coherence(const Eigen::Ref<const Eigen::MatrixXd>& H) {
  check_nonzero(H);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  int p_eff = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-12 * sv[0]) ++p_eff;
  const auto u = svd.matrixU().leftCols(p_eff);
  const double max_row = u.rowwise().squaredNorm().maxCoeff();
  return max_row * static_cast<double>(H.rows()) / p_eff;
}

double pseudo_condition(const Eigen::Ref<const Eigen::MatrixXd>& H) {
  check_nonzero(H);
  if (H.rows() < H.cols())
    throw std::invalid_argument("need at least as many rows as columns");
  const Eigen::VectorXd sv = singular_values(H);
  const double smallest = sv[sv.size() - 1];
  if (smallest <= 1e-15 * sv[0])
    throw std::domain_error("matrix is rank-deficient");
  return sv[0] / smallest;
}

double self_cluster(const Eigen::Ref<const Eigen::MatrixXd>& H) {
  check_nonzero(H);
  const Eigen::Index n = H.rows();
  const Eigen::Index p = H.cols();
  if (n < 2) throw std::invalid_argument("need at least 2 rows");
  if (p < 2)
    throw std::domain_error(
        "self_cluster is undefined for 1-dimensional embeddings");

  Eigen::MatrixXd normalized(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = H.row(i).norm();
    if (norm == 0.0) throw std::domain_error("zero row in embedding");
    normalized.row(i) = H.row(i) / norm;
  }
  // ||N N^T||_F^2 == ||N^T N||_F^2; the p x p side is cheaper
  const Eigen::MatrixXd gram = normalized.transpose() * normalized;
  const double s = gram.squaredNorm();
  const double nd = static_cast<double>(n);
  const double sphere = nd * (nd - 1.0) / static_cast<double>(p);
  return (s - nd - sphere) / (nd * nd - nd - sphere);
}

double neighbor_kept_ratio(const Eigen::Ref<const Eigen::MatrixXd>& Ha,
                           const Eigen::Ref<const Eigen::MatrixXd>& Hb,
                           int m) {
  const Eigen::Index n = Ha.rows();
  if (n != Hb.rows())
    throw std::invalid_argument("embeddings must have the same row count");
  if (m < 1 || m > n - 1)
    throw std::invalid_argument("m must lie in [1, n - 1]");

  auto neighbor_sets = [&](const Eigen::Ref<const Eigen::MatrixXd>& H) {
    std::vector<std::vector<int>> result(n);
    std::vector<std::pair<double, int>> cand(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      int t = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i)
          cand[t++] = {(H.row(i) - H.row(j)).squaredNorm(),
                       static_cast<int>(j)};
      std::partial_sort(cand.begin(), cand.begin() + m, cand.end());
      result[i].resize(m);
      for (int s = 0; s < m; ++s) result[i][s] = cand[s].second;
      std::sort(result[i].begin(), result[i].end());
    }
    return result;
  };

  const auto na = neighbor_sets(Ha);
  const auto nb = neighbor_sets(Hb);
  double total = 0.0;
  std::vector<int> overlap;
  for (Eigen::Index i = 0; i < n; ++i) {
    overlap.clear();
    std::set_intersection(na[i].begin(), na[i].end(), nb[i].begin(),
                          nb[i].end(), std::back_inserter(overlap));
    total += static_cast<double>(overlap.size()) / m;
  }
  return total / static_cast<double>(n);
}

namespace {

struct Contingency {
  std::map<std::pair<int, int>, long long> cells;
  std::map<int, long long> rows, cols;
  long long n = 0;
};

Contingency contingency(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("label vectors must have equal length");
  if (a.size() < 2)
    throw std::invalid_argument("need at least 2 labels");
  Contingency c;
  c.n = static_cast<long long>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++c.cells[{a[i], b[i]}];
    ++c.rows[a[i]];
    ++c.cols[b[i]];
  }
  return c;
}

double comb2(long long x) { return 0.5 * static_cast<double>(x) * (x - 1); }

}  // namespace

double ari(const std::vector<int>& a, const std::vector<int>& b) {
  const Contingency c = contingency(a, b);
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, v] : c.cells) sum_cells += comb2(v);
  for (const auto& [key, v] : c.rows) sum_rows += comb2(v);
  for (const auto& [key, v] : c.cols) sum_cols += comb2(v);
  const double expected = sum_rows * sum_cols / comb2(c.n);
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both partitions degenerate
  return (sum_cells - expected) / (max_index - expected);
}

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
  const Contingency c = contingency(a, b);
  const double n = static_cast<double>(c.n);
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (const auto& [key, v] : c.rows) {
    const double p = v / n;
    ha -= p * std::log(p);
  }
  for (const auto& [key, v] : c.cols) {
    const double p = v / n;
    hb -= p * std::log(p);
  }
  for (const auto& [key, v] : c.cells) {
    const double p = v / n;
    const double pa = c.rows.at(key.first) / n;
    const double pb = c.cols.at(key.second) / n;
    mi += p * std::log(p / (pa * pb));
  }
  if (ha + hb == 0.0) return 1.0;  // both partitions are single clusters
  return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

std::vector<int> kmeans(const Eigen::Ref<const Eigen::MatrixXd>& H, int k,
                        std::uint64_t seed) {
  const int n = static_cast<int>(H.rows());
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > n) throw std::invalid_argument("k must not exceed the row count");
  if (!H.allFinite())
    throw std::invalid_argument("matrix contains non-finite values");

  constexpr int kRestarts = 50;
  constexpr int kMaxIters = 300;
  constexpr double kTolSq = 1e-6 * 1e-6;

  std::vector<int> best_labels;
  double best_inertia = std::numeric_limits<double>::infinity();

  std::vector<int> labels(n);
  Eigen::VectorXd dist2(n);
  for (int restart = 0; restart < kRestarts; ++restart) {
    rng::SplitMix64 stream(rng::derive(seed, rng::tag::kKmeans, restart));

    // k-means++ seeding
    Eigen::MatrixXd centers(k, H.cols());
    centers.row(0) = H.row(stream.below(n));
    for (int i = 0; i < n; ++i)
      dist2[i] = (H.row(i) - centers.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
      const double total = dist2.sum();
      int pick;
      if (total > 0.0) {
        double target = stream.uniform() * total;
        pick = n - 1;
        for (int i = 0; i < n; ++i) {
          if (target < dist2[i]) {
            pick = i;
            break;
          }
          target -= dist2[i];
        }
      } else {
        pick = static_cast<int>(stream.below(n));
      }
      centers.row(c) = H.row(pick);
      for (int i = 0; i < n; ++i)
        dist2[i] = std::min(dist2[i],
                            (H.row(i) - centers.row(c)).squaredNorm());
    }

    // Lloyd iterations
    for (int iter = 0; iter < kMaxIters; ++iter) {
      for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int lab = 0;
        for (int c = 0; c < k; ++c) {
          const double d = (H.row(i) - centers.row(c)).squaredNorm();
          if (d < best) {
            best = d;
            lab = c;
          }
        }
        labels[i] = lab;
      }

      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, H.cols());
      std::vector<int> counts(k, 0);
      for (int i = 0; i < n; ++i) {
        sums.row(labels[i]) += H.row(i);
        ++counts[labels[i]];
      }
      // an empty cluster steals the point farthest from its center
      for (int c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        double far = -1.0;
        int far_i = 0;
        for (int i = 0; i < n; ++i) {
          if (counts[labels[i]] <= 1) continue;
          const double d = (H.row(i) - centers.row(labels[i])).squaredNorm();
          if (d > far) {
            far = d;
            far_i = i;
          }
        }
        sums.row(labels[far_i]) -= H.row(far_i);
        --counts[labels[far_i]];
        sums.row(c) = H.row(far_i);
        counts[c] = 1;
        labels[far_i] = c;
      }

      double shift = 0.0;
      for (int c = 0; c < k; ++c) {
        const Eigen::RowVectorXd updated = sums.row(c) / counts[c];
        shift = std::max(shift, (updated - centers.row(c)).squaredNorm());
        centers.row(c) = updated;
      }
      if (shift < kTolSq) break;
    }

    double inertia = 0.0;
    for (int i = 0; i < n; ++i)
      inertia += (H.row(i) - centers.row(labels[i])).squaredNorm();
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best_labels = labels;
    }
  }
  return best_labels;
}

}  // namespace lobstur
