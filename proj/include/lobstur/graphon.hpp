#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>

#include "lobstur/graph.hpp"
#include "lobstur/knn.hpp"

namespace lobstur {

// Symmetric kernel W: [0,1]^2 -> [0,1], evaluated before sparsity scaling.
struct GraphonKernel {
  std::string id;
  std::function<double(double, double)> w;

  double operator()(double u, double v) const { return w(u, v); }
};

// Latent-to-feature map g: [0,1] -> R^p. dim == 0 means no features.
struct FeatureMap {
  std::string id;
  int dim = 0;
  std::function<Eigen::VectorXd(double)> g;
};

// Generative model: U_i iid uniform, each pair (i, j) connected with
// probability rho * W(U_i, U_j), features X_i = g(U_i) + noise.
struct GraphonModel {
  GraphonKernel kernel;
  double sparsity = 1.0;            // rho
  bool sparsity_log_schedule = false;  // rho_n = log(n) / n overrides sparsity
  FeatureMap feature_map;
  double noise_sigma = 0.0;
};

// Validates the kernel on a 101x101 grid: symmetry and effective values in
// [0, 1]. Throws std::invalid_argument on violation.
GraphonModel make_graphon_model(GraphonKernel kernel, double sparsity,
                                FeatureMap feature_map, double noise_sigma,
                                bool sparsity_log_schedule = false);

GraphonKernel constant_kernel(double c);
GraphonKernel localized_kernel(double band = 0.01);  // 1{|u - v| < band}
GraphonKernel structured_kernel();                   // 1 - |u - v|
GraphonKernel cosine_kernel(double eta);  // (1 + cos(eta pi (u - v))) / 2
GraphonKernel two_block_kernel(double p_in, double p_out);

FeatureMap no_features();
FeatureMap linear_feature_map(double scale = 5.0);   // g(u) = scale * u
FeatureMap sine_feature_map(double freq = 10.0);     // g(u) = sin(freq * u)
FeatureMap harmonic_feature_map(int dim);            // u plus sin/cos harmonics

// Preset scenarios (all with rho = 0.01, noise sd 0.1):
//   1: localized kernel, linear features      2: structured kernel, sine features
//   3: structured kernel, linear features     4: localized kernel, sine features
GraphonModel scenario(int id);
GraphonModel cosine_scenario(double eta);

// Two-community model used as a tuning benchmark; rho = 1.
GraphonModel two_block_model(double p_in = 0.15, double p_out = 0.02,
                             int feature_dim = 12, double noise_sigma = 0.1);

double effective_sparsity(const GraphonModel& model, int n);

struct GraphonSample {
  Graph graph;
  Eigen::VectorXd latents;
};

// Deterministic given (model, n, seed); any pair's edge indicator comes from
// its own substream, so generation order is irrelevant.
GraphonSample sample_graphon(const GraphonModel& model, int n,
                             std::uint64_t seed);

// Neighborhood-average estimate of the edge probability between i and j:
// the fraction of i's kNN peers adjacent to j.
double estimate_edge_probability(const Graph& g, const KnnGraph& knn, int i,
                                 int j);

}  // namespace lobstur
