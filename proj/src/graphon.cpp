#include "lobstur/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lobstur/rng.hpp"

namespace lobstur {

namespace {
constexpr double kPi = 3.14159265358979323846;

double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}
}  // namespace

GraphonModel make_graphon_model(GraphonKernel kernel, double sparsity,
                                FeatureMap feature_map, double noise_sigma,
                                bool sparsity_log_schedule) {
  if (!kernel.w) throw std::invalid_argument("kernel is empty");
  if (!sparsity_log_schedule && (sparsity <= 0.0 || sparsity > 1.0))
    throw std::invalid_argument("sparsity must lie in (0, 1]");
  if (noise_sigma < 0.0)
    throw std::invalid_argument("noise sigma must be non-negative");
  if (feature_map.dim < 0)
    throw std::invalid_argument("feature dimension must be non-negative");
  if (feature_map.dim > 0 && !feature_map.g)
    throw std::invalid_argument("feature map function is empty");

  const double rho = sparsity_log_schedule ? 1.0 : sparsity;
  for (int a = 0; a <= 100; ++a)
    for (int b = a; b <= 100; ++b) {
      const double u = a / 100.0;
      const double v = b / 100.0;
      const double wuv = kernel(u, v);
      if (std::abs(wuv - kernel(v, u)) > 1e-12)
        throw std::invalid_argument("kernel is not symmetric at (" +
                                    std::to_string(u) + ", " +
                                    std::to_string(v) + ")");
      const double eff = rho * wuv;
      if (!(eff >= 0.0 && eff <= 1.0))
        throw std::invalid_argument("effective kernel outside [0, 1] at (" +
                                    std::to_string(u) + ", " +
                                    std::to_string(v) + ")");
    }
  return GraphonModel{std::move(kernel), sparsity, sparsity_log_schedule,
                      std::move(feature_map), noise_sigma};
}

GraphonKernel constant_kernel(double c) {
  return {"constant(" + std::to_string(c) + ")",
          [c](double, double) { return c; }};
}

GraphonKernel localized_kernel(double band) {
  return {"localized(" + std::to_string(band) + ")",
          [band](double u, double v) {
            return std::abs(u - v) < band ? 1.0 : 0.0;
          }};
}

GraphonKernel structured_kernel() {
  return {"structured", [](double u, double v) { return 1.0 - std::abs(u - v); }};
}

GraphonKernel cosine_kernel(double eta) {
  return {"cosine(" + std::to_string(eta) + ")",
          [eta](double u, double v) {
            return (1.0 + std::cos(eta * kPi * (u - v))) / 2.0;
          }};
}

GraphonKernel two_block_kernel(double p_in, double p_out) {
  return {"two-block(" + std::to_string(p_in) + "," + std::to_string(p_out) +
              ")",
          [p_in, p_out](double u, double v) {
            return (u < 0.5) == (v < 0.5) ? p_in : p_out;
          }};
}

FeatureMap no_features() { return {"none", 0, nullptr}; }

FeatureMap linear_feature_map(double scale) {
  return {"linear(" + std::to_string(scale) + ")", 1,
          [scale](double u) { return Eigen::VectorXd::Constant(1, scale * u); }};
}

FeatureMap sine_feature_map(double freq) {
  return {"sine(" + std::to_string(freq) + ")", 1, [freq](double u) {
            return Eigen::VectorXd::Constant(1, std::sin(freq * u));
          }};
}

FeatureMap harmonic_feature_map(int dim) {
  if (dim < 1) throw std::invalid_argument("harmonic dimension must be >= 1");
  return {"harmonics(" + std::to_string(dim) + ")", dim, [dim](double u) {
            Eigen::VectorXd out(dim);
            out[0] = u;
            for (int c = 1; c < dim; ++c) {
              const int j = (c + 1) / 2;
              out[c] = (c % 2 == 1) ? std::sin(j * kPi * u)
                                    : std::cos(j * kPi * u);
            }
            return out;
          }};
}

GraphonModel scenario(int id) {
  switch (id) {
    case 1:
      return make_graphon_model(localized_kernel(), 0.01,
                                linear_feature_map(), 0.1);
    case 2:
      return make_graphon_model(structured_kernel(), 0.01, sine_feature_map(),
                                0.1);
    case 3:
      return make_graphon_model(structured_kernel(), 0.01,
                                linear_feature_map(), 0.1);
    case 4:
      return make_graphon_model(localized_kernel(), 0.01, sine_feature_map(),
                                0.1);
    default:
      throw std::invalid_argument("unknown scenario id: " +
                                  std::to_string(id));
  }
}

GraphonModel cosine_scenario(double eta) {
  return make_graphon_model(cosine_kernel(eta), 0.01, linear_feature_map(),
                            0.1);
}

GraphonModel two_block_model(double p_in, double p_out, int feature_dim,
                             double noise_sigma) {
  return make_graphon_model(two_block_kernel(p_in, p_out), 1.0,
                            harmonic_feature_map(feature_dim), noise_sigma);
}

double effective_sparsity(const GraphonModel& model, int n) {
  if (!model.sparsity_log_schedule) return model.sparsity;
  if (n < 2) return 0.0;
  return std::min(1.0, std::log(static_cast<double>(n)) / n);
}

GraphonSample sample_graphon(const GraphonModel& model, int n,
                             std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");

  const std::uint64_t latent_key = rng::derive(seed, rng::tag::kLatents);
  const std::uint64_t edge_key = rng::derive(seed, rng::tag::kGraphonEdges);
  const std::uint64_t noise_key = rng::derive(seed, rng::tag::kFeatureNoise);

  Eigen::VectorXd latents(n);
  for (int i = 0; i < n; ++i)
    latents[i] = unit_from_bits(rng::derive(latent_key, i));

  const double rho = effective_sparsity(model, n);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double p =
          std::clamp(rho * model.kernel(latents[i], latents[j]), 0.0, 1.0);
      if (p <= 0.0) continue;
      if (unit_from_bits(rng::derive(edge_key, i, j)) < p)
        edges.emplace_back(i, j);
    }

  std::optional<Eigen::MatrixXd> features;
  if (model.feature_map.dim > 0) {
    Eigen::MatrixXd X(n, model.feature_map.dim);
    for (int i = 0; i < n; ++i) {
      X.row(i) = model.feature_map.g(latents[i]).transpose();
      if (model.noise_sigma > 0.0) {
        rng::SplitMix64 stream(rng::derive(noise_key, i));
        for (int c = 0; c < model.feature_map.dim; ++c)
          X(i, c) += model.noise_sigma * stream.normal();
      }
    }
    features = std::move(X);
  }

  return {make_graph(n, std::move(edges), std::move(features)),
          std::move(latents)};
}

double estimate_edge_probability(const Graph& g, const KnnGraph& knn, int i,
                                 int j) {
  if (i == j) throw std::invalid_argument("i and j must differ");
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("node id outside [0, n)");
  if (static_cast<std::size_t>(i) >= knn.lists.size())
    throw std::invalid_argument("kNN graph does not cover node i");
  const auto& list = knn.lists[i];
  if (list.empty())
    throw std::invalid_argument("node has an empty kNN list");

  int hits = 0;
  for (int m : list)
    if (has_edge(g, m, j)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(list.size());
}

}  // namespace lobstur
