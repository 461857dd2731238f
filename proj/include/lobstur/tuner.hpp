#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lobstur/bootstrap.hpp"
#include "lobstur/graph.hpp"

#include <json.hpp>

namespace lobstur {

// One hyperparameter configuration: a flat key -> value JSON object.
using Theta = nlohmann::json;

struct EmbedderSpec {
  enum class Kind { Builtin, ExternalCommand };
  Kind kind = Kind::Builtin;
  // Command template with placeholders {train_edges} {train_features}
  // {test_edges} {test_features} {theta} {out}; {out} is mandatory.
  std::string command;
  double timeout_seconds = 3600.0;
};

// Raised when an external embedder exits nonzero, times out, or produces
// malformed output.
struct ExternalEmbedderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builtin embedder: Laplacian-eigenmap coordinates on the training graph
// are the regression target for a ridge readout from s-step smoothed
// features. Training and application are split so models trained on
// different replicas genuinely disagree on a shared test graph.
// Theta keys: "p" (required), "s" (default 0), "ridge" (default 0.01).
struct BuiltinModel {
  int smoothing_steps = 0;
  Eigen::MatrixXd coef;  // feature dim x p
};

BuiltinModel builtin_train(const Graph& g_train, const Theta& theta);
Eigen::MatrixXd builtin_apply(const BuiltinModel& model, const Graph& g_test);

// Bottom p nontrivial eigenvectors of the symmetric normalized Laplacian.
Eigen::MatrixXd laplacian_eigenmaps(const Graph& g, int p);
// (D + I)^(-1) (A + I) applied s times to the feature matrix.
Eigen::MatrixXd smooth_features(const Graph& g, int steps);

// Writes graphs and theta to scratch_dir, substitutes the placeholders,
// runs the command through /bin/sh, and reads {out} back as a matrix with
// one row per test node.
Eigen::MatrixXd external_embed(const EmbedderSpec& spec, const Theta& theta,
                               const Graph& g_train, const Graph& g_test,
                               const std::filesystem::path& scratch_dir);

enum class Pairing { Disjoint, AllPairs };

struct ThetaOutcome {
  Theta theta;
  std::vector<double> distances;
  double mean_distance = 0.0;
  double mean_stable_rank = 0.0;
  bool passed_screen = false;
  bool failed = false;
  std::vector<std::string> failures;
  std::vector<std::string> embedding_hashes;  // external embedders only
};

struct TuningReport {
  std::vector<ThetaOutcome> entries;
  std::optional<std::size_t> selected;  // index into entries
  int n_b = 0;
  double threshold = 0.0;
  Pairing pairing = Pairing::Disjoint;
  std::uint64_t seed = 0;

  const Theta* selected_theta() const {
    return selected ? &entries[*selected].theta : nullptr;
  }
  nlohmann::json to_json() const;
};

struct TuneOptions {
  int n_b = 20;
  double threshold = 2.0;
  Pairing pairing = Pairing::Disjoint;
  int workers = 0;  // <= 0: LOBSTUR_THREADS or hardware concurrency
  std::filesystem::path scratch_dir;  // external embedders; empty = temp dir
};

// Algorithm: generate 3 n_b replicas, train a model per training replica
// and per theta, evaluate disjoint model pairs (i, i + n_b) on test replica
// i + 2 n_b, screen by mean StableRank >= threshold, select the argmin mean
// distance among survivors (ties resolved by grid order). A theta with any
// failed cell is excluded and flagged.
TuningReport tune(const Graph& g, const std::vector<Theta>& grid,
                  const EmbedderSpec& embedder, const BootstrapConfig& cfg,
                  const TuneOptions& opts = {});

// Selection rule alone, exposed for testing: argmin mean distance among
// non-failed entries passing the screen.
std::optional<std::size_t> select_best(const std::vector<ThetaOutcome>& entries);

}  // namespace lobstur
