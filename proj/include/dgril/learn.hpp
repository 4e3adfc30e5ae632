#ifndef DGRIL_LEARN_HPP
#define DGRIL_LEARN_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/dataset.hpp"
#include "dgril/gril.hpp"

namespace dgril {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Vertex filtration model: (x, y) = logistic(W * feature + b).
struct FiltrationModel {
  std::size_t features = 0;
  std::vector<double> weights;  // 2 x features, row-major (row 0 -> x)
  std::array<double, 2> bias{0.0, 0.0};

  FiltrationModel() = default;
  explicit FiltrationModel(std::size_t feature_dim)
      : features(feature_dim), weights(2 * feature_dim, 0.0) {}
};

/// Linear classifier on GRIL vectors: logits = weights * G + bias.
struct LinearHead {
  std::size_t classes = 0;
  std::size_t inputs = 0;
  std::vector<double> weights;  // classes x inputs, row-major
  std::vector<double> bias;

  LinearHead() = default;
  LinearHead(std::size_t num_classes, std::size_t input_dim)
      : classes(num_classes), inputs(input_dim), weights(num_classes * input_dim, 0.0), bias(num_classes, 0.0) {}
};

/// Vertex values [x_0, y_0, x_1, y_1, ...] for a vertex_count x features
/// feature matrix.
std::vector<double> model_forward(std::span<const double> features, std::size_t vertex_count,
                                  const FiltrationModel& model);

/// A graph with its complex built once.
struct PreparedGraph {
  std::size_t id = 0;
  const GraphRecord* record = nullptr;
  SimplicialComplex complex;
};

std::vector<PreparedGraph> prepare_graphs(const std::vector<GraphRecord>& graphs);

struct LossOptions {
  bool learn_centers = false;
  double jitter = 1e-6;
  std::uint64_t seed = 0;  // tie-jitter and gradient-sampling seed
};

struct LossAndGrad {
  double loss = 0.0;  // mean cross-entropy over the batch
  std::size_t correct = 0;
  std::size_t sampled = 0;  // graphs that fell back to gradient sampling
  FiltrationModel grad_model;
  LinearHead grad_head;
  std::vector<double> grad_centers;  // 2s, zero unless learn_centers
};

/// Forward and backward through model -> lower-star -> tie jitter -> GRIL
/// -> linear head -> softmax cross-entropy. Per-graph contributions are
/// summed in batch order. The tie jitter depends only on (seed, graph id), so
/// it is constant while the parameters move.
LossAndGrad loss_and_grad(std::span<const PreparedGraph* const> batch, const FiltrationModel& model,
                          const LinearHead& head, const GrilConfig& config, const LossOptions& options);

/// Bifiltration vector the pipeline feeds to GRIL for one graph.
std::vector<double> pipeline_values(const PreparedGraph& graph, const FiltrationModel& model,
                                    double jitter, std::uint64_t seed);

struct TrainConfig {
  int epochs = 50;
  double learning_rate = 1e-2;
  int halving_period = 10;
  std::size_t batch_size = 10;
  std::uint64_t seed = 0;
  GrilConfig gril;
  bool learn_centers = false;
  double jitter = 1e-6;
  double init_scale = 0.1;  // std of the initial filtration weights

  void validate() const;
  double rate_at(int epoch) const;  // lr0 * 2^-(epoch / period)
  std::string describe() const;
};

struct TrainResult {
  FiltrationModel model;
  LinearHead head;
  std::vector<Point> centers;
  double initial_loss = 0.0;  // full-dataset loss before any update
  std::vector<double> loss;   // per epoch, mean over its batches
  std::vector<double> accuracy;
  std::vector<double> rate;
};

/// Initial parameters for a dataset: small Gaussian filtration weights, zero
/// head (so the initial loss is ln(classes)).
void initialize(TrainResult& state, std::size_t feature_dim, std::size_t classes, const TrainConfig& config);

TrainResult train(const std::vector<GraphRecord>& dataset, const TrainConfig& config);

struct Checkpoint {
  std::string config_hash;
  FiltrationModel model;
  LinearHead head;
  std::vector<Point> centers;
};

std::string config_hash(const TrainConfig& config);

/// Text format, one key per line:
///   dgril-checkpoint 1
///   config <16 hex digits>
///   model <F> <2F weights> <2 bias>
///   head <C> <D> <C*D weights> <C bias>
///   centers <s> <x y pairs>
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dgril

#endif  // DGRIL_LEARN_HPP
