#include "dgril/learn.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dgril/differential.hpp"
#include "dgril/complex.hpp"

namespace dgril {

std::vector<double> model_forward(std::span<const double> features, std::size_t vertex_count,
                                  const FiltrationModel& model) {
  if (model.weights.size() != 2 * model.features)
    throw std::invalid_argument("filtration model weights must be 2 x features");
  if (features.size() != vertex_count * model.features)
    throw std::invalid_argument("feature matrix is " + std::to_string(features.size()) + " values, expected " +
                                std::to_string(vertex_count) + " x " + std::to_string(model.features));
  std::vector<double> out(2 * vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    for (std::size_t a = 0; a < 2; ++a) {
      double z = model.bias[a];
      for (std::size_t f = 0; f < model.features; ++f)
        z += model.weights[a * model.features + f] * features[v * model.features + f];
      out[2 * v + a] = logistic(z);
    }
  }
  return out;
}

std::vector<PreparedGraph> prepare_graphs(const std::vector<GraphRecord>& graphs) {
  std::vector<PreparedGraph> out;
  out.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) out.push_back({i, &graphs[i], graph_to_complex(graphs[i])});
  return out;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t graph_seed(std::uint64_t seed, std::size_t id) { return mix(seed ^ mix(id)); }

struct Forward {
  std::vector<double> vertex_values;
  LowerStar star;
  std::vector<double> values;
};

Forward run_pipeline(const PreparedGraph& graph, const FiltrationModel& model, double jitter,
                     std::uint64_t seed) {
  Forward f;
  f.vertex_values = model_forward(graph.record->features, graph.record->vertex_count, model);
  f.star = lower_star_extend(graph.complex, f.vertex_values);
  const auto j = tie_jitter(graph.complex, f.star.values, jitter, graph_seed(seed, graph.id));
  f.values = f.star.values;
  for (std::size_t i = 0; i < j.size(); ++i) f.values[i] += j[i];
  return f;
}

}  // namespace

std::vector<double> pipeline_values(const PreparedGraph& graph, const FiltrationModel& model,
                                    double jitter, std::uint64_t seed) {
  return run_pipeline(graph, model, jitter, seed).values;
}

LossAndGrad loss_and_grad(std::span<const PreparedGraph* const> batch, const FiltrationModel& model,
                          const LinearHead& head, const GrilConfig& config, const LossOptions& options) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  if (head.inputs != config.size())
    throw std::invalid_argument("head expects " + std::to_string(head.inputs) + " inputs, GRIL vector has " +
                                std::to_string(config.size()));
  LossAndGrad out;
  out.grad_model = FiltrationModel(model.features);
  out.grad_head = LinearHead(head.classes, head.inputs);
  out.grad_centers.assign(2 * config.centers.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());

  for (const PreparedGraph* graph : batch) {
    const GraphRecord& rec = *graph->record;
    if (rec.label < 0 || static_cast<std::size_t>(rec.label) >= head.classes)
      throw std::invalid_argument("graph label outside the head's classes");
    const Forward f = run_pipeline(*graph, model, options.jitter, options.seed);
    const GrilVector g = gril_vector(graph->complex, f.values, config);

    std::vector<double> logits(head.classes);
    for (std::size_t c = 0; c < head.classes; ++c) {
      double z = head.bias[c];
      for (std::size_t i = 0; i < head.inputs; ++i) z += head.weights[c * head.inputs + i] * g.values[i];
      logits[c] = z;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double norm = 0.0;
    for (double z : logits) norm += std::exp(z - top);
    const double log_norm = top + std::log(norm);
    out.loss += scale * (log_norm - logits[static_cast<std::size_t>(rec.label)]);
    if (static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin()) == rec.label) ++out.correct;

    std::vector<double> dlogit(head.classes);
    for (std::size_t c = 0; c < head.classes; ++c)
      dlogit[c] = scale * (std::exp(logits[c] - log_norm) - (static_cast<int>(c) == rec.label ? 1.0 : 0.0));

    std::vector<double> upstream(head.inputs, 0.0);
    bool any = false;
    for (std::size_t c = 0; c < head.classes; ++c) {
      out.grad_head.bias[c] += dlogit[c];
      for (std::size_t i = 0; i < head.inputs; ++i) {
        out.grad_head.weights[c * head.inputs + i] += dlogit[c] * g.values[i];
        upstream[i] += dlogit[c] * head.weights[c * head.inputs + i];
      }
    }
    for (double u : upstream) any = any || u != 0.0;
    if (!any) continue;

    GrilDifferential diff;
    try {
      diff = gril_differential(graph->complex, f.values, config, g);
    } catch (const DegeneracyError&) {
      diff = gradient_sampled(graph->complex, f.values, config, options.jitter,
                              graph_seed(options.seed, graph->id) + 1);
      ++out.sampled;
    }
    const VjpResult r = vjp(upstream, diff);
    const std::vector<double> gq = pushback_gradient_q(graph->complex, r.grad_values, f.star.routing);
    for (std::size_t v = 0; v < rec.vertex_count; ++v) {
      for (std::size_t a = 0; a < 2; ++a) {
        const double u = f.vertex_values[2 * v + a];
        const double dz = gq[2 * v + a] * u * (1.0 - u);
        if (dz == 0.0) continue;
        out.grad_model.bias[a] += dz;
        for (std::size_t k = 0; k < model.features; ++k)
          out.grad_model.weights[a * model.features + k] += dz * rec.feature(v, k);
      }
    }
    if (options.learn_centers)
      for (std::size_t i = 0; i < r.grad_centers.size(); ++i) out.grad_centers[i] += r.grad_centers[i];
  }
  return out;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (!(learning_rate >= 0) || !std::isfinite(learning_rate)) throw std::invalid_argument("learning rate must be >= 0");
  if (halving_period < 1) throw std::invalid_argument("halving period must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (!(jitter > 0)) throw std::invalid_argument("jitter must be positive");
  if (!(init_scale >= 0)) throw std::invalid_argument("init scale must be >= 0");
  gril.validate();
}

double TrainConfig::rate_at(int epoch) const { return learning_rate * std::ldexp(1.0, -(epoch / halving_period)); }

std::string TrainConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "epochs=" << epochs << " lr=" << learning_rate << " halving=" << halving_period << " batch=" << batch_size
     << " seed=" << seed << " learn_centers=" << (learn_centers ? 1 : 0) << " jitter=" << jitter
     << " init_scale=" << init_scale << " gril{" << gril.describe() << "}";
  return os.str();
}

void initialize(TrainResult& state, std::size_t feature_dim, std::size_t classes, const TrainConfig& config) {
  std::mt19937_64 rng(mix(config.seed));
  std::normal_distribution<double> normal(0.0, config.init_scale);
  state.model = FiltrationModel(feature_dim);
  if (config.init_scale > 0)
    for (double& w : state.model.weights) w = normal(rng);
  state.head = LinearHead(classes, config.gril.size());
  state.centers = config.gril.centers;
}

TrainResult train(const std::vector<GraphRecord>& dataset, const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw std::invalid_argument("training set is empty");
  const std::size_t feature_dim = dataset[0].feature_dim;
  int max_label = 0;
  for (const auto& g : dataset) {
    if (g.feature_dim != feature_dim) throw std::invalid_argument("graphs disagree on feature dimension");
    if (g.label < 0) throw std::invalid_argument("labels must be >= 0");
    max_label = std::max(max_label, g.label);
  }
  const auto classes = static_cast<std::size_t>(max_label) + 1;
  if (classes < 2) throw std::invalid_argument("training needs at least two classes");

  TrainResult state;
  initialize(state, feature_dim, classes, config);
  const auto graphs = prepare_graphs(dataset);
  std::vector<const PreparedGraph*> order;
  for (const auto& g : graphs) order.push_back(&g);

  GrilConfig gcfg = config.gril;
  LossOptions opts{config.learn_centers, config.jitter, config.seed};
  state.initial_loss = loss_and_grad(order, state.model, state.head, gcfg, opts).loss;

  std::mt19937_64 rng(mix(config.seed + 1));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.rate_at(epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::span<const PreparedGraph* const> batch(order.data() + start, end - start);
      const LossAndGrad lg = loss_and_grad(batch, state.model, state.head, gcfg, opts);
      if (!std::isfinite(lg.loss)) throw std::runtime_error("loss became non-finite in epoch " + std::to_string(epoch));
      loss_sum += lg.loss * static_cast<double>(batch.size());
      correct += lg.correct;
      for (std::size_t i = 0; i < state.model.weights.size(); ++i) state.model.weights[i] -= lr * lg.grad_model.weights[i];
      for (std::size_t a = 0; a < 2; ++a) state.model.bias[a] -= lr * lg.grad_model.bias[a];
      for (std::size_t i = 0; i < state.head.weights.size(); ++i) state.head.weights[i] -= lr * lg.grad_head.weights[i];
      for (std::size_t c = 0; c < state.head.bias.size(); ++c) state.head.bias[c] -= lr * lg.grad_head.bias[c];
      if (config.learn_centers) {
        for (std::size_t c = 0; c < gcfg.centers.size(); ++c) {
          gcfg.centers[c].x = std::clamp(gcfg.centers[c].x - lr * lg.grad_centers[2 * c], 0.0, 1.0);
          gcfg.centers[c].y = std::clamp(gcfg.centers[c].y - lr * lg.grad_centers[2 * c + 1], 0.0, 1.0);
        }
      }
    }
    state.loss.push_back(loss_sum / static_cast<double>(order.size()));
    state.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(order.size()));
    state.rate.push_back(lr);
  }
  state.centers = gcfg.centers;
  return state;
}

std::string config_hash(const TrainConfig& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : config.describe()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  std::ostringstream os;
  os.precision(17);
  os << "dgril-checkpoint 1\n";
  os << "config " << ck.config_hash << "\n";
  os << "model " << ck.model.features;
  for (double w : ck.model.weights) os << ' ' << w;
  os << ' ' << ck.model.bias[0] << ' ' << ck.model.bias[1] << "\n";
  os << "head " << ck.head.classes << ' ' << ck.head.inputs;
  for (double w : ck.head.weights) os << ' ' << w;
  for (double b : ck.head.bias) os << ' ' << b;
  os << "\n";
  os << "centers " << ck.centers.size();
  for (Point p : ck.centers) os << ' ' << p.x << ' ' << p.y;
  os << "\n";
  write_file_atomic(path, os.str());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  auto fail = [&](const std::string& what) {
    return std::runtime_error("malformed checkpoint " + path.string() + ": " + what);
  };
  std::string key;
  int version = 0;
  if (!(in >> key >> version) || key != "dgril-checkpoint") throw fail("missing header");
  if (version != 1) throw fail("unsupported version " + std::to_string(version));
  Checkpoint ck;
  if (!(in >> key >> ck.config_hash) || key != "config") throw fail("missing config line");
  std::size_t f = 0;
  if (!(in >> key >> f) || key != "model") throw fail("missing model line");
  ck.model = FiltrationModel(f);
  for (double& w : ck.model.weights)
    if (!(in >> w)) throw fail("short model weights");
  if (!(in >> ck.model.bias[0] >> ck.model.bias[1])) throw fail("short model bias");
  std::size_t c = 0, d = 0;
  if (!(in >> key >> c >> d) || key != "head") throw fail("missing head line");
  ck.head = LinearHead(c, d);
  for (double& w : ck.head.weights)
    if (!(in >> w)) throw fail("short head weights");
  for (double& b : ck.head.bias)
    if (!(in >> b)) throw fail("short head bias");
  std::size_t s = 0;
  if (!(in >> key >> s) || key != "centers") throw fail("missing centers line");
  ck.centers.resize(s);
  for (Point& p : ck.centers)
    if (!(in >> p.x >> p.y)) throw fail("short centers");
  return ck;
}

}  // namespace dgril
