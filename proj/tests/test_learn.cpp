#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "dgril/learn.hpp"

using namespace dgril;
namespace fs = std::filesystem;

namespace {

GrilConfig small_config() {
  GrilConfig cfg;
  cfg.centers = sample_centers(10, 3);
  return cfg;
}

std::vector<const PreparedGraph*> pointers(const std::vector<PreparedGraph>& graphs) {
  std::vector<const PreparedGraph*> out;
  for (const auto& g : graphs) out.push_back(&g);
  return out;
}

}  // namespace

TEST_CASE("model forward is a logistic affine map per vertex") {
  FiltrationModel m(2);
  m.weights = {1, 0, 0, -1};
  m.bias = {0, 1};
  const std::vector<double> feats{0.5, 2.0, -1.0, 0.0};
  const auto v = model_forward(feats, 2, m);
  CHECK(v[0] == doctest::Approx(logistic(0.5)));
  CHECK(v[1] == doctest::Approx(logistic(-1.0)));
  CHECK(v[2] == doctest::Approx(logistic(-1.0)));
  CHECK(v[3] == doctest::Approx(logistic(1.0)));
}

TEST_CASE("initial loss is ln C with a zero head") {
  const auto data = synth_cycles_vs_trees(20, 6, 9, 3);
  TrainConfig tc;
  tc.gril = small_config();
  tc.epochs = 0;
  const auto r = train(data, tc);
  CHECK(r.initial_loss == doctest::Approx(std::log(2.0)));
  CHECK(r.loss.empty());
  for (double w : r.head.weights) CHECK(w == 0.0);
}

TEST_CASE("a duplicated graph contributes exactly twice to the batch gradient") {
  const auto data = synth_cycles_vs_trees(4, 6, 8, 5);
  const auto graphs = prepare_graphs(data);
  const auto cfg = small_config();
  TrainResult st;
  TrainConfig tc;
  tc.gril = cfg;
  initialize(st, 2, 2, tc);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 0.5);
  for (auto& w : st.head.weights) w = n(rng);
  const LossOptions opts{};
  // Losses and gradients are batch means, so rescale to sums.
  const std::vector<const PreparedGraph*> a{&graphs[0]}, b{&graphs[1]}, aab{&graphs[0], &graphs[0], &graphs[1]};
  const auto ga = loss_and_grad(a, st.model, st.head, cfg, opts);
  const auto gb = loss_and_grad(b, st.model, st.head, cfg, opts);
  const auto g = loss_and_grad(aab, st.model, st.head, cfg, opts);
  CHECK(3 * g.loss == doctest::Approx(2 * ga.loss + gb.loss));
  for (std::size_t i = 0; i < g.grad_model.weights.size(); ++i)
    CHECK(3 * g.grad_model.weights[i] == doctest::Approx(2 * ga.grad_model.weights[i] + gb.grad_model.weights[i]));
  for (std::size_t i = 0; i < g.grad_head.weights.size(); ++i)
    CHECK(3 * g.grad_head.weights[i] == doctest::Approx(2 * ga.grad_head.weights[i] + gb.grad_head.weights[i]));
  const std::vector<const PreparedGraph*> aa{&graphs[0], &graphs[0]};
  CHECK(loss_and_grad(aa, st.model, st.head, cfg, opts).grad_model.weights == ga.grad_model.weights);
}

TEST_CASE("filtration and head gradients match finite differences") {
  const auto data = synth_cycles_vs_trees(6, 6, 8, 9);
  const auto graphs = prepare_graphs(data);
  const auto batch = pointers(graphs);
  const auto cfg = small_config();
  TrainResult st;
  TrainConfig tc;
  tc.gril = cfg;
  tc.seed = 4;
  tc.init_scale = 1.0;
  initialize(st, 2, 2, tc);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0, 1.0);
  for (auto& w : st.head.weights) w = n(rng);
  for (auto& b : st.head.bias) b = n(rng);
  const LossOptions opts{false, 1e-6, 7};
  const auto lg = loss_and_grad(batch, st.model, st.head, cfg, opts);
  REQUIRE(lg.sampled == 0);

  const double h = 1e-7;
  auto total = [&](const FiltrationModel& m, const LinearHead& head) {
    return loss_and_grad(batch, m, head, cfg, opts).loss;
  };
  int agree = 0, checked = 0;
  for (std::size_t i = 0; i < st.model.weights.size(); ++i) {
    auto p = st.model, m = st.model;
    p.weights[i] += h;
    m.weights[i] -= h;
    const double fd = (total(p, st.head) - total(m, st.head)) / (2 * h);
    ++checked;
    if (std::abs(fd - lg.grad_model.weights[i]) <= 1e-5 * std::max(1.0, std::abs(fd))) ++agree;
  }
  for (std::size_t a = 0; a < 2; ++a) {
    auto p = st.model, m = st.model;
    p.bias[a] += h;
    m.bias[a] -= h;
    const double fd = (total(p, st.head) - total(m, st.head)) / (2 * h);
    ++checked;
    if (std::abs(fd - lg.grad_model.bias[a]) <= 1e-5 * std::max(1.0, std::abs(fd))) ++agree;
  }
  CHECK(agree == checked);
  for (std::size_t i = 0; i < st.head.weights.size(); i += 37) {
    auto p = st.head, m = st.head;
    p.weights[i] += h;
    m.weights[i] -= h;
    const double fd = (total(st.model, p) - total(st.model, m)) / (2 * h);
    CHECK(fd == doctest::Approx(lg.grad_head.weights[i]).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("learning-rate schedule and lr 0") {
  TrainConfig tc;
  CHECK(tc.rate_at(0) == 1e-2);
  CHECK(tc.rate_at(9) == 1e-2);
  CHECK(tc.rate_at(10) == 5e-3);
  CHECK(tc.rate_at(25) == 2.5e-3);
  tc.epochs = -1;
  CHECK_THROWS(tc.validate());

  const auto data = synth_cycles_vs_trees(10, 6, 8, 1);
  TrainConfig flat;
  flat.gril = small_config();
  flat.epochs = 3;
  flat.learning_rate = 0;
  const auto r = train(data, flat);
  REQUIRE(r.loss.size() == 3);
  CHECK(r.loss[0] == doctest::Approx(r.initial_loss).epsilon(1e-12));
  CHECK(r.loss[2] == doctest::Approx(r.loss[0]).epsilon(1e-12));
}

TEST_CASE("training is deterministic and checkpoints round trip") {
  const auto data = synth_cycles_vs_trees(10, 6, 8, 2);
  TrainConfig tc;
  tc.gril = small_config();
  tc.epochs = 2;
  tc.seed = 3;
  const auto a = train(data, tc);
  const auto b = train(data, tc);
  CHECK(a.loss == b.loss);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.head.weights == b.head.weights);

  const fs::path path = fs::temp_directory_path() / "dgril_test_checkpoint.txt";
  const Checkpoint c{config_hash(tc), a.model, a.head, a.centers};
  save_checkpoint(c, path);
  const Checkpoint back = load_checkpoint(path);
  fs::remove(path);
  CHECK(back.config_hash == c.config_hash);
  CHECK(back.model.weights == c.model.weights);
  CHECK(back.model.bias == c.model.bias);
  CHECK(back.head.weights == c.head.weights);
  CHECK(back.head.bias == c.head.bias);
  CHECK(back.centers == c.centers);

  TrainConfig other = tc;
  other.seed = 4;
  CHECK(config_hash(other) != config_hash(tc));
  CHECK_THROWS(load_checkpoint(fs::temp_directory_path() / "dgril_missing_checkpoint.txt"));
}
