#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dgril/dataset.hpp"
#include "dgril/differential.hpp"
#include "dgril/gradcheck.hpp"
#include "dgril/learn.hpp"
#include "dgril/presets.hpp"

namespace fs = std::filesystem;
using namespace dgril;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by the subcommands that build a GrilConfig.
struct GrilFlags {
  std::string k = "1,2,3";
  int length = 2;
  std::string centers = "100:10";
  std::string hom = "0,1";
  std::string mode = "exact";
  int resolution = 100;

  void add(CLI::App* app) {
    app->add_option("--k", k, "comma-separated k values")->capture_default_str();
    app->add_option("--l", length, "worm length")->capture_default_str();
    app->add_option("--centers", centers, "center grid RESOLUTION:STRIDE")->capture_default_str();
    app->add_option("--hom", hom, "comma-separated homology degrees")->capture_default_str();
    app->add_option("--mode", mode, "exact or grid")->capture_default_str()->check(CLI::IsMember({"exact", "grid"}));
    app->add_option("--resolution", resolution, "grid-mode step count")->capture_default_str();
  }
};

std::vector<int> int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size()) throw UsageError(std::string(flag) + ": bad integer '" + cell + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

GrilConfig resolve(const GrilFlags& f) {
  GrilConfig cfg;
  cfg.k_values = int_list(f.k, "--k");
  cfg.hom_dims = int_list(f.hom, "--hom");
  cfg.length = f.length;
  const auto colon = f.centers.find(':');
  if (colon == std::string::npos) throw UsageError("--centers: expected RESOLUTION:STRIDE");
  const auto rs = int_list(f.centers.substr(0, colon), "--centers");
  const auto st = int_list(f.centers.substr(colon + 1), "--centers");
  if (rs.size() != 1 || st.size() != 1) throw UsageError("--centers: expected RESOLUTION:STRIDE");
  try {
    cfg.centers = sample_centers(rs[0], st[0]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--centers: ") + e.what());
  }
  cfg.mode = f.mode == "grid" ? SearchMode::grid : SearchMode::exact;
  cfg.resolution = f.resolution;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& w : cfg.warnings()) std::cerr << "warning: " << w << "\n";
  return cfg;
}

void dry_run(const CLI::App& sub, const std::string& resolved) {
  std::cout << "dry run: " << sub.get_name() << "\n" << sub.config_to_str(true, false) << "resolved: " << resolved << "\n";
}

struct Loaded {
  std::string name;
  std::vector<GraphRecord> graphs;
};

Loaded load_graphs(const std::string& dataset, bool synthetic, std::size_t count, std::uint64_t seed) {
  if (synthetic) return {"synthetic", synth_cycles_vs_trees(count, 6, 12, seed)};
  if (dataset.empty()) throw UsageError("one of --dataset or --synthetic is required");
  if (!fs::is_directory(dataset)) throw UsageError("dataset directory '" + dataset + "' does not exist");
  TuDataset ds = load_tu_dataset(dataset);
  return {ds.name, std::move(ds.graphs)};
}

// compute ------------------------------------------------------------------

struct ComputeFlags {
  std::string dataset;
  bool synthetic = false;
  std::size_t synthetic_count = 100;
  std::string filtration = "degree";
  std::string filtration_file;
  GrilFlags gril;
  std::string out;
  std::string heatmap;
  std::uint64_t seed = 0;
};

int run_compute(const CLI::App& sub, const ComputeFlags& f, bool dry) {
  const GrilConfig cfg = resolve(f.gril);
  FiltrationSource source;
  try {
    source = parse_filtration_source(f.filtration);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (source == FiltrationSource::file && f.filtration_file.empty())
    throw UsageError("--filtration file needs --filtration-file");
  if (!f.synthetic && f.dataset.empty()) throw UsageError("one of --dataset or --synthetic is required");
  if (f.out.empty()) throw UsageError("--out is required");
  if (dry) {
    dry_run(sub, "filtration=" + to_string(source) + " gril{" + cfg.describe() + "}");
    return 0;
  }

  const Loaded data = load_graphs(f.dataset, f.synthetic, f.synthetic_count, f.seed);
  std::vector<std::vector<double>> file_values;
  if (source == FiltrationSource::file) {
    file_values = read_vertex_value_file(f.filtration_file);
    if (file_values.size() != data.graphs.size())
      throw std::runtime_error("filtration file has " + std::to_string(file_values.size()) + " lines for " +
                               std::to_string(data.graphs.size()) + " graphs");
  }

  const auto n = static_cast<long>(data.graphs.size());
  std::vector<GrilVector> vectors(data.graphs.size());
  std::string failure;
  const auto t0 = std::chrono::steady_clock::now();
  // One graph per task; slots keep graph order whatever the completion order.
#pragma omp parallel for schedule(dynamic)
  for (long g = 0; g < n; ++g) {
    try {
      const GraphRecord& graph = data.graphs[static_cast<std::size_t>(g)];
      const SimplicialComplex k = graph_to_complex(graph);
      std::vector<double> vertex_values = source == FiltrationSource::file
                                              ? file_values[static_cast<std::size_t>(g)]
                                              : preset_vertex_values(graph, source);
      if (vertex_values.size() != 2 * graph.vertex_count)
        throw std::runtime_error("graph " + std::to_string(g) + ": expected " + std::to_string(2 * graph.vertex_count) +
                                 " vertex values, got " + std::to_string(vertex_values.size()));
      vectors[static_cast<std::size_t>(g)] = gril_vector_serial(k, normalized_bifiltration(k, vertex_values), cfg);
    } catch (const std::exception& e) {
#pragma omp critical
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw std::runtime_error(failure);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<VectorRow> rows;
  for (std::size_t g = 0; g < vectors.size(); ++g)
    rows.push_back({std::to_string(g), data.graphs[g].label, vectors[g].values});
  export_vectors(rows, cfg, f.out);
  if (!f.heatmap.empty()) {
    fs::create_directories(f.heatmap);
    for (std::size_t g = 0; g < vectors.size(); ++g)
      for (int d : cfg.hom_dims)
        for (int kk : cfg.k_values)
          export_heatmap(vectors[g], d, kk,
                         fs::path(f.heatmap) / ("graph" + std::to_string(g) + "_h" + std::to_string(d) + "_k" +
                                                std::to_string(kk) + ".txt"));
  }
  std::printf("%s: %zu graphs, %zu values each, %.2f s -> %s\n", data.name.c_str(), rows.size(), cfg.size(), secs,
              f.out.c_str());
  return 0;
}

// gradcheck ----------------------------------------------------------------

struct GradcheckFlags {
  int instances = 100;
  std::uint64_t seed = 1;
  int length = 2;
  std::string centers = "10:3";
  double h = 1e-4;
  double tol = 1e-6;
  std::string fixture;
};

int run_gradcheck(const CLI::App& sub, const GradcheckFlags& f, bool dry) {
  GrilFlags gf;
  gf.length = f.length;
  gf.centers = f.centers;
  const GrilConfig cfg = resolve(gf);
  if (f.instances < 1) throw UsageError("--instances must be >= 1");
  if (!(f.h > 0) || !(f.tol > 0)) throw UsageError("--h and --tol must be positive");
  if (!f.fixture.empty() && f.fixture != "degenerate") throw UsageError("--fixture: only 'degenerate' is known");
  GradcheckOptions opts;
  opts.h = f.h;
  opts.min_h = std::min(opts.min_h, f.h);
  opts.tol = f.tol;
  if (dry) {
    dry_run(sub, "h=" + std::to_string(f.h) + " tol=" + std::to_string(f.tol) + " gril{" + cfg.describe() + "}");
    return 0;
  }

  if (f.fixture == "degenerate") {
    // One vertex equidistant from the center on both axes: the x and y
    // boundary lines of the worm reach it at the same width.
    const SimplicialComplex k = build_complex(1, {});
    const std::vector<double> v{0.3, 0.3};
    GrilConfig single = cfg;
    single.centers = {{1.0, 1.0}};
    single.k_values = {1};
    single.hom_dims = {0};
    std::printf("fixture degenerate: vertex (0.3, 0.3), center (1, 1), l=%d\n", single.length);
    for (const auto& hit : detect_degeneracy(v, single.centers, single.length, 1e-12))
      std::printf("  hyperplane %s\n", to_string(hit).c_str());
    try {
      gril_differential(k, v, single, gril_vector(k, v, single));
      std::printf("FAIL: differential did not detect the degeneracy\n");
    } catch (const DegeneracyError& e) {
      std::printf("FAIL: %s\n", e.what());
    }
    return 1;
  }

  GradcheckReport total;
  std::size_t degenerate_instances = 0;
  for (int i = 0; i < f.instances; ++i) {
    const auto inst = random_generic_instance(f.seed + static_cast<std::uint64_t>(i));
    try {
      total.merge(check_differential(inst.complex, inst.values, cfg, opts));
    } catch (const DegeneracyError& e) {
      ++degenerate_instances;
      std::printf("instance %d degenerate: %s\n", i, e.what());
    }
  }
  const bool pass = total.exact_fraction() >= 0.95 && total.unflagged_mismatches == 0 && degenerate_instances == 0;
  std::printf("%s\n", to_string(total).c_str());
  std::printf("%s: %d instances, %.2f%% exact coordinates, %zu unflagged mismatches\n", pass ? "PASS" : "FAIL",
              f.instances, 100.0 * total.exact_fraction(), total.unflagged_mismatches);
  return pass ? 0 : 1;
}

// train --------------------------------------------------------------------

struct TrainFlags {
  std::string dataset;
  bool synthetic = false;
  std::size_t synthetic_count = 100;
  GrilFlags gril;
  int epochs = 50;
  double lr = 1e-2;
  int halving = 10;
  std::size_t batch = 10;
  std::uint64_t seed = 0;
  bool learn_centers = false;
  double jitter = 1e-6;
  std::string metrics;
  std::string checkpoint;
};

int run_train(const CLI::App& sub, const TrainFlags& f, bool dry) {
  TrainConfig tc;
  tc.gril = resolve(f.gril);
  tc.epochs = f.epochs;
  tc.learning_rate = f.lr;
  tc.halving_period = f.halving;
  tc.batch_size = f.batch;
  tc.seed = f.seed;
  tc.learn_centers = f.learn_centers;
  tc.jitter = f.jitter;
  try {
    tc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!f.synthetic && f.dataset.empty()) throw UsageError("one of --dataset or --synthetic is required");
  if (dry) {
    dry_run(sub, tc.describe());
    return 0;
  }

  const Loaded data = load_graphs(f.dataset, f.synthetic, f.synthetic_count, f.seed);
  const TrainResult r = train(data.graphs, tc);
  std::printf("%s: initial loss %.6f\n", data.name.c_str(), r.initial_loss);
  std::ostringstream csv;
  csv.precision(17);
  csv << "epoch,loss,train_acc,lr\n";
  for (std::size_t e = 0; e < r.loss.size(); ++e) {
    csv << e + 1 << "," << r.loss[e] << "," << r.accuracy[e] << "," << r.rate[e] << "\n";
    std::printf("epoch %3zu loss %.6f acc %.4f lr %.3g\n", e + 1, r.loss[e], r.accuracy[e], r.rate[e]);
  }
  if (!f.metrics.empty()) write_file_atomic(f.metrics, csv.str());
  if (!f.checkpoint.empty()) save_checkpoint({config_hash(tc), r.model, r.head, r.centers}, f.checkpoint);
  return 0;
}

// inspect ------------------------------------------------------------------

int run_inspect(const std::string& path) {
  if (!fs::exists(path)) throw std::runtime_error("no such file: " + path);
  std::FILE* fp = std::fopen(path.c_str(), "r");
  char head[32] = {0};
  if (fp) {
    if (!std::fgets(head, sizeof head, fp)) head[0] = 0;
    std::fclose(fp);
  }
  if (std::string(head).rfind("dgril-checkpoint", 0) == 0) {
    const Checkpoint c = load_checkpoint(path);
    std::printf("checkpoint %s\n  config %s\n  model: %zu features\n  head: %zu classes x %zu inputs\n  centers: %zu\n",
                path.c_str(), c.config_hash.c_str(), c.model.features, c.head.classes, c.head.inputs,
                c.centers.size());
    return 0;
  }
  const VectorTable t = read_vectors(path);
  std::printf("vectors %s\n  rows: %zu\n  columns: %zu\n", path.c_str(), t.rows.size(), t.columns.size());
  std::size_t nonzero = 0, total = 0;
  double maxv = 0.0;
  for (const auto& row : t.rows)
    for (double v : row.values) {
      ++total;
      if (v != 0.0) ++nonzero;
      maxv = std::max(maxv, v);
    }
  std::printf("  nonzero: %zu / %zu\n  max: %.6g\n", nonzero, total, maxv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgril: GRIL vectors of bifiltered complexes, their gradients, and training"};
  app.require_subcommand(1);
  app.fallthrough();
  int workers = 0;
  bool dry = false;
  app.add_option("--workers", workers, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--dry-run", dry, "print the resolved configuration and exit");

  ComputeFlags cf;
  CLI::App* compute = app.add_subcommand("compute", "write GRIL vectors of a dataset to CSV");
  compute->add_option("--dataset", cf.dataset, "TU dataset directory (basename is the dataset name)");
  compute->add_flag("--synthetic", cf.synthetic, "use the synthetic cycles-vs-trees set");
  compute->add_option("--synthetic-count", cf.synthetic_count, "synthetic graph count")->capture_default_str();
  compute->add_option("--filtration", cf.filtration, "degree, lowerstar-attributes or file")->capture_default_str();
  compute->add_option("--filtration-file", cf.filtration_file, "vertex values, one CSV line per graph");
  cf.gril.add(compute);
  compute->add_option("--out", cf.out, "output CSV");
  compute->add_option("--heatmap", cf.heatmap, "directory for per-graph lambda matrices");
  compute->add_option("--seed", cf.seed, "seed for synthetic data")->capture_default_str();
  compute->add_flag("--dry-run", dry, "print the resolved configuration and exit");

  GradcheckFlags gf;
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "compare the differential with finite differences");
  gradcheck->add_option("--instances", gf.instances, "random instances")->capture_default_str();
  gradcheck->add_option("--seed", gf.seed, "first instance seed")->capture_default_str();
  gradcheck->add_option("--l", gf.length, "worm length")->capture_default_str();
  gradcheck->add_option("--centers", gf.centers, "center grid RESOLUTION:STRIDE")->capture_default_str();
  gradcheck->set_help_flag("--help", "print this help and exit");
  gradcheck->add_option("--h", gf.h, "finite-difference step")->capture_default_str();
  gradcheck->add_option("--tol", gf.tol, "agreement tolerance")->capture_default_str();
  gradcheck->add_option("--fixture", gf.fixture, "run a fixed fixture instead (degenerate)");
  gradcheck->add_flag("--dry-run", dry, "print the resolved configuration and exit");

  TrainFlags tf;
  CLI::App* trainc = app.add_subcommand("train", "learn a vertex filtration end to end");
  trainc->add_option("--dataset", tf.dataset, "TU dataset directory");
  trainc->add_flag("--synthetic", tf.synthetic, "use the synthetic cycles-vs-trees set");
  trainc->add_option("--synthetic-count", tf.synthetic_count, "synthetic graph count")->capture_default_str();
  tf.gril.add(trainc);
  trainc->add_option("--epochs", tf.epochs, "epochs")->capture_default_str();
  trainc->add_option("--lr", tf.lr, "initial learning rate")->capture_default_str();
  trainc->add_option("--halving", tf.halving, "epochs per learning-rate halving")->capture_default_str();
  trainc->add_option("--batch", tf.batch, "batch size")->capture_default_str();
  trainc->add_option("--seed", tf.seed, "seed")->capture_default_str();
  trainc->add_flag("--learn-centers", tf.learn_centers, "also update the centers");
  trainc->add_option("--jitter", tf.jitter, "tie-breaking jitter scale")->capture_default_str();
  trainc->add_option("--metrics", tf.metrics, "per-epoch CSV (epoch,loss,train_acc,lr)");
  trainc->add_option("--checkpoint", tf.checkpoint, "checkpoint output");
  trainc->add_flag("--dry-run", dry, "print the resolved configuration and exit");

  std::string inspect_path;
  CLI::App* inspect = app.add_subcommand("inspect", "summarize a checkpoint or vectors CSV");
  inspect->add_option("path", inspect_path, "file to inspect")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (workers > 0) omp_set_num_threads(workers);
    if (compute->parsed()) return run_compute(*compute, cf, dry);
    if (gradcheck->parsed()) return run_gradcheck(*gradcheck, gf, dry);
    if (trainc->parsed()) return run_train(*trainc, tf, dry);
    if (inspect->parsed()) return run_inspect(inspect_path);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
