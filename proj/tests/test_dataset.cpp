#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "dgril/dataset.hpp"
#include "dgril/gril.hpp"
#include "dgril/homology.hpp"
#include "dgril/presets.hpp"

using namespace dgril;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    std::random_device rd;
    path = fs::temp_directory_path() / ("dgril_test_" + std::to_string(rd()) + "_" + name);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// Two graphs: a triangle (label -1) and a path on two vertices (label 1).
fs::path write_fixture(const fs::path& root, bool attributes) {
  const fs::path dir = root / "TOY";
  fs::create_directories(dir);
  write(dir / "TOY_A.txt", "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n4, 5\n5, 4\n4, 4\n");
  write(dir / "TOY_graph_indicator.txt", "1\n1\n1\n2\n2\n");
  write(dir / "TOY_graph_labels.txt", "-1\n1\n");
  if (attributes)
    write(dir / "TOY_node_attributes.txt", "0.1, 0.2\n0.3, 0.4\n0.5, 0.6\n0.7, 0.8\n0.9, 1.0\n");
  else
    write(dir / "TOY_node_labels.txt", "0\n2\n2\n1\n0\n");
  return dir;
}

}  // namespace

TEST_CASE("TU loader: labels, edges and features") {
  TempDir tmp("tu");
  const auto ds = load_tu_dataset(write_fixture(tmp.path, false));
  CHECK(ds.name == "TOY");
  REQUIRE(ds.graphs.size() == 2);
  CHECK(ds.class_values == std::vector<long>{-1, 1});
  CHECK(ds.graphs[0].label == 0);
  CHECK(ds.graphs[1].label == 1);
  CHECK(ds.graphs[0].vertex_count == 3);
  CHECK(ds.graphs[0].edges.size() == 3);
  // Self-loop dropped, reverse duplicate merged.
  CHECK(ds.graphs[1].edges == std::vector<std::pair<Vertex, Vertex>>{{0, 1}});
  CHECK(ds.graphs[0].feature_dim == 3);
  CHECK(ds.graphs[0].feature(1, 2) == 1.0);
  CHECK(ds.graphs[1].feature(0, 1) == 1.0);

  const auto attr = load_tu_dataset(write_fixture(tmp.path / "b", true));
  CHECK(attr.graphs[1].feature_dim == 2);
  CHECK(attr.graphs[1].feature(1, 1) == 1.0);
  auto pv = preset_vertex_values(attr.graphs[1], FiltrationSource::lowerstar_attributes);
  CHECK(pv == std::vector<double>{0.7, 0.8, 0.9, 1.0});
}

TEST_CASE("TU loader errors") {
  TempDir tmp("bad");
  CHECK_THROWS(load_tu_dataset(tmp.path / "NOPE"));
  const auto dir = write_fixture(tmp.path, false);
  write(dir / "TOY_A.txt", "1, 9\n");
  CHECK_THROWS(load_tu_dataset(dir));
  write(dir / "TOY_A.txt", "3, 4\n");
  CHECK_THROWS(load_tu_dataset(dir));
}

TEST_CASE("MUTAG statistics") {
  const fs::path dir = fs::path(DGRIL_SOURCE_DIR) / "data" / "MUTAG";
  if (!fs::exists(dir)) {
    MESSAGE("MUTAG not present; run tools/fetch_mutag.sh");
    return;
  }
  const auto ds = load_tu_dataset(dir);
  CHECK(ds.graphs.size() == 188);
  CHECK(ds.num_classes() == 2);
  double nodes = 0;
  for (const auto& g : ds.graphs) nodes += static_cast<double>(g.vertex_count);
  CHECK(nodes / 188.0 == doctest::Approx(17.93).epsilon(0.001));
}

TEST_CASE("synthetic cycles and trees have the advertised homology") {
  const auto graphs = synth_cycles_vs_trees(40, 6, 12, 7);
  REQUIRE(graphs.size() == 40);
  int cycles = 0;
  for (const auto& g : graphs) {
    CHECK(g.vertex_count >= 6);
    CHECK(g.vertex_count <= 12);
    const auto k = graph_to_complex(g);
    BitVector all(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) all.set(i);
    CHECK(homology_basis(k, all, 0).rank() == 1);
    CHECK(homology_basis(k, all, 1).rank() == static_cast<std::size_t>(g.label));
    cycles += g.label;
  }
  CHECK(cycles == 20);
  CHECK(synth_cycles_vs_trees(40, 6, 12, 7)[5].features == graphs[5].features);
}

TEST_CASE("degree preset") {
  GraphRecord path;
  path.vertex_count = 3;
  path.edges = {{0, 1}, {1, 2}};
  CHECK(preset_vertex_values(path, FiltrationSource::degree) == std::vector<double>{1, 2, 2, 1, 1, 2});
  const auto k = graph_to_complex(path);
  const auto v = normalized_bifiltration(k, preset_vertex_values(path, FiltrationSource::degree));
  for (double x : v) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
  CHECK_THROWS(parse_filtration_source("ricci"));
  CHECK(to_string(parse_filtration_source("lowerstar-attributes")) == "lowerstar-attributes");
}

TEST_CASE("vector CSV round trip and heatmaps") {
  TempDir tmp("csv");
  GrilConfig cfg;
  cfg.centers = sample_centers(2, 1);
  cfg.k_values = {1, 2};
  cfg.hom_dims = {0};
  std::vector<VectorRow> rows{{"0", 1, {0.1, 1.0 / 3, 0, 0.5, 0.25, 0.125, 1e-17, 0.7}},
                              {"1", 0, {0, 0, 0, 0, 0, 0, 0, 0}}};
  const auto csv = tmp.path / "v.csv";
  export_vectors(rows, cfg, csv);
  const auto t = read_vectors(csv);
  CHECK(t.columns == vector_columns(cfg));
  CHECK(t.columns[5] == "h0_k2_c1");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].values == rows[0].values);
  CHECK(t.rows[0].label == 1);
  CHECK(!fs::exists(tmp.path / "v.csv.tmp"));

  rows[0].values.pop_back();
  CHECK_THROWS(export_vectors(rows, cfg, csv));

  GrilVector g{{1, 2, 3, 4, 5, 6, 7, 8}, cfg};
  export_heatmap(g, 0, 2, tmp.path / "h.txt");
  std::ifstream in(tmp.path / "h.txt");
  double a, b, c, d;
  in >> a >> b >> c >> d;
  CHECK(a == 5);
  CHECK(b == 6);
  CHECK(c == 7);
  CHECK(d == 8);
  GrilVector bad = g;
  std::swap(bad.config.centers[0], bad.config.centers[1]);
  CHECK_THROWS(export_heatmap(bad, 0, 1, tmp.path / "x.txt"));
}

TEST_CASE("vertex value files") {
  TempDir tmp("vals");
  write(tmp.path / "f.csv", "0.1,0.2,0.3,0.4\n\n1,2\n");
  const auto rows = read_vertex_value_file(tmp.path / "f.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::vector<double>{1, 2});
  write(tmp.path / "g.csv", "0.1,0.2,0.3\n");
  CHECK_THROWS(read_vertex_value_file(tmp.path / "g.csv"));
  write(tmp.path / "h.csv", "0.1,abc\n");
  CHECK_THROWS(read_vertex_value_file(tmp.path / "h.csv"));
}
