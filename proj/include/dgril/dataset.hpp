#ifndef DGRIL_DATASET_HPP
#define DGRIL_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/gril.hpp"

namespace dgril {

struct GraphRecord {
  std::size_t vertex_count = 0;
  // Undirected, each edge once with first < second.
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::size_t feature_dim = 0;
  std::vector<double> features;  // vertex_count x feature_dim, row-major
  int label = 0;

  double feature(std::size_t v, std::size_t f) const { return features[v * feature_dim + f]; }
};

struct TuDataset {
  std::string name;
  std::vector<GraphRecord> graphs;
  // Original label value of each class index 0..C-1 (sorted ascending).
  std::vector<long> class_values;

  std::size_t num_classes() const { return class_values.size(); }
};

/// Loads a dataset in the TU format from `directory`, whose basename is the
/// dataset name DS: DS_A.txt, DS_graph_indicator.txt, DS_graph_labels.txt,
/// and optionally DS_node_attributes.txt or DS_node_labels.txt. Node
/// attributes become features; otherwise node labels are one-hot encoded;
/// otherwise every vertex gets the single feature 1.
TuDataset load_tu_dataset(const std::filesystem::path& directory);

/// count/2 cycle graphs (label 1) and count/2 random trees (label 0) with
/// sizes uniform in [min_size, max_size], in shuffled order. Features per
/// vertex: degree / (size - 1) and uniform noise in [0, 1).
std::vector<GraphRecord> synth_cycles_vs_trees(std::size_t count, std::size_t min_size,
                                               std::size_t max_size, std::uint64_t seed);

SimplicialComplex graph_to_complex(const GraphRecord& graph);

struct VectorRow {
  std::string graph_id;
  int label = 0;
  std::vector<double> values;
};

/// Column names h{dim}_k{k}_c{center} in GrilVector order.
std::vector<std::string> vector_columns(const GrilConfig& config);

/// CSV with header graph_id,label,<vector_columns>. Written to a temporary
/// file and renamed into place.
void export_vectors(const std::vector<VectorRow>& rows, const GrilConfig& config,
                    const std::filesystem::path& path);

struct VectorTable {
  std::vector<std::string> columns;  // value columns only
  std::vector<VectorRow> rows;
};

VectorTable read_vectors(const std::filesystem::path& path);

/// Whitespace-separated matrix of lambda over the center grid for one
/// (hom_dim, k): one line per distinct y (ascending), one column per distinct
/// x (ascending). Throws if the centers are not a full grid in
/// sample_centers order.
void export_heatmap(const GrilVector& vector, int hom_dim, int k, const std::filesystem::path& path);

/// Writes `contents` to path via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace dgril

#endif  // DGRIL_DATASET_HPP
