#include "dgril/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dgril {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

long parse_long(const std::string& s, const fs::path& file, std::size_t line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(file.string() + ":" + std::to_string(line + 1) + ": expected an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const fs::path& file, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error(file.string() + ":" + std::to_string(line + 1) + ": expected a number, got '" + s + "'");
  return v;
}

fs::path required(const fs::path& dir, const std::string& name) {
  fs::path p = dir / name;
  if (!fs::exists(p)) throw std::runtime_error("missing dataset file " + p.string());
  return p;
}

}  // namespace

TuDataset load_tu_dataset(const fs::path& directory) {
  if (!fs::is_directory(directory)) throw std::runtime_error("not a directory: " + directory.string());
  fs::path dir = directory;
  std::string name = dir.filename().string();
  if (name.empty()) name = dir.parent_path().filename().string();

  const fs::path a_file = required(dir, name + "_A.txt");
  const fs::path ind_file = required(dir, name + "_graph_indicator.txt");
  const fs::path lab_file = required(dir, name + "_graph_labels.txt");

  TuDataset ds;
  ds.name = name;

  // Nodes are 1-indexed in file order; graphs too.
  const auto ind_lines = read_lines(ind_file);
  const std::size_t node_count = ind_lines.size();
  std::vector<std::size_t> node_graph(node_count), node_local(node_count);
  std::size_t graph_count = 0;
  std::vector<long> raw_graph(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    raw_graph[i] = parse_long(ind_lines[i], ind_file, i);
    if (raw_graph[i] < 1) throw std::runtime_error(ind_file.string() + ": graph ids must be >= 1");
    graph_count = std::max(graph_count, static_cast<std::size_t>(raw_graph[i]));
  }

  const auto lab_lines = read_lines(lab_file);
  if (lab_lines.size() != graph_count)
    throw std::runtime_error(lab_file.string() + ": expected " + std::to_string(graph_count) + " labels, found " +
                             std::to_string(lab_lines.size()));
  std::vector<long> raw_labels(graph_count);
  for (std::size_t g = 0; g < graph_count; ++g) raw_labels[g] = parse_long(lab_lines[g], lab_file, g);
  std::set<long> label_set(raw_labels.begin(), raw_labels.end());
  ds.class_values.assign(label_set.begin(), label_set.end());

  ds.graphs.resize(graph_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    const std::size_t g = static_cast<std::size_t>(raw_graph[i]) - 1;
    node_graph[i] = g;
    node_local[i] = ds.graphs[g].vertex_count++;
  }
  for (std::size_t g = 0; g < graph_count; ++g) {
    ds.graphs[g].label = static_cast<int>(
        std::lower_bound(ds.class_values.begin(), ds.class_values.end(), raw_labels[g]) - ds.class_values.begin());
  }

  std::vector<std::set<std::pair<Vertex, Vertex>>> edge_sets(graph_count);
  const auto a_lines = read_lines(a_file);
  for (std::size_t l = 0; l < a_lines.size(); ++l) {
    const auto parts = split(a_lines[l], ',');
    if (parts.size() != 2) throw std::runtime_error(a_file.string() + ":" + std::to_string(l + 1) + ": expected 'u, v'");
    const long u = parse_long(parts[0], a_file, l);
    const long v = parse_long(parts[1], a_file, l);
    if (u < 1 || v < 1 || static_cast<std::size_t>(u) > node_count || static_cast<std::size_t>(v) > node_count)
      throw std::runtime_error(a_file.string() + ":" + std::to_string(l + 1) + ": node index out of range");
    const std::size_t iu = static_cast<std::size_t>(u) - 1, iv = static_cast<std::size_t>(v) - 1;
    if (node_graph[iu] != node_graph[iv])
      throw std::runtime_error(a_file.string() + ":" + std::to_string(l + 1) + ": edge crosses graph boundary");
    if (iu == iv) continue;
    auto a = static_cast<Vertex>(node_local[iu]), b = static_cast<Vertex>(node_local[iv]);
    if (a > b) std::swap(a, b);
    edge_sets[node_graph[iu]].insert({a, b});
  }
  for (std::size_t g = 0; g < graph_count; ++g)
    ds.graphs[g].edges.assign(edge_sets[g].begin(), edge_sets[g].end());

  const fs::path attr_file = dir / (name + "_node_attributes.txt");
  const fs::path nlab_file = dir / (name + "_node_labels.txt");
  if (fs::exists(attr_file)) {
    const auto lines = read_lines(attr_file);
    if (lines.size() != node_count) throw std::runtime_error(attr_file.string() + ": one line per node expected");
    std::size_t f_dim = 0;
    for (std::size_t i = 0; i < node_count; ++i) {
      const auto parts = split(lines[i], ',');
      if (i == 0) {
        f_dim = parts.size();
        for (auto& g : ds.graphs) {
          g.feature_dim = f_dim;
          g.features.assign(g.vertex_count * f_dim, 0.0);
        }
      }
      if (parts.size() != f_dim) throw std::runtime_error(attr_file.string() + ": ragged attribute rows");
      auto& g = ds.graphs[node_graph[i]];
      for (std::size_t f = 0; f < f_dim; ++f) g.features[node_local[i] * f_dim + f] = parse_double(parts[f], attr_file, i);
    }
  } else if (fs::exists(nlab_file)) {
    const auto lines = read_lines(nlab_file);
    if (lines.size() != node_count) throw std::runtime_error(nlab_file.string() + ": one line per node expected");
    std::vector<long> raw(node_count);
    for (std::size_t i = 0; i < node_count; ++i) raw[i] = parse_long(split(lines[i], ',')[0], nlab_file, i);
    std::set<long> uniq(raw.begin(), raw.end());
    const std::vector<long> values(uniq.begin(), uniq.end());
    for (auto& g : ds.graphs) {
      g.feature_dim = values.size();
      g.features.assign(g.vertex_count * values.size(), 0.0);
    }
    for (std::size_t i = 0; i < node_count; ++i) {
      const auto k = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), raw[i]) - values.begin());
      auto& g = ds.graphs[node_graph[i]];
      g.features[node_local[i] * g.feature_dim + k] = 1.0;
    }
  } else {
    for (auto& g : ds.graphs) {
      g.feature_dim = 1;
      g.features.assign(g.vertex_count, 1.0);
    }
  }
  return ds;
}

std::vector<GraphRecord> synth_cycles_vs_trees(std::size_t count, std::size_t min_size,
                                               std::size_t max_size, std::uint64_t seed) {
  if (count % 2 != 0) throw std::invalid_argument("graph count must be even");
  if (min_size < 3 || max_size < min_size) throw std::invalid_argument("size range must satisfy 3 <= min <= max");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(min_size, max_size);
  std::uniform_real_distribution<double> noise(0.0, 1.0);

  std::vector<GraphRecord> out;
  for (std::size_t i = 0; i < count; ++i) {
    GraphRecord g;
    g.vertex_count = size(rng);
    g.label = i < count / 2 ? 1 : 0;
    const auto n = static_cast<Vertex>(g.vertex_count);
    if (g.label == 1) {
      for (Vertex v = 0; v + 1 < n; ++v) g.edges.push_back({v, static_cast<Vertex>(v + 1)});
      g.edges.push_back({0, static_cast<Vertex>(n - 1)});
    } else {
      for (Vertex v = 1; v < n; ++v) {
        std::uniform_int_distribution<Vertex> parent(0, v - 1);
        g.edges.push_back({parent(rng), v});
      }
    }
    std::sort(g.edges.begin(), g.edges.end());
    std::vector<std::size_t> degree(g.vertex_count, 0);
    for (auto [a, b] : g.edges) ++degree[a], ++degree[b];
    g.feature_dim = 2;
    g.features.resize(2 * g.vertex_count);
    for (std::size_t v = 0; v < g.vertex_count; ++v) {
      g.features[2 * v] = static_cast<double>(degree[v]) / static_cast<double>(g.vertex_count - 1);
      g.features[2 * v + 1] = noise(rng);
    }
    out.push_back(std::move(g));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

SimplicialComplex graph_to_complex(const GraphRecord& graph) {
  return graph_complex(graph.vertex_count, graph.edges);
}

std::vector<std::string> vector_columns(const GrilConfig& config) {
  std::vector<std::string> cols(config.size());
  for (std::size_t di = 0; di < config.hom_dims.size(); ++di)
    for (std::size_t ki = 0; ki < config.k_values.size(); ++ki)
      for (std::size_t c = 0; c < config.centers.size(); ++c)
        cols[config.index(di, ki, c)] = "h" + std::to_string(config.hom_dims[di]) + "_k" +
                                        std::to_string(config.k_values[ki]) + "_c" + std::to_string(c);
  return cols;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void export_vectors(const std::vector<VectorRow>& rows, const GrilConfig& config, const fs::path& path) {
  const auto cols = vector_columns(config);
  std::string out = "graph_id,label";
  for (const auto& c : cols) out += "," + c;
  out += "\n";
  for (const auto& r : rows) {
    if (r.values.size() != cols.size())
      throw std::invalid_argument("row " + r.graph_id + " has " + std::to_string(r.values.size()) +
                                  " values, config expects " + std::to_string(cols.size()));
    if (r.graph_id.find_first_of(",\n") != std::string::npos)
      throw std::invalid_argument("graph id must not contain commas or newlines");
    out += r.graph_id + "," + std::to_string(r.label);
    for (double v : r.values) out += "," + format_double(v);
    out += "\n";
  }
  write_file_atomic(path, out);
}

VectorTable read_vectors(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
  auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "graph_id" || header[1] != "label")
    throw std::runtime_error(path.string() + ": header must start with graph_id,label");
  VectorTable t;
  t.columns.assign(header.begin() + 2, header.end());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != header.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno + 1) + ": wrong column count");
    VectorRow r;
    r.graph_id = parts[0];
    r.label = static_cast<int>(parse_long(parts[1], path, lineno));
    for (std::size_t i = 2; i < parts.size(); ++i) r.values.push_back(parse_double(parts[i], path, lineno));
    t.rows.push_back(std::move(r));
    ++lineno;
  }
  return t;
}

void export_heatmap(const GrilVector& vector, int hom_dim, int k, const fs::path& path) {
  const GrilConfig& cfg = vector.config;
  const auto di = std::find(cfg.hom_dims.begin(), cfg.hom_dims.end(), hom_dim);
  const auto ki = std::find(cfg.k_values.begin(), cfg.k_values.end(), k);
  if (di == cfg.hom_dims.end() || ki == cfg.k_values.end())
    throw std::invalid_argument("heatmap (hom_dim, k) not in the config");
  std::set<double> xs_set, ys_set;
  for (Point p : cfg.centers) {
    xs_set.insert(p.x);
    ys_set.insert(p.y);
  }
  const std::vector<double> xs(xs_set.begin(), xs_set.end()), ys(ys_set.begin(), ys_set.end());
  if (xs.size() * ys.size() != cfg.centers.size())
    throw std::invalid_argument("centers are not arranged on a full grid");
  for (std::size_t b = 0; b < ys.size(); ++b)
    for (std::size_t a = 0; a < xs.size(); ++a)
      if (cfg.centers[b * xs.size() + a] != Point{xs[a], ys[b]})
        throw std::invalid_argument("centers are not in grid order (y outer, x inner)");

  std::string out;
  for (std::size_t b = 0; b < ys.size(); ++b) {
    for (std::size_t a = 0; a < xs.size(); ++a) {
      if (a) out += ' ';
      out += format_double(vector.values[cfg.index(static_cast<std::size_t>(di - cfg.hom_dims.begin()),
                                                   static_cast<std::size_t>(ki - cfg.k_values.begin()),
                                                   b * xs.size() + a)]);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace dgril
