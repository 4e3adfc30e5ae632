#include "dgril/presets.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace dgril {

FiltrationSource parse_filtration_source(const std::string& name) {
  if (name == "degree") return FiltrationSource::degree;
  if (name == "lowerstar-attributes") return FiltrationSource::lowerstar_attributes;
  if (name == "file") return FiltrationSource::file;
  throw std::invalid_argument("unknown filtration '" + name + "' (degree, lowerstar-attributes, file)");
}

std::string to_string(FiltrationSource source) {
  switch (source) {
    case FiltrationSource::degree: return "degree";
    case FiltrationSource::lowerstar_attributes: return "lowerstar-attributes";
    case FiltrationSource::file: return "file";
  }
  return "?";
}

std::vector<double> preset_vertex_values(const GraphRecord& graph, FiltrationSource source) {
  const std::size_t m = graph.vertex_count;
  std::vector<double> out(2 * m, 0.0);
  if (source == FiltrationSource::degree) {
    std::vector<std::vector<Vertex>> adj(m);
    for (auto [a, b] : graph.edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (std::size_t v = 0; v < m; ++v) {
      std::vector<int> dist(m, -1);
      std::queue<Vertex> q;
      dist[v] = 0;
      q.push(static_cast<Vertex>(v));
      int ecc = 0;
      while (!q.empty()) {
        const Vertex u = q.front();
        q.pop();
        ecc = std::max(ecc, dist[u]);
        for (Vertex w : adj[u])
          if (dist[w] < 0) {
            dist[w] = dist[u] + 1;
            q.push(w);
          }
      }
      out[2 * v] = static_cast<double>(adj[v].size());
      out[2 * v + 1] = static_cast<double>(ecc);
    }
  } else if (source == FiltrationSource::lowerstar_attributes) {
    if (graph.feature_dim == 0) throw std::invalid_argument("graph has no vertex features");
    for (std::size_t v = 0; v < m; ++v) {
      out[2 * v] = graph.feature(v, 0);
      out[2 * v + 1] = graph.feature(v, graph.feature_dim > 1 ? 1 : 0);
    }
  } else {
    throw std::invalid_argument("file filtrations are read with read_vertex_value_file");
  }
  return out;
}

std::vector<std::vector<double>> read_vertex_value_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open filtration file " + path.string());
  std::vector<std::vector<double>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
      if (end == cell.c_str() || *end != '\0')
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad value '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() % 2 != 0)
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": odd number of values");
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<double> normalized_bifiltration(const SimplicialComplex& complex,
                                            const std::vector<double>& vertex_values) {
  return normalize_range(lower_star_extend(complex, vertex_values).values).values;
}

}  // namespace dgril
