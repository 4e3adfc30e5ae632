#ifndef DGRIL_TEST_SUPPORT_HPP
#define DGRIL_TEST_SUPPORT_HPP

#include <algorithm>
#include <random>
#include <vector>

#include "dgril/complex.hpp"

namespace dgril::testing {

// Random clique-ish complex: each edge with probability pe, each triangle
// whose edges are present with probability pt.
inline SimplicialComplex random_complex(std::mt19937_64& rng, std::size_t n, double pe, double pt) {
  std::bernoulli_distribution edge(pe), tri(pt);
  std::vector<Simplex> simplices;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (edge(rng)) {
        simplices.push_back({a, b});
        adj[a][b] = adj[b][a] = true;
      }
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      for (Vertex c = b + 1; c < n; ++c)
        if (adj[a][b] && adj[a][c] && adj[b][c] && tri(rng)) simplices.push_back({a, b, c});
  return build_complex(n, simplices);
}

// Monotone bifiltration: random values per simplex raised to the max over
// faces. With `levels` > 0 values are drawn from a coarse grid so ties and
// boundary coincidences are common.
inline std::vector<double> random_monotone(std::mt19937_64& rng, const SimplicialComplex& k,
                                           int levels = 0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> g(0, std::max(levels, 1));
  std::vector<double> v(2 * k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (Axis a : kAxes) {
      double x = levels > 0 ? static_cast<double>(g(rng)) / levels : u(rng);
      for (std::size_t f : k.faces(i)) x = std::max(x, v[coord(f, a)]);
      v[coord(i, a)] = x;
    }
  }
  return v;
}

}  // namespace dgril::testing

#endif  // DGRIL_TEST_SUPPORT_HPP
