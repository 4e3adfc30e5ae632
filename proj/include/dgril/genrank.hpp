#ifndef DGRIL_GENRANK_HPP
#define DGRIL_GENRANK_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/homology.hpp"
#include "dgril/worm.hpp"
#include "dgril/z2.hpp"

namespace dgril {

/// Finite sub-diagram of M_f restricted to a worm: every square corner and
/// center plus both boundary staircases, with the induced maps on covering
/// relations. It contains the minimal and maximal points of the worm and the
/// joins/meets of consecutive ones, so its limit and colimit agree with those
/// of the whole worm.
struct WormDiagram {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    Z2Matrix map;
  };

  WormSpec spec;
  int degree = 0;
  std::vector<WormOffset> offsets;
  std::vector<Point> points;
  std::vector<HomologyBasis> homology;
  std::vector<Edge> edges;

  // Induced map between comparable points (from <= to).
  Z2Matrix map(std::size_t from, std::size_t to) const;
};

WormDiagram build_worm_diagram(const SimplicialComplex& complex, std::span<const double> values,
                               const WormSpec& spec, int degree);

/// Generalized rank as the rank of the canonical map from the limit to the
/// colimit of the worm diagram. Throws std::logic_error if the rank depends
/// on which point represents the colimit class.
std::size_t genrank_oracle(const SimplicialComplex& complex, std::span<const double> values,
                           const WormSpec& spec, int degree);

/// Number of full bars of a zigzag of homology spaces whose consecutive
/// subcomplexes are nested (either direction).
std::size_t zigzag_full_bars(std::span<const HomologyBasis* const> spaces);

/// Points of the boundary zigzag: the lower staircase from its top-left end
/// to its bottom-right end, then the upper staircase back.
std::vector<WormOffset> boundary_path_offsets(int length);

/// Generalized rank over the worm as the full-bar count of the boundary
/// zigzag. An optional cache (matching complex and degree) reuses homology
/// across queries.
std::size_t genrank_fast(const SimplicialComplex& complex, std::span<const double> values,
                         const WormSpec& spec, int degree, HomologyCache* cache = nullptr);

}  // namespace dgril

#endif  // DGRIL_GENRANK_HPP
