#ifndef DGRIL_GRIL_HPP
#define DGRIL_GRIL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/homology.hpp"

namespace dgril {

/// Centers (a*stride/resolution, b*stride/resolution) for all a, b with
/// a*stride < resolution. Ordered with y outer and x inner, so the center at
/// grid cell (a, b) has index b*side + a.
std::vector<Point> sample_centers(int resolution, int stride);

enum class SearchMode { exact, grid };

struct GrilConfig {
  int length = 2;
  std::vector<int> k_values{1, 2, 3};
  std::vector<int> hom_dims{0, 1};
  std::vector<Point> centers = sample_centers(100, 10);
  SearchMode mode = SearchMode::exact;
  int resolution = 100;  // grid mode only
  // Candidates closer than this merge. Tie-breaking jitter routinely puts
  // distinct candidates within 1e-9 of each other, so only exact repeats merge
  // by default.
  double dedup_tol = 0.0;

  void validate() const;
  // Non-fatal issues, e.g. centers outside [0,1]^2.
  std::vector<std::string> warnings() const;

  std::size_t size() const { return hom_dims.size() * k_values.size() * centers.size(); }
  // Flattened (hom_dim, k, center) position, outer to inner.
  std::size_t index(std::size_t dim_idx, std::size_t k_idx, std::size_t center_idx) const {
    return (dim_idx * k_values.size() + k_idx) * centers.size() + center_idx;
  }
  // Stable one-line rendering; feeds checkpoint hashes and --dry-run.
  std::string describe() const;
};

struct GrilVector {
  std::vector<double> values;
  GrilConfig config;
};

/// lambda(p, k, l) in homology degree `degree`: the supremum of the widths d
/// with genrank >= k over the l-worm at p, or 0 when no width qualifies.
///
/// The rank only changes at candidate widths, so each candidate and each open
/// gap between consecutive candidates is probed once. A qualifying gap just
/// below a candidate makes that candidate the supremum even when the rank
/// drops exactly there. For l <= 2 the worms grow with d and the rank is
/// non-increasing, so the probes are binary searched; longer worms are not
/// nested and every probe is scanned.
double gril_value(const SimplicialComplex& complex, std::span<const double> values, Point center,
                  int k, int length, int degree, SearchMode mode = SearchMode::exact,
                  int resolution = 100);

/// All lambda values in config order. Parallel over (degree, center) with
/// OpenMP; every result lands in its fixed slot.
GrilVector gril_vector(const SimplicialComplex& complex, std::span<const double> values,
                       const GrilConfig& config);

/// Single-threaded reference for gril_vector.
GrilVector gril_vector_serial(const SimplicialComplex& complex, std::span<const double> values,
                              const GrilConfig& config);

/// lambda for every k of the config at one center, sharing rank queries.
std::vector<double> gril_center_values(const SimplicialComplex& complex,
                                       std::span<const double> values, Point center,
                                       int degree, const GrilConfig& config,
                                       HomologyCache& cache);

}  // namespace dgril

#endif  // DGRIL_GRIL_HPP
