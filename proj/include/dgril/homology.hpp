#ifndef DGRIL_HOMOLOGY_HPP
#define DGRIL_HOMOLOGY_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/z2.hpp"

namespace dgril {

struct Point {
  double x = 0.0;
  double y = 0.0;

  double operator[](Axis a) const { return a == Axis::x ? x : y; }
  bool operator==(const Point&) const = default;
};

/// Membership tolerance for sublevel queries. Worm corners are computed as
/// p + m * d in floating point, so a simplex sitting exactly on a corner line
/// must not fall out through rounding.
inline constexpr double kBoundaryTol = 1e-12;

/// {i : f_x(sigma_i) <= point.x + tol and f_y(sigma_i) <= point.y + tol},
/// as a mask over the simplices of the complex.
BitVector sublevel_mask(std::span<const double> values, Point point, double tol = 0.0);

/// Sorted simplex indices of the sublevel complex at point.
std::vector<std::size_t> sublevel_complex(const SimplicialComplex& complex,
                                          std::span<const double> values, Point point);

/// Basis of H_i of a face-closed subcomplex over Z/2.
///
/// Cycles are chains over the simplices of the ambient complex. The reduced
/// boundary data is kept so that any cycle of the subcomplex can be written
/// in this basis.
class HomologyBasis {
 public:
  int degree() const { return degree_; }
  std::size_t rank() const { return cycles_.size(); }
  const BitVector& subcomplex() const { return subcomplex_; }
  const std::vector<BitVector>& cycles() const { return cycles_; }

  // Coordinates of the class of `cycle`. Throws std::invalid_argument if the
  // chain is not a cycle supported on the subcomplex.
  BitVector coordinates(const BitVector& cycle) const;

 private:
  friend HomologyBasis homology_basis(const SimplicialComplex&, const BitVector&, int);

  int degree_ = 0;
  BitVector subcomplex_;
  std::vector<BitVector> cycles_;
  // Boundaries (tag 0) and class representatives, keyed by pivot.
  EchelonBasis table_;
};

HomologyBasis homology_basis(const SimplicialComplex& complex, const BitVector& subcomplex,
                             int degree);

/// Matrix of H_i(small) -> H_i(big) in the two bases. Throws if small is not
/// contained in big.
Z2Matrix induced_map(const HomologyBasis& small, const HomologyBasis& big);

/// Memoizes homology bases by subcomplex mask for one complex and degree.
/// Not thread-safe; give each worker its own.
class HomologyCache {
 public:
  HomologyCache(const SimplicialComplex& complex, int degree) : complex_(&complex), degree_(degree) {}

  const HomologyBasis& get(const BitVector& subcomplex);
  int degree() const { return degree_; }
  const SimplicialComplex& complex() const { return *complex_; }
  std::size_t size() const { return cache_.size(); }

 private:
  const SimplicialComplex* complex_;
  int degree_;
  std::unordered_map<BitVector, std::unique_ptr<HomologyBasis>, BitVectorHash> cache_;
};

}  // namespace dgril

#endif  // DGRIL_HOMOLOGY_HPP
