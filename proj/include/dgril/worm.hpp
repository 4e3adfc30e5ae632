#ifndef DGRIL_WORM_HPP
#define DGRIL_WORM_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/homology.hpp"

namespace dgril {

/// Discrete l-worm: the union of 2l-1 closed d-squares (half side d)
/// centered at p + j*d*(1,-1) for j in {-(l-1), ..., l-1}.
struct WormSpec {
  Point center;
  double width = 0.0;
  int length = 1;

  void validate() const;
};

/// Worm point expressed as an integer offset from the center in units of d.
struct WormOffset {
  int dx = 0;
  int dy = 0;

  bool operator==(const WormOffset&) const = default;
  bool operator<=(const WormOffset& o) const { return dx <= o.dx && dy <= o.dy; }
};

inline Point at_offset(const WormSpec& spec, WormOffset o) {
  return {spec.center.x + o.dx * spec.width, spec.center.y + o.dy * spec.width};
}

std::vector<Point> worm_squares(const WormSpec& spec);

bool worm_contains(const WormSpec& spec, Point point, double tol = 0.0);

/// Corner offsets of the lower staircase, from the top-left end to the
/// bottom-right end. For length l these are (-l, l), then alternately the
/// lower-left corner of square j, (j-1, -j-1), and the join of two
/// consecutive ones, (j, -j-1), and finally (l, -l).
std::vector<WormOffset> lower_staircase_offsets(int length);
/// Upper staircase from the bottom-right end back to the top-left end; the
/// point reflection of the lower one through the center.
std::vector<WormOffset> upper_staircase_offsets(int length);

struct BoundaryStaircase {
  std::vector<Point> lower;
  std::vector<Point> upper;
};

/// Exact corner lists of the worm boundary. Throws for d = 0.
BoundaryStaircase boundary_staircase(const WormSpec& spec);

/// {0} together with every |f_a(sigma_i) - p_a| / j for j = 1..l, sorted and
/// deduplicated within tol. Sublevel complexes at worm corners can only change
/// at these widths.
std::vector<double> candidate_widths(std::span<const double> values, Point center, int length,
                                     double tol = 0.0);

enum class Side { lower, upper };

/// A simplex coordinate lying on a worm boundary line p_a +/- j*d.
struct ConstrainingRecord {
  std::size_t simplex = 0;
  Axis axis = Axis::x;
  Side side = Side::lower;
  int multiplier = 0;

  bool operator==(const ConstrainingRecord&) const = default;
};

std::string to_string(const ConstrainingRecord& r);

/// Default match tolerance for constraining coordinates.
inline constexpr double kConstrainingTol = 1e-12;

/// Every simplex coordinate at distance j*d (j in 0..l) from the matching
/// center coordinate whose upper-set meets the worm of the given width.
///
/// The side is read off the sign of the offset: below the center is lower,
/// above is upper. A coordinate on the center line (j = 0) is reported as
/// lower.
std::vector<ConstrainingRecord> constraining_coordinates(std::span<const double> values,
                                                         const WormSpec& spec,
                                                         double tol = kConstrainingTol);

/// One hyperplane of the arrangement that v lies on (within tolerance):
///   |v[first] - p_a| * second_mult == |v[second] - p_b| * first_mult,
/// i.e. both coordinates put a boundary line on the worm at the same width.
/// first_mult == 0 encodes a coordinate on the center line itself.
/// Family: 1 x/x, 2 y/y, 3 x/y, 4 y/x.
struct HyperplaneHit {
  int family = 0;
  std::size_t center_index = 0;
  std::size_t first_simplex = 0;
  Axis first_axis = Axis::x;
  std::size_t second_simplex = 0;
  Axis second_axis = Axis::x;
  int first_mult = 0;
  int second_mult = 1;
  double gap = 0.0;
};

std::string to_string(const HyperplaneHit& h);

/// All hyperplane hits over the given centers. With only_coord set, restricts
/// to hits that involve that coordinate (index into values).
std::vector<HyperplaneHit> detect_degeneracy(std::span<const double> values,
                                             std::span<const Point> centers, int length,
                                             double tol,
                                             std::size_t only_coord = static_cast<std::size_t>(-1));

}  // namespace dgril

#endif  // DGRIL_WORM_HPP
