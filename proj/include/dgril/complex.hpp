#ifndef DGRIL_COMPLEX_HPP
#define DGRIL_COMPLEX_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dgril {

enum class Axis : int { x = 0, y = 1 };

inline constexpr std::array<Axis, 2> kAxes{Axis::x, Axis::y};

inline std::size_t coord(std::size_t simplex, Axis axis) {
  return 2 * simplex + static_cast<std::size_t>(axis);
}

using Vertex = std::uint32_t;
using Simplex = std::vector<Vertex>;

/// Simplicial complex of dimension at most two.
///
/// Simplices are stored dimension-major, then in lexicographic vertex order.
/// Their indices are fixed at construction and index the bifiltration
/// vector: coordinate 2*i holds f_x(sigma_i) and 2*i+1 holds f_y(sigma_i)
/// (0-indexed form of the interleaved x/y layout).
class SimplicialComplex {
 public:
  static constexpr int kMaxDim = 2;

  SimplicialComplex() = default;

  std::size_t size() const { return simplices_.size(); }
  std::size_t vertex_count() const { return vertex_count_; }
  int max_dim() const { return max_dim_; }

  const Simplex& simplex(std::size_t i) const { return simplices_[i]; }
  int dim(std::size_t i) const { return static_cast<int>(simplices_[i].size()) - 1; }
  // Indices of the codimension-1 faces.
  std::span<const std::size_t> faces(std::size_t i) const { return faces_[i]; }
  // Index of the simplex for vertex v (vertices come first, in order).
  std::size_t vertex_index(Vertex v) const { return vertex_simplex_[v]; }

  // Index of the given (sorted) simplex, or size() when absent.
  std::size_t find(const Simplex& s) const;

  // [begin, end) index range of the simplices of dimension d.
  std::pair<std::size_t, std::size_t> dim_range(int d) const;

 private:
  friend SimplicialComplex build_complex(std::size_t, std::vector<Simplex>, bool);

  std::size_t vertex_count_ = 0;
  int max_dim_ = -1;
  std::vector<Simplex> simplices_;
  std::vector<std::vector<std::size_t>> faces_;
  std::vector<std::size_t> vertex_simplex_;
  std::array<std::size_t, kMaxDim + 2> dim_start_{};
};

/// Validates and orders a simplex list. With auto_close, missing faces are
/// added; otherwise a missing face throws std::invalid_argument. Duplicates
/// always throw. Every vertex in [0, vertex_count) becomes a 0-simplex, but
/// without auto_close a vertex only counts as a face if it was listed.
SimplicialComplex build_complex(std::size_t vertex_count, std::vector<Simplex> simplices,
                                bool auto_close = true);

/// Complex of a simple undirected graph.
SimplicialComplex graph_complex(std::size_t vertex_count,
                                const std::vector<std::pair<Vertex, Vertex>>& edges);

struct MonotoneViolation {
  std::size_t face;
  std::size_t coface;
  Axis axis;
};

/// Every (face, coface, axis) with f_axis(face) > f_axis(coface).
std::vector<MonotoneViolation> validate_monotone(const SimplicialComplex& complex,
                                                 std::span<const double> values);

/// Argmax vertex per simplex and axis for the lower-star extension.
struct MaxVertexMap {
  // routed[coord(i, a)] = vertex supplying f_a(sigma_i).
  std::vector<Vertex> routed;
  // tied[coord(i, a)] is set when more than one vertex attains the max.
  std::vector<bool> tied;

  Vertex vertex(std::size_t simplex, Axis axis) const { return routed[coord(simplex, axis)]; }
};

struct LowerStar {
  std::vector<double> values;  // length 2n
  MaxVertexMap routing;
};

/// The map q: per-vertex (x, y) values, laid out [x_0, y_0, x_1, y_1, ...],
/// extended to every simplex by componentwise max. Ties go to the lowest
/// vertex index.
LowerStar lower_star_extend(const SimplicialComplex& complex, std::span<const double> vertex_values);

/// Chain rule through q: each simplex-coordinate gradient lands on its routed
/// vertex coordinate.
std::vector<double> pushback_gradient_q(const SimplicialComplex& complex,
                                        std::span<const double> grad_values,
                                        const MaxVertexMap& routing);

/// Smallest positive difference between two values on the same axis, or
/// +infinity when no such pair exists.
double min_positive_gap(std::span<const double> values);

/// Adds seeded, pairwise-distinct jitter in (0, epsilon) to every coordinate
/// of every simplex of dimension >= 1. Jitter grows with dimension so a
/// coface never drops below a tied face. Throws std::invalid_argument unless
/// 0 < epsilon < min_positive_gap / 2.
std::vector<double> perturb_extension(const SimplicialComplex& complex,
                                      std::span<const double> values, double epsilon,
                                      std::uint64_t seed);

/// perturb_extension(values) - values with epsilon shrunk to a quarter of the
/// minimum gap when needed. Lets callers hold the jitter fixed while moving
/// the underlying values.
std::vector<double> tie_jitter(const SimplicialComplex& complex, std::span<const double> values,
                               double epsilon, std::uint64_t seed);

/// Per-axis affine map v -> (v - offset) * scale.
struct RangeRecord {
  std::array<double, 2> offset{0.0, 0.0};
  std::array<double, 2> scale{1.0, 1.0};
  // Axis was constant; every value maps to 0.5 and scale is reported as 0.
  std::array<bool, 2> degenerate{false, false};

  double apply(double v, Axis a) const;
  double invert(double v, Axis a) const;
};

struct NormalizedValues {
  std::vector<double> values;
  RangeRecord record;
};

/// Rescales each axis of an interleaved (x, y) vector to [0, 1].
NormalizedValues normalize_range(std::span<const double> values);
std::vector<double> denormalize_range(std::span<const double> values, const RangeRecord& record);

}  // namespace dgril

#endif  // DGRIL_COMPLEX_HPP
