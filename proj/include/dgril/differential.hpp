#ifndef DGRIL_DIFFERENTIAL_HPP
#define DGRIL_DIFFERENTIAL_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/gril.hpp"
#include "dgril/worm.hpp"

namespace dgril {

/// Sparse Jacobian of a GRIL vector. One row per entry, in GrilVector order.
///
/// In a top-dimensional stratum lambda = |f_a(sigma) - p_a| / j for the unique
/// constraining coordinate, so the only nonzero in a row is +-1/j (+-1 when
/// the constraint sits on the first square's boundary, j = 1).
struct GrilDifferential {
  struct Entry {
    std::size_t coord = 0;  // index into v_f
    double value = 0.0;
  };

  std::size_t cols = 0;      // 2n
  std::size_t centers = 0;   // s
  std::vector<std::optional<Entry>> rows;
  std::vector<std::size_t> row_center;
  // d lambda / d p^x, d lambda / d p^y for the row's center.
  std::vector<std::array<double, 2>> center_grads;
  std::vector<std::optional<ConstrainingRecord>> provenance;
  // Where the differential was evaluated; differs from the input only when
  // produced by gradient_sampled.
  std::vector<double> point;
  bool sampled = false;
  int attempts = 0;

  std::size_t size() const { return rows.size(); }
  std::vector<double> dense_row(std::size_t r) const;
};

/// Raised when some worm at its lambda has zero or several constraining
/// coordinates, or one on the center line.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(std::size_t row, std::vector<ConstrainingRecord> records);

  std::size_t row() const { return row_; }
  const std::vector<ConstrainingRecord>& records() const { return records_; }

 private:
  std::size_t row_;
  std::vector<ConstrainingRecord> records_;
};

GrilDifferential gril_differential(const SimplicialComplex& complex, std::span<const double> values,
                                   const GrilConfig& config, const GrilVector& forward,
                                   double tol = kConstrainingTol);

/// Uniform sample from the infinity-ball of radius epsilon around v_f, made
/// monotone again by lifting any coface that fell below a face to just above
/// it. The result stays within epsilon of the input.
std::vector<double> sample_nearby(const SimplicialComplex& complex, std::span<const double> values,
                                  double epsilon, std::uint64_t seed);

/// Differential at one random nearby point; redraws (up to max_attempts)
/// while the sample is itself degenerate.
GrilDifferential gradient_sampled(const SimplicialComplex& complex, std::span<const double> values,
                                  const GrilConfig& config, double epsilon, std::uint64_t seed,
                                  int max_attempts = 16);

struct VjpResult {
  std::vector<double> grad_values;   // 2n
  std::vector<double> grad_centers;  // 2s, interleaved (x, y)
};

VjpResult vjp(std::span<const double> upstream, const GrilDifferential& differential);

}  // namespace dgril

#endif  // DGRIL_DIFFERENTIAL_HPP
