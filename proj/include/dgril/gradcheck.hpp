#ifndef DGRIL_GRADCHECK_HPP
#define DGRIL_GRADCHECK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/gril.hpp"
#include "dgril/worm.hpp"

namespace dgril {

struct GradcheckOptions {
  double h = 1e-4;
  // The step shrinks by 10x while a hyperplane lies within reach, down to this.
  double min_h = 1e-9;
  double tol = 1e-6;
};

struct CoordinateResult {
  std::size_t coord = 0;
  double h = 0.0;
  bool exact = false;
  bool flagged = false;  // a hyperplane (or face tie) sits within the final step
  double max_error = 0.0;
  std::vector<HyperplaneHit> hits;
};

struct GradcheckReport {
  std::size_t coordinates = 0;
  std::size_t exact = 0;
  std::size_t flagged_mismatches = 0;
  std::size_t unflagged_mismatches = 0;
  std::vector<CoordinateResult> mismatches;
  std::vector<CoordinateResult> flagged;

  double exact_fraction() const {
    return coordinates == 0 ? 1.0 : static_cast<double>(exact) / static_cast<double>(coordinates);
  }
  void merge(const GradcheckReport& other);
};

/// Compares every column of gril_differential with central differences of
/// gril_vector. Throws DegeneracyError if the differential itself fails.
GradcheckReport check_differential(const SimplicialComplex& complex, std::span<const double> values,
                                   const GrilConfig& config, const GradcheckOptions& options = {});

/// Same comparison for loss(u) = w . G(q(u) + jitter), the lower-star
/// pipeline used in training, with the analytic gradient taken through vjp
/// and pushback_gradient_q.
GradcheckReport check_pipeline(const SimplicialComplex& complex, std::span<const double> vertex_values,
                               std::span<const double> jitter, std::span<const double> weights,
                               const GrilConfig& config, const GradcheckOptions& options = {});

struct GradcheckInstance {
  SimplicialComplex complex;
  std::vector<double> values;
};

/// Random complex on [min_vertices, max_vertices] vertices with values whose
/// cofaces sit strictly above their faces.
GradcheckInstance random_generic_instance(std::uint64_t seed, int min_vertices = 5,
                                          int max_vertices = 7);

std::string to_string(const GradcheckReport& report);

}  // namespace dgril

#endif  // DGRIL_GRADCHECK_HPP
