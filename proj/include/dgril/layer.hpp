#ifndef DGRIL_LAYER_HPP
#define DGRIL_LAYER_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/gril.hpp"

namespace dgril {

/// Array-in/array-out GRIL layer for wrapping in an external autodiff
/// framework. Inputs are contiguous per-vertex (x, y) buffers; outputs are
/// GRIL vectors in config order and gradients of length 2 * vertex_count.

struct LayerOptions {
  double jitter = 1e-6;
  std::uint64_t seed = 0;
};

class LayerHandle {
 public:
  std::uint64_t id() const { return id_; }
  bool released() const { return released_; }
  const SimplicialComplex& complex() const { return complex_; }
  const GrilConfig& config() const { return config_; }
  const LayerOptions& options() const { return options_; }
  std::size_t output_size() const { return config_.size(); }

 private:
  friend LayerHandle layer_create(std::size_t, const std::vector<Simplex>&, const GrilConfig&, LayerOptions);
  friend void layer_release(LayerHandle&);

  std::uint64_t id_ = 0;
  bool released_ = false;
  SimplicialComplex complex_;
  GrilConfig config_;
  LayerOptions options_;
};

/// Everything backward needs from one forward call.
struct LayerToken {
  std::uint64_t handle = 0;
  std::vector<double> values;  // bifiltration vector GRIL saw
  MaxVertexMap routing;
  GrilVector forward;
};

struct LayerOutput {
  std::vector<double> gril;
  LayerToken token;
};

class StaleTokenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validates the simplex list (must already be face-closed) and config.
LayerHandle layer_create(std::size_t vertex_count, const std::vector<Simplex>& simplices,
                         const GrilConfig& config, LayerOptions options = {});

/// lower_star_extend + tie jitter + gril_vector.
LayerOutput layer_forward(const LayerHandle& handle, std::span<const double> vertex_values);

/// vjp + pushback through the lower-star map; falls back to gradient
/// sampling when the forward point is degenerate. Throws StaleTokenError for
/// a token from another handle or a released one.
std::vector<double> layer_backward(const LayerHandle& handle, const LayerToken& token,
                                   std::span<const double> upstream);

void layer_release(LayerHandle& handle);

}  // namespace dgril

#endif  // DGRIL_LAYER_HPP
