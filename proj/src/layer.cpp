#include "dgril/layer.hpp"

#include <atomic>
#include <string>

#include "dgril/differential.hpp"

namespace dgril {

namespace {

std::atomic<std::uint64_t> next_handle{1};

void check_live(const LayerHandle& handle) {
  if (handle.released()) throw StaleTokenError("layer handle " + std::to_string(handle.id()) + " was released");
}

}  // namespace

LayerHandle layer_create(std::size_t vertex_count, const std::vector<Simplex>& simplices,
                         const GrilConfig& config, LayerOptions options) {
  config.validate();
  if (!(options.jitter > 0)) throw std::invalid_argument("layer jitter must be positive");
  LayerHandle h;
  h.complex_ = build_complex(vertex_count, simplices, /*auto_close=*/false);
  h.config_ = config;
  h.options_ = options;
  h.id_ = next_handle.fetch_add(1);
  return h;
}

LayerOutput layer_forward(const LayerHandle& handle, std::span<const double> vertex_values) {
  check_live(handle);
  const SimplicialComplex& k = handle.complex();
  if (vertex_values.size() != 2 * k.vertex_count())
    throw std::invalid_argument("vertex values have length " + std::to_string(vertex_values.size()) + ", expected " +
                                std::to_string(2 * k.vertex_count()));
  LayerOutput out;
  LowerStar star = lower_star_extend(k, vertex_values);
  const auto jitter = tie_jitter(k, star.values, handle.options().jitter, handle.options().seed);
  for (std::size_t i = 0; i < jitter.size(); ++i) star.values[i] += jitter[i];
  out.token.handle = handle.id();
  out.token.values = std::move(star.values);
  out.token.routing = std::move(star.routing);
  out.token.forward = gril_vector(k, out.token.values, handle.config());
  out.gril = out.token.forward.values;
  return out;
}

std::vector<double> layer_backward(const LayerHandle& handle, const LayerToken& token,
                                   std::span<const double> upstream) {
  check_live(handle);
  if (token.handle != handle.id())
    throw StaleTokenError("state token belongs to layer handle " + std::to_string(token.handle) + ", not " +
                          std::to_string(handle.id()));
  if (upstream.size() != handle.output_size())
    throw std::invalid_argument("upstream has length " + std::to_string(upstream.size()) + ", expected " +
                                std::to_string(handle.output_size()));
  const SimplicialComplex& k = handle.complex();
  GrilDifferential diff;
  try {
    diff = gril_differential(k, token.values, handle.config(), token.forward);
  } catch (const DegeneracyError&) {
    diff = gradient_sampled(k, token.values, handle.config(), handle.options().jitter, handle.options().seed + 1);
  }
  return pushback_gradient_q(k, vjp(upstream, diff).grad_values, token.routing);
}

void layer_release(LayerHandle& handle) { handle.released_ = true; }

}  // namespace dgril
