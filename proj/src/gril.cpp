#include "dgril/gril.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <memory>
#include <stdexcept>

#include "dgril/genrank.hpp"
#include "dgril/worm.hpp"

namespace dgril {

std::vector<Point> sample_centers(int resolution, int stride) {
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  if (stride < 1 || stride > resolution)
    throw std::invalid_argument("stride must be in [1, resolution]");
  std::vector<int> ticks;
  for (int a = 0; a * stride < resolution; ++a) ticks.push_back(a * stride);
  std::vector<Point> out;
  out.reserve(ticks.size() * ticks.size());
  for (int b : ticks)
    for (int a : ticks)
      out.push_back({static_cast<double>(a) / resolution, static_cast<double>(b) / resolution});
  return out;
}

void GrilConfig::validate() const {
  if (length < 1) throw std::invalid_argument("worm length must be at least 1");
  if (k_values.empty()) throw std::invalid_argument("k_values must not be empty");
  for (int k : k_values)
    if (k < 1) throw std::invalid_argument("k values must be >= 1");
  if (hom_dims.empty()) throw std::invalid_argument("hom_dims must not be empty");
  for (int d : hom_dims)
    if (d != 0 && d != 1) throw std::invalid_argument("homology degrees must be 0 or 1");
  if (centers.empty()) throw std::invalid_argument("at least one center is required");
  for (Point p : centers)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("center must be finite");
  if (mode == SearchMode::grid && resolution < 2)
    throw std::invalid_argument("grid mode needs resolution >= 2");
  if (!(dedup_tol >= 0)) throw std::invalid_argument("dedup tolerance must be >= 0");
}

std::vector<std::string> GrilConfig::warnings() const {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const Point p = centers[c];
    if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1)
      out.push_back("center " + std::to_string(c) + " lies outside [0,1]^2");
  }
  return out;
}

std::string GrilConfig::describe() const {
  auto join = [](const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
    return s;
  };
  std::uint64_t h = 1469598103934665603ull;
  char buf[64];
  for (Point p : centers) {
    int len = std::snprintf(buf, sizeof buf, "%.17g %.17g;", p.x, p.y);
    for (int i = 0; i < len; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return "length=" + std::to_string(length) + " k=" + join(k_values) + " hom=" + join(hom_dims) +
         " mode=" + (mode == SearchMode::exact ? "exact" : "grid") +
         " resolution=" + std::to_string(resolution) + " centers=" + std::to_string(centers.size()) +
         "@" + buf;
}

namespace {

struct Probe {
  double width;
  double value;  // lambda if this probe is the last qualifying one
};

std::vector<Probe> make_probes(std::span<const double> values, Point center, const GrilConfig& cfg) {
  const std::vector<double> widths = candidate_widths(values, center, cfg.length, cfg.dedup_tol);
  std::vector<Probe> probes;
  if (cfg.mode == SearchMode::exact) {
    probes.reserve(2 * widths.size());
    probes.push_back({widths[0], widths[0]});
    for (std::size_t i = 1; i < widths.size(); ++i) {
      probes.push_back({0.5 * (widths[i - 1] + widths[i]), widths[i]});
      probes.push_back({widths[i], widths[i]});
    }
  } else {
    const double step = 1.0 / cfg.resolution;
    const long top = static_cast<long>(std::ceil(widths.back() / step)) + 1;
    probes.reserve(static_cast<std::size_t>(top) + 1);
    for (long i = 0; i <= top; ++i) probes.push_back({i * step, i * step});
  }
  return probes;
}

}  // namespace

std::vector<double> gril_center_values(const SimplicialComplex& complex,
                                       std::span<const double> values, Point center,
                                       int degree, const GrilConfig& cfg,
                                       HomologyCache& cache) {
  const std::vector<Probe> probes = make_probes(values, center, cfg);
  std::vector<long> rank(probes.size(), -1);
  auto rank_at = [&](std::size_t i) {
    if (rank[i] < 0)
      rank[i] = static_cast<long>(
          genrank_fast(complex, values, WormSpec{center, probes[i].width, cfg.length}, degree, &cache));
    return static_cast<std::size_t>(rank[i]);
  };

  const bool nested = cfg.length <= 2;
  std::vector<double> out;
  out.reserve(cfg.k_values.size());
  for (int k : cfg.k_values) {
    const auto kk = static_cast<std::size_t>(k);
    double lambda = 0.0;
    if (nested) {
      if (rank_at(0) >= kk) {
        std::size_t lo = 0, hi = probes.size();  // pred(lo) true, pred(hi) false
        while (hi - lo > 1) {
          const std::size_t mid = lo + (hi - lo) / 2;
          if (rank_at(mid) >= kk)
            lo = mid;
          else
            hi = mid;
        }
        lambda = probes[lo].value;
      }
    } else {
      for (std::size_t i = probes.size(); i-- > 0;) {
        if (rank_at(i) >= kk) {
          lambda = probes[i].value;
          break;
        }
      }
    }
    out.push_back(lambda);
  }
  return out;
}

double gril_value(const SimplicialComplex& complex, std::span<const double> values, Point center,
                  int k, int length, int degree, SearchMode mode, int resolution) {
  GrilConfig cfg;
  cfg.length = length;
  cfg.k_values = {k};
  cfg.hom_dims = {degree};
  cfg.centers = {center};
  cfg.mode = mode;
  cfg.resolution = resolution;
  cfg.validate();
  if (values.size() != 2 * complex.size())
    throw std::invalid_argument("bifiltration vector does not match the complex");
  HomologyCache cache(complex, degree);
  return gril_center_values(complex, values, center, degree, cfg, cache)[0];
}

namespace {

void check_vector_inputs(const SimplicialComplex& complex, std::span<const double> values,
                         const GrilConfig& config) {
  config.validate();
  if (values.size() != 2 * complex.size())
    throw std::invalid_argument("bifiltration vector does not match the complex");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("bifiltration values must be finite");
}

void store(GrilVector& g, std::size_t dim_idx, std::size_t c, const std::vector<double>& lambdas) {
  for (std::size_t ki = 0; ki < lambdas.size(); ++ki) g.values[g.config.index(dim_idx, ki, c)] = lambdas[ki];
}

}  // namespace

GrilVector gril_vector(const SimplicialComplex& complex, std::span<const double> values,
                       const GrilConfig& config) {
  check_vector_inputs(complex, values, config);
  GrilVector g{std::vector<double>(config.size(), 0.0), config};
  const std::size_t s = config.centers.size();
  const auto tasks = static_cast<long>(config.hom_dims.size() * s);
  std::exception_ptr failure;

#pragma omp parallel
  {
    std::vector<std::unique_ptr<HomologyCache>> caches;
    for (int d : config.hom_dims) caches.push_back(std::make_unique<HomologyCache>(complex, d));
#pragma omp for schedule(dynamic)
    for (long t = 0; t < tasks; ++t) {
      const std::size_t di = static_cast<std::size_t>(t) / s;
      const std::size_t c = static_cast<std::size_t>(t) % s;
      try {
        store(g, di, c,
              gril_center_values(complex, values, config.centers[c], config.hom_dims[di], config,
                                 *caches[di]));
      } catch (...) {
#pragma omp critical(dgril_gril_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return g;
}

GrilVector gril_vector_serial(const SimplicialComplex& complex, std::span<const double> values,
                              const GrilConfig& config) {
  check_vector_inputs(complex, values, config);
  GrilVector g{std::vector<double>(config.size(), 0.0), config};
  for (std::size_t di = 0; di < config.hom_dims.size(); ++di) {
    HomologyCache cache(complex, config.hom_dims[di]);
    for (std::size_t c = 0; c < config.centers.size(); ++c)
      store(g, di, c, gril_center_values(complex, values, config.centers[c], config.hom_dims[di], config, cache));
  }
  return g;
}

}  // namespace dgril
