#include "dgril/complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace dgril {

namespace {

std::string describe(const Simplex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

bool simplex_less(const Simplex& a, const Simplex& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

void check_values_length(const SimplicialComplex& complex, std::span<const double> values) {
  if (values.size() != 2 * complex.size())
    throw std::invalid_argument("bifiltration vector has length " + std::to_string(values.size()) +
                                ", expected " + std::to_string(2 * complex.size()));
}

}  // namespace

std::size_t SimplicialComplex::find(const Simplex& s) const {
  if (s.empty() || s.size() > static_cast<std::size_t>(kMaxDim) + 1) return size();
  auto [lo, hi] = dim_range(static_cast<int>(s.size()) - 1);
  auto first = simplices_.begin() + static_cast<std::ptrdiff_t>(lo);
  auto last = simplices_.begin() + static_cast<std::ptrdiff_t>(hi);
  auto it = std::lower_bound(first, last, s);
  if (it != last && *it == s) return static_cast<std::size_t>(it - simplices_.begin());
  return size();
}

std::pair<std::size_t, std::size_t> SimplicialComplex::dim_range(int d) const {
  if (d < 0 || d > kMaxDim) return {size(), size()};
  return {dim_start_[static_cast<std::size_t>(d)], dim_start_[static_cast<std::size_t>(d) + 1]};
}

SimplicialComplex build_complex(std::size_t vertex_count, std::vector<Simplex> simplices,
                                bool auto_close) {
  std::set<Simplex, decltype(&simplex_less)> all(&simplex_less);
  for (Vertex v = 0; v < vertex_count; ++v) all.insert(Simplex{v});

  std::set<Simplex> seen;
  for (auto& s : simplices) {
    if (s.empty()) throw std::invalid_argument("empty simplex");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("simplex " + describe(s) + " repeats a vertex");
    if (s.size() > static_cast<std::size_t>(SimplicialComplex::kMaxDim) + 1)
      throw std::invalid_argument("simplex " + describe(s) + " exceeds dimension 2");
    if (s.back() >= vertex_count)
      throw std::invalid_argument("simplex " + describe(s) + " references vertex out of range");
    if (!seen.insert(s).second) throw std::invalid_argument("duplicate simplex " + describe(s));
  }

  std::set<Simplex> listed(seen);
  for (const auto& s : seen) {
    all.insert(s);
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex face;
      for (std::size_t k = 0; k < s.size(); ++k)
        if (k != drop) face.push_back(s[k]);
      if (!listed.count(face)) {
        if (!auto_close)
          throw std::invalid_argument("face " + describe(face) + " of " + describe(s) +
                                      " is missing");
        all.insert(face);
      }
    }
  }

  SimplicialComplex k;
  k.vertex_count_ = vertex_count;
  k.simplices_.assign(all.begin(), all.end());
  k.faces_.resize(k.simplices_.size());
  k.vertex_simplex_.resize(vertex_count);

  std::size_t d = 0;
  k.dim_start_.fill(k.simplices_.size());
  for (std::size_t i = 0; i < k.simplices_.size(); ++i) {
    std::size_t sd = k.simplices_[i].size() - 1;
    while (d <= sd) {
      k.dim_start_[d] = i;
      ++d;
    }
    k.max_dim_ = std::max(k.max_dim_, static_cast<int>(sd));
  }
  for (; d < k.dim_start_.size(); ++d) k.dim_start_[d] = k.simplices_.size();

  for (std::size_t i = 0; i < k.simplices_.size(); ++i) {
    const Simplex& s = k.simplices_[i];
    if (s.size() == 1) {
      k.vertex_simplex_[s[0]] = i;
      continue;
    }
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex face;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != drop) face.push_back(s[j]);
      k.faces_[i].push_back(k.find(face));
    }
    std::sort(k.faces_[i].begin(), k.faces_[i].end());
  }
  return k;
}

SimplicialComplex graph_complex(std::size_t vertex_count,
                                const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<Simplex> simplices;
  simplices.reserve(vertex_count + edges.size());
  for (Vertex v = 0; v < vertex_count; ++v) simplices.push_back(Simplex{v});
  for (auto [u, v] : edges) simplices.push_back(Simplex{u, v});
  return build_complex(vertex_count, std::move(simplices), false);
}

std::vector<MonotoneViolation> validate_monotone(const SimplicialComplex& complex,
                                                 std::span<const double> values) {
  check_values_length(complex, values);
  std::vector<MonotoneViolation> out;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    for (std::size_t f : complex.faces(i)) {
      for (Axis a : kAxes) {
        if (values[coord(f, a)] > values[coord(i, a)]) out.push_back({f, i, a});
      }
    }
  }
  return out;
}

LowerStar lower_star_extend(const SimplicialComplex& complex, std::span<const double> vertex_values) {
  if (vertex_values.size() != 2 * complex.vertex_count())
    throw std::invalid_argument("vertex values have length " + std::to_string(vertex_values.size()) +
                                ", expected " + std::to_string(2 * complex.vertex_count()));
  const std::size_t n = complex.size();
  LowerStar out;
  out.values.resize(2 * n);
  out.routing.routed.resize(2 * n);
  out.routing.tied.assign(2 * n, false);
  // Faces precede cofaces, so one pass computes the inductive max.
  for (std::size_t i = 0; i < n; ++i) {
    for (Axis a : kAxes) {
      const std::size_t c = coord(i, a);
      if (complex.dim(i) == 0) {
        Vertex v = complex.simplex(i)[0];
        out.values[c] = vertex_values[2 * v + static_cast<std::size_t>(a)];
        out.routing.routed[c] = v;
        continue;
      }
      Vertex best = 0;
      double best_value = -std::numeric_limits<double>::infinity();
      bool tie = false;
      for (Vertex v : complex.simplex(i)) {
        double val = vertex_values[2 * v + static_cast<std::size_t>(a)];
        if (val > best_value) {
          best_value = val;
          best = v;
          tie = false;
        } else if (val == best_value) {
          tie = true;  // vertices are ascending, so best keeps the lowest index
        }
      }
      out.values[c] = best_value;
      out.routing.routed[c] = best;
      out.routing.tied[c] = tie;
    }
  }
  return out;
}

std::vector<double> pushback_gradient_q(const SimplicialComplex& complex,
                                        std::span<const double> grad_values,
                                        const MaxVertexMap& routing) {
  check_values_length(complex, grad_values);
  if (routing.routed.size() != grad_values.size())
    throw std::invalid_argument("routing map does not match the complex");
  std::vector<double> out(2 * complex.vertex_count(), 0.0);
  for (std::size_t i = 0; i < complex.size(); ++i) {
    for (Axis a : kAxes) {
      const std::size_t c = coord(i, a);
      out[2 * routing.routed[c] + static_cast<std::size_t>(a)] += grad_values[c];
    }
  }
  return out;
}

double min_positive_gap(std::span<const double> values) {
  double gap = std::numeric_limits<double>::infinity();
  for (Axis a : kAxes) {
    std::vector<double> axis;
    for (std::size_t i = static_cast<std::size_t>(a); i < values.size(); i += 2) axis.push_back(values[i]);
    std::sort(axis.begin(), axis.end());
    for (std::size_t i = 1; i < axis.size(); ++i) {
      double d = axis[i] - axis[i - 1];
      if (d > 0) gap = std::min(gap, d);
    }
  }
  return gap;
}

std::vector<double> perturb_extension(const SimplicialComplex& complex,
                                      std::span<const double> values, double epsilon,
                                      std::uint64_t seed) {
  check_values_length(complex, values);
  if (!(epsilon > 0)) throw std::invalid_argument("perturbation epsilon must be positive");
  const double gap = min_positive_gap(values);
  if (!(epsilon < gap / 2))
    throw std::invalid_argument("perturbation epsilon " + std::to_string(epsilon) +
                                " is not below half the minimum gap " + std::to_string(gap));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int top = std::max(complex.max_dim(), 1);
  std::vector<double> out(values.begin(), values.end());
  std::set<double> used;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    const int d = complex.dim(i);
    if (d == 0) continue;
    for (Axis a : kAxes) {
      double jitter = 0.0;
      do {
        // Dimension d draws from ((d-1)/top, d/top) * epsilon.
        double u = unit(rng);
        jitter = epsilon * ((d - 1) + u) / top;
      } while (!(jitter > 0.0 && jitter < epsilon) || used.count(jitter));
      used.insert(jitter);
      out[coord(i, a)] += jitter;
    }
  }
  return out;
}

std::vector<double> tie_jitter(const SimplicialComplex& complex, std::span<const double> values,
                               double epsilon, std::uint64_t seed) {
  const double gap = min_positive_gap(values);
  const double eps = std::isfinite(gap) ? std::min(epsilon, 0.25 * gap) : epsilon;
  std::vector<double> out = perturb_extension(complex, values, eps, seed);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= values[i];
  return out;
}

double RangeRecord::apply(double v, Axis a) const {
  const auto k = static_cast<std::size_t>(a);
  if (degenerate[k]) return 0.5;
  return (v - offset[k]) * scale[k];
}

double RangeRecord::invert(double v, Axis a) const {
  const auto k = static_cast<std::size_t>(a);
  if (degenerate[k]) return offset[k];
  return v / scale[k] + offset[k];
}

NormalizedValues normalize_range(std::span<const double> values) {
  if (values.size() % 2 != 0) throw std::invalid_argument("interleaved values must have even length");
  NormalizedValues out;
  out.values.resize(values.size());
  for (Axis a : kAxes) {
    const auto k = static_cast<std::size_t>(a);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = k; i < values.size(); i += 2) {
      if (!std::isfinite(values[i])) throw std::invalid_argument("non-finite filtration value");
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
    if (values.empty()) lo = hi = 0.0;
    out.record.offset[k] = lo;
    if (hi > lo) {
      out.record.scale[k] = 1.0 / (hi - lo);
    } else {
      out.record.scale[k] = 0.0;
      out.record.degenerate[k] = true;
    }
    for (std::size_t i = k; i < values.size(); i += 2) out.values[i] = out.record.apply(values[i], a);
  }
  return out;
}

std::vector<double> denormalize_range(std::span<const double> values, const RangeRecord& record) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = record.invert(values[i], static_cast<Axis>(i % 2));
  return out;
}

}  // namespace dgril
