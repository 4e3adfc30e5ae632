#include "dgril/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dgril/differential.hpp"

namespace dgril {

void GradcheckReport::merge(const GradcheckReport& other) {
  coordinates += other.coordinates;
  exact += other.exact;
  flagged_mismatches += other.flagged_mismatches;
  unflagged_mismatches += other.unflagged_mismatches;
  mismatches.insert(mismatches.end(), other.mismatches.begin(), other.mismatches.end());
  flagged.insert(flagged.end(), other.flagged.begin(), other.flagged.end());
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<std::size_t>> coface_lists(const SimplicialComplex& complex) {
  std::vector<std::vector<std::size_t>> out(complex.size());
  for (std::size_t i = 0; i < complex.size(); ++i)
    for (std::size_t f : complex.faces(i)) out[f].push_back(i);
  return out;
}

// Room to move coordinate c both ways without breaking monotonicity.
double monotone_slack(const SimplicialComplex& complex, const std::vector<std::vector<std::size_t>>& cofaces,
                      std::span<const double> values, std::size_t c) {
  const std::size_t i = c / 2;
  const Axis a = static_cast<Axis>(c % 2);
  double slack = kInf;
  for (std::size_t f : complex.faces(i)) slack = std::min(slack, values[c] - values[coord(f, a)]);
  for (std::size_t g : cofaces[i]) slack = std::min(slack, values[coord(g, a)] - values[c]);
  return slack;
}

void record(GradcheckReport& report, CoordinateResult r) {
  ++report.coordinates;
  if (r.exact) ++report.exact;
  if (r.flagged) report.flagged.push_back(r);
  if (!r.exact) {
    if (r.flagged)
      ++report.flagged_mismatches;
    else
      ++report.unflagged_mismatches;
    report.mismatches.push_back(std::move(r));
  }
}

double hit_tol(const GrilConfig& config, double h) { return config.length * h * 1.01 + 1e-12; }

}  // namespace

GradcheckReport check_differential(const SimplicialComplex& complex, std::span<const double> values,
                                   const GrilConfig& config, const GradcheckOptions& options) {
  const GrilVector forward = gril_vector(complex, values, config);
  const GrilDifferential diff = gril_differential(complex, values, config, forward);
  const auto cofaces = coface_lists(complex);

  GradcheckReport report;
  std::vector<double> moved(values.begin(), values.end());
  for (std::size_t c = 0; c < values.size(); ++c) {
    CoordinateResult r;
    r.coord = c;
    const double slack = monotone_slack(complex, cofaces, values, c);
    double h = options.h;
    for (;;) {
      r.hits = detect_degeneracy(values, config.centers, config.length, hit_tol(config, h), c);
      if (r.hits.empty() && h < slack) break;
      if (h / 10 < options.min_h) break;
      h /= 10;
    }
    r.h = h;
    r.flagged = !r.hits.empty() || !(h < slack);
    if (h < slack) {
      moved[c] = values[c] + h;
      const GrilVector plus = gril_vector(complex, moved, config);
      moved[c] = values[c] - h;
      const GrilVector minus = gril_vector(complex, moved, config);
      moved[c] = values[c];
      for (std::size_t row = 0; row < diff.size(); ++row) {
        const double fd = (plus.values[row] - minus.values[row]) / (2 * h);
        const double an = diff.rows[row] && diff.rows[row]->coord == c ? diff.rows[row]->value : 0.0;
        r.max_error = std::max(r.max_error, std::abs(fd - an));
      }
      r.exact = r.max_error <= options.tol;
    }
    record(report, std::move(r));
  }
  return report;
}

GradcheckReport check_pipeline(const SimplicialComplex& complex, std::span<const double> vertex_values,
                               std::span<const double> jitter, std::span<const double> weights,
                               const GrilConfig& config, const GradcheckOptions& options) {
  if (vertex_values.size() != 2 * complex.vertex_count())
    throw std::invalid_argument("vertex values must have length 2 * vertex_count");
  if (jitter.size() != 2 * complex.size()) throw std::invalid_argument("jitter does not match the complex");
  if (weights.size() != config.size()) throw std::invalid_argument("weights do not match the config");

  auto pipeline = [&](std::span<const double> u) {
    LowerStar star = lower_star_extend(complex, u);
    for (std::size_t i = 0; i < star.values.size(); ++i) star.values[i] += jitter[i];
    return star;
  };
  auto loss = [&](std::span<const double> u) {
    const LowerStar star = pipeline(u);
    const GrilVector g = gril_vector(complex, star.values, config);
    double s = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) s += weights[i] * g.values[i];
    return s;
  };

  const LowerStar base = pipeline(vertex_values);
  const GrilVector forward = gril_vector(complex, base.values, config);
  const GrilDifferential diff = gril_differential(complex, base.values, config, forward);
  const std::vector<double> grad =
      pushback_gradient_q(complex, vjp(weights, diff).grad_values, base.routing);

  // Simplex coordinates fed by each vertex coordinate.
  std::vector<std::vector<std::size_t>> fed(vertex_values.size());
  for (std::size_t i = 0; i < complex.size(); ++i)
    for (Axis a : kAxes) fed[coord(base.routing.vertex(i, a), a)].push_back(coord(i, a));

  GradcheckReport report;
  std::vector<double> moved(vertex_values.begin(), vertex_values.end());
  for (std::size_t c = 0; c < vertex_values.size(); ++c) {
    CoordinateResult r;
    r.coord = c;
    const Vertex v = static_cast<Vertex>(c / 2);
    const Axis a = static_cast<Axis>(c % 2);
    const auto& mine = fed[c];
    auto same_piece = [&](const HyperplaneHit& hit) {
      // Two coordinates carried by this vertex coordinate on the same side
      // move in lockstep and never cross.
      const std::size_t e = coord(hit.first_simplex, hit.first_axis);
      const std::size_t f = coord(hit.second_simplex, hit.second_axis);
      if (hit.first_mult != 1 || hit.second_mult != 1) return false;
      if (std::find(mine.begin(), mine.end(), e) == mine.end() ||
          std::find(mine.begin(), mine.end(), f) == mine.end())
        return false;
      const double p = config.centers[hit.center_index][a];
      return (base.values[e] - p) * (base.values[f] - p) > 0;
    };
    double h = options.h;
    for (;;) {
      r.hits.clear();
      for (std::size_t sc : mine)
        for (auto& hit : detect_degeneracy(base.values, config.centers, config.length, hit_tol(config, h), sc))
          if (!same_piece(hit)) r.hits.push_back(hit);
      // A routing switch of q: another vertex of a shared simplex within reach.
      bool tie = false;
      for (std::size_t i = 0; i < complex.size() && !tie; ++i) {
        const Simplex& s = complex.simplex(i);
        if (s.size() < 2 || std::find(s.begin(), s.end(), v) == s.end()) continue;
        for (Vertex w : s)
          if (w != v && std::abs(vertex_values[coord(w, a)] - vertex_values[c]) <= 2.02 * h) tie = true;
      }
      if (r.hits.empty() && !tie) break;
      if (h / 10 < options.min_h) {
        r.flagged = true;
        break;
      }
      h /= 10;
    }
    r.h = h;
    r.flagged = r.flagged || !r.hits.empty();
    moved[c] = vertex_values[c] + h;
    const double plus = loss(moved);
    moved[c] = vertex_values[c] - h;
    const double minus = loss(moved);
    moved[c] = vertex_values[c];
    r.max_error = std::abs((plus - minus) / (2 * h) - grad[c]);
    r.exact = r.max_error <= options.tol * std::max(1.0, std::abs(grad[c]));
    record(report, std::move(r));
  }
  return report;
}

GradcheckInstance random_generic_instance(std::uint64_t seed, int min_vertices, int max_vertices) {
  if (min_vertices < 1 || max_vertices < min_vertices)
    throw std::invalid_argument("invalid vertex range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(min_vertices, max_vertices);
  std::bernoulli_distribution edge(0.5), tri(0.3);
  const auto n = static_cast<Vertex>(count(rng));
  std::vector<Simplex> simplices;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (edge(rng)) {
        simplices.push_back({a, b});
        adj[a][b] = adj[b][a] = true;
      }
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      for (Vertex c = b + 1; c < n; ++c)
        if (adj[a][b] && adj[a][c] && adj[b][c] && tri(rng)) simplices.push_back({a, b, c});

  GradcheckInstance inst{build_complex(n, simplices), {}};
  std::uniform_real_distribution<double> base(0.05, 0.9), step(0.005, 0.08);
  inst.values.assign(2 * inst.complex.size(), 0.0);
  for (std::size_t i = 0; i < inst.complex.size(); ++i) {
    for (Axis a : kAxes) {
      double x = inst.complex.dim(i) == 0 ? base(rng) : 0.0;
      if (inst.complex.dim(i) > 0) {
        for (std::size_t f : inst.complex.faces(i)) x = std::max(x, inst.values[coord(f, a)]);
        x += step(rng);
      }
      inst.values[coord(i, a)] = x;
    }
  }
  return inst;
}

std::string to_string(const GradcheckReport& report) {
  std::ostringstream os;
  os << "coordinates=" << report.coordinates << " exact=" << report.exact << " ("
     << 100.0 * report.exact_fraction() << "%) flagged_mismatches=" << report.flagged_mismatches
     << " unflagged_mismatches=" << report.unflagged_mismatches;
  for (const auto& r : report.flagged) {
    os << "\n  degenerate coordinate " << r.coord << " (h=" << r.h << (r.exact ? ", exact" : ", mismatch")
       << ")";
    for (const auto& hit : r.hits) os << "\n    " << to_string(hit);
  }
  return os.str();
}

}  // namespace dgril
