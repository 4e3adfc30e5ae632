#include "dgril/differential.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

namespace dgril {

namespace {

std::string describe_records(std::size_t row, const std::vector<ConstrainingRecord>& records) {
  std::string msg = "degenerate bifiltration at GRIL entry " + std::to_string(row) + ": ";
  if (records.empty()) return msg + "no constraining coordinate";
  msg += std::to_string(records.size()) + " constraining record(s)";
  for (const auto& r : records) msg += "; " + to_string(r);
  return msg;
}

}  // namespace

DegeneracyError::DegeneracyError(std::size_t row, std::vector<ConstrainingRecord> records)
    : std::runtime_error(describe_records(row, records)), row_(row), records_(std::move(records)) {}

std::vector<double> GrilDifferential::dense_row(std::size_t r) const {
  std::vector<double> out(cols, 0.0);
  if (rows.at(r)) out[rows[r]->coord] = rows[r]->value;
  return out;
}

GrilDifferential gril_differential(const SimplicialComplex& complex, std::span<const double> values,
                                   const GrilConfig& config, const GrilVector& forward,
                                   double tol) {
  config.validate();
  if (values.size() != 2 * complex.size())
    throw std::invalid_argument("bifiltration vector does not match the complex");
  if (forward.values.size() != config.size())
    throw std::invalid_argument("GRIL vector does not match the config");

  GrilDifferential out;
  out.cols = values.size();
  out.centers = config.centers.size();
  out.rows.resize(config.size());
  out.row_center.resize(config.size());
  out.center_grads.assign(config.size(), {0.0, 0.0});
  out.provenance.resize(config.size());
  out.point.assign(values.begin(), values.end());

  for (std::size_t di = 0; di < config.hom_dims.size(); ++di) {
    for (std::size_t ki = 0; ki < config.k_values.size(); ++ki) {
      for (std::size_t c = 0; c < config.centers.size(); ++c) {
        const std::size_t row = config.index(di, ki, c);
        out.row_center[row] = c;
        const double lambda = forward.values[row];
        if (lambda == 0.0) continue;
        auto records = constraining_coordinates(values, WormSpec{config.centers[c], lambda, config.length}, tol);
        if (records.size() != 1 || records[0].multiplier == 0) throw DegeneracyError(row, std::move(records));
        const ConstrainingRecord& r = records[0];
        const double slope = (r.side == Side::upper ? 1.0 : -1.0) / r.multiplier;
        out.rows[row] = GrilDifferential::Entry{coord(r.simplex, r.axis), slope};
        out.center_grads[row][static_cast<std::size_t>(r.axis)] = -slope;
        out.provenance[row] = r;
      }
    }
  }
  return out;
}

std::vector<double> sample_nearby(const SimplicialComplex& complex, std::span<const double> values,
                                  double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0)) throw std::invalid_argument("sampling radius must be positive");
  if (values.size() != 2 * complex.size())
    throw std::invalid_argument("bifiltration vector does not match the complex");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-0.5 * epsilon, 0.5 * epsilon);
  std::uniform_real_distribution<double> lift(0.0, 0.25 * epsilon);
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v += noise(rng);
  // Faces precede cofaces, so one pass restores monotonicity.
  for (std::size_t i = 0; i < complex.size(); ++i) {
    for (Axis a : kAxes) {
      double floor = -std::numeric_limits<double>::infinity();
      for (std::size_t f : complex.faces(i)) floor = std::max(floor, out[coord(f, a)]);
      double& v = out[coord(i, a)];
      if (v < floor) v = floor + lift(rng);
    }
  }
  return out;
}

GrilDifferential gradient_sampled(const SimplicialComplex& complex, std::span<const double> values,
                                  const GrilConfig& config, double epsilon, std::uint64_t seed,
                                  int max_attempts) {
  if (!(epsilon > 0)) throw std::invalid_argument("sampling radius must be positive");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be at least 1");
  std::seed_seq seq{seed};
  std::mt19937_64 seeds(seq);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    const std::vector<double> point = sample_nearby(complex, values, epsilon, seeds());
    const GrilVector forward = gril_vector(complex, point, config);
    try {
      GrilDifferential d = gril_differential(complex, point, config, forward);
      d.sampled = true;
      d.attempts = attempt;
      return d;
    } catch (const DegeneracyError&) {
    }
  }
  throw std::runtime_error("gradient sampling found no generic point in " +
                           std::to_string(max_attempts) + " attempts");
}

VjpResult vjp(std::span<const double> upstream, const GrilDifferential& d) {
  if (upstream.size() != d.size())
    throw std::invalid_argument("upstream gradient has " + std::to_string(upstream.size()) +
                                " entries, differential has " + std::to_string(d.size()) + " rows");
  VjpResult out{std::vector<double>(d.cols, 0.0), std::vector<double>(2 * d.centers, 0.0)};
  for (std::size_t r = 0; r < d.size(); ++r) {
    const double u = upstream[r];
    if (u == 0.0) continue;
    if (d.rows[r]) out.grad_values[d.rows[r]->coord] += u * d.rows[r]->value;
    out.grad_centers[2 * d.row_center[r]] += u * d.center_grads[r][0];
    out.grad_centers[2 * d.row_center[r] + 1] += u * d.center_grads[r][1];
  }
  return out;
}

}  // namespace dgril
