#include "dgril/worm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dgril {

void WormSpec::validate() const {
  if (length < 1) throw std::invalid_argument("worm length must be at least 1");
  if (!(width >= 0.0) || !std::isfinite(width)) throw std::invalid_argument("worm width must be finite and >= 0");
  if (!std::isfinite(center.x) || !std::isfinite(center.y))
    throw std::invalid_argument("worm center must be finite");
}

std::vector<Point> worm_squares(const WormSpec& spec) {
  spec.validate();
  std::vector<Point> out;
  for (int j = -(spec.length - 1); j <= spec.length - 1; ++j)
    out.push_back({spec.center.x + j * spec.width, spec.center.y - j * spec.width});
  return out;
}

bool worm_contains(const WormSpec& spec, Point point, double tol) {
  for (Point q : worm_squares(spec)) {
    if (std::abs(point.x - q.x) <= spec.width + tol && std::abs(point.y - q.y) <= spec.width + tol)
      return true;
  }
  return false;
}

std::vector<WormOffset> lower_staircase_offsets(int length) {
  if (length < 1) throw std::invalid_argument("worm length must be at least 1");
  std::vector<WormOffset> out;
  out.push_back({-length, length});
  for (int j = -(length - 1); j <= length - 1; ++j) {
    out.push_back({j - 1, -j - 1});
    if (j < length - 1) out.push_back({j, -j - 1});
  }
  out.push_back({length, -length});
  return out;
}

std::vector<WormOffset> upper_staircase_offsets(int length) {
  std::vector<WormOffset> out;
  for (WormOffset o : lower_staircase_offsets(length)) out.push_back({-o.dx, -o.dy});
  return out;
}

BoundaryStaircase boundary_staircase(const WormSpec& spec) {
  spec.validate();
  if (!(spec.width > 0)) throw std::invalid_argument("boundary staircase needs a positive width");
  BoundaryStaircase out;
  for (WormOffset o : lower_staircase_offsets(spec.length)) out.lower.push_back(at_offset(spec, o));
  for (WormOffset o : upper_staircase_offsets(spec.length)) out.upper.push_back(at_offset(spec, o));
  return out;
}

std::vector<double> candidate_widths(std::span<const double> values, Point center, int length,
                                     double tol) {
  if (length < 1) throw std::invalid_argument("worm length must be at least 1");
  std::vector<double> raw;
  raw.reserve(values.size() * static_cast<std::size_t>(length) + 1);
  raw.push_back(0.0);
  for (std::size_t c = 0; c < values.size(); ++c) {
    const double dist = std::abs(values[c] - center[static_cast<Axis>(c % 2)]);
    for (int j = 1; j <= length; ++j) raw.push_back(dist / j);
  }
  std::sort(raw.begin(), raw.end());
  std::vector<double> out;
  for (double w : raw) {
    if (out.empty() || w - out.back() > tol) out.push_back(w);
  }
  return out;
}

std::string to_string(const ConstrainingRecord& r) {
  return std::string("simplex ") + std::to_string(r.simplex) + " " +
         (r.side == Side::lower ? "lower " : "upper ") + (r.axis == Axis::x ? "x" : "y") +
         "-constraining, j=" + std::to_string(r.multiplier);
}

std::vector<ConstrainingRecord> constraining_coordinates(std::span<const double> values,
                                                         const WormSpec& spec, double tol) {
  spec.validate();
  const std::size_t n = values.size() / 2;
  // The upper-set of sigma meets the worm iff sigma lies below one of the
  // square top-right corners (the maximal points of the worm).
  std::vector<Point> maxima;
  for (Point q : worm_squares(spec)) maxima.push_back({q.x + spec.width, q.y + spec.width});

  std::vector<ConstrainingRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Point s{values[2 * i], values[2 * i + 1]};
    bool reaches = false;
    for (Point m : maxima) {
      if (s.x <= m.x + tol && s.y <= m.y + tol) {
        reaches = true;
        break;
      }
    }
    if (!reaches) continue;
    for (Axis a : kAxes) {
      const double off = s[a] - spec.center[a];
      for (int j = 0; j <= spec.length; ++j) {
        if (std::abs(std::abs(off) - j * spec.width) <= tol) {
          out.push_back({i, a, off > 0 ? Side::upper : Side::lower, j});
          break;
        }
      }
    }
  }
  return out;
}

std::string to_string(const HyperplaneHit& h) {
  auto ax = [](Axis a) { return a == Axis::x ? "x" : "y"; };
  std::string out = "family " + std::to_string(h.family) + " at center " + std::to_string(h.center_index) +
                    ": |sigma" + std::to_string(h.first_simplex) + "^" + ax(h.first_axis) + " - p|";
  if (h.first_mult == 0) return out + " = 0";
  return out + " * " + std::to_string(h.second_mult) + " = |sigma" + std::to_string(h.second_simplex) +
         "^" + ax(h.second_axis) + " - p| * " + std::to_string(h.first_mult);
}

namespace {

int family_of(Axis a, Axis b) {
  if (a == Axis::x && b == Axis::x) return 1;
  if (a == Axis::y && b == Axis::y) return 2;
  if (a == Axis::x) return 3;
  return 4;
}

}  // namespace

std::vector<HyperplaneHit> detect_degeneracy(std::span<const double> values,
                                             std::span<const Point> centers, int length,
                                             double tol, std::size_t only_coord) {
  if (length < 1) throw std::invalid_argument("worm length must be at least 1");
  if (tol < 0) throw std::invalid_argument("tolerance must be non-negative");
  const std::size_t m = values.size();
  std::vector<std::pair<int, int>> ratios;
  for (int a = 1; a <= length; ++a)
    for (int b = 1; b <= length; ++b)
      if (std::gcd(a, b) == 1) ratios.emplace_back(a, b);

  std::vector<HyperplaneHit> out;
  std::vector<double> dist(m);
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const Point p = centers[ci];
    for (std::size_t c = 0; c < m; ++c) dist[c] = std::abs(values[c] - p[static_cast<Axis>(c % 2)]);
    for (std::size_t c = 0; c < m; ++c) {
      const Axis ac = static_cast<Axis>(c % 2);
      if ((only_coord == static_cast<std::size_t>(-1) || only_coord == c) && dist[c] <= tol) {
        out.push_back({family_of(ac, ac), ci, c / 2, ac, c / 2, ac, 0, 1, dist[c]});
      }
      for (std::size_t e = c + 1; e < m; ++e) {
        if (only_coord != static_cast<std::size_t>(-1) && only_coord != c && only_coord != e) continue;
        const Axis ae = static_cast<Axis>(e % 2);
        for (auto [j1, j2] : ratios) {
          const double gap = std::abs(j2 * dist[c] - j1 * dist[e]);
          if (gap <= tol) out.push_back({family_of(ac, ae), ci, c / 2, ac, e / 2, ae, j1, j2, gap});
        }
      }
    }
  }
  return out;
}

}  // namespace dgril
