#include "dgril/homology.hpp"

#include <stdexcept>
#include <string>

namespace dgril {

namespace {

BitVector boundary_chain(const SimplicialComplex& complex, std::size_t simplex) {
  BitVector chain(complex.size());
  for (std::size_t f : complex.faces(simplex)) chain.set(f);
  return chain;
}

}  // namespace

BitVector sublevel_mask(std::span<const double> values, Point point, double tol) {
  const std::size_t n = values.size() / 2;
  BitVector mask(n);
  const double px = point.x + tol;
  const double py = point.y + tol;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[2 * i] <= px && values[2 * i + 1] <= py) mask.set(i);
  }
  return mask;
}

std::vector<std::size_t> sublevel_complex(const SimplicialComplex& complex,
                                          std::span<const double> values, Point point) {
  if (values.size() != 2 * complex.size())
    throw std::invalid_argument("bifiltration vector does not match the complex");
  std::vector<std::size_t> out;
  sublevel_mask(values, point).for_each_set([&](std::size_t i) { out.push_back(i); });
  return out;
}

HomologyBasis homology_basis(const SimplicialComplex& complex, const BitVector& subcomplex,
                             int degree) {
  if (degree < 0 || degree > 1) throw std::invalid_argument("homology degree must be 0 or 1");
  if (subcomplex.size() != complex.size())
    throw std::invalid_argument("subcomplex mask does not match the complex");
  const std::size_t n = complex.size();

  HomologyBasis h;
  h.degree_ = degree;
  h.subcomplex_ = subcomplex;
  h.table_ = EchelonBasis(n, n);

  auto [lo, hi] = complex.dim_range(degree);
  auto [up_lo, up_hi] = complex.dim_range(degree + 1);

  // Boundaries of (degree+1)-simplices.
  const BitVector no_tag(n);
  for (std::size_t s = up_lo; s < up_hi; ++s) {
    if (subcomplex.test(s)) h.table_.insert(boundary_chain(complex, s), no_tag);
  }

  // Cycle space of the degree-simplices.
  std::vector<BitVector> cycles;
  if (degree == 0) {
    for (std::size_t s = lo; s < hi; ++s) {
      if (!subcomplex.test(s)) continue;
      BitVector c(n);
      c.set(s);
      cycles.push_back(std::move(c));
    }
  } else {
    EchelonBasis reducer(n, n);
    for (std::size_t s = lo; s < hi; ++s) {
      if (!subcomplex.test(s)) continue;
      BitVector b = boundary_chain(complex, s);
      BitVector tag(n);
      tag.set(s);
      tag ^= reducer.reduce(b);
      if (b.none())
        cycles.push_back(std::move(tag));
      else
        reducer.insert(std::move(b), std::move(tag));
    }
  }

  // Classes: cycles independent modulo boundaries and earlier classes.
  for (auto& z : cycles) {
    BitVector r = z;
    BitVector tag = h.table_.reduce(r);
    if (r.none()) continue;
    tag.set(h.cycles_.size());
    h.table_.insert(std::move(r), std::move(tag));
    h.cycles_.push_back(std::move(z));
  }
  return h;
}

BitVector HomologyBasis::coordinates(const BitVector& cycle) const {
  if (!cycle.is_subset_of(subcomplex_))
    throw std::invalid_argument("chain is not supported on the subcomplex");
  BitVector r = cycle;
  BitVector tag = table_.reduce(r);
  if (r.any()) throw std::invalid_argument("chain is not a cycle of the subcomplex");
  BitVector out(rank());
  tag.for_each_set([&](std::size_t k) { out.set(k); });
  return out;
}

Z2Matrix induced_map(const HomologyBasis& small, const HomologyBasis& big) {
  if (small.degree() != big.degree()) throw std::invalid_argument("induced_map: degree mismatch");
  if (!small.subcomplex().is_subset_of(big.subcomplex()))
    throw std::invalid_argument("induced_map: not an inclusion of subcomplexes");
  Z2Matrix m(big.rank(), small.rank());
  for (std::size_t c = 0; c < small.rank(); ++c) m.set_column(c, big.coordinates(small.cycles()[c]));
  return m;
}

const HomologyBasis& HomologyCache::get(const BitVector& subcomplex) {
  auto it = cache_.find(subcomplex);
  if (it != cache_.end()) return *it->second;
  auto basis = std::make_unique<HomologyBasis>(homology_basis(*complex_, subcomplex, degree_));
  auto [pos, inserted] = cache_.emplace(subcomplex, std::move(basis));
  return *pos->second;
}

}  // namespace dgril
