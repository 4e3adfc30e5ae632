#include "dgril/genrank.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dgril {

namespace {

void check_inputs(const SimplicialComplex& complex, std::span<const double> values,
                  const WormSpec& spec, int degree) {
  spec.validate();
  if (values.size() != 2 * complex.size())
    throw std::invalid_argument("bifiltration vector does not match the complex");
  if (degree < 0 || degree > 1) throw std::invalid_argument("homology degree must be 0 or 1");
}

std::vector<WormOffset> diagram_offsets(int length) {
  std::vector<WormOffset> out;
  auto add = [&](WormOffset o) {
    if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
  };
  for (int j = -(length - 1); j <= length - 1; ++j) {
    const int cx = j;
    const int cy = -j;
    add({cx, cy});
    add({cx - 1, cy - 1});
    add({cx + 1, cy - 1});
    add({cx - 1, cy + 1});
    add({cx + 1, cy + 1});
  }
  for (WormOffset o : lower_staircase_offsets(length)) add(o);
  for (WormOffset o : upper_staircase_offsets(length)) add(o);
  return out;
}

}  // namespace

Z2Matrix WormDiagram::map(std::size_t from, std::size_t to) const {
  return induced_map(homology[from], homology[to]);
}

WormDiagram build_worm_diagram(const SimplicialComplex& complex, std::span<const double> values,
                               const WormSpec& spec, int degree) {
  check_inputs(complex, values, spec, degree);
  WormDiagram dia;
  dia.spec = spec;
  dia.degree = degree;
  // A zero-width worm is the single point p.
  dia.offsets = spec.width > 0 ? diagram_offsets(spec.length) : std::vector<WormOffset>{{0, 0}};
  for (WormOffset o : dia.offsets) {
    dia.points.push_back(at_offset(spec, o));
    dia.homology.push_back(
        homology_basis(complex, sublevel_mask(values, dia.points.back(), kBoundaryTol), degree));
  }
  const std::size_t m = dia.offsets.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b || !(dia.offsets[a] <= dia.offsets[b])) continue;
      bool covered = true;
      for (std::size_t c = 0; c < m && covered; ++c) {
        if (c == a || c == b) continue;
        if (dia.offsets[a] <= dia.offsets[c] && dia.offsets[c] <= dia.offsets[b]) covered = false;
      }
      if (covered) dia.edges.push_back({a, b, dia.map(a, b)});
    }
  }
  return dia;
}

std::size_t genrank_oracle(const SimplicialComplex& complex, std::span<const double> values,
                           const WormSpec& spec, int degree) {
  const WormDiagram dia = build_worm_diagram(complex, values, spec, degree);
  const std::size_t m = dia.points.size();
  std::vector<std::size_t> start(m + 1, 0);
  for (std::size_t z = 0; z < m; ++z) start[z + 1] = start[z] + dia.homology[z].rank();
  const std::size_t total = start[m];
  if (total == 0) return 0;

  // Limit: tuples (v_z) with M_{z<=z'} v_z = v_{z'} on every covering relation.
  std::size_t constraint_rows = 0;
  for (const auto& e : dia.edges) constraint_rows += dia.homology[e.to].rank();
  Z2Matrix constraints(constraint_rows, total);
  std::size_t row = 0;
  for (const auto& e : dia.edges) {
    const std::size_t rows_here = dia.homology[e.to].rank();
    for (std::size_t c = 0; c < e.map.cols(); ++c)
      for (std::size_t r = 0; r < rows_here; ++r)
        if (e.map.at(r, c)) constraints.set(row + r, start[e.from] + c, true);
    for (std::size_t r = 0; r < rows_here; ++r) constraints.set(row + r, start[e.to] + r, true);
    row += rows_here;
  }
  const std::vector<BitVector> limit = constraints.kernel();

  // Colimit: direct sum modulo iota_z(v) - iota_{z'}(M v).
  EchelonBasis relations(total);
  for (const auto& e : dia.edges) {
    for (std::size_t c = 0; c < e.map.cols(); ++c) {
      BitVector rel(total);
      rel.set(start[e.from] + c);
      e.map.column(c).for_each_set([&](std::size_t r) { rel.flip(start[e.to] + r); });
      relations.insert(std::move(rel));
    }
  }

  // The canonical map sends a tuple to the class of any one component.
  std::size_t result = 0;
  bool first = true;
  for (std::size_t z = 0; z < m; ++z) {
    EchelonBasis image = relations;
    const std::size_t base = image.rank();
    for (const auto& tuple : limit) {
      BitVector v(total);
      for (std::size_t k = start[z]; k < start[z + 1]; ++k)
        if (tuple.test(k)) v.set(k);
      image.insert(std::move(v));
    }
    const std::size_t r = image.rank() - base;
    if (first) {
      result = r;
      first = false;
    } else if (r != result) {
      throw std::logic_error("limit-to-colimit rank depends on the representing point (" +
                             std::to_string(result) + " vs " + std::to_string(r) + ")");
    }
  }
  return result;
}

std::size_t zigzag_full_bars(std::span<const HomologyBasis* const> spaces) {
  if (spaces.empty()) return 0;
  Subspace left = Subspace::whole(spaces[0]->rank());
  Subspace dead(spaces[0]->rank());
  for (std::size_t t = 0; t + 1 < spaces.size(); ++t) {
    const HomologyBasis& a = *spaces[t];
    const HomologyBasis& b = *spaces[t + 1];
    if (a.subcomplex() == b.subcomplex()) continue;
    if (a.subcomplex().is_subset_of(b.subcomplex())) {
      const Z2Matrix f = induced_map(a, b);
      left = left.image(f);
      dead = dead.image(f);
    } else if (b.subcomplex().is_subset_of(a.subcomplex())) {
      const Z2Matrix g = induced_map(b, a);
      left = left.preimage(g);
      dead = dead.preimage(g);
    } else {
      throw std::invalid_argument("zigzag_full_bars: consecutive subcomplexes are not nested");
    }
  }
  return (left + dead).dim() - dead.dim();
}

std::vector<WormOffset> boundary_path_offsets(int length) {
  std::vector<WormOffset> path = lower_staircase_offsets(length);
  const std::vector<WormOffset> upper = upper_staircase_offsets(length);
  path.insert(path.end(), upper.begin() + 1, upper.end());
  return path;
}

std::size_t genrank_fast(const SimplicialComplex& complex, std::span<const double> values,
                         const WormSpec& spec, int degree, HomologyCache* cache) {
  check_inputs(complex, values, spec, degree);
  if (cache != nullptr && (&cache->complex() != &complex || cache->degree() != degree))
    throw std::invalid_argument("homology cache does not match the query");

  std::vector<BitVector> masks;
  for (WormOffset o : boundary_path_offsets(spec.length)) {
    BitVector mask = sublevel_mask(values, at_offset(spec, o), kBoundaryTol);
    if (masks.empty() || masks.back() != mask) masks.push_back(std::move(mask));
  }

  std::vector<HomologyBasis> owned;
  std::vector<const HomologyBasis*> spaces;
  if (cache == nullptr) {
    owned.reserve(masks.size());
    for (const auto& mask : masks) owned.push_back(homology_basis(complex, mask, degree));
    for (const auto& h : owned) spaces.push_back(&h);
  } else {
    for (const auto& mask : masks) spaces.push_back(&cache->get(mask));
  }
  return zigzag_full_bars(spaces);
}

}  // namespace dgril
