#pragma once

// Window-scale reproductions of the combinatorial conclusions: intersection
// densities of a set with its polynomial translates, the partition variant,
// and the two-parameter demo on the Gaussian lattice. Everything here counts
// exactly; randomness only ever enters through a seeded set definition.

#include "intersective/largeness.hpp"
#include "intersective/poly.hpp"

namespace intersective {

struct DensityScanOptions {
  int threads = 1;
  std::uint64_t budget = 50'000'000;  // membership evaluations
};

struct DensityPoint {
  Point u;
  BigRat density;
};

struct DensityReturnReport {
  BigRat threshold = 0;
  std::vector<DensityPoint> per_u;  // window order over W_u
  std::vector<Point> good;          // u with density >= threshold
  BigRat good_density = 0;          // |good| / |W_u|
  GapResult good_gap;
  BigRat boundary_error = 0;  // perimeter/area of W_set, per unit translation
};

namespace detail {

inline std::int64_t to_i64(const BigInt& v) {
  require(v >= std::numeric_limits<std::int64_t>::min() &&
              v <= std::numeric_limits<std::int64_t>::max(),
          Errc::cap_exceeded, "shift exceeds the lattice coordinate range");
  return static_cast<std::int64_t>(v);
}

// Exact |{x in W : x in E and x + s in E for every s}|.
inline std::uint64_t count_intersection(const SetSpec& E, const std::vector<Point>& shifts,
                                        const Window& W) {
  std::uint64_t n = to_uint64(W.cardinality(), "window size");
  std::uint64_t hits = 0;
  Point xs(W.dim());
  for (std::uint64_t f = 0; f < n; ++f) {
    Point x = W.at(f);
    if (!E.contains(x)) continue;
    bool all = true;
    for (const auto& s : shifts) {
      for (int j = 0; j < W.dim(); ++j) xs[j] = x[j] + s[j];
      if (!E.contains(xs)) { all = false; break; }
    }
    if (all) ++hits;
  }
  return hits;
}

inline BigRat perimeter_over_area(const Window& W) {
  BigRat e = 0;
  for (int j = 0; j < W.dim(); ++j) e += BigRat(2, W.hi[j] - W.lo[j] + 1);
  return e;
}

}  // namespace detail

// For each u in W_u: the exact density on W_set of E cap (E - p_1(u)) cap
// ... cap (E - p_k(u)), polynomial values pushed down to lattice shifts
// through their integer component polynomials.
inline DensityReturnReport density_return_scan(const SetSpec& E, const std::vector<OPoly>& polys,
                                               const Window& W_set, const Window& W_u,
                                               const BigRat& c,
                                               const DensityScanOptions& opts = {}) {
  require(!polys.empty(), Errc::domain, "no polynomials");
  const FieldDesc& F = polys.front().field();
  int m = F.rational() ? 1 : 2;
  require(W_set.dim() == m, Errc::domain, "set window dimension does not match the lattice");
  require(E.dim() == 0 || E.dim() == m, Errc::domain, "set dimension does not match the lattice");

  std::vector<ZPolyVector> maps;
  for (const auto& p : polys) {
    require(p.univariate(), Errc::domain, "scan polynomials must be univariate");
    require(p.field() == F, Errc::field_mismatch, "mixed fields in scan polynomials");
    maps.push_back(decompose(p));
  }
  require(W_u.dim() == m, Errc::domain, "translate window dimension does not match the lattice");

  std::uint64_t nu = to_uint64(W_u.cardinality(), "translate window size");
  std::uint64_t ns = to_uint64(W_set.cardinality(), "set window size");
  std::uint64_t per_u_cost = ns * (static_cast<std::uint64_t>(polys.size()) + 1);
  require(nu <= opts.budget / std::max<std::uint64_t>(per_u_cost, 1), Errc::budget_exceeded,
          "density scan exceeds the evaluation budget");

  DensityReturnReport rep;
  rep.threshold = c;
  rep.boundary_error = detail::perimeter_over_area(W_set);
  rep.per_u.resize(nu);
  parallel_for(nu, opts.threads, [&](std::size_t i) {
    Point u = W_u.at(i);
    std::vector<BigInt> up(u.begin(), u.end());
    std::vector<Point> shifts;
    shifts.reserve(maps.size());
    for (const auto& mp : maps) {
      std::vector<BigInt> sv = mp.shift_at(up);
      Point s;
      for (const auto& v : sv) s.push_back(detail::to_i64(v));
      shifts.push_back(std::move(s));
    }
    std::uint64_t hits = detail::count_intersection(E, shifts, W_set);
    rep.per_u[i] = {u, BigRat(BigInt(hits), BigInt(ns))};
  });
  for (const auto& d : rep.per_u) {
    if (d.density >= c) rep.good.push_back(d.u);
  }
  rep.good_density = BigRat(BigInt(rep.good.size()), BigInt(nu));
  if (!rep.good.empty()) {
    rep.good_gap = syndeticity_gap(SetSpec::explicit_set(rep.good), W_u);
  }
  return rep;
}

// ------------------------------------------------------------- partitions

struct PartitionScanOptions {
  BigRat epsilon = BigRat(1, 20);
  DensityScanOptions scan;
};

struct PartitionScanReport {
  int cell = -1;                 // maximal window density, first on ties
  BigRat cell_density = 0;
  BigRat threshold = 0;          // cell_density^2 - epsilon, floored at 0
  DensityReturnReport scan;
};

// Validates that the cells tile W_set exactly, then scans the densest cell.
inline PartitionScanReport partition_scan(const std::vector<SetSpec>& parts,
                                          const std::vector<OPoly>& polys, const Window& W_set,
                                          const Window& W_u,
                                          const PartitionScanOptions& opts = {}) {
  require(!parts.empty(), Errc::domain, "empty partition");
  std::uint64_t ns = to_uint64(W_set.cardinality(), "set window size");
  require(ns * parts.size() <= opts.scan.budget, Errc::budget_exceeded,
          "partition validation exceeds the evaluation budget");

  std::vector<std::uint64_t> counts(parts.size(), 0);
  for (std::uint64_t f = 0; f < ns; ++f) {
    Point x = W_set.at(f);
    int owner = -1;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!parts[i].contains(x)) continue;
      require(owner < 0, Errc::domain, "cells overlap on the window");
      owner = static_cast<int>(i);
    }
    require(owner >= 0, Errc::domain, "cells do not cover the window");
    ++counts[static_cast<std::size_t>(owner)];
  }

  PartitionScanReport rep;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (rep.cell < 0 || counts[i] > counts[static_cast<std::size_t>(rep.cell)]) {
      rep.cell = static_cast<int>(i);
    }
  }
  rep.cell_density = BigRat(BigInt(counts[static_cast<std::size_t>(rep.cell)]), BigInt(ns));
  rep.threshold = rep.cell_density * rep.cell_density - opts.epsilon;
  if (rep.threshold < 0) rep.threshold = 0;
  rep.scan = density_return_scan(parts[static_cast<std::size_t>(rep.cell)], polys, W_set, W_u,
                                 rep.threshold, opts.scan);
  return rep;
}

// ------------------------------------------------- Gaussian-lattice demo

struct GaussianDemoReport {
  ZPolyVector mapping;  // the two component polynomials of x^2+1
  BigRat base_density = 0;
  BigRat threshold = 0;
  DensityReturnReport scan;
};

// Scans translates by the decomposed mapping of x^2+1 over the Gaussian
// integers; the mapping is produced by the decomposition routine each run.
inline GaussianDemoReport gaussian_config_demo(const SetSpec& E, const Window& W_set,
                                               const Window& W_u,
                                               const BigRat& epsilon = BigRat(1, 20),
                                               const DensityScanOptions& opts = {}) {
  FieldDesc Qi = FieldDesc::quadratic(-1);
  OPoly p = parse_opoly(Qi, "x^2+1");
  GaussianDemoReport rep;
  rep.mapping = decompose(p);
  std::uint64_t ns = to_uint64(W_set.cardinality(), "set window size");
  std::uint64_t base = 0;
  for (std::uint64_t f = 0; f < ns; ++f) {
    if (E.contains(W_set.at(f))) ++base;
  }
  rep.base_density = BigRat(BigInt(base), BigInt(ns));
  rep.threshold = rep.base_density * rep.base_density - epsilon;
  if (rep.threshold < 0) rep.threshold = 0;
  rep.scan = density_return_scan(E, {p}, W_set, W_u, rep.threshold, opts);
  return rep;
}

}  // namespace intersective
