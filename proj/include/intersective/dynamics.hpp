#pragma once

// Concrete measure-preserving actions of the ring lattice: torus rotations
// and the step-2 nilrotation, with exact overlap integrals where closed
// forms exist, counter-based Monte Carlo elsewhere, return-set scans, and
// the finite box-averaged seminorm estimator.

#include "intersective/largeness.hpp"
#include "intersective/poly.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace intersective {

// ------------------------------------------------------- exact dyadic reals

// The exact rational value of a double. Rotation numbers entering through
// configs are honored bit-for-bit: every downstream exact computation refers
// to this dyadic, not to the ideal irrational it approximates.
inline BigRat rat_from_double(double d) {
  require(std::isfinite(d), Errc::domain, "non-finite real parameter");
  if (d == 0.0) return BigRat(0);
  int e = 0;
  double m = std::frexp(d, &e);  // d = m * 2^e, |m| in [1/2, 1)
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  BigRat r(BigInt(mant), BigInt(1));
  int shift = 53 - e;
  if (shift >= 0) {
    r /= BigRat(BigInt(1) << shift);
  } else {
    r *= BigRat(BigInt(1) << -shift);
  }
  return r;
}

inline BigInt rat_floor(const BigRat& q) {
  return floor_div(numerator(q), denominator(q));
}

inline BigRat frac_rat(const BigRat& q) { return q - BigRat(rat_floor(q)); }

inline double rat_to_double(const BigRat& q) { return q.convert_to<double>(); }

inline double frac_double(double x) {
  double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

// ------------------------------------------------------------- target boxes

// Product of circle arcs: corner_j plus a half-open arc of length side_j.
struct TorusBox {
  std::vector<BigRat> corner, sides;

  TorusBox(std::vector<BigRat> corner_, std::vector<BigRat> sides_)
      : corner(std::move(corner_)), sides(std::move(sides_)) {
    require(!corner.empty() && corner.size() == sides.size(), Errc::domain, "box shape mismatch");
    for (std::size_t j = 0; j < corner.size(); ++j) {
      require(corner[j] >= 0 && corner[j] < 1, Errc::domain, "box corner outside [0,1)");
      require(sides[j] > 0 && sides[j] <= 1, Errc::domain, "box side outside (0,1]");
    }
  }

  int dim() const { return static_cast<int>(corner.size()); }

  BigRat measure() const {
    BigRat m = 1;
    for (const auto& s : sides) m *= s;
    return m;
  }

  bool contains(const std::vector<double>& x, const std::vector<double>& corner_d,
                const std::vector<double>& sides_d) const {
    for (std::size_t j = 0; j < corner.size(); ++j) {
      if (frac_double(x[j] - corner_d[j]) >= sides_d[j]) return false;
    }
    return true;
  }

  std::vector<double> corner_doubles() const {
    std::vector<double> v;
    for (const auto& c : corner) v.push_back(rat_to_double(c));
    return v;
  }
  std::vector<double> side_doubles() const {
    std::vector<double> v;
    for (const auto& s : sides) v.push_back(rat_to_double(s));
    return v;
  }
};

// Length of the self-overlap of a circle arc of length s shifted by t;
// ||t|| is the distance from t to the nearest integer. Corner-independent.
inline BigRat overlap_length(const BigRat& s, const BigRat& t) {
  BigRat f = frac_rat(t);
  BigRat dist = f <= BigRat(1, 2) ? f : 1 - f;
  BigRat a = s - dist;
  BigRat b = s - (1 - dist);
  BigRat out = 0;
  if (a > 0) out += a;
  if (b > 0) out += b;
  return out;
}

inline BigRat torus_overlap(const TorusBox& B, const std::vector<BigRat>& t) {
  require(static_cast<int>(t.size()) == B.dim(), Errc::domain, "shift dimension mismatch");
  BigRat m = 1;
  for (std::size_t j = 0; j < t.size(); ++j) m *= overlap_length(B.sides[j], t[j]);
  return m;
}

// ----------------------------------------------------------------- systems

// Rotation of the D-torus by exact dyadic frequency rows, one row per
// lattice basis direction: u = a + b*w translates by a*alpha[0] + b*alpha[1].
class KroneckerSystem {
 public:
  KroneckerSystem(FieldDesc F, std::vector<std::vector<BigRat>> alpha, TorusBox B)
      : F_(std::move(F)), alpha_(std::move(alpha)), B_(std::move(B)) {
    std::size_t rows = F_.rational() ? 1 : 2;
    require(alpha_.size() == rows, Errc::domain, "one frequency row per basis element required");
    for (const auto& row : alpha_) {
      require(static_cast<int>(row.size()) == B_.dim(), Errc::domain,
              "frequency row does not match the torus dimension");
      for (const auto& a : row) {
        require(a >= 0 && a < 1, Errc::domain, "frequency outside [0,1)");
      }
    }
  }

  const FieldDesc& field() const { return F_; }
  int torus_dim() const { return B_.dim(); }
  const TorusBox& target() const { return B_; }

  // Exact translation vector of the element v, fractional parts in [0,1).
  std::vector<BigRat> shift_exact(const AlgInt& v) const {
    std::vector<BigRat> t(B_.dim());
    for (int j = 0; j < B_.dim(); ++j) {
      BigRat s = BigRat(v.a) * alpha_[0][j];
      if (alpha_.size() == 2) s += BigRat(v.b) * alpha_[1][j];
      t[j] = frac_rat(s);
    }
    return t;
  }

 private:
  FieldDesc F_;
  std::vector<std::vector<BigRat>> alpha_;
  TorusBox B_;
};

// Quotient of the step-2 group {(x,y,z): (x,y,z)(x',y',z') = (x+x', y+y',
// z+z'+x*y')} by its integer points, acted on by powers of one generator.
// The action is a Z-action: the field stays rational by construction.
class HeisenbergSystem {
 public:
  HeisenbergSystem(BigRat alpha, BigRat beta, BigRat gamma, TorusBox B)
      : a_{std::move(alpha), std::move(beta), std::move(gamma)}, B_(std::move(B)) {
    require(B_.dim() == 3, Errc::domain, "target box must live in the 3-dimensional quotient");
  }

  const TorusBox& target() const { return B_; }
  const std::array<BigRat, 3>& generator() const { return a_; }

  static std::array<BigRat, 3> mul(const std::array<BigRat, 3>& g, const std::array<BigRat, 3>& h) {
    return {g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]};
  }

  // a^n = (n a0, n a1, n a2 + C(n,2) a0 a1); valid for negative n as well.
  std::array<BigRat, 3> power_exact(const BigInt& n) const {
    BigRat nn(n);
    BigRat binom = BigRat(n * (n - 1)) / 2;
    return {nn * a_[0], nn * a_[1], nn * a_[2] + binom * a_[0] * a_[1]};
  }

  // Right-multiplication by a lattice element bringing all coordinates into
  // [0,1): b kills the y integer part, a the x part, then c the remainder
  // of z + x*b.
  static std::array<BigRat, 3> reduce_exact(const std::array<BigRat, 3>& g) {
    BigRat b = -BigRat(rat_floor(g[1]));
    BigRat z = g[2] + g[0] * b;
    return {frac_rat(g[0]), frac_rat(g[1]), frac_rat(z)};
  }

  std::array<BigRat, 3> apply_exact(const BigInt& n, const std::array<BigRat, 3>& x) const {
    return reduce_exact(mul(power_exact(n), x));
  }

 private:
  std::array<BigRat, 3> a_;
  TorusBox B_;
};

inline std::array<double, 3> heisenberg_reduce(const std::array<double, 3>& g) {
  double b = -std::floor(g[1]);
  double z = g[2] + g[0] * b;
  return {frac_double(g[0]), frac_double(g[1]), frac_double(z)};
}

// --------------------------------------------------------- sampling plumbing

namespace detail {

constexpr std::uint64_t dyadic_bits = 53;
constexpr std::uint64_t dyadic_mod = std::uint64_t(1) << dyadic_bits;

struct UnitSample {
  std::vector<std::uint64_t> mant;  // 53-bit mantissas
  std::vector<double> x;            // mant / 2^53
};

inline UnitSample draw_sample(std::uint64_t seed, std::uint64_t index, int dim) {
  UnitSample s;
  s.mant.resize(dim);
  s.x.resize(dim);
  for (int j = 0; j < dim; ++j) {
    std::uint64_t h = hash_words({seed, index, static_cast<std::uint64_t>(j)});
    s.mant[j] = h >> 11;
    s.x[j] = static_cast<double>(s.mant[j]) * 0x1p-53;
  }
  return s;
}

// Per-element anchors: everything n-dependent is computed exactly once, so
// the per-sample work is O(1) double arithmetic plus one exact dyadic
// product for the nilrotation cross term.
struct KroneckerAnchor {
  std::vector<double> t;
};

struct HeisenbergAnchor {
  double fa, fb, fc;       // fractional parts of the a^n coordinates
  std::uint64_t na_dyadic; // floor(n*a0) mod 2^53, for the exact cross term
};

class KroneckerAction {
 public:
  using Anchor = KroneckerAnchor;

  explicit KroneckerAction(const KroneckerSystem& sys)
      : sys_(sys), corner_(sys.target().corner_doubles()), sides_(sys.target().side_doubles()) {}

  const FieldDesc& field() const { return sys_.field(); }
  int lattice_dim() const { return sys_.field().rational() ? 1 : 2; }
  int space_dim() const { return sys_.torus_dim(); }

  Anchor anchor(const AlgInt& v) const {
    Anchor a;
    for (const auto& q : sys_.shift_exact(v)) a.t.push_back(rat_to_double(q));
    return a;
  }

  std::vector<double> apply(const Anchor& a, const UnitSample& s) const {
    std::vector<double> y(s.x.size());
    for (std::size_t j = 0; j < s.x.size(); ++j) y[j] = frac_double(s.x[j] + a.t[j]);
    return y;
  }

  bool in_target(const std::vector<double>& y) const {
    return sys_.target().contains(y, corner_, sides_);
  }

 private:
  const KroneckerSystem& sys_;
  std::vector<double> corner_, sides_;
};

class HeisenbergAction {
 public:
  using Anchor = HeisenbergAnchor;

  explicit HeisenbergAction(const HeisenbergSystem& sys)
      : sys_(sys), corner_(sys.target().corner_doubles()), sides_(sys.target().side_doubles()) {}

  const FieldDesc& field() const { return F_; }
  int lattice_dim() const { return 1; }
  int space_dim() const { return 3; }

  Anchor anchor(const AlgInt& v) const {
    auto g = sys_.power_exact(v.a);
    Anchor a;
    a.fa = rat_to_double(frac_rat(g[0]));
    a.fb = rat_to_double(frac_rat(g[1]));
    a.fc = rat_to_double(frac_rat(g[2]));
    a.na_dyadic = to_uint64(floor_mod(rat_floor(g[0]), BigInt(dyadic_mod)));
    return a;
  }

  // (A,B,C)(x,y,z) = (A+x, B+y, C+z+A*y) reduced; A*y mod 1 splits into
  // floor(A)*y (exact dyadic product) plus frac(A)*y (unit-scale double).
  std::vector<double> apply(const Anchor& a, const UnitSample& s) const {
    double cross_int = static_cast<double>(mulmod_u64(a.na_dyadic, s.mant[1], dyadic_mod)) * 0x1p-53;
    double x = frac_double(a.fa + s.x[0]);
    double y = frac_double(a.fb + s.x[1]);
    double z = frac_double(a.fc + s.x[2] + a.fa * s.x[1] + cross_int);
    return {x, y, z};
  }

  bool in_target(const std::vector<double>& y) const {
    return sys_.target().contains(y, corner_, sides_);
  }

 private:
  const HeisenbergSystem& sys_;
  FieldDesc F_ = FieldDesc::rationals();
  std::vector<double> corner_, sides_;
};

}  // namespace detail

// ------------------------------------------------------------- correlations

enum class CorrMethod { exact, monte_carlo };

struct CorrelationReport {
  Point u;
  double value = 0.0;
  std::optional<BigRat> exact_value;  // set on the exact path
  CorrMethod method = CorrMethod::monte_carlo;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double stderr_est = 0.0;
};

struct McOptions {
  std::uint64_t samples = 4096;
  std::uint64_t seed = 1;
  bool force_monte_carlo = false;  // exercise the sampler where a closed form exists
};

inline AlgInt point_to_elem(const FieldDesc& F, const Point& u) {
  if (F.rational()) {
    require(u.size() == 1, Errc::domain, "rational lattice points have one coordinate");
    return AlgInt(BigInt(u[0]), BigInt(0));
  }
  require(u.size() == 2, Errc::domain, "quadratic lattice points have two coordinates");
  return AlgInt(BigInt(u[0]), BigInt(u[1]));
}

namespace detail {

template <typename Action>
CorrelationReport mc_correlation(const Action& act, const std::vector<AlgInt>& shifts,
                                 const Point& u, const McOptions& opts) {
  require(opts.samples > 0, Errc::domain, "sample count must be positive");
  std::vector<typename Action::Anchor> anchors;
  anchors.reserve(shifts.size());
  for (const auto& v : shifts) anchors.push_back(act.anchor(v));

  std::uint64_t seed_u = hash_words({0x636f7272ULL, opts.seed});
  for (auto c : u) seed_u = hash_i64(seed_u, c);

  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    UnitSample x = draw_sample(seed_u, s, act.space_dim());
    bool in = act.in_target(x.x);
    for (std::size_t i = 0; in && i < anchors.size(); ++i) {
      in = act.in_target(act.apply(anchors[i], x));
    }
    if (in) ++hits;
  }
  CorrelationReport rep;
  rep.u = u;
  rep.method = CorrMethod::monte_carlo;
  rep.samples = opts.samples;
  rep.seed = opts.seed;
  rep.value = static_cast<double>(hits) / static_cast<double>(opts.samples);
  rep.stderr_est = std::sqrt(std::max(rep.value * (1.0 - rep.value), 0.0) /
                             static_cast<double>(opts.samples));
  return rep;
}

inline std::vector<AlgInt> poly_values_at(const std::vector<OPoly>& polys, const FieldDesc& F,
                                          const Point& u) {
  AlgInt e = point_to_elem(F, u);
  std::vector<AlgInt> vals;
  vals.reserve(polys.size());
  for (const auto& p : polys) {
    require(p.univariate(), Errc::domain, "correlation polynomials must be univariate");
    require(p.field() == F, Errc::field_mismatch, "polynomial field differs from the system");
    vals.push_back(p.evaluate({e}));
  }
  return vals;
}

}  // namespace detail

// mu(B cap T^{p_1(u)}B cap ... cap T^{p_k(u)}B): closed form for a single
// polynomial on the torus, sampled for everything else.
inline CorrelationReport correlation(const KroneckerSystem& sys, const std::vector<OPoly>& polys,
                                     const Point& u, const McOptions& opts = {}) {
  require(!polys.empty(), Errc::domain, "no polynomials");
  auto vals = detail::poly_values_at(polys, sys.field(), u);
  if (vals.size() == 1 && !opts.force_monte_carlo) {
    CorrelationReport rep;
    rep.u = u;
    rep.method = CorrMethod::exact;
    rep.exact_value = torus_overlap(sys.target(), sys.shift_exact(vals[0]));
    rep.value = rat_to_double(*rep.exact_value);
    return rep;
  }
  return detail::mc_correlation(detail::KroneckerAction(sys), vals, u, opts);
}

inline CorrelationReport correlation(const HeisenbergSystem& sys, const std::vector<OPoly>& polys,
                                     const Point& u, const McOptions& opts = {}) {
  require(!polys.empty(), Errc::domain, "no polynomials");
  FieldDesc Q = FieldDesc::rationals();
  auto vals = detail::poly_values_at(polys, Q, u);
  return detail::mc_correlation(detail::HeisenbergAction(sys), vals, u, opts);
}

// ---------------------------------------------------------- return-set scan

struct ReturnScanOptions {
  McOptions mc;
  int threads = 1;
  std::uint64_t window_budget = 1'000'000;
};

struct ReturnScanReport {
  std::vector<CorrelationReport> per_u;  // in window order
  std::vector<Point> hits;
  BigRat hit_density = 0;
  GapResult hit_gap;
  BigRat threshold = 0;
};

namespace detail {

template <typename Sys>
ReturnScanReport scan_core(const Sys& sys, const std::vector<OPoly>& polys, const BigRat& c,
                           const Window& W, const ReturnScanOptions& opts) {
  std::uint64_t n = W.size_within(opts.window_budget);
  ReturnScanReport rep;
  rep.threshold = c;
  rep.per_u.resize(n);
  double cd = rat_to_double(c);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    rep.per_u[i] = correlation(sys, polys, W.at(i), opts.mc);
  });
  for (auto& r : rep.per_u) {
    bool hit = r.exact_value ? (*r.exact_value >= c) : (r.value >= cd);
    if (hit) rep.hits.push_back(r.u);
  }
  rep.hit_density = BigRat(BigInt(rep.hits.size()), W.cardinality());
  SetSpec hit_set = SetSpec::explicit_set(rep.hits.empty() ? std::vector<Point>{} : rep.hits);
  rep.hit_gap = rep.hits.empty() ? GapResult{std::nullopt, 0} : syndeticity_gap(hit_set, W);
  return rep;
}

}  // namespace detail

inline ReturnScanReport return_set_scan(const KroneckerSystem& sys, const std::vector<OPoly>& polys,
                                        const BigRat& c, const Window& W,
                                        const ReturnScanOptions& opts = {}) {
  require(W.dim() == (sys.field().rational() ? 1 : 2), Errc::domain,
          "window dimension does not match the lattice");
  return detail::scan_core(sys, polys, c, W, opts);
}

inline ReturnScanReport return_set_scan(const HeisenbergSystem& sys, const std::vector<OPoly>& polys,
                                        const BigRat& c, const Window& W,
                                        const ReturnScanOptions& opts = {}) {
  require(W.dim() == 1, Errc::domain, "nilrotation scans run over one-dimensional windows");
  return detail::scan_core(sys, polys, c, W, opts);
}

// ------------------------------------------------- seminorm estimator

struct SampledFn {
  std::string name;
  std::function<double(const std::vector<double>&)> eval;
};

inline SampledFn fn_one() {
  return {"one", [](const std::vector<double>&) { return 1.0; }};
}

// cos(2 pi x_1): the basic nonconstant character combination
inline SampledFn fn_cos() {
  return {"cos", [](const std::vector<double>& x) { return std::cos(2.0 * M_PI * x[0]); }};
}

inline SampledFn fn_box_indicator(const TorusBox& B) {
  auto corner = B.corner_doubles();
  auto sides = B.side_doubles();
  auto Bc = B;
  return {"indicator", [Bc, corner, sides](const std::vector<double>& x) {
            return Bc.contains(x, corner, sides) ? 1.0 : 0.0;
          }};
}

struct GhkOptions {
  std::uint64_t samples = 2048;
  std::uint64_t seed = 1;
  std::uint64_t eval_budget = 10'000'000;  // total leaf evaluations allowed
};

struct GhkReport {
  double value = 0.0;
  int k = 0;
  std::uint64_t samples = 0;
  std::uint64_t u_per_level = 0;
  std::uint64_t leaves = 0;
};

namespace detail {

template <typename Action>
double ghk_level(const Action& act, const SampledFn& f, const std::vector<AlgInt>& shifts,
                 int level, const Window& W, std::uint64_t wn, std::uint64_t u_count,
                 const GhkOptions& opts, std::uint64_t& leaves) {
  if (level == 0) {
    std::vector<typename Action::Anchor> anchors;
    anchors.reserve(shifts.size());
    for (const auto& v : shifts) anchors.push_back(act.anchor(v));
    double acc = 0.0;
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
      UnitSample x = draw_sample(opts.seed, s, act.space_dim());
      double prod = 1.0;
      for (const auto& a : anchors) prod *= f.eval(act.apply(a, x));
      acc += prod;
    }
    ++leaves;
    return acc / static_cast<double>(opts.samples);
  }
  // avg_u inner(u)^(2^(level-1)); exponent 1 keeps the sign of a level-0 mean
  int expo = 1 << (level - 1);
  double acc = 0.0;
  for (std::uint64_t i = 0; i < u_count; ++i) {
    std::uint64_t idx = ((2 * i + 1) * wn) / (2 * u_count);  // balanced equispaced picks
    AlgInt uel = point_to_elem(act.field(), W.at(idx));
    std::vector<AlgInt> doubled = shifts;
    for (const auto& s : shifts) doubled.push_back(s + uel);
    double inner = ghk_level(act, f, doubled, level - 1, W, wn, u_count, opts, leaves);
    acc += expo == 1 ? inner : std::pow(inner, expo);
  }
  acc /= static_cast<double>(u_count);
  if (acc < 0.0) acc = 0.0;  // finite-sample dips below the true nonnegative value
  return std::pow(acc, 1.0 / std::pow(2.0, level));
}

template <typename Action>
GhkReport ghk_core(const Action& act, const SampledFn& f, int k, const Window& W,
                   const GhkOptions& opts) {
  require(k >= 0 && k <= 3, Errc::cap_exceeded, "seminorm order capped at 3");
  require(opts.samples > 0, Errc::domain, "sample count must be positive");
  std::uint64_t wn = W.size_within(1'000'000'000);
  GhkReport rep;
  rep.k = k;
  rep.samples = opts.samples;
  std::uint64_t u_count = wn;
  if (k >= 1) {
    double per_leaf = static_cast<double>(opts.samples);
    double max_leaves = static_cast<double>(opts.eval_budget) / per_leaf;
    u_count = static_cast<std::uint64_t>(std::pow(max_leaves, 1.0 / k));
    u_count = std::max<std::uint64_t>(1, std::min(u_count, wn));
  }
  rep.u_per_level = u_count;
  std::vector<AlgInt> shifts{AlgInt(0)};
  double v = ghk_level(act, f, shifts, k, W, wn, u_count, opts, rep.leaves);
  // level-0 result is a plain average; the seminorm of order 0 is its magnitude
  rep.value = k == 0 ? std::abs(v) : v;
  return rep;
}

}  // namespace detail

inline GhkReport ghk_estimate(const KroneckerSystem& sys, const SampledFn& f, int k,
                              const Window& W, const GhkOptions& opts = {}) {
  require(W.dim() == (sys.field().rational() ? 1 : 2), Errc::domain,
          "window dimension does not match the lattice");
  return detail::ghk_core(detail::KroneckerAction(sys), f, k, W, opts);
}

inline GhkReport ghk_estimate(const HeisenbergSystem& sys, const SampledFn& f, int k,
                              const Window& W, const GhkOptions& opts = {}) {
  require(W.dim() == 1, Errc::domain, "nilrotation windows are one-dimensional");
  return detail::ghk_core(detail::HeisenbergAction(sys), f, k, W, opts);
}

}  // namespace intersective
