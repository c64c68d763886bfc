#pragma once

// Nonzero integral ideals of O_L as 2-dimensional lattices in Hermite form.
//
// Quadratic fields: the Z-basis is {a, b + c*w} with a, c > 0, c | a, c | b,
// 0 <= b < a, serialized "[[a,b],[0,c]]"; norm = index = a*c. The rational
// case stores a single positive generator g, serialized "[[g,0]]".
// Canonical residue representatives are x + y*w with 0 <= x < a, 0 <= y < c.

#include "intersective/field.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace intersective {

class Ideal {
 public:
  // Rational ideal <g>.
  static Ideal rational(const FieldDesc& F, const BigInt& g) {
    require(F.rational(), Errc::domain, "rational ideal in a quadratic field");
    require(g != 0, Errc::domain, "zero ideal");
    Ideal I;
    I.F_ = F;
    I.a_ = abs(g);
    I.b_ = 0;
    I.c_ = 0;
    return I;
  }

  // Lattice {a, b + c*w}; validates the omega-closure (ideal) property.
  static Ideal from_hnf(const FieldDesc& F, BigInt a, BigInt b, BigInt c) {
    require(!F.rational(), Errc::domain, "HNF triple only applies to quadratic fields");
    require(a > 0 && c > 0, Errc::domain, "HNF diagonal must be positive");
    b = floor_mod(b, a);
    Ideal I;
    I.F_ = F;
    I.a_ = std::move(a);
    I.b_ = std::move(b);
    I.c_ = std::move(c);
    require(I.lattice_contains(nf_mul(F, AlgInt{BigInt(0), BigInt(1)}, AlgInt{I.a_, BigInt(0)})) &&
                I.lattice_contains(nf_mul(F, AlgInt{BigInt(0), BigInt(1)}, AlgInt{I.b_, I.c_})),
            Errc::domain, "lattice fails the w-closure test; not an ideal");
    return I;
  }

  const FieldDesc& field() const { return F_; }
  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& c() const { return c_; }

  BigInt norm() const { return F_.rational() ? a_ : a_ * c_; }
  bool is_unit_ideal() const { return norm() == 1; }

  bool contains(const AlgInt& x) const {
    require_element_of(F_, x);
    return lattice_contains(x);
  }

  // Canonical representative of x mod the ideal.
  AlgInt reduce(const AlgInt& x) const {
    require_element_of(F_, x);
    if (F_.rational()) return AlgInt{floor_mod(x.a, a_), BigInt(0)};
    BigInt y = floor_mod(x.b, c_);
    BigInt k = (x.b - y) / c_;
    return AlgInt{floor_mod(x.a - k * b_, a_), y};
  }

  bool operator==(const Ideal& o) const {
    return F_ == o.F_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
  }

  std::string str() const {
    if (F_.rational()) return "[[" + a_.str() + ",0]]";
    return "[[" + a_.str() + "," + b_.str() + "],[0," + c_.str() + "]]";
  }

  // Accepts both serialized shapes; canonicalizes and re-validates.
  static Ideal parse(const FieldDesc& F, const std::string& raw);

 private:
  friend Ideal ideal_from_generators(const FieldDesc&, const std::vector<AlgInt>&);

  bool lattice_contains(const AlgInt& x) const {
    if (F_.rational()) return x.a % a_ == 0;
    if (x.b % c_ != 0) return false;
    return (x.a - (x.b / c_) * b_) % a_ == 0;
  }

  FieldDesc F_;
  BigInt a_, b_, c_;
};

// Hermite form of the Z-span of coordinate pairs (x, y); pairs must span a
// full-rank sublattice.
inline void hnf_pairs(const std::vector<std::pair<BigInt, BigInt>>& gens, BigInt& a, BigInt& b,
                      BigInt& c) {
  // Fold every generator into one vector (b0, c0) carrying the gcd of the
  // y-components; each fold is unimodular and leaves behind an x-axis vector,
  // so the axis gcd closes the triangular form.
  BigInt b0 = 0, c0 = 0, ax = 0;
  for (const auto& [x, y] : gens) {
    if (y == 0) {
      ax = big_gcd(ax, x);
    } else if (c0 == 0) {
      b0 = x;
      c0 = y;
    } else {
      BigInt s, t;
      BigInt g = ext_gcd(c0, y, s, t);
      BigInt axis = (c0 / g) * x - (y / g) * b0;
      b0 = s * b0 + t * x;
      c0 = g;
      ax = big_gcd(ax, axis);
    }
  }
  require(ax != 0 && c0 != 0, Errc::domain, "generators do not span a full-rank lattice");
  if (c0 < 0) { c0 = -c0; b0 = -b0; }
  a = ax;
  b = floor_mod(b0, ax);
  c = c0;
}

// Ideal generated by elements of O_L: the Z-span of {g_i, w*g_i}.
inline Ideal ideal_from_generators(const FieldDesc& F, const std::vector<AlgInt>& gens) {
  require(!gens.empty(), Errc::domain, "no generators");
  bool nonzero = false;
  for (const auto& g : gens) {
    require_element_of(F, g);
    nonzero = nonzero || !g.is_zero();
  }
  require(nonzero, Errc::domain, "zero ideal");
  if (F.rational()) {
    BigInt g = 0;
    for (const auto& x : gens) g = big_gcd(g, x.a);
    return Ideal::rational(F, g);
  }
  const AlgInt w{BigInt(0), BigInt(1)};
  std::vector<std::pair<BigInt, BigInt>> rows;
  rows.reserve(gens.size() * 2);
  for (const auto& g : gens) {
    rows.emplace_back(g.a, g.b);
    AlgInt wg = nf_mul(F, w, g);
    rows.emplace_back(wg.a, wg.b);
  }
  BigInt a, b, c;
  hnf_pairs(std::move(rows), a, b, c);
  Ideal I = Ideal::from_hnf(F, a, b, c);
  return I;
}

inline Ideal ideal_principal(const FieldDesc& F, const AlgInt& g) {
  return ideal_from_generators(F, {g});
}

inline Ideal ideal_unit(const FieldDesc& F) {
  if (F.rational()) return Ideal::rational(F, 1);
  return Ideal::from_hnf(F, 1, 0, 1);
}

inline Ideal ideal_mul(const Ideal& I, const Ideal& J) {
  require(I.field() == J.field(), Errc::field_mismatch, "ideal product across fields");
  const FieldDesc& F = I.field();
  if (F.rational()) return Ideal::rational(F, I.a() * J.a());
  std::vector<AlgInt> gens;
  const AlgInt bi[2] = {AlgInt{I.a(), BigInt(0)}, AlgInt{I.b(), I.c()}};
  const AlgInt bj[2] = {AlgInt{J.a(), BigInt(0)}, AlgInt{J.b(), J.c()}};
  for (const auto& x : bi) {
    for (const auto& y : bj) gens.push_back(nf_mul(F, x, y));
  }
  return ideal_from_generators(F, gens);
}

inline Ideal ideal_pow(const Ideal& I, unsigned k) {
  Ideal r = ideal_unit(I.field());
  Ideal base = I;
  while (k) {
    if (k & 1) r = ideal_mul(r, base);
    if (k >>= 1) base = ideal_mul(base, base);
  }
  return r;
}

inline bool ideal_contains(const Ideal& I, const AlgInt& x) { return I.contains(x); }

// I contains J as lattices (i.e. J is a subset, so I | J as ideals).
inline bool ideal_contains_ideal(const Ideal& I, const Ideal& J) {
  require(I.field() == J.field(), Errc::field_mismatch, "containment across fields");
  if (I.field().rational()) return J.a() % I.a() == 0;
  return I.contains(AlgInt{J.a(), BigInt(0)}) && I.contains(AlgInt{J.b(), J.c()});
}

// Complete residue system, canonical representatives in enumeration order
// (x major, then y); errors out above the cap.
inline std::vector<AlgInt> residue_system(const Ideal& I, std::uint64_t cap = default_residue_cap()) {
  BigInt count = I.norm();
  require(count <= BigInt(cap), Errc::cap_exceeded,
          "residue system of size " + count.str() + " exceeds cap " + std::to_string(cap));
  std::vector<AlgInt> out;
  out.reserve(static_cast<std::size_t>(to_uint64(count)));
  if (I.field().rational()) {
    for (BigInt x = 0; x < I.a(); ++x) out.push_back(AlgInt{x, BigInt(0)});
    return out;
  }
  for (BigInt x = 0; x < I.a(); ++x) {
    for (BigInt y = 0; y < I.c(); ++y) out.push_back(AlgInt{x, y});
  }
  return out;
}

// One prime ideal above a rational prime.
struct PrimeFactor {
  Ideal ideal;
  BigInt p;             // the rational prime below
  int residue_degree;   // 1 or 2
  int ramification;     // e; 2 exactly when p ramifies

  BigInt norm() const { return ideal.norm(); }
};

// Kummer-style splitting of a rational prime: factor x^2 - t x - n mod p by
// root counting (2 roots: split, 1: ramified, 0: inert). Split factors are
// ordered by their root representative in [0, p).
inline std::vector<PrimeFactor> factor_rational_prime(const FieldDesc& F, const BigInt& p) {
  require(p > 1 && is_prime(p), Errc::domain, p.str() + " is not a prime");
  if (F.rational()) {
    return {PrimeFactor{Ideal::rational(F, p), p, 1, 1}};
  }
  auto degree_one = [&](const BigInt& root) {
    return ideal_from_generators(F, {AlgInt{p, BigInt(0)}, AlgInt{-root, BigInt(1)}});
  };
  std::vector<BigInt> roots;
  if (p == 2) {
    for (BigInt r = 0; r < 2; ++r) {
      if (floor_mod(r * r - F.t * r - F.n, 2) == 0) roots.push_back(r);
    }
  } else {
    require(fits_uint64(p), Errc::domain, "prime too large for splitting");
    std::uint64_t pu = to_uint64(p);
    std::uint64_t disc = to_uint64(floor_mod(F.t * F.t + 4 * F.n, p));
    std::uint64_t tu = to_uint64(floor_mod(F.t, p));
    std::uint64_t inv2 = powmod_u64(2, pu - 2, pu);
    if (disc % pu == 0) {
      roots.push_back(BigInt(mulmod_u64(tu, inv2, pu)));
    } else if (auto s = sqrt_mod_u64(disc, pu)) {
      std::uint64_t r1 = mulmod_u64((tu + *s) % pu, inv2, pu);
      std::uint64_t r2 = mulmod_u64((tu + pu - *s) % pu, inv2, pu);
      roots.push_back(BigInt(std::min(r1, r2)));
      roots.push_back(BigInt(std::max(r1, r2)));
    }
  }
  bool ramified = F.disc % p == 0;
  if (roots.empty()) {
    require(!ramified, Errc::internal, "ramified prime with no double root");
    return {PrimeFactor{ideal_principal(F, AlgInt{p, BigInt(0)}), p, 2, 1}};
  }
  if (roots.size() == 1) {
    require(ramified, Errc::internal, "double root at an unramified prime");
    return {PrimeFactor{degree_one(roots[0]), p, 1, 2}};
  }
  require(!ramified, Errc::internal, "split prime dividing the discriminant");
  return {PrimeFactor{degree_one(roots[0]), p, 1, 1}, PrimeFactor{degree_one(roots[1]), p, 1, 1}};
}

inline Ideal Ideal::parse(const FieldDesc& F, const std::string& raw) {
  std::string s;
  for (char ch : raw) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  std::size_t i = 0;
  auto expect = [&](const std::string& tok) {
    require(s.compare(i, tok.size(), tok) == 0, Errc::parse,
            "bad ideal literal \"" + raw + "\" (expected '" + tok + "')");
    i += tok.size();
  };
  expect("[[");
  BigInt a = detail::parse_int_at(s, i);
  expect(",");
  BigInt b = detail::parse_int_at(s, i);
  if (F.rational()) {
    expect("]]");
    require(i == s.size(), Errc::parse, "trailing characters in \"" + raw + "\"");
    require(b == 0, Errc::parse, "rational ideal literal must be [[g,0]]");
    return Ideal::rational(F, a);
  }
  expect("],[");
  BigInt z = detail::parse_int_at(s, i);
  expect(",");
  BigInt c = detail::parse_int_at(s, i);
  expect("]]");
  require(i == s.size(), Errc::parse, "trailing characters in \"" + raw + "\"");
  require(z == 0, Errc::parse, "lower-left entry must be 0");
  return Ideal::from_hnf(F, a, b, c);
}

}  // namespace intersective
