#pragma once

// Deciding and certifying whether polynomial value sets meet every nonzero
// ideal: root enumeration modulo ideals, lifting along prime powers, bounded
// scans with re-verified witnesses, and the two certified quadratic families.

#include "intersective/ideal.hpp"
#include "intersective/poly.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

namespace intersective {

enum class Status { not_intersective, intersective_up_to, certified_intersective };

inline const char* status_str(Status s) {
  switch (s) {
    case Status::not_intersective: return "NOT_INTERSECTIVE";
    case Status::intersective_up_to: return "INTERSECTIVE_UP_TO";
    case Status::certified_intersective: return "CERTIFIED_INTERSECTIVE";
  }
  return "?";
}

inline bool alg_lex_less(const AlgInt& x, const AlgInt& y) {
  return x.a != y.a ? x.a < y.a : x.b < y.b;
}

// All residues r mod I with p(r) in I, by full enumeration of the residue
// system; canonical representatives in lexicographic (a, b) order. This is
// the ground-truth path every reported witness is checked against.
inline std::vector<AlgInt> roots_mod(const OPoly& p, const Ideal& I) {
  require(p.univariate(), Errc::domain, "roots_mod needs a univariate polynomial");
  require(p.field() == I.field(), Errc::field_mismatch, "polynomial and ideal fields differ");
  std::vector<AlgInt> out;
  for (const AlgInt& r : residue_system(I)) {
    if (I.contains(p.evaluate({r}))) out.push_back(r);
  }
  return out;
}

// x^e mod I by square and multiply with canonical reduction at every step.
inline AlgInt pow_mod(const FieldDesc& F, const AlgInt& x, BigInt e, const Ideal& I) {
  require(e >= 0, Errc::domain, "negative exponent");
  AlgInt base = I.reduce(x);
  AlgInt acc = I.reduce(AlgInt(1));
  while (e > 0) {
    if ((e & 1) != 0) acc = I.reduce(nf_mul(F, acc, base));
    e >>= 1;
    if (e > 0) base = I.reduce(nf_mul(F, base, base));
  }
  return acc;
}

// Multiplicative inverse modulo a prime ideal, via x^(N-2) in the residue field.
inline AlgInt inverse_mod_prime(const FieldDesc& F, const AlgInt& x, const Ideal& P) {
  require(!P.contains(x), Errc::domain, "not invertible: element lies in the prime");
  return pow_mod(F, x, P.norm() - 2, P);
}

// Largest k <= limit with x in I^k (x nonzero).
inline int ideal_valuation(const FieldDesc& F, const AlgInt& x, const Ideal& I, int limit = 4096) {
  require(!x.is_zero(), Errc::domain, "valuation of zero");
  Ideal acc = I;
  int v = 0;
  while (v < limit && acc.contains(x)) {
    ++v;
    acc = ideal_mul(acc, I);
  }
  require(v < limit, Errc::internal, "valuation exceeded iteration limit");
  return v;
}

// ------------------------------------------------------------- lift trees

struct LiftNode {
  AlgInt r;       // canonical representative mod P^level
  int parent;     // index into the previous level; -1 at level 1
  bool singular;  // p'(r) in P
};

struct LiftTree {
  PrimeFactor pf;
  std::vector<Ideal> powers;                // powers[k-1] = P^k
  std::vector<std::vector<LiftNode>> levels; // levels[k-1] = roots mod P^k
  int depth() const { return static_cast<int>(levels.size()); }
};

namespace detail {

// Representatives of P^k / P^(k+1): exactly N(P) lattice offsets, obtained
// from the HNF bases of consecutive powers.
inline std::vector<AlgInt> fiber_offsets(const FieldDesc& F, const Ideal& Ik, const Ideal& Ik1,
                                         const BigInt& Np) {
  std::vector<AlgInt> out;
  if (F.rational()) {
    BigInt step = Ik.a();
    BigInt count = Ik1.a() / Ik.a();
    require(count == Np, Errc::internal, "fiber size mismatch");
    require(fits_uint64(count) && to_uint64(count) <= default_residue_cap(), Errc::cap_exceeded,
            "singular lift fiber exceeds residue cap");
    for (BigInt s = 0; s < count; ++s) out.push_back(AlgInt{s * step, BigInt(0)});
    return out;
  }
  BigInt sn = Ik1.a() / Ik.a();
  BigInt tn = Ik1.c() / Ik.c();
  require(sn * tn == Np, Errc::internal, "fiber size mismatch");
  require(fits_uint64(Np) && to_uint64(Np) <= default_residue_cap(), Errc::cap_exceeded,
          "singular lift fiber exceeds residue cap");
  for (BigInt s = 0; s < sn; ++s) {
    for (BigInt t = 0; t < tn; ++t) {
      out.push_back(AlgInt{s * Ik.a() + t * Ik.b(), t * Ik.c()});
    }
  }
  return out;
}

// Incremental lifting machinery shared by lift_roots and the scans.
class LevelLifter {
 public:
  LevelLifter(const OPoly& p, PrimeFactor pf)
      : p_(p), dp_(formal_derivative(p)), pf_(std::move(pf)), F_(p.field()) {
    powers_.push_back(pf_.ideal);
    auto first = roots_mod(p_, pf_.ideal);
    std::vector<LiftNode> nodes;
    nodes.reserve(first.size());
    for (const auto& r : first) nodes.push_back({r, -1, pf_.ideal.contains(dp_.evaluate({r}))});
    levels_.push_back(std::move(nodes));
  }

  int depth() const { return static_cast<int>(levels_.size()); }
  const std::vector<std::vector<LiftNode>>& levels() const { return levels_; }
  const std::vector<Ideal>& powers() const { return powers_; }
  bool current_empty() const { return levels_.back().empty(); }
  bool current_has_nonsingular() const {
    for (const auto& n : levels_.back()) {
      if (!n.singular) return true;
    }
    return false;
  }

  // Compute level depth()+1 from the current one.
  void extend() {
    int k = depth();
    const Ideal& Ik = powers_.back();
    Ideal Ik1 = ideal_mul(Ik, pf_.ideal);
    std::vector<LiftNode> next;
    std::optional<std::vector<AlgInt>> offsets;  // built lazily, singular nodes only
    const auto& cur = levels_.back();
    for (int idx = 0; idx < static_cast<int>(cur.size()); ++idx) {
      const LiftNode& node = cur[idx];
      if (!node.singular) {
        next.push_back({newton_child(node.r, Ik1), idx, false});
        continue;
      }
      if (!offsets) offsets = fiber_offsets(F_, Ik, Ik1, pf_.norm());
      for (const AlgInt& z : *offsets) {
        AlgInt cand = Ik1.reduce(node.r + z);
        if (Ik1.contains(p_.evaluate({cand}))) {
          next.push_back({cand, idx, pf_.ideal.contains(dp_.evaluate({cand}))});
        }
      }
    }
    require(next.size() <= default_residue_cap(), Errc::cap_exceeded,
            "lift tree level " + std::to_string(k + 1) + " too wide");
    std::stable_sort(next.begin(), next.end(),
                     [](const LiftNode& x, const LiftNode& y) { return alg_lex_less(x.r, y.r); });
    powers_.push_back(std::move(Ik1));
    levels_.push_back(std::move(next));
  }

  LiftTree take(PrimeFactor pf) && {
    return LiftTree{std::move(pf), std::move(powers_), std::move(levels_)};
  }

 private:
  // Unique child of a nonsingular root: r - p(r)·u with u the inverse of
  // p'(r) refined quadratically to the target modulus.
  AlgInt newton_child(const AlgInt& r, const Ideal& mod) const {
    AlgInt z = dp_.evaluate({r});
    AlgInt u = inverse_mod_prime(F_, z, pf_.ideal);
    int prec = 1;
    int target = depth() + 1;
    while (prec < target) {
      // u <- u(2 - z·u), doubling the correct P-adic digits
      u = mod.reduce(nf_mul(F_, u, AlgInt(2) - nf_mul(F_, z, u)));
      prec *= 2;
    }
    AlgInt child = mod.reduce(r - nf_mul(F_, p_.evaluate({r}), u));
    require(mod.contains(p_.evaluate({child})), Errc::internal, "Newton step failed to lift");
    return child;
  }

  OPoly p_, dp_;
  PrimeFactor pf_;
  FieldDesc F_;
  std::vector<Ideal> powers_;
  std::vector<std::vector<LiftNode>> levels_;
};

}  // namespace detail

// Complete root sets mod P^k for k = 1..K with parent links; nonsingular
// roots advance by the Newton step, singular ones by trying the N(P)
// candidates over each parent.
inline LiftTree lift_roots(const OPoly& p, const PrimeFactor& pf, int K) {
  require(K >= 1, Errc::domain, "lift depth must be at least 1");
  detail::LevelLifter lifter(p, pf);
  while (lifter.depth() < K && !lifter.current_empty()) lifter.extend();
  return std::move(lifter).take(pf);
}

// ------------------------------------------------------- exact root search

struct RootSearchInfo {
  std::optional<AlgInt> root;  // first hit in the canonical candidate order
  BigInt box_x, box_y;         // coordinate box actually searched
  std::uint64_t tested = 0;
};

namespace detail {

// Integer upper bound for both archimedean absolute values of x.
inline BigInt embedding_abs_bound(const FieldDesc& F, const AlgInt& x) {
  BigInt v = abs(x.a);
  if (!F.rational()) {
    BigInt ad = abs(F.d);
    v += abs(x.b) * (sqrt(ad) + 1);
  }
  return v;
}

// A coordinate box certainly containing every r with |σ(r)| <= R in all
// embeddings.
inline std::pair<BigInt, BigInt> embedding_box(const FieldDesc& F, const BigInt& R) {
  if (F.rational()) return {R, BigInt(0)};
  BigInt ad = abs(F.d);
  BigInt s = sqrt(ad);
  if (s < 1) s = 1;
  BigInt ybox = 2 * R / s + 2;
  return {R + ybox + 2, ybox};
}

// Visit candidates ordered by (max(|x|,|y|), |x|, |y|, b > 0 first, a > 0
// first); stop when fn returns true.
template <typename Fn>
void visit_box(const BigInt& xbox, const BigInt& ybox, Fn&& fn) {
  auto emit_signs = [&](const BigInt& ax, const BigInt& ay) {
    // (+,+), (-,+), (+,-), (-,-) with zero coordinates deduplicated
    if (fn(AlgInt{ax, ay})) return true;
    if (ax > 0 && fn(AlgInt{-ax, ay})) return true;
    if (ay > 0) {
      if (fn(AlgInt{ax, -ay})) return true;
      if (ax > 0 && fn(AlgInt{-ax, -ay})) return true;
    }
    return false;
  };
  BigInt M = std::max(xbox, ybox);
  for (BigInt m = 0; m <= M; ++m) {
    if (m <= ybox) {
      BigInt ax_hi = std::min<BigInt>(m - 1, xbox);
      for (BigInt ax = 0; ax <= ax_hi; ++ax) {
        if (emit_signs(ax, m)) return;
      }
    }
    if (m <= xbox) {
      BigInt ay_hi = std::min<BigInt>(m, ybox);
      for (BigInt ay = 0; ay <= ay_hi; ++ay) {
        if (emit_signs(m, ay)) return;
      }
    }
  }
}

inline RootSearchInfo root_search_in_box(const OPoly& p, const BigInt& xbox, const BigInt& ybox) {
  BigInt volume = (2 * xbox + 1) * (2 * ybox + 1);
  require(volume <= 100'000'000, Errc::cap_exceeded,
          "exact-root search box of " + volume.str() + " candidates is too large");
  const FieldDesc& F = p.field();
  // When the leading coefficient is a unit, any root divides the constant
  // term, so N(r) | N(a0) filters candidates before the full evaluation.
  auto coeffs = p.dense1();
  BigInt n0 = 0;
  bool filter = coeffs.size() >= 2 && abs(nf_norm(F, coeffs.back())) == 1;
  if (filter) {
    n0 = abs(nf_norm(F, coeffs.front()));
    filter = n0 != 0;
  }
  RootSearchInfo info;
  info.box_x = xbox;
  info.box_y = ybox;
  visit_box(xbox, ybox, [&](const AlgInt& r) {
    ++info.tested;
    if (filter) {
      BigInt nr = abs(nf_norm(F, r));
      if (nr == 0 || n0 % nr != 0) return false;
    }
    if (p.evaluate({r}).is_zero()) {
      info.root = r;
      return true;
    }
    return false;
  });
  return info;
}

}  // namespace detail

// Complete search for roots of p in O_L inside the coefficient-derived
// bound: every root satisfies |σ(r)| <= 1 + max|σ(a_i)| / |σ(a_n)| in each
// embedding, and 1/|σ(a_n)| <= |σ̄(a_n)| since the norm is a nonzero integer.
inline RootSearchInfo exact_root_search(const OPoly& p) {
  require(p.univariate() && p.deg1() >= 1, Errc::domain, "root search needs degree >= 1");
  const FieldDesc& F = p.field();
  auto coeffs = p.dense1();
  BigInt top = detail::embedding_abs_bound(F, nf_conj(F, coeffs.back()));
  BigInt worst = 0;
  for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) {
    worst = std::max(worst, detail::embedding_abs_bound(F, coeffs[i]));
  }
  BigInt R = 1 + worst * top;
  auto [xbox, ybox] = detail::embedding_box(F, R);
  return detail::root_search_in_box(p, xbox, ybox);
}

// ---------------------------------------------------------------- verdicts

enum class StopReason { nonsingular_root, depth_exhausted, empty_level };

inline const char* stop_str(StopReason s) {
  switch (s) {
    case StopReason::nonsingular_root: return "nonsingular_root";
    case StopReason::depth_exhausted: return "depth_exhausted";
    case StopReason::empty_level: return "empty_level";
  }
  return "?";
}

struct PrimeScanRecord {
  PrimeFactor pf;
  int disc_valuation = 0;
  int depth_target = 1;                    // K from the depth rule
  std::vector<std::uint64_t> level_counts; // roots mod P^k, k = 1.. (as far as visited)
  StopReason stop = StopReason::depth_exhausted;
  int empty_level = 0;                     // set when stop == empty_level
};

struct ThreeQuadCert {
  AlgInt alpha, beta, alphabeta;
  bool alpha_square_mod_beta = false, beta_square_mod_alpha = false;
  std::string which_square;  // "alpha" | "beta" | "alpha*beta" (mod the ramified 5th power)
  AlgInt square_root;        // a residue whose square matches it
};

struct Verdict {
  Status status = Status::intersective_up_to;
  std::optional<Ideal> witness;
  std::optional<int> witness_level;      // witness = P^level
  std::optional<BigInt> bound;
  int depth_used = 0;                    // max lift depth reached across primes
  std::optional<AlgInt> exact_root;
  bool radical_reduced = false;
  std::vector<PrimeScanRecord> scan;
  std::string warning;
  std::optional<ThreeQuadCert> three_quad;
};

struct ScanOptions {
  BigInt bound = 1000;
  int depth_min = 1;
  int threads = 1;
  bool search_exact_root = true;
};

namespace detail {

// One prime ideal's share of a scan: depth rule, shortcutting on the first
// nonsingular root, stopping at the first empty level.
inline PrimeScanRecord scan_prime(const OPoly& scan_poly, const AlgInt& disc,
                                  const PrimeFactor& pf, int depth_min) {
  PrimeScanRecord rec;
  rec.pf = pf;
  rec.disc_valuation = ideal_valuation(scan_poly.field(), disc, pf.ideal);
  int K = std::max(2 * rec.disc_valuation + 1, pf.ramification >= 2 ? 5 : 1);
  K = std::max(K, depth_min);
  rec.depth_target = K;
  LevelLifter lifter(scan_poly, pf);
  for (;;) {
    rec.level_counts.push_back(lifter.levels().back().size());
    if (lifter.current_empty()) {
      rec.stop = StopReason::empty_level;
      rec.empty_level = lifter.depth();
      return rec;
    }
    if (lifter.current_has_nonsingular()) {
      rec.stop = StopReason::nonsingular_root;
      return rec;
    }
    if (lifter.depth() >= K) {
      rec.stop = StopReason::depth_exhausted;
      return rec;
    }
    lifter.extend();
  }
}

// All prime ideals with q <= bound and N(P) <= bound, in (q, factor) order.
inline std::vector<PrimeFactor> prime_targets(const FieldDesc& F, const BigInt& bound) {
  require(bound <= 100'000'000, Errc::cap_exceeded, "norm bound too large");
  std::vector<PrimeFactor> targets;
  if (bound < 2) return targets;
  for (std::uint64_t q : sieve_primes(to_uint64(bound))) {
    for (auto& pf : factor_rational_prime(F, BigInt(q))) {
      if (pf.norm() <= bound) targets.push_back(std::move(pf));
    }
  }
  return targets;
}

}  // namespace detail

// Semi-decision: scan every prime ideal with q, N(P) <= bound; lift each to
// the stabilization depth max(2v+1, 5 if ramified, depth_min) with v the
// P-valuation of the discriminant of the squarefree part; an empty level
// yields a witness, re-verified on the original polynomial by enumeration.
inline Verdict is_intersective_up_to(const OPoly& p, const ScanOptions& opts = {}) {
  require(p.univariate(), Errc::domain, "intersectivity scan needs a univariate polynomial");
  require(!p.is_zero() && p.deg1() >= 1, Errc::domain, "polynomial must be nonzero and non-constant");
  const FieldDesc& F = p.field();

  Verdict v;
  v.bound = opts.bound;
  if (opts.search_exact_root) {
    v.exact_root = exact_root_search(p).root;
  }

  GcdResult gr = poly_gcd_over_L({p, formal_derivative(p)});
  OPoly scan_poly = p;
  if (!gr.g.is_constant()) {
    scan_poly = radical_part(p);
    v.radical_reduced = true;
  }
  AlgInt disc = scan_poly.deg1() >= 1 ? discriminant(scan_poly) : AlgInt(1);
  require(!disc.is_zero(), Errc::internal, "squarefree part has zero discriminant");

  std::vector<PrimeFactor> targets = detail::prime_targets(F, opts.bound);
  v.scan.resize(targets.size());
  parallel_for(targets.size(), opts.threads, [&](std::size_t i) {
    v.scan[i] = detail::scan_prime(scan_poly, disc, targets[i], opts.depth_min);
  });

  for (const auto& rec : v.scan) {
    v.depth_used = std::max(v.depth_used, static_cast<int>(rec.level_counts.size()));
  }

  // Witness choice is level-first: the shallowest empty level wins, ties by
  // prime norm, then by the deterministic target order.
  std::vector<std::size_t> failures;
  for (std::size_t i = 0; i < v.scan.size(); ++i) {
    if (v.scan[i].stop == StopReason::empty_level) failures.push_back(i);
  }
  std::stable_sort(failures.begin(), failures.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = v.scan[x];
    const auto& b = v.scan[y];
    if (a.empty_level != b.empty_level) return a.empty_level < b.empty_level;
    return a.pf.norm() < b.pf.norm();
  });

  for (std::size_t idx : failures) {
    const auto& rec = v.scan[idx];
    // Independent confirmation on the original polynomial: find the smallest
    // power with no root at all by full enumeration.
    Ideal power = rec.pf.ideal;
    for (int j = 1; j <= rec.empty_level; ++j) {
      if (roots_mod(p, power).empty()) {
        v.status = Status::not_intersective;
        v.witness = power;
        v.witness_level = j;
        return v;
      }
      if (j < rec.empty_level) power = ideal_mul(power, rec.pf.ideal);
    }
    v.warning = "scan of the squarefree part flagged " + rec.pf.ideal.str() +
                " but the original polynomial has roots at every checked level";
  }

  v.status = Status::intersective_up_to;
  return v;
}

// ------------------------------------------------- certified family: x^2+c

struct QuadConstOptions {
  BigInt witness_scan_bound = 10'000;
  int threads = 1;
};

// x^2 + c: either an exact square root of -c exists in O_L (complete search
// inside the embedding bound |σ(r)|^2 = |σ(c)|) and the polynomial is
// certified, or a prime with no root is hunted by the Euler criterion away
// from divisors of 2c and confirmed by enumeration.
inline Verdict certify_quadratic_plus_constant(const FieldDesc& F, const AlgInt& c,
                                               const QuadConstOptions& opts = {}) {
  require_element_of(F, c);
  Verdict v;
  OPoly p = OPoly::variable(F, 1, 0, 2) + OPoly::constant(F, 1, AlgInt(c));

  BigInt R = sqrt(detail::embedding_abs_bound(F, c)) + 1;
  auto [xbox, ybox] = detail::embedding_box(F, R);
  RootSearchInfo rs = detail::root_search_in_box(p, xbox, ybox);
  if (rs.root) {
    v.status = Status::certified_intersective;
    v.exact_root = rs.root;
    return v;
  }

  v.bound = opts.witness_scan_bound;
  AlgInt twoc = AlgInt{2 * c.a, 2 * c.b};
  for (const PrimeFactor& pf : detail::prime_targets(F, opts.witness_scan_bound)) {
    if (pf.ideal.contains(twoc)) continue;  // Euler criterion invalid there
    AlgInt m = AlgInt{-c.a, -c.b};
    AlgInt e = pow_mod(F, m, (pf.norm() - 1) / 2, pf.ideal);
    if (e == pf.ideal.reduce(AlgInt(1))) continue;  // -c is a square mod P
    // Confirm by the enumeration path before reporting.
    require(roots_mod(p, pf.ideal).empty(), Errc::internal,
            "Euler criterion and enumeration disagree at " + pf.ideal.str());
    v.status = Status::not_intersective;
    v.witness = pf.ideal;
    v.witness_level = 1;
    return v;
  }

  v.status = Status::intersective_up_to;
  v.warning = "no exact root, but no witness prime within the scan bound either";
  return v;
}

// ---------------------------------- certified family: three quadratics, Z[i]

namespace detail {

inline bool is_gaussian_prime(const FieldDesc& F, const AlgInt& z) {
  BigInt n = nf_norm(F, z);
  if (n < 0) n = -n;
  if (n <= 1) return false;
  if (is_prime(n)) return true;  // norm 2 or an odd split prime (or ramified)
  // inert rational primes: associates of q with q = 3 mod 4
  BigInt q;
  if (z.b == 0) {
    q = abs(z.a);
  } else if (z.a == 0) {
    q = abs(z.b);
  } else {
    return false;
  }
  return n == q * q && is_prime(q) && floor_mod(q, 4) == 3;
}

// The associate in the half-open quadrant a > 0, -a < b <= a.
inline AlgInt gaussian_canonical_associate(const FieldDesc& F, const AlgInt& z) {
  AlgInt cur = z;
  for (int turn = 0; turn < 4; ++turn) {
    if (cur.a > 0 && -cur.a < cur.b && cur.b <= cur.a) return cur;
    cur = AlgInt{-cur.b, cur.a};  // multiply by the unit of square -1
  }
  fail(Errc::domain, "no canonical associate (zero input?)");
}

}  // namespace detail

// (x^2 - alpha)(x^2 - beta)(x^2 - alpha*beta) as one sextic over Q(i).
inline OPoly three_quadratics_poly(const FieldDesc& F, const AlgInt& alpha, const AlgInt& beta) {
  OPoly x2 = OPoly::variable(F, 1, 0, 2);
  OPoly f1 = x2 - OPoly::constant(F, 1, alpha);
  OPoly f2 = x2 - OPoly::constant(F, 1, beta);
  OPoly f3 = x2 - OPoly::constant(F, 1, nf_mul(F, alpha, beta));
  return f1 * f2 * f3;
}

// Certifies (x^2-a)(x^2-b)(x^2-ab) over Q(i) for Gaussian primes a, b not
// associate to 1+i and not associate to each other: (a) mutual quadratic
// residuacity through the residue-field power map, (b) one of a, b, ab a
// square modulo the fifth power of the ramified prime, checked by brute
// force over its 32 residues. Failing hypotheses raise an error: the family
// then carries no claim either way.
inline Verdict certify_three_quadratics(const AlgInt& alpha, const AlgInt& beta) {
  FieldDesc F = FieldDesc::quadratic(-1);
  require(detail::is_gaussian_prime(F, alpha) && detail::is_gaussian_prime(F, beta), Errc::domain,
          "inputs must be Gaussian primes");
  BigInt na = abs(nf_norm(F, alpha)), nb = abs(nf_norm(F, beta));
  require(na != 2 && nb != 2, Errc::domain, "inputs must not be associate to the ramified prime");
  require(!(detail::gaussian_canonical_associate(F, alpha) ==
            detail::gaussian_canonical_associate(F, beta)),
          Errc::domain, "inputs must not be associates of each other");

  ThreeQuadCert cert;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.alphabeta = nf_mul(F, alpha, beta);

  Ideal Pa = ideal_principal(F, alpha);
  Ideal Pb = ideal_principal(F, beta);
  AlgInt one_a = Pa.reduce(AlgInt(1)), one_b = Pb.reduce(AlgInt(1));
  cert.alpha_square_mod_beta = pow_mod(F, alpha, (nb - 1) / 2, Pb) == one_b;
  cert.beta_square_mod_alpha = pow_mod(F, beta, (na - 1) / 2, Pa) == one_a;

  AlgInt ram{BigInt(1), BigInt(1)};  // 1 + w
  Ideal R5 = ideal_pow(ideal_principal(F, ram), 5);
  auto square_source = [&](const AlgInt& target) -> std::optional<AlgInt> {
    AlgInt t = R5.reduce(target);
    for (const AlgInt& r : residue_system(R5)) {
      if (R5.reduce(nf_mul(F, r, r)) == t) return r;
    }
    return std::nullopt;
  };
  std::optional<AlgInt> sq;
  if ((sq = square_source(alpha))) {
    cert.which_square = "alpha";
  } else if ((sq = square_source(beta))) {
    cert.which_square = "beta";
  } else if ((sq = square_source(cert.alphabeta))) {
    cert.which_square = "alpha*beta";
  }

  bool cond_a = cert.alpha_square_mod_beta && cert.beta_square_mod_alpha;
  if (!cond_a || !sq) {
    std::string why = !cond_a ? "mutual residuacity fails" : "no square among alpha, beta, alpha*beta at the ramified fifth power";
    fail(Errc::conditions_not_met, why);
  }
  cert.square_root = *sq;

  Verdict v;
  v.status = Status::certified_intersective;
  v.three_quad = std::move(cert);
  return v;
}

struct ThreeQuadPair {
  AlgInt alpha, beta;
  std::optional<Verdict> certified;  // set when both conditions hold
  std::string reject_reason;         // set otherwise
};

// Deterministic sweep over unordered pairs of canonical Gaussian primes of
// norm <= norm_bound (the ramified prime excluded), in (norm, a, b) order.
// Returns every examined pair; the first certified one drives the demos.
inline std::vector<ThreeQuadPair> three_quadratics_search(const BigInt& norm_bound,
                                                          bool stop_at_first = false) {
  FieldDesc F = FieldDesc::quadratic(-1);
  std::vector<AlgInt> primes;
  BigInt amax = sqrt(norm_bound) + 1;
  for (BigInt a = 1; a <= amax; ++a) {
    for (BigInt b = -a + 1; b <= a; ++b) {
      AlgInt z{a, b};
      if (a * a + b * b > norm_bound) continue;
      if (!detail::is_gaussian_prime(F, z)) continue;
      if (abs(nf_norm(F, z)) == 2) continue;
      primes.push_back(z);
    }
  }
  std::sort(primes.begin(), primes.end(), [&](const AlgInt& x, const AlgInt& y) {
    BigInt nx = abs(nf_norm(F, x)), ny = abs(nf_norm(F, y));
    if (nx != ny) return nx < ny;
    return alg_lex_less(x, y);
  });

  // Pair order: (N(alpha), N(beta), alpha, beta) with alpha the smaller end.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) pairs.emplace_back(i, j);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
    auto key = [&](const std::pair<std::size_t, std::size_t>& q) {
      return std::make_tuple(BigInt(abs(nf_norm(F, primes[q.first]))),
                             BigInt(abs(nf_norm(F, primes[q.second]))), q.first, q.second);
    };
    return key(x) < key(y);
  });

  std::vector<ThreeQuadPair> out;
  for (const auto& [i, j] : pairs) {
    ThreeQuadPair pair{primes[i], primes[j], std::nullopt, ""};
    try {
      pair.certified = certify_three_quadratics(primes[i], primes[j]);
    } catch (const Error& e) {
      require(e.code() == Errc::conditions_not_met, Errc::internal, e.what());
      pair.reject_reason = e.what();
    }
    bool hit = pair.certified.has_value();
    out.push_back(std::move(pair));
    if (hit && stop_at_first) return out;
  }
  return out;
}

// ------------------------------------------------------ joint intersectivity

struct JointOptions {
  BigInt bound = 100;
  int depth_min = 1;
  int threads = 1;
  std::uint64_t cell_budget = 1'000'000;  // cap on N(P^k)^d per ideal
};

struct JointPrimeRecord {
  PrimeFactor pf;
  int depth_reached = 0;
  int empty_level = 0;  // first level with no common point; 0 = none found
};

struct JointVerdict {
  Status status = Status::intersective_up_to;
  std::optional<Ideal> witness;
  std::optional<int> witness_level;
  BigInt bound;
  std::vector<JointPrimeRecord> scan;
};

namespace detail {

// Is there a single point of (O/P^k)^d sending every polynomial into P^k?
inline bool joint_common_point(const std::vector<OPoly>& ps, const Ideal& power, int d,
                               std::uint64_t budget) {
  BigInt cells = 1;
  BigInt n = power.norm();
  for (int j = 0; j < d; ++j) cells *= n;
  require(fits_uint64(cells) && to_uint64(cells) <= budget, Errc::cap_exceeded,
          "joint search space of " + cells.str() + " cells exceeds the budget");
  std::vector<AlgInt> reps = residue_system(power);
  std::vector<std::size_t> idx(d, 0);
  std::vector<AlgInt> point(d, AlgInt(0));
  for (;;) {
    for (int j = 0; j < d; ++j) point[j] = reps[idx[j]];
    bool ok = true;
    for (const auto& p : ps) {
      if (!power.contains(p.evaluate(point))) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    int j = d - 1;
    while (j >= 0 && ++idx[j] == reps.size()) idx[j--] = 0;
    if (j < 0) return false;
  }
}

}  // namespace detail

// Direct search for a common point modulo each prime power within the bound;
// depth per prime adapts to the cell budget (the family has no discriminant
// to read a stabilization depth from).
inline JointVerdict jointly_intersective_up_to(const std::vector<OPoly>& ps,
                                               const JointOptions& opts = {}) {
  require(!ps.empty(), Errc::domain, "empty polynomial family");
  const FieldDesc& F = ps.front().field();
  int d = ps.front().arity();
  for (const auto& p : ps) {
    require(p.field() == F, Errc::field_mismatch, "family members over different fields");
    require(p.arity() == d, Errc::domain, "family members of different arities");
    require(!p.is_zero(), Errc::domain, "zero polynomial in the family");
  }

  JointVerdict v;
  v.bound = opts.bound;
  std::vector<PrimeFactor> targets = detail::prime_targets(F, opts.bound);
  v.scan.resize(targets.size());
  parallel_for(targets.size(), opts.threads, [&](std::size_t i) {
    const PrimeFactor& pf = targets[i];
    JointPrimeRecord rec;
    rec.pf = pf;
    // deepest level whose full product search still fits the budget
    int K = 0;
    BigInt cells = 1;
    for (;;) {
      BigInt next = cells;
      for (int j = 0; j < d; ++j) next *= pf.norm();
      if (!fits_uint64(next) || to_uint64(next) > opts.cell_budget) break;
      cells = next;
      ++K;
    }
    K = std::max(K, 1);
    if (opts.depth_min > K) K = opts.depth_min;  // may exceed the budget: loud error
    Ideal power = pf.ideal;
    for (int k = 1; k <= K; ++k) {
      if (!detail::joint_common_point(ps, power, d, opts.cell_budget)) {
        rec.empty_level = k;
        rec.depth_reached = k;
        break;
      }
      rec.depth_reached = k;
      if (k < K) power = ideal_mul(power, pf.ideal);
    }
    v.scan[i] = std::move(rec);
  });

  // Witness choice follows the scan order itself: the first prime (by
  // rational prime, then factor order) that runs out of common points.
  for (const auto& rec : v.scan) {
    if (rec.empty_level == 0) continue;
    v.status = Status::not_intersective;
    v.witness = ideal_pow(rec.pf.ideal, static_cast<unsigned>(rec.empty_level));
    v.witness_level = rec.empty_level;
    break;
  }
  return v;
}

// --------------------------------------------------- gcd reduction crosscheck

struct GcdReductionReport {
  GcdResult gcd;
  bool unit_gcd = false;
  std::optional<Verdict> gcd_verdict;  // absent when the gcd is a unit
  JointVerdict joint_verdict;
  bool consistent = true;
  std::string caveat;
};

// The reduction law under test: a jointly intersective family has an
// intersective gcd. The artifact asserts the contrapositive on every run,
// minding that sum f_i p_i = delta*g only transfers roots away from primes
// dividing delta.
inline GcdReductionReport gcd_reduction_check(const std::vector<OPoly>& ps,
                                              const ScanOptions& opts = {}) {
  for (const auto& p : ps) {
    require(p.univariate(), Errc::domain, "gcd reduction needs univariate polynomials");
  }
  GcdReductionReport rep{poly_gcd_over_L(ps)};
  const FieldDesc& F = ps.front().field();

  JointOptions jopts;
  jopts.bound = opts.bound;
  jopts.threads = opts.threads;
  rep.joint_verdict = jointly_intersective_up_to(ps, jopts);

  if (rep.gcd.g.is_constant()) {
    rep.unit_gcd = true;
    rep.caveat = "unit gcd: common roots can only survive at primes dividing delta = " +
                 to_string(F, rep.gcd.delta);
    rep.consistent = rep.joint_verdict.status == Status::not_intersective;
    return rep;
  }

  rep.gcd_verdict = is_intersective_up_to(rep.gcd.g, opts);
  if (rep.gcd_verdict->status == Status::not_intersective) {
    // The law predicts the family fails jointly too, once the scan depth
    // absorbs the delta valuation at the witness prime.
    const Ideal& W = *rep.gcd_verdict->witness;
    int k = *rep.gcd_verdict->witness_level;
    // Recover the underlying prime from the scan records.
    const PrimeFactor* at = nullptr;
    for (const auto& rec : rep.gcd_verdict->scan) {
      if (ideal_contains_ideal(rec.pf.ideal, W)) {
        at = &rec.pf;
        break;
      }
    }
    require(at != nullptr, Errc::internal, "witness prime missing from scan records");
    int vd = ideal_valuation(F, rep.gcd.delta, at->ideal);
    int d = ps.front().arity();
    Ideal power = ideal_pow(at->ideal, static_cast<unsigned>(k + vd));
    bool joint_has_point = detail::joint_common_point(ps, power, d, 10'000'000);
    rep.consistent = !joint_has_point;
    if (vd > 0) {
      rep.caveat = "delta has valuation " + std::to_string(vd) + " at the witness prime; " +
                   "checked the family at level " + std::to_string(k + vd);
    }
  }
  return rep;
}

}  // namespace intersective
