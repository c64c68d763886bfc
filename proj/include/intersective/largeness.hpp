#pragma once

// Finite-window size notions on integer lattices: boxes, pure set
// predicates (congruences, sublattices, pseudorandom and Bohr sets),
// exact density counts, syndeticity gaps, and finite-sums diagnostics.

#include "intersective/ideal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <optional>
#include <set>

namespace intersective {

using Point = std::vector<std::int64_t>;

// Product of integer intervals [lo_j, hi_j], the finite frames every count
// and scan runs over.
struct Window {
  std::vector<std::int64_t> lo, hi;

  Window(std::vector<std::int64_t> lo_, std::vector<std::int64_t> hi_)
      : lo(std::move(lo_)), hi(std::move(hi_)) {
    require(!lo.empty() && lo.size() == hi.size(), Errc::domain, "window bounds mismatched");
    for (std::size_t j = 0; j < lo.size(); ++j) {
      require(lo[j] <= hi[j], Errc::domain, "empty window interval");
    }
  }

  int dim() const { return static_cast<int>(lo.size()); }

  BigInt cardinality() const {
    BigInt n = 1;
    for (std::size_t j = 0; j < lo.size(); ++j) n *= BigInt(hi[j]) - lo[j] + 1;
    return n;
  }

  std::uint64_t size_within(std::uint64_t cap) const {
    BigInt n = cardinality();
    require(fits_uint64(n) && to_uint64(n) <= cap, Errc::budget_exceeded,
            "window of " + n.str() + " points exceeds the budget of " + std::to_string(cap));
    return to_uint64(n);
  }

  bool contains(const Point& x) const {
    if (x.size() != lo.size()) return false;
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (x[j] < lo[j] || x[j] > hi[j]) return false;
    }
    return true;
  }

  Window inflated(std::int64_t r) const {
    Window w = *this;
    for (std::size_t j = 0; j < lo.size(); ++j) {
      w.lo[j] -= r;
      w.hi[j] += r;
    }
    return w;
  }

  // Row-major enumeration: first coordinate slowest. The flat index is the
  // canonical order every deterministic search below relies on.
  Point at(std::uint64_t flat) const {
    Point x(lo.size());
    for (std::size_t j = lo.size(); j-- > 0;) {
      std::uint64_t len = static_cast<std::uint64_t>(hi[j] - lo[j]) + 1;
      x[j] = lo[j] + static_cast<std::int64_t>(flat % len);
      flat /= len;
    }
    return x;
  }

  std::uint64_t flat_of(const Point& x) const {
    std::uint64_t flat = 0;
    for (std::size_t j = 0; j < lo.size(); ++j) {
      std::uint64_t len = static_cast<std::uint64_t>(hi[j] - lo[j]) + 1;
      flat = flat * len + static_cast<std::uint64_t>(x[j] - lo[j]);
    }
    return flat;
  }
};

// ---------------------------------------------------------------- set specs

// Pure, total membership predicates on lattice points, composed as a tree.
// RANDOM membership is a counter-based hash of (seed, point): reproducible
// under any thread schedule.
class SetSpec {
 public:
  static SetSpec congruence(std::vector<std::int64_t> modulus, std::vector<std::int64_t> residue = {}) {
    require(!modulus.empty(), Errc::domain, "empty modulus vector");
    for (auto m : modulus) require(m >= 1, Errc::domain, "modulus entries must be positive");
    if (residue.empty()) residue.assign(modulus.size(), 0);
    require(residue.size() == modulus.size(), Errc::domain, "residue/modulus length mismatch");
    auto n = node(Kind::congruence, static_cast<int>(modulus.size()));
    n->modulus = std::move(modulus);
    n->residue_vec = std::move(residue);
    return SetSpec(std::move(n));
  }

  // Points (a, b) with a + b*w in the residue class of r mod I; dimension 2
  // for quadratic fields, 1 for the rationals.
  static SetSpec ideal_members(const Ideal& I, const AlgInt& r = AlgInt(0)) {
    auto n = node(Kind::ideal_class, I.field().rational() ? 1 : 2);
    n->ideal = I;
    n->residue_elem = I.reduce(r);
    return SetSpec(std::move(n));
  }

  static SetSpec random_set(double density, std::uint64_t seed) {
    require(density >= 0.0 && density <= 1.0, Errc::domain, "density outside [0,1]");
    auto n = node(Kind::random, 0);
    n->density = density;
    n->seed = seed;
    return SetSpec(std::move(n));
  }

  static SetSpec bohr(std::vector<double> alpha, double radius) {
    require(!alpha.empty(), Errc::domain, "empty frequency vector");
    require(radius >= 0.0 && radius <= 0.5, Errc::domain, "radius outside [0, 1/2]");
    auto n = node(Kind::bohr, static_cast<int>(alpha.size()));
    n->alpha = std::move(alpha);
    n->radius = radius;
    return SetSpec(std::move(n));
  }

  static SetSpec explicit_set(std::vector<Point> pts) {
    int d = 0;
    for (const auto& p : pts) {
      require(!p.empty(), Errc::domain, "zero-dimensional point");
      if (d == 0) d = static_cast<int>(p.size());
      require(static_cast<int>(p.size()) == d, Errc::domain, "mixed point dimensions");
    }
    auto n = node(Kind::explicit_list, d);
    n->points = std::set<Point>(pts.begin(), pts.end());
    return SetSpec(std::move(n));
  }

  static SetSpec complement(SetSpec s) {
    auto n = node(Kind::complement_of, s.dim());
    n->children = {std::move(s)};
    return SetSpec(std::move(n));
  }

  static SetSpec union_of(std::vector<SetSpec> parts) {
    return combine(Kind::union_of, std::move(parts));
  }

  static SetSpec intersection_of(std::vector<SetSpec> parts) {
    return combine(Kind::intersection_of, std::move(parts));
  }

  static SetSpec shifted(SetSpec s, Point offset) {
    require(s.dim() == 0 || s.dim() == static_cast<int>(offset.size()), Errc::domain,
            "shift offset dimension mismatch");
    auto n = node(Kind::shift_of, static_cast<int>(offset.size()));
    n->children = {std::move(s)};
    n->offset = std::move(offset);
    return SetSpec(std::move(n));
  }

  // 0 means dimension-agnostic (pure RANDOM trees).
  int dim() const { return n_->dimension; }

  bool contains(const Point& x) const {
    require(dim() == 0 || static_cast<int>(x.size()) == dim(), Errc::domain,
            "point dimension does not match the set spec");
    return eval(*n_, x);
  }

 private:
  enum class Kind { congruence, ideal_class, random, bohr, explicit_list, complement_of, union_of, intersection_of, shift_of };

  struct Node {
    Kind kind;
    int dimension = 0;
    std::vector<std::int64_t> modulus, residue_vec;
    std::optional<Ideal> ideal;
    AlgInt residue_elem;
    double density = 0.0, radius = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> alpha;
    std::set<Point> points;
    std::vector<SetSpec> children;
    Point offset;
  };

  explicit SetSpec(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static std::shared_ptr<Node> node(Kind k, int dimension) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->dimension = dimension;
    return n;
  }

  static SetSpec combine(Kind k, std::vector<SetSpec> parts) {
    require(!parts.empty(), Errc::domain, "empty combinator");
    int d = 0;
    for (const auto& p : parts) {
      if (p.dim() == 0) continue;
      if (d == 0) d = p.dim();
      require(p.dim() == d, Errc::domain, "combined sets of different dimensions");
    }
    auto n = node(k, d);
    n->children = std::move(parts);
    return SetSpec(std::move(n));
  }

  static bool eval(const Node& n, const Point& x) {
    switch (n.kind) {
      case Kind::congruence:
        for (std::size_t j = 0; j < n.modulus.size(); ++j) {
          if (floor_mod(BigInt(x[j]) - n.residue_vec[j], BigInt(n.modulus[j])) != 0) return false;
        }
        return true;
      case Kind::ideal_class: {
        AlgInt v{BigInt(x[0]), n.dimension == 2 ? BigInt(x[1]) : BigInt(0)};
        return n.ideal->contains(v - n.residue_elem);
      }
      case Kind::random: {
        std::uint64_t h = hash_words({0x6c61747469636573ULL, n.seed});
        for (auto c : x) h = hash_i64(h, c);
        return unit_double(h) < n.density;
      }
      case Kind::bohr: {
        double t = 0.0;
        for (std::size_t j = 0; j < n.alpha.size(); ++j) {
          t += n.alpha[j] * static_cast<double>(x[j]);
        }
        double f = t - std::floor(t);
        return std::min(f, 1.0 - f) < n.radius;
      }
      case Kind::explicit_list:
        return n.points.count(x) != 0;
      case Kind::complement_of:
        return !n.children[0].contains(x);
      case Kind::union_of:
        for (const auto& c : n.children) {
          if (c.contains(x)) return true;
        }
        return false;
      case Kind::intersection_of:
        for (const auto& c : n.children) {
          if (!c.contains(x)) return false;
        }
        return true;
      case Kind::shift_of: {
        Point y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] - n.offset[j];
        return n.children[0].contains(y);
      }
    }
    return false;
  }

  std::shared_ptr<const Node> n_;
};

// -------------------------------------------------------------- finite sums

// { sum over a nonempty subset } with duplicates collapsed, lex sorted.
inline std::vector<Point> finite_sums(const std::vector<Point>& xs) {
  require(xs.size() <= 24, Errc::cap_exceeded, "finite sums capped at 24 generators");
  require(!xs.empty(), Errc::domain, "no generators");
  std::size_t d = xs.front().size();
  for (const auto& x : xs) {
    require(x.size() == d, Errc::domain, "mixed generator dimensions");
  }
  std::set<Point> sums;
  for (const auto& x : xs) {
    std::set<Point> next = sums;
    next.insert(x);
    for (const auto& s : sums) {
      Point t(d);
      for (std::size_t j = 0; j < d; ++j) t[j] = s[j] + x[j];
      next.insert(std::move(t));
    }
    sums = std::move(next);
  }
  return {sums.begin(), sums.end()};
}

// ----------------------------------------------------------------- density

struct CountOptions {
  std::uint64_t budget = 10'000'000;
  int threads = 1;
};

// Exact |S cap W|, partitioned along the first coordinate.
inline std::uint64_t count_members(const SetSpec& S, const Window& W, const CountOptions& opts = {}) {
  W.size_within(opts.budget);
  std::uint64_t strips = static_cast<std::uint64_t>(W.hi[0] - W.lo[0]) + 1;
  std::vector<std::uint64_t> per_strip(strips, 0);
  parallel_for(strips, opts.threads, [&](std::size_t s) {
    std::int64_t c0 = W.lo[0] + static_cast<std::int64_t>(s);
    std::uint64_t n = 1;
    for (int j = 1; j < W.dim(); ++j) n *= static_cast<std::uint64_t>(W.hi[j] - W.lo[j]) + 1;
    Point x(W.dim());
    x[0] = c0;
    std::uint64_t count = 0;
    for (std::uint64_t flat = 0; flat < n; ++flat) {
      std::uint64_t rest = flat;
      for (int j = W.dim(); j-- > 1;) {
        std::uint64_t len = static_cast<std::uint64_t>(W.hi[j] - W.lo[j]) + 1;
        x[j] = W.lo[j] + static_cast<std::int64_t>(rest % len);
        rest /= len;
      }
      if (S.contains(x)) ++count;
    }
    per_strip[s] = count;
  });
  std::uint64_t total = 0;
  for (auto c : per_strip) total += c;
  return total;
}

// Exact |S cap W| / |W| for each window in the sequence.
inline std::vector<BigRat> density_profile(const SetSpec& S, const std::vector<Window>& windows,
                                           const CountOptions& opts = {}) {
  std::vector<BigRat> out;
  out.reserve(windows.size());
  for (const Window& W : windows) {
    out.push_back(BigRat(BigInt(count_members(S, W, opts)), W.cardinality()));
  }
  return out;
}

// ------------------------------------------------------------- syndeticity

struct GapResult {
  std::optional<std::int64_t> gap;  // empty = INFINITE_ON_WINDOW
  std::int64_t inflation_used = 0;  // radius of the frame the answer was settled on
};

// Smallest r such that every window point has a member of S within
// l-infinity distance r (members just outside the window count; any witness
// within distance r of a window point lies in the window inflated by r).
// Settled on an inflated frame grown by doubling; if the frame passes eight
// times the window extent without covering, the window is reported as
// unbounded for S.
inline GapResult syndeticity_gap(const SetSpec& S, const Window& W, const CountOptions& opts = {}) {
  std::int64_t extent = 0;
  for (int j = 0; j < W.dim(); ++j) extent = std::max(extent, W.hi[j] - W.lo[j] + 1);
  std::int64_t r_cap = 8 * extent;

  // chessboard neighborhood: BFS layers grow exactly as l-infinity balls
  std::vector<Point> offsets;
  {
    Window cube(std::vector<std::int64_t>(W.dim(), -1), std::vector<std::int64_t>(W.dim(), 1));
    std::uint64_t n = cube.size_within(1u << 20);
    for (std::uint64_t f = 0; f < n; ++f) {
      Point o = cube.at(f);
      if (std::any_of(o.begin(), o.end(), [](std::int64_t v) { return v != 0; })) {
        offsets.push_back(std::move(o));
      }
    }
  }

  for (std::int64_t R = 1;; R *= 2) {
    Window G = W.inflated(R);
    std::uint64_t n = G.size_within(opts.budget);
    std::vector<std::int32_t> dist(n, -1);
    std::deque<std::uint64_t> queue;
    for (std::uint64_t f = 0; f < n; ++f) {
      if (S.contains(G.at(f))) {
        dist[f] = 0;
        queue.push_back(f);
      }
    }
    while (!queue.empty()) {
      std::uint64_t f = queue.front();
      queue.pop_front();
      Point x = G.at(f);
      for (const Point& o : offsets) {
        Point y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + o[j];
        if (!G.contains(y)) continue;
        std::uint64_t g = G.flat_of(y);
        if (dist[g] < 0) {
          dist[g] = dist[f] + 1;
          queue.push_back(g);
        }
      }
    }
    std::int64_t worst = 0;
    bool unreached = false;
    std::uint64_t wn = W.size_within(opts.budget);
    for (std::uint64_t f = 0; f < wn && !unreached; ++f) {
      std::int32_t dv = dist[G.flat_of(W.at(f))];
      if (dv < 0) {
        unreached = true;
      } else {
        worst = std::max<std::int64_t>(worst, dv);
      }
    }
    if (!unreached && worst <= R) return {worst, R};
    if (R >= r_cap) return {std::nullopt, R};
  }
}

// --------------------------------------------------------- IP falsification

struct IpFalsifyResult {
  std::optional<std::vector<Point>> generators;
  bool complete = false;     // search space fully explored (absence is proven)
  std::uint64_t nodes = 0;
};

// Inductive search for generators of a finite-sums set inside W avoiding S:
// each new generator x must keep x + s outside S and inside W for every s
// already formed (s = 0 included). Finding generators falsifies "S meets
// every finite-sums set" at scale n; absence is only a proof over W.
inline IpFalsifyResult ip_falsify(const SetSpec& S, const Window& W, int n,
                                  std::uint64_t node_budget = 1'000'000) {
  require(n >= 1 && n <= 10, Errc::cap_exceeded, "generator count capped at 10");
  std::uint64_t wn = W.size_within(10'000'000);

  IpFalsifyResult res;
  res.complete = true;
  std::vector<Point> chosen;
  std::vector<Point> sums;  // finite sums of chosen, kept exact

  auto admissible = [&](const Point& x) {
    if (S.contains(x)) return false;
    Point y(x.size());
    for (const Point& s : sums) {
      for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + s[j];
      if (!W.contains(y) || S.contains(y)) return false;
    }
    return true;
  };

  // generators in strictly increasing window order: no permuted revisits
  auto dfs = [&](auto&& self, std::uint64_t from) -> bool {
    if (static_cast<int>(chosen.size()) == n) {
      res.generators = chosen;
      return true;
    }
    for (std::uint64_t f = from; f < wn; ++f) {
      if (res.nodes >= node_budget) {
        res.complete = false;
        return false;
      }
      ++res.nodes;
      Point x = W.at(f);
      if (!admissible(x)) continue;
      std::size_t keep = sums.size();
      chosen.push_back(x);
      sums.push_back(x);
      for (std::size_t i = 0; i < keep; ++i) {
        Point y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + sums[i][j];
        sums.push_back(std::move(y));
      }
      if (self(self, f + 1)) return true;
      chosen.pop_back();
      sums.resize(keep);
    }
    return false;
  };
  dfs(dfs, 0);
  if (res.generators) res.complete = true;
  return res;
}

}  // namespace intersective
