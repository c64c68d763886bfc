#pragma once

// Shared plumbing: arbitrary-precision integers, error taxonomy, u64 prime
// machinery, counter-based hashing, and a static-chunked parallel loop.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace intersective {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------- errors

enum class Errc {
  parse,            // malformed textual input
  domain,           // precondition violated (zero ideal, mixed arities, ...)
  field_mismatch,   // operands built over different field descriptors
  cap_exceeded,     // residue-system or search cap hit
  budget_exceeded,  // cell/evaluation budget hit
  conditions_not_met,  // certificate hypotheses fail; no claim either way
  precision,        // floating parameters cannot support the request
  internal,         // invariant broken; always a bug
};

inline const char* errc_str(Errc c) {
  switch (c) {
    case Errc::parse: return "PARSE";
    case Errc::domain: return "DOMAIN";
    case Errc::field_mismatch: return "FIELD_MISMATCH";
    case Errc::cap_exceeded: return "CAP_EXCEEDED";
    case Errc::budget_exceeded: return "BUDGET_EXCEEDED";
    case Errc::conditions_not_met: return "CONDITIONS_NOT_MET";
    case Errc::precision: return "PRECISION";
    case Errc::internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_str(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

// ---------------------------------------------------------------- integers

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
  BigInt g = boost::multiprecision::gcd(a, b);
  return g < 0 ? BigInt(-g) : g;
}

// Floor semantics; m must be positive.
inline BigInt floor_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline BigInt floor_div(const BigInt& a, const BigInt& m) {
  return (a - floor_mod(a, m)) / m;
}

// g = gcd(a,b) = x*a + y*b, g >= 0.
inline BigInt ext_gcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
  BigInt r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;  // truncated division is fine: the identity is maintained exactly
    BigInt r2 = r0 - q * r1;
    BigInt x2 = x0 - q * x1;
    BigInt y2 = y0 - q * y1;
    r0 = r1; r1 = r2;
    x0 = x1; x1 = x2;
    y0 = y1; y1 = y2;
  }
  if (r0 < 0) { r0 = -r0; x0 = -x0; y0 = -y0; }
  x = x0; y = y0;
  return r0;
}

inline bool fits_int64(const BigInt& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t to_int64(const BigInt& v, const char* what = "value") {
  require(fits_int64(v), Errc::domain, std::string(what) + " out of 64-bit range");
  return static_cast<std::int64_t>(v);
}

inline bool fits_uint64(const BigInt& v) {
  return v >= 0 && v <= std::numeric_limits<std::uint64_t>::max();
}

inline std::uint64_t to_uint64(const BigInt& v, const char* what = "value") {
  require(fits_uint64(v), Errc::domain, std::string(what) + " out of u64 range");
  return static_cast<std::uint64_t>(v);
}

// ---------------------------------------------------------------- u64 primes

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin below 2^64 (standard 12-base set).
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

// Exact for |v| < 2^64; larger inputs use Miller-Rabin with fixed bases
// (deterministic output, negligible error probability).
inline bool is_prime(const BigInt& v) {
  if (v < 2) return false;
  if (fits_uint64(v)) return is_prime_u64(to_uint64(v));
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (v % p == 0) return false;
  }
  BigInt d = v - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a = 2; a < 44; a = a + 1 + (a & 1)) {  // 2,3,5,7,...,43
    BigInt x = boost::multiprecision::powm(BigInt(a), d, v);
    if (x == 1 || x == v - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = (x * x) % v;
      if (x == v - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> comp(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!comp[i]) {
      out.push_back(i);
      for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
    }
  }
  return out;
}

// Legendre symbol for odd prime p.
inline int legendre_u64(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  return powmod_u64(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// Square root mod an odd prime (Tonelli-Shanks); nullopt for non-residues.
inline std::optional<std::uint64_t> sqrt_mod_u64(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (legendre_u64(a, p) != 1) return std::nullopt;
  if (p % 4 == 3) return powmod_u64(a, (p + 1) / 4, p);
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) { q >>= 1; ++s; }
  std::uint64_t z = 2;
  while (legendre_u64(z, p) != -1) ++z;
  std::uint64_t m = s;
  std::uint64_t c = powmod_u64(z, q, p);
  std::uint64_t t = powmod_u64(a, q, p);
  std::uint64_t r = powmod_u64(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) { tt = mulmod_u64(tt, tt, p); ++i; }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod_u64(b, b, p);
    m = i;
    c = mulmod_u64(b, b, p);
    t = mulmod_u64(t, c, p);
    r = mulmod_u64(r, b, p);
  }
  return r;
}

// ---------------------------------------------------------------- hashing

// SplitMix64 finalizer; the basis of every derived stream in the toolkit.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Order-sensitive chained hash; stateless, so identical inputs give identical
// streams on every platform and thread count.
inline std::uint64_t hash_words(std::initializer_list<std::uint64_t> ws) {
  std::uint64_t h = 0x6a09e667f3bcc909ull;
  for (std::uint64_t w : ws) h = mix64(h ^ w);
  return h;
}

inline std::uint64_t hash_extend(std::uint64_t h, std::uint64_t w) { return mix64(h ^ w); }

inline std::uint64_t hash_i64(std::uint64_t h, std::int64_t w) {
  return hash_extend(h, static_cast<std::uint64_t>(w));
}

// Uniform double in [0,1) from the top 53 bits.
inline double unit_double(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1p-53; }

// ---------------------------------------------------------------- threading

// Static chunking; the body must write only to slots indexed by its own i,
// which keeps every run bit-identical regardless of the thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::vector<std::exception_ptr> errs(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += nt) body(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

// Residue-system enumeration cap; INTERSECTIVE_RESIDUE_CAP overrides.
inline std::uint64_t default_residue_cap() {
  static const std::uint64_t cap = [] {
    if (const char* env = std::getenv("INTERSECTIVE_RESIDUE_CAP")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return static_cast<std::uint64_t>(10'000'000);
  }();
  return cap;
}

}  // namespace intersective
