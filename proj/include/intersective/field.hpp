#pragma once

// Quadratic number fields Q(sqrt d) and the degenerate rational case.
//
// Elements are written on the integral basis {1, w}:
//   d = 2,3 mod 4 : w = sqrt(d),       w^2 = d,            disc = 4d
//   d = 1   mod 4 : w = (1+sqrt(d))/2, w^2 = w + (d-1)/4,  disc = d
// The rational field uses the basis {1} and every element has b = 0.

#include "intersective/util.hpp"

#include <cctype>
#include <string>

namespace intersective {

enum class OmegaKind { rational, sqrt_d, half_plus_sqrt_d };

struct FieldDesc {
  BigInt d;        // 0 for Q, else squarefree and != 1
  OmegaKind kind = OmegaKind::rational;
  BigInt t, n;     // minimal polynomial w^2 = t*w + n
  BigInt disc;     // field discriminant (1 for Q)

  bool rational() const { return kind == OmegaKind::rational; }
  bool operator==(const FieldDesc&) const = default;

  static FieldDesc rationals() {
    FieldDesc f;
    f.d = 0;
    f.kind = OmegaKind::rational;
    f.t = 0;
    f.n = 0;
    f.disc = 1;
    return f;
  }

  static FieldDesc quadratic(const BigInt& d) {
    require(d != 0 && d != 1, Errc::domain, "d must be a squarefree integer other than 0 and 1");
    require(abs(d) <= BigInt(1'000'000'000), Errc::domain,
            "|d| beyond 10^9 is not supported (squarefree check)");
    check_squarefree(d);
    FieldDesc f;
    f.d = d;
    if (floor_mod(d, 4) == 1) {
      f.kind = OmegaKind::half_plus_sqrt_d;
      f.t = 1;
      f.n = (d - 1) / 4;
      f.disc = d;
    } else {
      f.kind = OmegaKind::sqrt_d;
      f.t = 0;
      f.n = d;
      f.disc = 4 * d;
    }
    return f;
  }

  // "Q" or "Q(sqrt d)".
  std::string str() const {
    if (rational()) return "Q";
    return "Q(sqrt " + d.str() + ")";
  }

  static FieldDesc parse(const std::string& s) {
    std::string trimmed;
    for (char c : s) {
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    }
    if (trimmed == "Q") return rationals();
    const std::string pre = "Q(sqrt";
    require(trimmed.size() > pre.size() + 1 && trimmed.compare(0, pre.size(), pre) == 0 &&
                trimmed.back() == ')',
            Errc::parse, "field must be \"Q\" or \"Q(sqrt d)\": got \"" + s + "\"");
    std::string num = trimmed.substr(pre.size(), trimmed.size() - pre.size() - 1);
    require(!num.empty(), Errc::parse, "missing d in \"" + s + "\"");
    std::size_t i = (num[0] == '-' || num[0] == '+') ? 1 : 0;
    require(i < num.size(), Errc::parse, "missing digits in \"" + s + "\"");
    for (; i < num.size(); ++i) {
      require(std::isdigit(static_cast<unsigned char>(num[i])), Errc::parse,
              "bad d in \"" + s + "\"");
    }
    return quadratic(BigInt(num));
  }

 private:
  static void check_squarefree(const BigInt& d) {
    BigInt m = abs(d);
    for (BigInt p = 2; p * p <= m; ++p) {
      if (m % p == 0) {
        m /= p;
        require(m % p != 0, Errc::domain, "d = " + d.str() + " is not squarefree");
      }
    }
  }
};

// a + b*w on the integral basis. Addition is basis-wise; multiplication and
// norm need the field and live on free functions below.
struct AlgInt {
  BigInt a, b;

  AlgInt() : a(0), b(0) {}
  AlgInt(BigInt a_, BigInt b_) : a(std::move(a_)), b(std::move(b_)) {}
  explicit AlgInt(long v) : a(v), b(0) {}

  bool operator==(const AlgInt&) const = default;
  bool is_zero() const { return a == 0 && b == 0; }

  AlgInt operator+(const AlgInt& o) const { return {a + o.a, b + o.b}; }
  AlgInt operator-(const AlgInt& o) const { return {a - o.a, b - o.b}; }
  AlgInt operator-() const { return {-a, -b}; }
};

inline void require_element_of(const FieldDesc& F, const AlgInt& x) {
  require(!(F.rational() && x.b != 0), Errc::field_mismatch,
          "element has a w-component but the field is Q");
}

// (a1 + b1 w)(a2 + b2 w) with w^2 = t w + n folded in.
inline AlgInt nf_mul(const FieldDesc& F, const AlgInt& x, const AlgInt& y) {
  require_element_of(F, x);
  require_element_of(F, y);
  BigInt cross = x.b * y.b;
  return {x.a * y.a + F.n * cross, x.a * y.b + x.b * y.a + F.t * cross};
}

inline AlgInt nf_conj(const FieldDesc& F, const AlgInt& x) {
  require_element_of(F, x);
  // w -> t - w
  return {x.a + F.t * x.b, -x.b};
}

// Value of the basis norm form. Over Q the form degenerates to a^2; every
// consumer reads the result through divisibility or unit tests, where that
// is interchangeable with a.
inline BigInt nf_norm(const FieldDesc& F, const AlgInt& x) {
  require_element_of(F, x);
  return x.a * x.a + F.t * x.a * x.b - F.n * x.b * x.b;
}

inline BigInt nf_trace(const FieldDesc& F, const AlgInt& x) {
  require_element_of(F, x);
  return 2 * x.a + F.t * x.b;
}

inline AlgInt nf_pow(const FieldDesc& F, AlgInt base, BigInt e) {
  require(e >= 0, Errc::domain, "negative exponent");
  AlgInt r(1);
  while (e > 0) {
    if ((e & 1) != 0) r = nf_mul(F, r, base);
    base = nf_mul(F, base, base);
    e >>= 1;
  }
  return r;
}

// Exact division x / y in O_L; nullopt when y does not divide x.
inline std::optional<AlgInt> nf_div_exact(const FieldDesc& F, const AlgInt& x, const AlgInt& y) {
  require(!y.is_zero(), Errc::domain, "division by zero");
  if (F.rational()) {
    if (x.a % y.a != 0) return std::nullopt;
    return AlgInt{x.a / y.a, BigInt(0)};
  }
  // x / y = x * conj(y) / N(y)
  BigInt nn = nf_norm(F, y);
  AlgInt num = nf_mul(F, x, nf_conj(F, y));
  if (num.a % nn != 0 || num.b % nn != 0) return std::nullopt;
  return AlgInt{num.a / nn, num.b / nn};
}

inline bool nf_is_unit(const FieldDesc& F, const AlgInt& x) {
  BigInt nn = nf_norm(F, x);
  return nn == 1 || nn == -1;
}

// Canonical text form: "a" for rational fields, otherwise "a+b*w" with the
// sign folded ("3-4*w"); round-trips through parse_elem.
inline std::string to_string(const FieldDesc& F, const AlgInt& x) {
  if (F.rational()) return x.a.str();
  std::string out = x.a.str();
  if (x.b >= 0) {
    out += "+" + x.b.str() + "*w";
  } else {
    out += "-" + BigInt(-x.b).str() + "*w";
  }
  return out;
}

namespace detail {

// Signed integer token at position i; advances i.
inline BigInt parse_int_at(const std::string& s, std::size_t& i) {
  std::size_t start = i;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  require(i > digits, Errc::parse, "expected integer in element literal \"" + s + "\"");
  return BigInt(s.substr(start, i - start));
}

}  // namespace detail

// Element literals: signed sums of integer terms and w-terms, e.g. "5",
// "-1+1*w", "2*w", "w", "3-w". Whitespace is ignored.
inline AlgInt parse_elem(const FieldDesc& F, const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  require(!s.empty(), Errc::parse, "empty element literal");
  AlgInt acc;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
      require(i < s.size(), Errc::parse, "dangling sign in \"" + raw + "\"");
    }
    BigInt coeff;
    bool has_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      coeff = BigInt(s.substr(start, i - start));
      has_coeff = true;
      if (i < s.size() && s[i] == '*') {
        require(i + 1 < s.size() && s[i + 1] == 'w', Errc::parse,
                "expected w after '*' in \"" + raw + "\"");
        i += 2;
        acc.b += sign * coeff;
        continue;
      }
    }
    if (i < s.size() && s[i] == 'w') {
      ++i;
      acc.b += sign * (has_coeff ? coeff : BigInt(1));
      continue;
    }
    require(has_coeff, Errc::parse, "unexpected character in element literal \"" + raw + "\"");
    acc.a += sign * coeff;
  }
  require_element_of(F, acc);
  return acc;
}

}  // namespace intersective
