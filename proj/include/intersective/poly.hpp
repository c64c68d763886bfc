#pragma once

// Sparse polynomials over O_L, their integer-component decompositions on the
// integral basis, and univariate gcds in L[x] computed fraction-free.

#include "intersective/field.hpp"

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace intersective {

using Monomial = std::vector<std::uint32_t>;  // exponent vector, length = arity

inline std::uint64_t total_degree(const Monomial& m) {
  std::uint64_t s = 0;
  for (auto e : m) s += e;
  return s;
}

// Print/iteration order: total degree descending, then exponent vector
// lexicographically descending.
struct MonomialPrintOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    std::uint64_t da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

namespace detail {

template <typename Coeff>
using TermMap = std::map<Monomial, Coeff>;

template <typename Coeff>
void add_term(TermMap<Coeff>& m, const Monomial& mono, const Coeff& c) {
  auto it = m.find(mono);
  if (it == m.end()) {
    if (!(c == Coeff{})) m.emplace(mono, c);
    return;
  }
  it->second = it->second + c;
  if (it->second == Coeff{}) m.erase(it);
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

}  // namespace detail

class OPoly {
 public:
  OPoly() : F_(FieldDesc::rationals()), arity_(1) {}
  OPoly(FieldDesc F, int arity) : F_(std::move(F)), arity_(arity) {
    require(arity >= 1, Errc::domain, "arity must be at least 1");
  }

  static OPoly constant(const FieldDesc& F, int arity, const AlgInt& c) {
    OPoly p(F, arity);
    if (!c.is_zero()) p.terms_.emplace(Monomial(arity, 0), c);
    return p;
  }

  static OPoly variable(const FieldDesc& F, int arity, int index, std::uint32_t exp = 1) {
    OPoly p(F, arity);
    require(index >= 0 && index < arity, Errc::domain, "variable index out of range");
    Monomial m(arity, 0);
    m[index] = exp;
    p.terms_.emplace(std::move(m), AlgInt(1));
    return p;
  }

  const FieldDesc& field() const { return F_; }
  int arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, AlgInt>& terms() const { return terms_; }

  bool operator==(const OPoly& o) const {
    return F_ == o.F_ && arity_ == o.arity_ && terms_ == o.terms_;
  }

  std::uint64_t degree() const {  // total degree; 0 for the zero polynomial
    std::uint64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  bool is_constant() const { return degree() == 0; }

  void set_term(const Monomial& mono, const AlgInt& c) {
    require(static_cast<int>(mono.size()) == arity_, Errc::domain, "monomial arity mismatch");
    if (c.is_zero()) {
      terms_.erase(mono);
    } else {
      terms_[mono] = c;
    }
  }

  AlgInt coeff(const Monomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? AlgInt() : it->second;
  }

  OPoly operator+(const OPoly& o) const {
    check_compat(o);
    OPoly r = *this;
    for (const auto& [m, c] : o.terms_) detail::add_term(r.terms_, m, c);
    return r;
  }

  OPoly operator-(const OPoly& o) const {
    check_compat(o);
    OPoly r = *this;
    for (const auto& [m, c] : o.terms_) detail::add_term(r.terms_, m, -c);
    return r;
  }

  OPoly operator-() const {
    OPoly r(F_, arity_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }

  OPoly operator*(const OPoly& o) const {
    check_compat(o);
    OPoly r(F_, arity_);
    for (const auto& [ma, ca] : terms_) {
      for (const auto& [mb, cb] : o.terms_) {
        detail::add_term(r.terms_, detail::mono_mul(ma, mb), nf_mul(F_, ca, cb));
      }
    }
    return r;
  }

  OPoly scaled(const AlgInt& s) const {
    OPoly r(F_, arity_);
    if (s.is_zero()) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, nf_mul(F_, s, c));
    return r;
  }

  OPoly pow(std::uint32_t e) const {
    OPoly r = constant(F_, arity_, AlgInt(1));
    OPoly base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = e > 1 ? base * base : base;
      e >>= 1;
    }
    return r;
  }

  AlgInt evaluate(const std::vector<AlgInt>& point) const {
    require(static_cast<int>(point.size()) == arity_, Errc::domain,
            "evaluation point arity mismatch");
    for (const auto& x : point) require_element_of(F_, x);
    // Memoize per-variable powers up to the largest exponent in use.
    std::vector<std::vector<AlgInt>> pows(arity_);
    for (int j = 0; j < arity_; ++j) {
      std::uint32_t maxe = 0;
      for (const auto& [m, c] : terms_) maxe = std::max(maxe, m[j]);
      pows[j].reserve(maxe + 1);
      pows[j].push_back(AlgInt(1));
      for (std::uint32_t e = 1; e <= maxe; ++e) {
        pows[j].push_back(nf_mul(F_, pows[j].back(), point[j]));
      }
    }
    AlgInt acc;
    for (const auto& [m, c] : terms_) {
      AlgInt t = c;
      for (int j = 0; j < arity_; ++j) {
        if (m[j]) t = nf_mul(F_, t, pows[j][m[j]]);
      }
      acc = acc + t;
    }
    return acc;
  }

  // ---- univariate views ------------------------------------------------

  bool univariate() const { return arity_ == 1; }

  int deg1() const {  // univariate degree; -1 for zero
    require(univariate(), Errc::domain, "univariate operation on multivariate polynomial");
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max<int>(d, static_cast<int>(m[0]));
    return d;
  }

  AlgInt lc1() const {
    int d = deg1();
    require(d >= 0, Errc::domain, "leading coefficient of zero polynomial");
    return coeff(Monomial{static_cast<std::uint32_t>(d)});
  }

  std::vector<AlgInt> dense1() const {  // ascending degree; empty for zero
    int d = deg1();
    std::vector<AlgInt> out(static_cast<std::size_t>(d + 1));
    for (const auto& [m, c] : terms_) out[m[0]] = c;
    return out;
  }

  static OPoly from_dense1(const FieldDesc& F, const std::vector<AlgInt>& coeffs) {
    OPoly p(F, 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (!coeffs[i].is_zero()) p.terms_.emplace(Monomial{static_cast<std::uint32_t>(i)}, coeffs[i]);
    }
    return p;
  }

 private:
  void check_compat(const OPoly& o) const {
    require(F_ == o.F_, Errc::field_mismatch, "polynomials over different fields");
    require(arity_ == o.arity_, Errc::domain, "polynomials of different arities");
  }

  FieldDesc F_;
  int arity_;
  std::map<Monomial, AlgInt> terms_;
};

inline OPoly formal_derivative(const OPoly& p) {
  require(p.univariate(), Errc::domain, "formal derivative is univariate only");
  OPoly r(p.field(), 1);
  for (const auto& [m, c] : p.terms()) {
    if (m[0] == 0) continue;
    AlgInt cc{c.a * m[0], c.b * m[0]};
    r.set_term(Monomial{m[0] - 1}, cc);
  }
  return r;
}

// ------------------------------------------------------------------ ZPoly

// Integer-coefficient polynomial; the component type of decompositions.
class ZPoly {
 public:
  ZPoly() : arity_(1) {}
  explicit ZPoly(int arity) : arity_(arity) {
    require(arity >= 1, Errc::domain, "arity must be at least 1");
  }

  int arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, BigInt>& terms() const { return terms_; }
  bool operator==(const ZPoly& o) const { return arity_ == o.arity_ && terms_ == o.terms_; }

  void set_term(const Monomial& mono, const BigInt& c) {
    require(static_cast<int>(mono.size()) == arity_, Errc::domain, "monomial arity mismatch");
    if (c == 0) {
      terms_.erase(mono);
    } else {
      terms_[mono] = c;
    }
  }

  BigInt evaluate(const std::vector<BigInt>& point) const {
    require(static_cast<int>(point.size()) == arity_, Errc::domain,
            "evaluation point arity mismatch");
    std::vector<std::vector<BigInt>> pows(arity_);
    for (int j = 0; j < arity_; ++j) {
      std::uint32_t maxe = 0;
      for (const auto& [m, c] : terms_) maxe = std::max(maxe, m[j]);
      pows[j].reserve(maxe + 1);
      pows[j].push_back(BigInt(1));
      for (std::uint32_t e = 1; e <= maxe; ++e) pows[j].push_back(pows[j].back() * point[j]);
    }
    BigInt acc = 0;
    for (const auto& [m, c] : terms_) {
      BigInt t = c;
      for (int j = 0; j < arity_; ++j) {
        if (m[j]) t *= pows[j][m[j]];
      }
      acc += t;
    }
    return acc;
  }

 private:
  int arity_;
  std::map<Monomial, BigInt> terms_;
};

// ---------------------------------------------------------------- printing

namespace detail {

inline std::string monomial_str(const Monomial& m, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[j];
    if (m[j] > 1) out += "^" + std::to_string(m[j]);
  }
  return out;
}

struct TermPiece {
  bool negative;
  std::string body;
};

inline TermPiece rational_term_piece(const BigInt& c, const std::string& vars) {
  BigInt mag = abs(c);
  std::string body;
  if (vars.empty()) {
    body = mag.str();
  } else if (mag == 1) {
    body = vars;
  } else {
    body = mag.str() + "*" + vars;
  }
  return {c < 0, body};
}

inline std::string join_terms(const std::vector<TermPiece>& pieces) {
  if (pieces.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i == 0) {
      if (pieces[i].negative) out += "-";
    } else {
      out += pieces[i].negative ? "-" : "+";
    }
    out += pieces[i].body;
  }
  return out;
}

}  // namespace detail

inline std::vector<std::string> default_var_names(int arity) {
  if (arity == 1) return {"x"};
  std::vector<std::string> names;
  for (int j = 1; j <= arity; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

// Component variable names for decompositions: (a, b) per source variable, or
// (a) alone over Q; indexed when the source has several variables.
inline std::vector<std::string> component_var_names(int d, int m) {
  std::vector<std::string> names;
  for (int j = 1; j <= d; ++j) {
    std::string suffix = d > 1 ? std::to_string(j) : "";
    names.push_back("a" + suffix);
    if (m == 2) names.push_back("b" + suffix);
  }
  return names;
}

inline std::string to_string(const OPoly& p, std::vector<std::string> names = {}) {
  if (names.empty()) names = default_var_names(p.arity());
  require(static_cast<int>(names.size()) == p.arity(), Errc::domain, "variable name count");
  std::map<Monomial, AlgInt, MonomialPrintOrder> ordered(p.terms().begin(), p.terms().end());
  std::vector<detail::TermPiece> pieces;
  for (const auto& [m, c] : ordered) {
    std::string vars = detail::monomial_str(m, names);
    if (c.b == 0) {
      pieces.push_back(detail::rational_term_piece(c.a, vars));
    } else {
      std::string cs = "(" + to_string(p.field(), c) + ")";
      pieces.push_back({false, vars.empty() ? cs : cs + "*" + vars});
    }
  }
  return detail::join_terms(pieces);
}

inline std::string to_string(const ZPoly& p, const std::vector<std::string>& names) {
  require(static_cast<int>(names.size()) == p.arity(), Errc::domain, "variable name count");
  std::map<Monomial, BigInt, MonomialPrintOrder> ordered(p.terms().begin(), p.terms().end());
  std::vector<detail::TermPiece> pieces;
  for (const auto& [m, c] : ordered) {
    pieces.push_back(detail::rational_term_piece(c, detail::monomial_str(m, names)));
  }
  return detail::join_terms(pieces);
}

// ----------------------------------------------------------------- parsing

namespace detail {

// Recursive-descent expression parser over a fixed variable-name table.
// Supports +, -, *, ^, parentheses, and implicit multiplication before '('.
class PolyParser {
 public:
  PolyParser(const FieldDesc& F, int arity, std::vector<std::string> names, const std::string& src)
      : F_(F), arity_(arity), names_(std::move(names)) {
    for (char c : src) {
      if (!std::isspace(static_cast<unsigned char>(c))) text_ += c;
    }
    require(!text_.empty(), Errc::parse, "empty polynomial");
  }

  // Extra spelling for a variable ("x" for "x1" in multivariate input).
  void add_alias(std::string name, int index) { aliases_.emplace_back(std::move(name), index); }

  OPoly run() {
    OPoly p = parse_expr();
    require(pos_ == text_.size(), Errc::parse,
            "unexpected trailing input at position " + std::to_string(pos_));
    return p;
  }

 private:
  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  bool at_end() const { return pos_ >= text_.size(); }

  OPoly parse_expr() {
    OPoly acc = parse_signed_term();
    while (peek('+') || peek('-')) {
      char op = text_[pos_++];
      OPoly t = parse_term();
      acc = op == '+' ? acc + t : acc - t;
    }
    return acc;
  }

  OPoly parse_signed_term() {
    int sign = 1;
    while (peek('+') || peek('-')) {
      if (text_[pos_] == '-') sign = -sign;
      ++pos_;
    }
    OPoly t = parse_term();
    return sign < 0 ? -t : t;
  }

  OPoly parse_term() {
    OPoly acc = parse_factor();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        acc = acc * parse_factor();
      } else if (peek('(')) {  // implicit product: (x^2-13)(x^2-17)
        acc = acc * parse_factor();
      } else {
        return acc;
      }
    }
  }

  OPoly parse_factor() {
    OPoly base = parse_primary();
    while (peek('^')) {
      ++pos_;
      std::uint64_t e = parse_uint();
      require(e <= 512, Errc::parse, "exponent beyond 512");
      base = base.pow(static_cast<std::uint32_t>(e));
    }
    return base;
  }

  OPoly parse_primary() {
    require(!at_end(), Errc::parse, "unexpected end of polynomial");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      OPoly inner = parse_expr();
      require(peek(')'), Errc::parse, "missing ')'");
      ++pos_;
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -parse_factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return OPoly::constant(F_, arity_, AlgInt{BigInt(text_.substr(start, pos_ - start)), BigInt(0)});
    }
    if (c == 'w' && !is_name_char_at(pos_ + 1)) {
      require(!F_.rational(), Errc::parse, "w is not an element of Q");
      ++pos_;
      return OPoly::constant(F_, arity_, AlgInt{BigInt(0), BigInt(1)});
    }
    // longest-match variable name
    for (int j = 0; j < arity_; ++j) {
      const std::string& nm = names_[j];
      if (text_.compare(pos_, nm.size(), nm) == 0 && !is_name_char_at(pos_ + nm.size())) {
        // prefer the longest candidate ("x12" over "x1")
        bool longer = false;
        for (int k = 0; k < arity_; ++k) {
          if (names_[k].size() > nm.size() && text_.compare(pos_, names_[k].size(), names_[k]) == 0 &&
              !is_name_char_at(pos_ + names_[k].size())) {
            longer = true;
            break;
          }
        }
        if (longer) continue;
        pos_ += nm.size();
        return OPoly::variable(F_, arity_, j);
      }
    }
    for (const auto& [nm, j] : aliases_) {
      if (text_.compare(pos_, nm.size(), nm) == 0 && !is_name_char_at(pos_ + nm.size())) {
        pos_ += nm.size();
        return OPoly::variable(F_, arity_, j);
      }
    }
    fail(Errc::parse, std::string("unexpected character '") + c + "' at position " +
                          std::to_string(pos_));
  }

  bool is_name_char_at(std::size_t i) const {
    return i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])));
  }

  std::uint64_t parse_uint() {
    require(!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_])), Errc::parse,
            "expected exponent digits");
    std::uint64_t v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      require(v <= 1'000'000, Errc::parse, "exponent out of range");
      ++pos_;
    }
    return v;
  }

  FieldDesc F_;
  int arity_;
  std::vector<std::string> names_;
  std::vector<std::pair<std::string, int>> aliases_;
  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parse with variables x (or x1..xk). The arity is the largest index that
// appears, or 1 for constant input; pass expect_arity to pin it.
inline OPoly parse_opoly(const FieldDesc& F, const std::string& src, int expect_arity = 0) {
  int arity = expect_arity;
  if (arity == 0) {
    // pre-scan for the largest variable index
    int max_index = 1;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] != 'x') continue;
      std::size_t j = i + 1;
      std::uint64_t idx = 0;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        idx = idx * 10 + static_cast<std::uint64_t>(src[j] - '0');
        require(idx <= 64, Errc::parse, "variable index beyond 64");
        ++j;
      }
      if (idx > 0) max_index = std::max(max_index, static_cast<int>(idx));
    }
    arity = max_index;
  }
  std::vector<std::string> names = default_var_names(arity);
  detail::PolyParser parser(F, arity, names, src);
  if (arity > 1) parser.add_alias("x", 0);
  return parser.run();
}

// Parse an integer-coefficient polynomial against an explicit name table.
inline ZPoly parse_zpoly(const std::vector<std::string>& names, const std::string& src) {
  OPoly p = detail::PolyParser(FieldDesc::rationals(), static_cast<int>(names.size()), names, src).run();
  ZPoly out(p.arity());
  for (const auto& [m, c] : p.terms()) out.set_term(m, c.a);
  return out;
}

// -------------------------------------------------------- decomposition

// The m = [O_L : Z] integer component polynomials of p under x_j = a_j + b_j w.
struct ZPolyVector {
  FieldDesc F;
  int d = 1;  // source arity
  int m = 1;  // basis size (1 for Q, 2 otherwise)
  std::vector<ZPoly> comps;

  std::vector<std::string> var_names() const { return component_var_names(d, m); }

  // Integer shift vector (length m) at an integer point (length d*m).
  std::vector<BigInt> shift_at(const std::vector<BigInt>& point) const {
    std::vector<BigInt> out;
    out.reserve(comps.size());
    for (const auto& c : comps) out.push_back(c.evaluate(point));
    return out;
  }

  bool operator==(const ZPolyVector& o) const {
    return F == o.F && d == o.d && m == o.m && comps == o.comps;
  }
};

// p with x_j = a_j + b_j*w substituted and expanded over O_L (arity d*m).
inline OPoly decompose_expand(const OPoly& p) {
  const FieldDesc& F = p.field();
  int d = p.arity();
  int m = F.rational() ? 1 : 2;
  int target = d * m;
  std::vector<OPoly> sub;
  sub.reserve(d);
  for (int j = 0; j < d; ++j) {
    OPoly s = OPoly::variable(F, target, j * m);
    if (m == 2) {
      s = s + OPoly::variable(F, target, j * m + 1).scaled(AlgInt{BigInt(0), BigInt(1)});
    }
    sub.push_back(std::move(s));
  }
  OPoly acc(F, target);
  for (const auto& [mono, c] : p.terms()) {
    OPoly t = OPoly::constant(F, target, c);
    for (int j = 0; j < d; ++j) {
      if (mono[j]) t = t * sub[j].pow(mono[j]);
    }
    acc = acc + t;
  }
  return acc;
}

inline ZPolyVector decompose(const OPoly& p) {
  const FieldDesc& F = p.field();
  ZPolyVector out;
  out.F = F;
  out.d = p.arity();
  out.m = F.rational() ? 1 : 2;
  OPoly expanded = decompose_expand(p);
  out.comps.assign(out.m, ZPoly(out.d * out.m));
  for (const auto& [mono, c] : expanded.terms()) {
    out.comps[0].set_term(mono, c.a);
    if (out.m == 2) out.comps[1].set_term(mono, c.b);
  }
  return out;
}

// The inverse direction. The expanded form agrees with p(a_1 + b_1 w, ...)
// as a polynomial identity, so substituting b_j = 0 recovers p; the terms
// with b-exponents are redundant and get cross-checked by re-expanding.
inline OPoly recompose(const ZPolyVector& zv) {
  require(static_cast<int>(zv.comps.size()) == zv.m, Errc::domain,
          "component count does not match the basis size");
  OPoly out(zv.F, zv.d);
  for (int k = 0; k < zv.m; ++k) {
    for (const auto& [mono, c] : zv.comps[k].terms()) {
      bool b_free = true;
      for (int j = 0; zv.m == 2 && j < zv.d; ++j) {
        if (mono[2 * j + 1]) {
          b_free = false;
          break;
        }
      }
      if (!b_free) continue;
      Monomial back(zv.d, 0);
      for (int j = 0; j < zv.d; ++j) back[j] = mono[j * zv.m];
      AlgInt coeff = out.coeff(back);
      (k == 0 ? coeff.a : coeff.b) += c;
      out.set_term(back, coeff);
    }
  }
  require(decompose(out) == zv, Errc::domain,
          "components are not the expansion of a single polynomial");
  return out;
}

// ------------------------------------------------------------ gcd in L[x]

namespace detail {

// L^(deg A - deg B + 1) * A = Q * B + R with deg R < deg B, everything in
// O_L[x]; returns {Q, R}.
inline std::pair<OPoly, OPoly> pseudo_divide(const OPoly& A, const OPoly& B) {
  const FieldDesc& F = A.field();
  int degA = A.deg1(), degB = B.deg1();
  require(degB >= 0, Errc::domain, "pseudo-division by zero");
  if (degA < degB) {
    // multiply through anyway so the contract stays uniform
    return {OPoly(F, 1), A};
  }
  AlgInt L = B.lc1();
  int steps = degA - degB + 1;
  OPoly R = A;
  OPoly Q(F, 1);
  for (int i = 0; i < steps; ++i) {
    int degR = R.deg1();
    if (degR < degB || R.is_zero()) {
      // premultiply the remaining factor to reach L^(degA-degB+1)
      R = R.scaled(L);
      Q = Q.scaled(L);
      continue;
    }
    AlgInt lead = R.lc1();
    Monomial shift{static_cast<std::uint32_t>(degR - degB)};
    OPoly T(F, 1);
    T.set_term(shift, lead);
    Q = Q.scaled(L) + T;
    R = R.scaled(L) - T * B;
  }
  return {Q, R};
}

// gcd of the rational integer contents of all coordinates.
inline BigInt rational_content(const OPoly& p) {
  BigInt g = 0;
  for (const auto& [m, c] : p.terms()) g = big_gcd(big_gcd(g, c.a), c.b);
  return g;
}

inline OPoly divide_rational_content(const OPoly& p, const BigInt& g) {
  if (g == 0 || g == 1) return p;
  OPoly r(p.field(), p.arity());
  for (const auto& [m, c] : p.terms()) r.set_term(m, AlgInt{c.a / g, c.b / g});
  return r;
}

}  // namespace detail

struct GcdResult {
  OPoly g;                      // gcd scaled into O_L[x], rational content removed
  std::vector<OPoly> cofactors; // sum cofactors[i] * p_i = delta * g, exactly
  AlgInt delta;                 // rational integer viewed in O_L
};

// Monic-free gcd of univariate polynomials over L by primitive pseudo-remainder
// sequences; Bezout cofactors are carried through every step and the returned
// identity is re-verified before returning. A constant gcd is normalized to 1.
inline GcdResult poly_gcd_over_L(const std::vector<OPoly>& ps) {
  require(!ps.empty(), Errc::domain, "empty polynomial family");
  const FieldDesc& F = ps.front().field();
  const std::size_t k = ps.size();
  for (const auto& p : ps) {
    require(p.field() == F, Errc::field_mismatch, "gcd inputs over different fields");
    require(p.univariate(), Errc::domain, "gcd inputs must be univariate");
  }

  struct Row {
    OPoly r;
    std::vector<OPoly> rep;  // sum rep[i] * p_i = r
  };
  auto content_reduce = [&](Row& row) {
    BigInt g = detail::rational_content(row.r);
    for (const auto& q : row.rep) g = big_gcd(g, detail::rational_content(q));
    if (g > 1) {
      row.r = detail::divide_rational_content(row.r, g);
      for (auto& q : row.rep) q = detail::divide_rational_content(q, g);
    }
  };

  Row acc;
  acc.r = OPoly(F, 1);
  acc.rep.assign(k, OPoly(F, 1));
  bool have = false;
  for (std::size_t i = 0; i < k; ++i) {
    if (ps[i].is_zero()) continue;
    Row next;
    next.r = ps[i];
    next.rep.assign(k, OPoly(F, 1));
    next.rep[i] = OPoly::constant(F, 1, AlgInt(1));
    if (!have) {
      acc = std::move(next);
      have = true;
      continue;
    }
    // pairwise gcd with cofactor tracking
    Row r0 = std::move(acc), r1 = std::move(next);
    if (r0.r.deg1() < r1.r.deg1()) std::swap(r0, r1);
    while (!r1.r.is_zero()) {
      AlgInt L = r1.r.lc1();
      int e = r0.r.deg1() - r1.r.deg1() + 1;
      auto [q, rem] = detail::pseudo_divide(r0.r, r1.r);
      Row r2;
      r2.r = std::move(rem);
      r2.rep.reserve(k);
      AlgInt Le = nf_pow(F, L, e);
      for (std::size_t j = 0; j < k; ++j) {
        r2.rep.push_back(r0.rep[j].scaled(Le) - q * r1.rep[j]);
      }
      content_reduce(r2);
      r0 = std::move(r1);
      r1 = std::move(r2);
    }
    acc = std::move(r0);
  }
  require(have, Errc::domain, "all polynomials in the family are zero");

  content_reduce(acc);
  BigInt G = detail::rational_content(acc.r);
  GcdResult out;
  out.cofactors = std::move(acc.rep);
  if (G > 1) acc.r = detail::divide_rational_content(acc.r, G);
  out.delta = AlgInt{G == 0 ? BigInt(1) : G, BigInt(0)};
  out.g = std::move(acc.r);

  if (out.g.is_constant()) {
    // normalize constant gcds to exactly 1: multiply the identity by conj(c)
    AlgInt c = out.g.coeff(Monomial{0});
    AlgInt cc = nf_conj(F, c);
    for (auto& f : out.cofactors) f = f.scaled(cc);
    out.delta = nf_mul(F, out.delta, AlgInt{nf_norm(F, c), BigInt(0)});
    out.g = OPoly::constant(F, 1, AlgInt(1));
  } else {
    AlgInt lead = out.g.lc1();
    if (lead.a < 0 || (lead.a == 0 && lead.b < 0)) {
      out.g = -out.g;
      out.delta = -out.delta;
    }
  }

  // The identity is cheap to check and load-bearing; verify on every call.
  OPoly lhs(F, 1);
  for (std::size_t i = 0; i < k; ++i) lhs = lhs + out.cofactors[i] * ps[i];
  require(lhs == out.g.scaled(out.delta), Errc::internal, "Bezout identity failed to verify");
  return out;
}

// --------------------------------------------------- resultants, radicals

namespace detail {

// Bareiss fraction-free determinant over O_L; divisions are exact.
inline AlgInt bareiss_det(const FieldDesc& F, std::vector<std::vector<AlgInt>> M) {
  const std::size_t n = M.size();
  if (n == 0) return AlgInt(1);
  int sign = 1;
  AlgInt prev(1);
  for (std::size_t kk = 0; kk + 1 < n; ++kk) {
    if (M[kk][kk].is_zero()) {
      std::size_t swap_row = kk + 1;
      while (swap_row < n && M[swap_row][kk].is_zero()) ++swap_row;
      if (swap_row == n) return AlgInt();  // singular
      std::swap(M[kk], M[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = kk + 1; i < n; ++i) {
      for (std::size_t j = kk + 1; j < n; ++j) {
        AlgInt num = nf_mul(F, M[i][j], M[kk][kk]) - nf_mul(F, M[i][kk], M[kk][j]);
        auto q = nf_div_exact(F, num, prev);
        require(q.has_value(), Errc::internal, "Bareiss division not exact");
        M[i][j] = *q;
      }
      M[i][kk] = AlgInt();
    }
    prev = M[kk][kk];
  }
  AlgInt det = M[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

}  // namespace detail

inline AlgInt resultant(const OPoly& A, const OPoly& B) {
  const FieldDesc& F = A.field();
  require(B.field() == F, Errc::field_mismatch, "resultant across fields");
  int m = A.deg1(), n = B.deg1();
  require(m >= 0 && n >= 0, Errc::domain, "resultant of zero polynomial");
  if (m == 0 && n == 0) return AlgInt(1);
  std::vector<AlgInt> a = A.dense1(), b = B.dense1();
  std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<AlgInt>> M(size, std::vector<AlgInt>(size));
  for (int row = 0; row < n; ++row) {
    for (int j = 0; j <= m; ++j) M[row][row + (m - j)] = a[j];
  }
  for (int row = 0; row < m; ++row) {
    for (int j = 0; j <= n; ++j) M[n + row][row + (n - j)] = b[j];
  }
  return detail::bareiss_det(F, std::move(M));
}

// Discriminant of a univariate polynomial of degree >= 1 (by convention 1 for
// linear). disc = (-1)^(n(n-1)/2) * Res(f, f') / lc(f), exact in O_L.
inline AlgInt discriminant(const OPoly& f) {
  int n = f.deg1();
  require(n >= 1, Errc::domain, "discriminant needs degree >= 1");
  if (n == 1) return AlgInt(1);
  AlgInt res = resultant(f, formal_derivative(f));
  auto q = nf_div_exact(f.field(), res, f.lc1());
  require(q.has_value(), Errc::internal, "discriminant division not exact");
  AlgInt d = *q;
  return (static_cast<std::uint64_t>(n) * (n - 1) / 2) % 2 == 1 ? -d : d;
}

// Squarefree part up to a scalar: f / gcd(f, f'), rational content removed.
inline OPoly radical_part(const OPoly& f) {
  require(f.deg1() >= 1, Errc::domain, "radical of a constant");
  GcdResult gr = poly_gcd_over_L({f, formal_derivative(f)});
  if (gr.g.is_constant()) return f;
  auto [q, rem] = detail::pseudo_divide(f, gr.g);
  require(rem.is_zero(), Errc::internal, "radical division left a remainder");
  BigInt cont = detail::rational_content(q);
  return detail::divide_rational_content(q, cont);
}

}  // namespace intersective
