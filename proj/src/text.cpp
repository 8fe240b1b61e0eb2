#include "skewnp/text.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>

#include "skewnp/errors.hpp"

namespace skewnp {

namespace {

struct Node {
  enum class Kind { Num, Imag, X, T, BigO, Add, Sub, Mul, Div, Neg, Pow };
  Kind kind;
  std::size_t pos = 0;
  Rational value{0};  // Num: the literal; Pow: the exponent
  bool grouped = false;  // written in parentheses
  std::unique_ptr<Node> a, b;
};
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Kind k, std::size_t pos, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->pos = pos;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (i_ < s_.size()) fail(std::string("unexpected '") + s_[i_] + "'");
    return n;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i_); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool starts_atom() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 'x' || c == 't' || c == 'i' ||
           c == 'O';
  }

  NodePtr expr() {
    const std::size_t p = (skip(), i_);
    NodePtr n;
    if (eat('-')) {
      n = make(Node::Kind::Neg, p, term());
    } else {
      eat('+');
      n = term();
    }
    for (;;) {
      const std::size_t q = (skip(), i_);
      if (eat('+')) {
        n = make(Node::Kind::Add, q, std::move(n), term());
      } else if (eat('-')) {
        n = make(Node::Kind::Sub, q, std::move(n), term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = factor();
    for (;;) {
      const std::size_t q = (skip(), i_);
      if (eat('*')) {
        n = make(Node::Kind::Mul, q, std::move(n), factor());
      } else if (eat('/')) {
        n = make(Node::Kind::Div, q, std::move(n), factor());
      } else if (starts_atom()) {
        n = make(Node::Kind::Mul, q, std::move(n), factor());
      } else {
        return n;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = atom();
    const std::size_t q = (skip(), i_);
    if (!eat('^')) return base;
    NodePtr n = make(Node::Kind::Pow, q, std::move(base));
    n->value = exponent();
    return n;
  }

  Rational exponent() {
    if (eat('(')) {
      const bool neg = eat('-');
      Rational e = integer();
      if (eat('/')) {
        const Rational d = integer();
        if (d == 0) fail("zero denominator in exponent");
        e /= d;
      }
      expect(')');
      return neg ? -e : e;
    }
    const bool neg = eat('-');
    const Rational e = integer();
    return neg ? -e : e;
  }

  Rational integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    const std::string d(s_.substr(start, i_ - start));
    const std::size_t nz = d.find_first_not_of('0');
    return nz == std::string::npos ? Rational(0) : Rational(BigInt(d.substr(nz)));
  }

  // digits [. digits] [e [+-] digits], read exactly.
  Rational number() {
    const std::size_t start = i_;
    std::string digits;
    long scale = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) digits += s_[i_++];
    if (i_ < s_.size() && s_[i_] == '.') {
      ++i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        digits += s_[i_++];
        --scale;
      }
    }
    if (digits.empty()) {
      i_ = start;
      fail("malformed number");
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      bool neg = false;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) neg = s_[j++] == '-';
      const std::size_t es = j;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      if (j == es) fail("malformed exponent");
      const long e = std::stol(std::string(s_.substr(es, j - es)));
      scale += neg ? -e : e;
      i_ = j;
    }
    // A leading 0 would make the string octal.
    const std::size_t nz = digits.find_first_not_of('0');
    const Rational v{nz == std::string::npos ? BigInt(0) : BigInt(digits.substr(nz))};
    const BigInt p = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    return scale < 0 ? v / Rational(p) : v * Rational(p);
  }

  NodePtr atom() {
    const char c = peek();
    const std::size_t p = i_;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      NodePtr n = make(Node::Kind::Num, p);
      n->value = number();
      return n;
    }
    if (c == '(') {
      ++i_;
      NodePtr n = expr();
      expect(')');
      n->grouped = true;
      return n;
    }
    if (c == 'x' || c == 't' || c == 'i') {
      ++i_;
      if (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) {
        i_ = p;
        fail("unknown identifier");
      }
      return make(c == 'x' ? Node::Kind::X : c == 't' ? Node::Kind::T : Node::Kind::Imag, p);
    }
    if (c == 'O') {
      ++i_;
      expect('(');
      NodePtr n = make(Node::Kind::BigO, p, expr());
      expect(')');
      return n;
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

bool has_kind(const Node& n, Node::Kind k) {
  if (n.kind == k) return true;
  return (n.a && has_kind(*n.a, k)) || (n.b && has_kind(*n.b, k));
}

bool is_scalar_tree(const Node& n) {
  return !has_kind(n, Node::Kind::X) && !has_kind(n, Node::Kind::T) && !has_kind(n, Node::Kind::BigO);
}

GaussianRational ginv(const GaussianRational& z, std::size_t pos) {
  const Rational n = z.re * z.re + z.im * z.im;
  if (n == 0) throw ParseError("division by zero", pos);
  return {z.re / n, -z.im / n};
}

GaussianRational eval_scalar(const Node& n) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::Num: return GaussianRational(n.value);
    case K::Imag: return GaussianRational(Rational(0), Rational(1));
    case K::Add: return eval_scalar(*n.a) + eval_scalar(*n.b);
    case K::Sub: return eval_scalar(*n.a) - eval_scalar(*n.b);
    case K::Mul: return eval_scalar(*n.a) * eval_scalar(*n.b);
    case K::Div: return eval_scalar(*n.a) * ginv(eval_scalar(*n.b), n.pos);
    case K::Neg: return -eval_scalar(*n.a);
    case K::Pow: {
      if (denominator(n.value) != 1) throw ParseError("fractional power of a scalar", n.pos);
      GaussianRational base = eval_scalar(*n.a);
      long e = numerator(n.value).convert_to<long>();
      if (e < 0) {
        base = ginv(base, n.pos);
        e = -e;
      }
      GaussianRational r(1);
      for (long k = 0; k < e; ++k) r = r * base;
      return r;
    }
    default: throw ParseError("expected a scalar", n.pos);
  }
}

// x^q when the tree is a pure power of x.
std::optional<Rational> x_exponent(const Node& n) {
  if (n.kind == Node::Kind::X) return Rational(1);
  if (n.kind == Node::Kind::Pow && n.a->kind == Node::Kind::X) return n.value;
  if (n.kind == Node::Kind::Num && n.value == 1) return Rational(0);
  return std::nullopt;
}

PuiseuxSeries eval_series(const Node& n) {
  using K = Node::Kind;
  if (is_scalar_tree(n)) return PuiseuxSeries(eval_scalar(n).to_complex());
  switch (n.kind) {
    case K::X: return PuiseuxSeries::x_power(Rational(1));
    case K::BigO: {
      auto e = x_exponent(*n.a);
      if (!e) throw ParseError("O(...) takes a power of x", n.pos);
      return PuiseuxSeries::big_o(*e);
    }
    case K::Add: return eval_series(*n.a) + eval_series(*n.b);
    case K::Sub: return eval_series(*n.a) - eval_series(*n.b);
    case K::Neg: return -eval_series(*n.a);
    case K::Mul: return eval_series(*n.a) * eval_series(*n.b);
    case K::Div: {
      if (is_scalar_tree(*n.b)) return eval_series(*n.a).scaled(ginv(eval_scalar(*n.b), n.pos).to_complex());
      auto e = x_exponent(*n.b);
      if (!e) throw ParseError("division by a non-monomial series", n.pos);
      return eval_series(*n.a).shifted(-*e);
    }
    case K::Pow: {
      if (n.a->kind == K::X) return PuiseuxSeries::x_power(n.value);
      if (denominator(n.value) != 1 || n.value < 0) throw ParseError("series powers must be non-negative integers", n.pos);
      const PuiseuxSeries base = eval_series(*n.a);
      PuiseuxSeries r(1);
      for (long k = 0; k < numerator(n.value).convert_to<long>(); ++k) r *= base;
      return r;
    }
    case K::T: throw ParseError("t is not allowed in a series", n.pos);
    default: throw ParseError("malformed series", n.pos);
  }
}

// Coefficient vectors are only trimmed at the end, so that a coefficient
// known only as O(x^e) survives until it is added in.
using Coeffs = std::vector<PuiseuxSeries>;

Coeffs add_coeffs(Coeffs a, const Coeffs& b, bool subtract) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += subtract ? -b[i] : b[i];
  return a;
}

// p + s for a series s. A bare truncated s bounds every coefficient below
// the leading one, since the sum is only known modulo a power of x; a
// parenthesized one is just the constant term.
Coeffs add_series(Coeffs p, const PuiseuxSeries& s, bool grouped) {
  if (p.empty()) return {s};
  p[0] += s;
  if (!s.is_exact() && !grouped)
    for (std::size_t i = 1; i + 1 < p.size(); ++i) p[i] += PuiseuxSeries::big_o(s.precision().value());
  return p;
}

Coeffs mul_coeffs(const Coeffs& a, const Coeffs& b, const PuiseuxRingPtr& ring) {
  return poly_mul(PuiseuxPoly(ring, a), PuiseuxPoly(ring, b)).coeffs();
}

Coeffs eval_coeffs(const Node& n, const PuiseuxRingPtr& ring) {
  using K = Node::Kind;
  if (!has_kind(n, K::T)) return {eval_series(n)};
  switch (n.kind) {
    case K::T: return {PuiseuxSeries(), PuiseuxSeries(1)};
    case K::Add:
      if (!has_kind(*n.b, K::T)) return add_series(eval_coeffs(*n.a, ring), eval_series(*n.b), n.b->grouped);
      if (!has_kind(*n.a, K::T)) return add_series(eval_coeffs(*n.b, ring), eval_series(*n.a), n.a->grouped);
      return add_coeffs(eval_coeffs(*n.a, ring), eval_coeffs(*n.b, ring), false);
    case K::Sub:
      if (!has_kind(*n.b, K::T)) return add_series(eval_coeffs(*n.a, ring), -eval_series(*n.b), n.b->grouped);
      return add_coeffs(eval_coeffs(*n.a, ring), eval_coeffs(*n.b, ring), true);
    case K::Neg: {
      Coeffs c = eval_coeffs(*n.a, ring);
      for (auto& x : c) x = -x;
      return c;
    }
    case K::Mul: {
      // s (c t^k) = (s c) t^k; a series on the right has to go through t.
      if (!has_kind(*n.a, K::T)) {
        const PuiseuxSeries s = eval_series(*n.a);
        Coeffs c = eval_coeffs(*n.b, ring);
        for (auto& x : c) x = s * x;
        return c;
      }
      return mul_coeffs(eval_coeffs(*n.a, ring), eval_coeffs(*n.b, ring), ring);
    }
    case K::Div: {
      if (!is_scalar_tree(*n.b)) throw ParseError("polynomials may only be divided by scalars", n.pos);
      const PuiseuxSeries s(ginv(eval_scalar(*n.b), n.pos).to_complex());
      Coeffs c = eval_coeffs(*n.a, ring);
      for (auto& x : c) x = s * x;
      return c;
    }
    case K::Pow: {
      if (denominator(n.value) != 1 || n.value < 0) throw ParseError("powers of t must be non-negative integers", n.pos);
      const Coeffs base = eval_coeffs(*n.a, ring);
      Coeffs r{PuiseuxSeries(1)};
      for (long k = 0; k < numerator(n.value).convert_to<long>(); ++k) r = mul_coeffs(r, base, ring);
      return r;
    }
    default: throw ParseError("malformed polynomial", n.pos);
  }
}

// -2 or -3i: printed with a binary minus.
bool is_negative_real(const BigComplex& c) {
  return (c.imag() == 0 && c.real() < 0) || (c.real() == 0 && c.imag() < 0);
}

std::string exponent_str(const Rational& e) {
  if (e == 1) return "x";
  if (denominator(e) == 1 && e > 0) return "x^" + e.str();
  return "x^(" + e.str() + ")";
}

}  // namespace

GaussianRational parse_scalar(std::string_view text) {
  NodePtr n = Parser(text).parse();
  if (!is_scalar_tree(*n)) throw ParseError("expected a scalar", 0);
  return eval_scalar(*n);
}

PuiseuxSeries parse_series(std::string_view text) {
  NodePtr n = Parser(text).parse();
  if (has_kind(*n, Node::Kind::T)) throw ParseError("t is not allowed in a series", 0);
  return eval_series(*n);
}

PuiseuxPoly parse_poly(std::string_view text, const PuiseuxRingPtr& ring) {
  NodePtr n = Parser(text).parse();
  return PuiseuxPoly(ring, eval_coeffs(*n, ring));
}

Alpha parse_alpha(std::string_view text) {
  const GaussianRational a = parse_scalar(text);
  if (a.im == 0) return Alpha::from_rational(a.re);
  return Alpha::from_complex(a.to_complex(), true);
}

std::string format_real(const BigReal& v) {
  if (v == 0) return "0";
  const unsigned max_digits = static_cast<unsigned>(working_bits() * 0.30103) + 3;
  for (unsigned d = 1; d < max_digits; ++d) {
    std::string s = v.str(static_cast<std::streamsize>(d), std::ios_base::fmtflags(0));
    if (BigReal(s) == v) return s;
  }
  return v.str(static_cast<std::streamsize>(max_digits), std::ios_base::fmtflags(0));
}

std::string format_complex(const BigComplex& c) {
  if (c.imag() == 0) return format_real(c.real());
  const std::string im = (c.imag() == 1 ? "" : c.imag() == -1 ? "-" : format_real(c.imag())) + "i";
  if (c.real() == 0) return im;
  return format_real(c.real()) + (c.imag() < 0 ? "" : "+") + im;
}

std::string format_rational(const Rational& q) { return q.str(); }

std::string format_series(const PuiseuxSeries& s) {
  std::ostringstream os;
  bool first = true;
  const std::int64_t L = s.ramification();
  for (const auto& t : s.terms()) {
    const Rational e(t.k, L);
    BigComplex c = t.c;
    const bool neg = is_negative_real(c);
    if (neg) c = -c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    if (e == 0) {
      os << (c.imag() != 0 && c.real() != 0 ? "(" + format_complex(c) + ")" : format_complex(c));
      continue;
    }
    if (!(c == BigComplex(1))) {
      const bool paren = c.imag() != 0 && c.real() != 0;
      os << (paren ? "(" : "") << format_complex(c) << (paren ? ")" : "") << "*";
    }
    os << exponent_str(e);
  }
  if (!s.is_exact()) os << (first ? "" : " + ") << "O(" << exponent_str(s.precision().value()) << ")";
  else if (first) os << "0";
  return os.str();
}

std::string format_poly(const PuiseuxPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const PuiseuxSeries& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (c.is_zero() && c.is_exact()) continue;
    const std::string tp = i == 0 ? "" : i == 1 ? "t" : "t^" + std::to_string(i);
    const bool single = c.is_exact() && c.terms().size() == 1;
    // A coefficient whose first term is negative is printed negated.
    const bool neg = !c.is_zero() && is_negative_real(c.terms().front().c);
    const PuiseuxSeries mag = neg ? -c : c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    const bool unit = mag.is_exact() && mag.terms().size() == 1 && mag.terms().front().k == 0 &&
                      mag.terms().front().c == BigComplex(1);
    if (unit && i > 0) {
      os << tp;
      continue;
    }
    std::string body = format_series(mag);
    // Constants are scalar literals; format_series already brackets a+bi.
    const bool bare = single && mag.terms().front().k == 0;
    if (!bare) body = "(" + body + ")";
    os << body << (i > 0 ? "*" + tp : "");
  }
  return first ? "0" : os.str();
}

}  // namespace skewnp
