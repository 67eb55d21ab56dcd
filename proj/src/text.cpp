#include "kahan/text.hpp"

#include <cctype>
#include <sstream>

namespace kahan {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Polynomial parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    Polynomial p = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(0, static_cast<int>(pos_) + 1, reason); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Polynomial d = unary();
        if (!d.is_constant()) {
          pos_ = at;
          fail("division by a non-constant expression");
        }
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc *= Rational(1 / d.constant_term());
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (accept('^')) {
      skip_ws();
      if (!is_digit(peek())) fail("expected a non-negative integer exponent");
      unsigned e = 0;
      while (is_digit(peek())) e = e * 10 + static_cast<unsigned>(s_[pos_++] - '0');
      return base.pow(e);
    }
    return base;
  }

  Polynomial atom() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (is_digit(c) || c == '.') return Polynomial(number());
    if (c == '_' || is_ident_start(c)) return variable();
    fail(std::string("unexpected '") + c + "'");
  }

  Rational number() {
    const std::size_t start = pos_;
    while (is_digit(peek())) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (is_digit(peek())) ++pos_;
    }
    std::string_view lit = s_.substr(start, pos_ - start);
    if (lit == ".") fail("malformed number");
    return parse_rational(lit);
  }

  Polynomial variable() {
    const std::size_t start = pos_;
    int back = 0;
    while (peek() == '_') {
      ++back;
      ++pos_;
    }
    if (!is_ident_start(peek())) fail("expected identifier after '_'");
    const std::size_t id_start = pos_;
    while (is_ident_char(peek())) ++pos_;
    std::string ident(s_.substr(id_start, pos_ - id_start));
    int fwd = 0;
    if (peek() == '\'') {
      while (peek() == '\'') {
        ++fwd;
        ++pos_;
      }
      if (fwd == 1 && is_digit(peek())) {
        fwd = 0;
        while (is_digit(peek())) fwd = fwd * 10 + (s_[pos_++] - '0');
      }
    }
    const bool is_state = ident.size() > 1 && ident[0] == 'x' &&
                          ident.find_first_not_of("0123456789", 1) == std::string::npos;
    if (!is_state) {
      if (back != 0 || fwd != 0) {
        pos_ = start;
        fail("shifts are only allowed on state variables xJ");
      }
      return Polynomial::param(ident);
    }
    const int component = std::stoi(ident.substr(1));
    return Polynomial(VarId::state(component, fwd - back));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text) { return Parser(text).parse(); }

Rational parse_rational(std::string_view text) {
  std::string t(text);
  auto trim = [](std::string& s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
  };
  trim(t);
  if (t.empty()) throw ParseError(0, 1, "empty number");
  bool neg = false;
  std::size_t i = 0;
  if (t[0] == '-' || t[0] == '+') {
    neg = t[0] == '-';
    i = 1;
  }
  std::string body = t.substr(i);
  Rational q;
  try {
    if (auto slash = body.find('/'); slash != std::string::npos) {
      Integer n(body.substr(0, slash), 10);
      Integer d(body.substr(slash + 1), 10);
      if (d == 0) throw ParseError(0, static_cast<int>(i + slash + 2), "zero denominator");
      q = Rational(n, d);
      q.canonicalize();
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
      std::string ip = body.substr(0, dot);
      std::string fp = body.substr(dot + 1);
      if (ip.empty() && fp.empty()) throw ParseError(0, 1, "malformed decimal");
      for (char c : ip + fp)
        if (!is_digit(c)) throw ParseError(0, 1, "malformed decimal '" + t + "'");
      Integer n((ip.empty() ? "0" : ip) + fp, 10);
      Integer d;
      mpz_ui_pow_ui(d.get_mpz_t(), 10, fp.size());
      q = Rational(n, d);
      q.canonicalize();
    } else {
      for (char c : body)
        if (!is_digit(c)) throw ParseError(0, 1, "malformed number '" + t + "'");
      q = Rational(Integer(body, 10));
    }
  } catch (const std::invalid_argument&) {
    throw ParseError(0, 1, "malformed number '" + t + "'");
  }
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Monomial& m) {
  std::string out;
  for (const auto& [v, e] : m.factors()) {
    if (!out.empty()) out += '*';
    out += to_string(v);
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += to_string(m);
    } else {
      out += mag.get_str() + "*" + to_string(m);
    }
  }
  return out;
}

std::string to_string(const RationalFunction& f) {
  if (f.den() == Polynomial(1)) return to_string(f.num());
  return "(" + to_string(f.num()) + ")/(" + to_string(f.den()) + ")";
}

}  // namespace kahan
