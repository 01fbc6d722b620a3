#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "multipoly.hpp"

namespace ka {

namespace {

using Expr = std::vector<ExpPolyTerm>;

class Parser {
 public:
  Parser(const std::string& text, int dim, Mode mode) : s_(text), dim_(dim), mode_(mode) {
    require(dim >= 1, ErrorCode::invalid_argument, "dimension must be >= 1");
  }

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorCode::parse, msg + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::vector<Scalar> zero_freq() const { return std::vector<Scalar>(dim_, Scalar::zero(mode_)); }

  Expr constant(const Scalar& c) const {
    if (c.is_zero()) return {};
    return {ExpPolyTerm{zero_freq(), MultiPoly::constant(dim_, c)}};
  }

  static void add_into(Expr& a, const ExpPolyTerm& t) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (it->freq == t.freq) {
        it->poly += t.poly;
        if (it->poly.is_zero()) a.erase(it);
        return;
      }
    }
    if (!t.poly.is_zero()) a.push_back(t);
  }

  static Expr add(Expr a, const Expr& b) {
    for (auto& t : b) add_into(a, t);
    return a;
  }

  static Expr neg(Expr a) {
    for (auto& t : a) t.poly = -t.poly;
    return a;
  }

  Expr mul(const Expr& a, const Expr& b) const {
    Expr r;
    for (auto& ta : a)
      for (auto& tb : b) {
        ExpPolyTerm t{ta.freq, ta.poly * tb.poly};
        for (int j = 0; j < dim_; ++j) t.freq[j] += tb.freq[j];
        add_into(r, t);
      }
    return r;
  }

  Expr expr() {
    skip_ws();
    Expr e;
    if (accept('-'))
      e = neg(term());
    else {
      accept('+');
      e = term();
    }
    for (;;) {
      if (accept('+'))
        e = add(std::move(e), term());
      else if (accept('-'))
        e = add(std::move(e), neg(term()));
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = mul(e, unary());
      } else if (accept('/')) {
        Expr d = unary();
        if (d.size() != 1 || d[0].poly.degree() != 0 ||
            d[0].freq != zero_freq())
          error("division only by nonzero constants");
        Scalar c = d[0].poly.coeff(Exponent(dim_, 0));
        for (auto& t : e) t.poly *= Scalar::one(mode_) / c;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) error("expected a nonnegative integer exponent");
      int n = std::stoi(s_.substr(start, pos_ - start));
      Expr r = constant(Scalar::one(mode_));
      for (int k = 0; k < n; ++k) r = mul(r, base);
      return r;
    }
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "i") return constant(Scalar::imag_unit(mode_));
      if (id == "pi") {
        if (mode_ == Mode::exact) error("'pi' is not exact; use float mode");
        return constant(Scalar::floating({std::numbers::pi, 0.0}));
      }
      if (id == "exp") return exponential();
      if (id.size() >= 2 && id[0] == 'x') {
        bool digits = true;
        for (std::size_t k = 1; k < id.size(); ++k)
          digits = digits && std::isdigit(static_cast<unsigned char>(id[k]));
        if (digits) {
          int j = std::stoi(id.substr(1));
          if (j < 1 || j > dim_) error("variable " + id + " outside dimension " + std::to_string(dim_));
          return {ExpPolyTerm{zero_freq(), MultiPoly::variable(dim_, j - 1, mode_)}};
        }
      }
      pos_ = start;
      error("unknown identifier '" + id + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  Expr exponential() {
    if (!accept('(')) error("expected '(' after exp");
    Expr arg = expr();
    if (!accept(')')) error("expected ')'");
    if (arg.empty()) return constant(Scalar::one(mode_));
    if (arg.size() != 1 || arg[0].freq != zero_freq() || arg[0].poly.degree() > 1 ||
        !arg[0].poly.coeff(Exponent(dim_, 0)).is_zero())
      error("exp() argument must be linear in x with no constant term");
    ExpPolyTerm t{zero_freq(), MultiPoly::constant(dim_, Scalar::one(mode_))};
    Scalar minus_i = -Scalar::imag_unit(mode_);
    for (int j = 0; j < dim_; ++j) {
      Exponent a(dim_, 0);
      a[j] = 1;
      t.freq[j] = minus_i * arg[0].poly.coeff(a);
    }
    return {t};
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string tok = s_.substr(start, pos_ - start);
    if (mode_ == Mode::exact) return constant(Scalar::exact(parse_rational(tok)));
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') error("bad number '" + tok + "'");
    return constant(Scalar::floating({v, 0.0}));
  }

  std::string s_;
  int dim_;
  Mode mode_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<ExpPolyTerm> parse_exp_poly(const std::string& text, int dim, Mode mode) {
  return Parser(text, dim, mode).parse();
}

MultiPoly parse_poly(const std::string& text, int dim, Mode mode) {
  auto e = parse_exp_poly(text, dim, mode);
  MultiPoly p(dim, mode);
  for (auto& t : e) {
    for (auto& f : t.freq)
      if (!f.is_zero()) fail(ErrorCode::parse, "exponential factor in a polynomial: \"" + text + "\"");
    p += t.poly;
  }
  return p;
}

}  // namespace ka
