#include "scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace ka {

std::string mode_name(Mode m) { return m == Mode::exact ? "exact" : "float"; }

Mode mode_from_name(const std::string& s) {
  if (s == "exact") return Mode::exact;
  if (s == "float" || s == "floating") return Mode::floating;
  fail(ErrorCode::invalid_argument, "unknown scalar mode '" + s + "'");
}

Scalar Scalar::exact(const mpq_class& re, const mpq_class& im) {
  return Scalar(Exact{re, im});
}

Scalar Scalar::floating(cplx z) { return Scalar(z); }

Scalar Scalar::zero(Mode m) {
  return m == Mode::exact ? Scalar() : Scalar(cplx(0.0, 0.0));
}

Scalar Scalar::one(Mode m) { return integer(1, m); }

Scalar Scalar::imag_unit(Mode m) {
  return m == Mode::exact ? exact(0, 1) : floating(cplx(0.0, 1.0));
}

Scalar Scalar::integer(long n, Mode m) {
  return m == Mode::exact ? Scalar(n) : floating(cplx(double(n), 0.0));
}

Scalar Scalar::i_pow(int k, Mode m) {
  switch (((k % 4) + 4) % 4) {
    case 0: return integer(1, m);
    case 1: return imag_unit(m);
    case 2: return integer(-1, m);
    default: return -imag_unit(m);
  }
}

bool Scalar::is_zero() const {
  if (auto e = std::get_if<Exact>(&v_)) return sgn(e->re) == 0 && sgn(e->im) == 0;
  auto z = std::get<cplx>(v_);
  return z.real() == 0.0 && z.imag() == 0.0;
}

bool Scalar::is_real() const {
  if (auto e = std::get_if<Exact>(&v_)) return sgn(e->im) == 0;
  return std::get<cplx>(v_).imag() == 0.0;
}

bool Scalar::is_imag() const {
  if (auto e = std::get_if<Exact>(&v_)) return sgn(e->re) == 0;
  return std::get<cplx>(v_).real() == 0.0;
}

const mpq_class& Scalar::re_q() const {
  auto e = std::get_if<Exact>(&v_);
  require(e != nullptr, ErrorCode::mode, "rational part requested from a float scalar");
  return e->re;
}

const mpq_class& Scalar::im_q() const {
  auto e = std::get_if<Exact>(&v_);
  require(e != nullptr, ErrorCode::mode, "rational part requested from a float scalar");
  return e->im;
}

cplx Scalar::to_complex() const {
  if (auto e = std::get_if<Exact>(&v_)) return {e->re.get_d(), e->im.get_d()};
  return std::get<cplx>(v_);
}

Scalar Scalar::to_mode(Mode m) const {
  if (m == mode()) return *this;
  if (m == Mode::floating) return floating(to_complex());
  auto z = std::get<cplx>(v_);
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::numeric,
          "non-finite value cannot be made exact");
  return exact(mpq_class(z.real()), mpq_class(z.imag()));
}

void Scalar::check_same(const Scalar& o) const {
  if (mode() != o.mode())
    fail(ErrorCode::mode, "mixed exact/float arithmetic");
}

Scalar Scalar::operator-() const {
  if (auto e = std::get_if<Exact>(&v_)) return exact(-e->re, -e->im);
  return floating(-std::get<cplx>(v_));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same(o);
  if (auto e = std::get_if<Exact>(&v_)) {
    auto& f = std::get<Exact>(o.v_);
    e->re += f.re;
    e->im += f.im;
  } else {
    std::get<cplx>(v_) += std::get<cplx>(o.v_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_same(o);
  if (auto e = std::get_if<Exact>(&v_)) {
    auto& f = std::get<Exact>(o.v_);
    e->re -= f.re;
    e->im -= f.im;
  } else {
    std::get<cplx>(v_) -= std::get<cplx>(o.v_);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same(o);
  if (auto e = std::get_if<Exact>(&v_)) {
    auto& f = std::get<Exact>(o.v_);
    if (sgn(e->im) == 0 && sgn(f.im) == 0) {
      e->re *= f.re;
      return *this;
    }
    mpq_class re = e->re * f.re - e->im * f.im;
    mpq_class im = e->re * f.im + e->im * f.re;
    e->re = std::move(re);
    e->im = std::move(im);
  } else {
    std::get<cplx>(v_) *= std::get<cplx>(o.v_);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  check_same(o);
  require(!o.is_zero(), ErrorCode::numeric, "division by zero");
  if (auto e = std::get_if<Exact>(&v_)) {
    auto& f = std::get<Exact>(o.v_);
    mpq_class den = f.re * f.re + f.im * f.im;
    mpq_class re = (e->re * f.re + e->im * f.im) / den;
    mpq_class im = (e->im * f.re - e->re * f.im) / den;
    e->re = std::move(re);
    e->im = std::move(im);
  } else {
    std::get<cplx>(v_) /= std::get<cplx>(o.v_);
  }
  return *this;
}

bool Scalar::operator==(const Scalar& o) const {
  if (mode() != o.mode()) return false;
  if (auto e = std::get_if<Exact>(&v_)) {
    auto& f = std::get<Exact>(o.v_);
    return e->re == f.re && e->im == f.im;
  }
  return std::get<cplx>(v_) == std::get<cplx>(o.v_);
}

Scalar Scalar::conj() const {
  if (auto e = std::get_if<Exact>(&v_)) return exact(e->re, -e->im);
  return floating(std::conj(std::get<cplx>(v_)));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string Scalar::re_string() const {
  if (auto e = std::get_if<Exact>(&v_)) return e->re.get_str();
  return format_double(std::get<cplx>(v_).real());
}

std::string Scalar::im_string() const {
  if (auto e = std::get_if<Exact>(&v_)) return e->im.get_str();
  return format_double(std::get<cplx>(v_).imag());
}

mpq_class parse_rational(const std::string& s) {
  require(!s.empty(), ErrorCode::parse, "empty number");
  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) fail(ErrorCode::parse, "bad rational '" + s + "'");
    require(q.get_den() != 0, ErrorCode::parse, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  // decimal with optional exponent, converted exactly
  std::size_t pos = 0;
  bool neg = false;
  if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
  std::string digits;
  long frac = 0;
  bool any = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    digits += s[pos++];
    any = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits += s[pos++];
      ++frac;
      any = true;
    }
  }
  require(any, ErrorCode::parse, "bad number '" + s + "'");
  long ex = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    std::string rest = s.substr(pos);
    char* end = nullptr;
    ex = std::strtol(rest.c_str(), &end, 10);
    require(end != rest.c_str() && *end == '\0', ErrorCode::parse,
            "bad exponent in '" + s + "'");
    pos = s.size();
  }
  require(pos == s.size(), ErrorCode::parse, "bad number '" + s + "'");
  require(std::labs(ex - frac) < 4000, ErrorCode::parse, "exponent out of range in '" + s + "'");
  mpz_class num(digits, 10);
  mpz_class ten(10), scale;
  long e = ex - frac;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
  mpq_class q = e >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

Scalar Scalar::from_strings(const std::string& re, const std::string& im, Mode m) {
  if (m == Mode::exact) return exact(parse_rational(re), parse_rational(im));
  char* e1 = nullptr;
  char* e2 = nullptr;
  double a = std::strtod(re.c_str(), &e1);
  double b = std::strtod(im.c_str(), &e2);
  require(e1 != re.c_str() && *e1 == '\0' && e2 != im.c_str() && *e2 == '\0',
          ErrorCode::parse, "bad float scalar '" + re + "', '" + im + "'");
  return floating({a, b});
}

std::string Scalar::to_string() const {
  std::string r = re_string(), i = im_string();
  if (is_imag() && !is_zero()) return i == "1" ? "i" : (i == "-1" ? "-i" : i + "*i");
  if (is_real()) return r;
  std::string s = "(" + r;
  if (i[0] == '-')
    s += " - " + i.substr(1) + "*i)";
  else
    s += " + " + i + "*i)";
  return s;
}

}  // namespace ka
