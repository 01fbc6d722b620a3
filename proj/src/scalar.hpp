#pragma once

#include <complex>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "error.hpp"

namespace ka {

using cplx = std::complex<double>;

enum class Mode { exact, floating };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& s);

// Complex scalar, either exact (rational real and imaginary parts) or
// double precision. Arithmetic between the two modes throws.
class Scalar {
 public:
  Scalar() : v_(Exact{}) {}
  Scalar(long n) : v_(Exact{mpq_class(n), mpq_class(0)}) {}
  Scalar(int n) : Scalar(static_cast<long>(n)) {}

  static Scalar exact(const mpq_class& re, const mpq_class& im = 0);
  static Scalar floating(cplx z);
  static Scalar zero(Mode m);
  static Scalar one(Mode m);
  static Scalar imag_unit(Mode m);
  static Scalar integer(long n, Mode m);
  // i^k for integer k >= 0 in the given mode
  static Scalar i_pow(int k, Mode m);

  Mode mode() const {
    return std::holds_alternative<Exact>(v_) ? Mode::exact : Mode::floating;
  }
  bool is_exact() const { return mode() == Mode::exact; }
  bool is_zero() const;
  bool is_real() const;
  bool is_imag() const;

  const mpq_class& re_q() const;
  const mpq_class& im_q() const;
  cplx to_complex() const;
  double abs() const { return std::abs(to_complex()); }

  Scalar to_mode(Mode m) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar conj() const;

  // "p/q" strings for exact, "%.17g" for floating
  std::string re_string() const;
  std::string im_string() const;
  static Scalar from_strings(const std::string& re, const std::string& im,
                             Mode m);

  // coefficient text used by the polynomial printer; see multipoly.cpp
  std::string to_string() const;

 private:
  struct Exact {
    mpq_class re, im;
  };
  explicit Scalar(Exact e) : v_(std::move(e)) {}
  explicit Scalar(cplx z) : v_(z) {}
  void check_same(const Scalar& o) const;

  std::variant<Exact, cplx> v_;
};

mpq_class parse_rational(const std::string& s);
std::string format_double(double x);

}  // namespace ka
