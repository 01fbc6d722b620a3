#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "error.hpp"

namespace ka {

// Truncated Taylor series about a fixed center: a[k] = f^{(k)}(c) / k!.
template <class T>
class Jet {
 public:
  explicit Jet(int order = 0) : a_(static_cast<std::size_t>(order) + 1, T(0)) {}

  static Jet constant(const T& c, int order) {
    Jet j(order);
    j.a_[0] = c;
    return j;
  }
  static Jet variable(const T& c, int order) {
    Jet j(order);
    j.a_[0] = c;
    if (order >= 1) j.a_[1] = T(1);
    return j;
  }

  int order() const { return static_cast<int>(a_.size()) - 1; }
  const T& coeff(int k) const { return a_[k]; }
  T& coeff(int k) { return a_[k]; }
  const T& value() const { return a_[0]; }
  T derivative(int k) const {
    T f = a_[k];
    for (int j = 2; j <= k; ++j) f *= T(j);
    return f;
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& v : r.a_) v = -v;
    return r;
  }
  Jet& operator+=(const Jet& o) {
    check_order(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_order(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Jet& operator+=(const T& c) {
    a_[0] += c;
    return *this;
  }
  Jet& operator*=(const T& c) {
    for (auto& v : a_) v *= c;
    return *this;
  }
  friend Jet operator+(Jet x, const Jet& y) { return x += y; }
  friend Jet operator-(Jet x, const Jet& y) { return x -= y; }
  friend Jet operator+(Jet x, const T& c) { return x += c; }
  friend Jet operator+(const T& c, Jet x) { return x += c; }
  friend Jet operator-(const T& c, const Jet& x) { return (-x) += c; }
  friend Jet operator*(Jet x, const T& c) { return x *= c; }
  friend Jet operator*(const T& c, Jet x) { return x *= c; }

  friend Jet operator*(const Jet& x, const Jet& y) {
    x.check_order(y);
    int n = x.order();
    Jet r(n);
    for (int k = 0; k <= n; ++k) {
      T s(0);
      for (int j = 0; j <= k; ++j) s += x.a_[j] * y.a_[k - j];
      r.a_[k] = s;
    }
    return r;
  }

  friend Jet reciprocal(const Jet& x) {
    int n = x.order();
    Jet r(n);
    r.a_[0] = T(1) / x.a_[0];
    for (int k = 1; k <= n; ++k) {
      T s(0);
      for (int j = 1; j <= k; ++j) s += x.a_[j] * r.a_[k - j];
      r.a_[k] = -s * r.a_[0];
    }
    return r;
  }

  friend Jet operator/(const Jet& x, const Jet& y) { return x * reciprocal(y); }

  friend Jet exp(const Jet& x) {
    using std::exp;
    int n = x.order();
    Jet r(n);
    r.a_[0] = exp(x.a_[0]);
    for (int k = 1; k <= n; ++k) {
      T s(0);
      for (int j = 1; j <= k; ++j) s += T(j) * x.a_[j] * r.a_[k - j];
      r.a_[k] = s / T(k);
    }
    return r;
  }

  friend Jet log(const Jet& x) {
    using std::log;
    int n = x.order();
    Jet r(n);
    r.a_[0] = log(x.a_[0]);
    for (int k = 1; k <= n; ++k) {
      T s(0);
      for (int j = 1; j < k; ++j) s += T(j) * r.a_[j] * x.a_[k - j];
      r.a_[k] = (x.a_[k] - s / T(k)) / x.a_[0];
    }
    return r;
  }

  // x^p for a jet with nonzero constant term
  template <class P>
  friend Jet pow(const Jet& x, const P& p) {
    using std::pow;
    int n = x.order();
    Jet r(n);
    r.a_[0] = pow(x.a_[0], p);
    T pp(p);
    for (int k = 1; k <= n; ++k) {
      T s(0);
      for (int j = 1; j <= k; ++j) s += ((pp + T(1)) * T(j) - T(k)) * x.a_[j] * r.a_[k - j];
      r.a_[k] = s / (T(k) * x.a_[0]);
    }
    return r;
  }

 private:
  void check_order(const Jet& o) const {
    require(o.a_.size() == a_.size(), ErrorCode::invalid_argument, "jet order mismatch");
  }
  std::vector<T> a_;
};

}  // namespace ka
