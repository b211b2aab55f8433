#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sympcon {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

/// Exact rational scalar. All algebraic modules compute over this type (or
/// over Gaussian, below); no floating point enters until contactflow.
using Rational =
    boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

inline BigInt num(const Rational& r) { return BigInt(boost::multiprecision::numerator(r)); }
inline BigInt den(const Rational& r) { return BigInt(boost::multiprecision::denominator(r)); }

inline bool is_zero(const Rational& r) { return r.is_zero(); }

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << num(r);
  if (den(r) != 1) os << "/" << den(r);
  return os.str();
}

inline Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact square root of a rational that is a perfect square; throws otherwise.
inline Rational exact_sqrt(const Rational& r) {
  if (r < 0) throw std::domain_error("exact_sqrt: negative argument");
  BigInt n = boost::multiprecision::sqrt(num(r));
  BigInt d = boost::multiprecision::sqrt(den(r));
  if (n * n != num(r) || d * d != den(r))
    throw std::domain_error("exact_sqrt: not a perfect square");
  return Rational(n, d);
}

/// Gaussian rational x + iy. Used for matrix models of the realified
/// su(p,q) families; the exposed Lie algebras stay over Rational.
struct Gaussian {
  Rational re{0}, im{0};

  Gaussian() = default;
  Gaussian(Rational r) : re(std::move(r)) {}
  Gaussian(long r) : re(r) {}
  Gaussian(int r) : re(r) {}
  Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static Gaussian i() { return Gaussian(Rational(0), Rational(1)); }

  bool operator==(const Gaussian& o) const { return re == o.re && im == o.im; }
  bool operator!=(const Gaussian& o) const { return !(*this == o); }
  // lexicographic on (re, im); used only for deterministic tie-breaking
  bool operator<(const Gaussian& o) const {
    return re < o.re || (re == o.re && im < o.im);
  }
  bool operator>(const Gaussian& o) const { return o < *this; }

  Gaussian operator-() const { return Gaussian(-re, -im); }
  Gaussian operator+(const Gaussian& o) const { return Gaussian(re + o.re, im + o.im); }
  Gaussian operator-(const Gaussian& o) const { return Gaussian(re - o.re, im - o.im); }
  Gaussian operator*(const Gaussian& o) const {
    return Gaussian(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  Gaussian operator/(const Gaussian& o) const {
    Rational n = o.re * o.re + o.im * o.im;
    if (n.is_zero()) throw std::domain_error("Gaussian division by zero");
    return Gaussian((re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n);
  }
  Gaussian& operator+=(const Gaussian& o) { *this = *this + o; return *this; }
  Gaussian& operator-=(const Gaussian& o) { *this = *this - o; return *this; }
  Gaussian& operator*=(const Gaussian& o) { *this = *this * o; return *this; }
  Gaussian& operator/=(const Gaussian& o) { *this = *this / o; return *this; }
};

inline Gaussian conj(const Gaussian& g) { return Gaussian(g.re, -g.im); }
inline bool is_zero(const Gaussian& g) { return g.re.is_zero() && g.im.is_zero(); }

inline std::string to_string(const Gaussian& g) {
  if (g.im.is_zero()) return to_string(g.re);
  return to_string(g.re) + (g.im >= 0 ? "+" : "") + to_string(g.im) + "i";
}

// Scalar concept shims so templated code treats Rational and Gaussian alike.
inline Rational conj(const Rational& r) { return r; }
inline Rational real_part(const Rational& r) { return r; }
inline Rational imag_part(const Rational&) { return Rational(0); }
inline Rational real_part(const Gaussian& g) { return g.re; }
inline Rational imag_part(const Gaussian& g) { return g.im; }

}  // namespace sympcon
