#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>

namespace susylat {

using rational = boost::multiprecision::cpp_rational;

// exact complex scalar with rational real and imaginary parts
struct gaussian_rational {
  rational re, im;

  gaussian_rational() = default;
  gaussian_rational(int n) : re(n) {}
  gaussian_rational(long n) : re(n) {}
  gaussian_rational(rational r) : re(std::move(r)) {}
  gaussian_rational(rational r, rational i) : re(std::move(r)), im(std::move(i)) {}

  static gaussian_rational i() { return {rational(0), rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  gaussian_rational conj() const { return {re, -im}; }

  std::complex<double> to_complex() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }

  // |re| + |im|, an exact upper bound for the modulus
  rational abs_upper() const {
    return (re < 0 ? rational(-re) : re) + (im < 0 ? rational(-im) : im);
  }

  friend gaussian_rational operator+(const gaussian_rational& a, const gaussian_rational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend gaussian_rational operator-(const gaussian_rational& a, const gaussian_rational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend gaussian_rational operator-(const gaussian_rational& a) { return {-a.re, -a.im}; }
  friend gaussian_rational operator*(const gaussian_rational& a, const gaussian_rational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  gaussian_rational& operator+=(const gaussian_rational& b) {
    re += b.re, im += b.im;
    return *this;
  }
  gaussian_rational& operator-=(const gaussian_rational& b) {
    re -= b.re, im -= b.im;
    return *this;
  }
  gaussian_rational& operator*=(const gaussian_rational& b) { return *this = *this * b; }
  friend bool operator==(const gaussian_rational& a, const gaussian_rational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

// uniform scalar interface so the symbolic algebra works over exact
// rationals and over complex doubles with the same code
template <class S>
struct scalar_ops;

template <>
struct scalar_ops<gaussian_rational> {
  static gaussian_rational conj(const gaussian_rational& z) { return z.conj(); }
  static bool is_zero(const gaussian_rational& z) { return z.is_zero(); }
  static gaussian_rational from_int(long n) { return gaussian_rational(n); }
  static gaussian_rational i() { return gaussian_rational::i(); }
  static std::complex<double> to_complex(const gaussian_rational& z) { return z.to_complex(); }
  static double abs(const gaussian_rational& z) { return std::abs(z.to_complex()); }
  static std::string str(const gaussian_rational& z) {
    std::ostringstream os;
    os << "(" << z.re << "," << z.im << ")";
    return os.str();
  }
};

template <>
struct scalar_ops<std::complex<double>> {
  static std::complex<double> conj(const std::complex<double>& z) { return std::conj(z); }
  static bool is_zero(const std::complex<double>& z) { return z.real() == 0.0 && z.imag() == 0.0; }
  static std::complex<double> from_int(long n) { return {static_cast<double>(n), 0.0}; }
  static std::complex<double> i() { return {0.0, 1.0}; }
  static std::complex<double> to_complex(const std::complex<double>& z) { return z; }
  static double abs(const std::complex<double>& z) { return std::abs(z); }
  static std::string str(const std::complex<double>& z) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << "," << z.imag() << ")";
    return os.str();
  }
};

}  // namespace susylat
