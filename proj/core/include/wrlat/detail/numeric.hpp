#pragma once

// Precision-generic numeric kernels shared by the periods and circulant code.

#include <cmath>
#include <cstdint>
#include <type_traits>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "wrlat/error.hpp"
#include "wrlat/field.hpp"
#include "wrlat/periods.hpp"

namespace wrlat::detail {

__extension__ typedef __int128 Int128;
__extension__ typedef unsigned __int128 UInt128;

template <class Real>
struct KahanSum {
  Real sum{0};
  Real carry{0};

  void add(const Real& value) {
    const Real y = value - carry;
    const Real t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

template <class Real>
struct Complex {
  Real re{0};
  Real im{0};

  Complex operator*(const Complex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
  Real abs() const {
    using std::sqrt;
    return sqrt(re * re + im * im);
  }
};

template <class Real>
Complex<Real> root_of_unity(std::int64_t numerator, std::int64_t denominator) {
  using std::cos;
  using std::sin;
  numerator %= denominator;
  if (numerator < 0) numerator += denominator;
  const Real angle = boost::math::constants::two_pi<Real>() * Real(numerator) / Real(denominator);
  return {cos(angle), sin(angle)};
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>((static_cast<Int128>(a) * b) % n);
}

inline std::int64_t pow_mod(std::int64_t base, std::int64_t exponent, std::int64_t n) {
  std::int64_t result = 1 % n;
  base %= n;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, n);
    base = mul_mod(base, base, n);
    exponent >>= 1;
  }
  return result;
}

inline constexpr double kImaginaryTolerance = 1e-9;

/// Periods at working precision `Real`; throws PrecisionLoss when the
/// imaginary residual of any coset sum exceeds tolerance.
template <class Real>
std::vector<Real> periods_at(const CharacterChoice& choice) {
  using std::abs;
  const std::int64_t n = choice.field.n;
  const auto p = static_cast<std::size_t>(choice.field.p);
  std::vector<Real> eta(p);
  std::int64_t shift = 1;
  for (std::size_t i = 0; i < p; ++i) {
    KahanSum<Real> re, im;
    for (const std::int64_t h : choice.kernel) {
      const auto z = root_of_unity<Real>(mul_mod(shift, h, n), n);
      re.add(z.re);
      im.add(z.im);
    }
    if (abs(im.sum) > Real(kImaginaryTolerance))
      throw Error(ErrorKind::PrecisionLoss, "Gaussian period has a non-negligible imaginary part");
    eta[i] = re.sum;
    shift = mul_mod(shift, choice.coset_generator, n);
  }
  return eta;
}

/// Row-major p x p conjugate table of the integral basis.
template <class Real>
std::vector<Real> embedding_at(const CharacterChoice& choice) {
  const std::vector<Real> eta = periods_at<Real>(choice);
  const std::size_t p = eta.size();
  std::vector<Real> rows(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) rows[i * p + j] = eta[(i + j) % p];
  if (choice.field.ramified)
    for (std::size_t j = 0; j < p; ++j) rows[j] = Real(1);
  return rows;
}

template <class Real>
Real to_real(const Integer& value) {
  if constexpr (std::is_same_v<Real, double>) {
    return value.convert_to<double>();
  } else {
    return Real(value);
  }
}

template <class Real>
std::vector<Real> conjugates_at(const std::vector<Real>& embedding, const Element& x) {
  const std::size_t p = x.coords().size();
  std::vector<Real> out(p);
  for (std::size_t j = 0; j < p; ++j) {
    KahanSum<Real> acc;
    for (std::size_t i = 0; i < p; ++i) {
      if (x[i] == 0) continue;
      acc.add(to_real<Real>(x[i]) * embedding[i * p + j]);
    }
    out[j] = acc.sum;
  }
  return out;
}

}  // namespace wrlat::detail
