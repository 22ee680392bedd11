#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace wrlat {

using Real106 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<106, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;
using Real212 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<212, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;
using Real424 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<424, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

/// Working precision in mantissa bits. Requests are rounded up to one of the
/// supported tiers: 53 (IEEE double), 106, 212, 424.
struct Precision {
  int bits = 53;

  int tier() const;
  Precision doubled() const { return Precision{tier() * 2}; }

  friend bool operator==(const Precision&, const Precision&) = default;
};

inline constexpr int kMaxPrecisionBits = 424;

/// Reads WRLAT_PRECISION_BITS; falls back to 53.
Precision precision_from_environment();

/// Calls `fn(Real{})` with the floating type matching the precision tier.
template <class Fn>
decltype(auto) dispatch_precision(Precision precision, Fn&& fn) {
  switch (precision.tier()) {
    case 53:
      return fn(double{});
    case 106:
      return fn(Real106{});
    case 212:
      return fn(Real212{});
    default:
      return fn(Real424{});
  }
}

}  // namespace wrlat
