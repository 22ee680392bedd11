#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wrlat/field.hpp"
#include "wrlat/integer.hpp"
#include "wrlat/modules.hpp"
#include "wrlat/periods.hpp"
#include "wrlat/precision.hpp"

namespace wrlat {

using CoefficientVector = std::vector<std::int64_t>;

struct ShortVectorReport {
  std::size_t dimension = 0;
  Integer minimum;
  std::vector<CoefficientVector> minimal_vectors;  // one per +- pair, first nonzero entry positive, sorted
  std::size_t span_rank = 0;
  bool well_rounded = false;
  std::vector<CoefficientVector> witness;  // dimension independent minimal vectors when well rounded
  std::string source;
};

inline constexpr std::size_t kMaxEnumerationDimension = 13;

struct EnumerationOptions {
  /// Starting squared radius; defaults to the smallest diagonal entry.
  std::optional<Integer> initial_bound;
};

/// Exact minimum and all minimal vectors of a positive definite integer Gram
/// matrix by Schnorr-Euchner enumeration. Floating point only prunes; every
/// accepted norm is evaluated in integer arithmetic.
ShortVectorReport enumerate_minimum(const IntMatrix& gram, EnumerationOptions options = {});
ShortVectorReport enumerate_minimum(const GramMatrix& gram, EnumerationOptions options = {});

struct ClosedFormCheck {
  Integer closed_min;
  Integer enum_min;
  bool agree = false;
  ShortVectorReport report;
};

ClosedFormCheck verify_closed_form(const ModuleBasis& basis);

struct CirculantCheck {
  double det_numeric = 0.0;
  bool nonzero = false;
  std::vector<double> factor_moduli;  // |f(zeta_p^i)|, i = 0..p-1
  double tolerance = 0.0;
  double factor_tolerance = 0.0;
  double det_from_coordinates = 0.0;  // det(orbit coordinates) * det(embedding)
  int precision_bits = 53;
  Rational trace;
};

/// det of the circulant of conjugates of alpha as prod_i f(zeta_p^i) with
/// f(x) = sum_k sigma_{g^k}(alpha) x^k. Precision escalates (up to 4x the
/// starting tier) while the product looks zero although Tr(alpha) != 0.
CirculantCheck circulant_det_check(const Element& alpha, const CharacterChoice& choice, Precision start = {});

struct OrbitSublattice {
  std::vector<Element> orbit;  // alpha, theta(alpha), ...
  IntMatrix coords;
  GramMatrix gram;
  std::size_t rank = 0;
  bool full_rank = false;
  bool circulant = false;
  bool equal_norms = false;
  Rational trace;
  std::optional<ShortVectorReport> report;  // only when full rank
};

/// Galois orbit of alpha and its Gram under the trace form.
OrbitSublattice orbit_sublattice(const Element& alpha);

}  // namespace wrlat
