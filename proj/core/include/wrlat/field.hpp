#pragma once

// Cyclic number fields K of odd prime degree p and conductor n, described
// through the integral basis built from t = Tr_{Q(zeta_n)/K}(zeta_n) and a
// generator theta of Gal(K/Q):
//   unramified (p does not divide n): {t, theta(t), ..., theta^{p-1}(t)}
//   ramified   (n = p^2 p_1 ... p_s):  {1, theta(t), ..., theta^{p-1}(t)}
// Element coordinates are always read over that basis.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wrlat/integer.hpp"

namespace wrlat {

struct PrimePower {
  std::int64_t prime = 0;
  int exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FieldSpec {
  std::int64_t p = 0;
  std::int64_t n = 0;
  bool ramified = false;
  std::vector<PrimePower> factorization;  // of n, ascending primes
  std::vector<std::int64_t> primes;       // the p_i != p, ascending
  std::int64_t u = 0;                     // n / p^2 when ramified, else 0
  int s = 0;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime(std::int64_t value);
std::vector<PrimePower> factorize(std::int64_t value);

/// Classifies (p, n) as a conductor of a cyclic field of degree p.
FieldSpec validate_field(std::int64_t p, std::int64_t n);

/// |D(K)| = n^{p-1}.
Integer discriminant(const FieldSpec& field);

enum class Provenance { ClosedForm, DerivedNumeric };

/// Tr(1), Tr(theta^i(t)) and the pair traces Tr(t theta^k(t)); the latter
/// depend only on k mod p.
struct TraceTable {
  FieldSpec field;
  Integer tr_one;
  Integer tr_theta;
  Integer tr_pair_diag;
  Integer tr_pair_off;
  Provenance tr_one_source = Provenance::ClosedForm;
  Provenance tr_theta_source = Provenance::ClosedForm;
  Provenance tr_pair_diag_source = Provenance::ClosedForm;
  Provenance tr_pair_off_source = Provenance::ClosedForm;

  const Integer& pair(std::int64_t power_difference) const {
    return power_difference % field.p == 0 ? tr_pair_diag : tr_pair_off;
  }
};

struct PairTraces {
  Integer diag;
  Integer off;
};

/// Closed-form table; unramified fields need derived pair traces and throw
/// MissingDerivedData here.
TraceTable trace_table(const FieldSpec& field);

/// Table for an unramified field from derived pair traces (validated).
TraceTable trace_table(const FieldSpec& field, const PairTraces& derived);

/// Checks the integral-basis Gram built from the table: symmetric positive
/// definite with determinant n^{p-1}. Throws InconsistentTraces.
void validate_trace_table(const TraceTable& table);

class Field {
 public:
  explicit Field(TraceTable traces) : traces_(std::move(traces)) {}

  const FieldSpec& spec() const noexcept { return traces_.field; }
  const TraceTable& traces() const noexcept { return traces_; }
  std::int64_t degree() const noexcept { return traces_.field.p; }

 private:
  TraceTable traces_;
};

using FieldPtr = std::shared_ptr<const Field>;

FieldPtr make_field(TraceTable traces);

/// An element of O_K (or K with integral coordinates) over the integral basis.
class Element {
 public:
  Element(FieldPtr field, std::vector<Integer> coords);

  static Element zero(const FieldPtr& field);
  static Element one(const FieldPtr& field);
  static Element basis(const FieldPtr& field, std::size_t index);
  /// theta^k(t); in the ramified case t is normalized as -sum_{i>=1} theta^i(t).
  static Element theta_power_of_t(const FieldPtr& field, std::int64_t k);

  const FieldPtr& field() const noexcept { return field_; }
  std::span<const Integer> coords() const noexcept { return coords_; }
  const Integer& operator[](std::size_t i) const { return coords_[i]; }

  /// Galois action theta applied `times` times.
  Element apply_theta(std::int64_t times = 1) const;
  /// Fixed by theta, i.e. a rational integer.
  bool is_rational_integer() const;

  Element operator+(const Element& other) const;
  Element operator-(const Element& other) const;
  Element operator-() const;
  friend Element operator*(const Integer& scalar, const Element& x);

  bool operator==(const Element& other) const;

 private:
  FieldPtr field_;
  std::vector<Integer> coords_;
};

void require_same_field(const Element& x, const Element& y);

Rational trace_linear(const Element& x);
/// Tr(x y) expanded bilinearly over the trace table.
Rational trace_bilinear(const Element& x, const Element& y);

}  // namespace wrlat
