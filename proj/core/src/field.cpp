#include "wrlat/field.hpp"

#include <sstream>

#include "wrlat/error.hpp"

namespace wrlat {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::EvenOrTwo: return "EvenOrTwo";
    case ErrorKind::BadConductor: return "BadConductor";
    case ErrorKind::MissingDerivedData: return "MissingDerivedData";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::InconsistentTraces: return "InconsistentTraces";
    case ErrorKind::WrongCase: return "WrongCase";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::AlphaRational: return "AlphaRational";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Unknown";
}

bool is_prime(std::int64_t value) {
  if (value < 2) return false;
  if (value % 2 == 0) return value == 2;
  for (std::int64_t d = 3; d * d <= value; d += 2)
    if (value % d == 0) return false;
  return true;
}

std::vector<PrimePower> factorize(std::int64_t value) {
  std::vector<PrimePower> out;
  for (std::int64_t d = 2; d * d <= value; ++d) {
    if (value % d != 0) continue;
    PrimePower pp{d, 0};
    while (value % d == 0) {
      value /= d;
      ++pp.exponent;
    }
    out.push_back(pp);
  }
  if (value > 1) out.push_back({value, 1});
  return out;
}

FieldSpec validate_field(std::int64_t p, std::int64_t n) {
  if (p == 2 || (p > 2 && p % 2 == 0)) throw Error(ErrorKind::EvenOrTwo, "degree " + std::to_string(p) + " is even");
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, "degree " + std::to_string(p) + " is not prime");
  if (n < 2) throw Error(ErrorKind::BadConductor, "conductor must be at least 2, got " + std::to_string(n));

  FieldSpec spec;
  spec.p = p;
  spec.n = n;
  spec.factorization = factorize(n);
  int p_valuation = 0;
  for (const auto& [q, e] : spec.factorization) {
    if (q == p) {
      p_valuation = e;
      continue;
    }
    if (q % p != 1) {
      std::ostringstream msg;
      msg << n << " has a factor " << q << " not congruent to 1 mod " << p;
      throw Error(ErrorKind::BadConductor, msg.str());
    }
    if (e > 1) {
      std::ostringstream msg;
      msg << n << " has the repeated factor " << q << "^" << e;
      throw Error(ErrorKind::BadConductor, msg.str());
    }
    spec.primes.push_back(q);
  }
  if (p_valuation != 0 && p_valuation != 2) {
    std::ostringstream msg;
    msg << "the " << p << "-adic valuation of " << n << " is " << p_valuation << ", must be 0 or 2";
    throw Error(ErrorKind::BadConductor, msg.str());
  }
  spec.ramified = p_valuation == 2;
  spec.s = static_cast<int>(spec.primes.size());
  if (!spec.ramified && spec.s == 0) throw Error(ErrorKind::BadConductor, "unramified conductor needs a prime factor");
  spec.u = spec.ramified ? n / (p * p) : 0;
  return spec;
}

Integer discriminant(const FieldSpec& field) {
  return integer_power(Integer(field.n), static_cast<unsigned>(field.p - 1));
}

TraceTable trace_table(const FieldSpec& field) {
  TraceTable t;
  t.field = field;
  t.tr_one = field.p;
  if (!field.ramified) {
    throw Error(ErrorKind::MissingDerivedData,
                "pair traces of the unramified field (" + std::to_string(field.p) + ", " +
                    std::to_string(field.n) + ") must be derived from Gaussian periods");
  }
  t.tr_theta = 0;
  t.tr_pair_diag = Integer(field.n) * (field.p - 1) / field.p;
  t.tr_pair_off = -Integer(field.n) / field.p;
  return t;
}

TraceTable trace_table(const FieldSpec& field, const PairTraces& derived) {
  if (field.ramified) return trace_table(field);
  TraceTable t;
  t.field = field;
  t.tr_one = field.p;
  t.tr_theta = field.s % 2 == 0 ? 1 : -1;
  t.tr_pair_diag = derived.diag;
  t.tr_pair_off = derived.off;
  t.tr_pair_diag_source = Provenance::DerivedNumeric;
  t.tr_pair_off_source = Provenance::DerivedNumeric;
  validate_trace_table(t);
  return t;
}

namespace {

IntMatrix integral_basis_gram(const TraceTable& t) {
  const auto p = static_cast<std::size_t>(t.field.p);
  IntMatrix g(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      g(i, j) = t.pair(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j));
  if (t.field.ramified) {
    g(0, 0) = t.tr_one;
    for (std::size_t i = 1; i < p; ++i) g(0, i) = g(i, 0) = t.tr_theta;
  }
  return g;
}

}  // namespace

void validate_trace_table(const TraceTable& table) {
  const IntMatrix g = integral_basis_gram(table);
  if (!is_positive_definite(g))
    throw Error(ErrorKind::InconsistentTraces, "integral basis Gram is not positive definite");
  const Integer det = determinant(g);
  if (det != discriminant(table.field))
    throw Error(ErrorKind::InconsistentTraces,
                "integral basis Gram determinant " + to_decimal(det) + " differs from n^(p-1) = " +
                    to_decimal(discriminant(table.field)));
}

FieldPtr make_field(TraceTable traces) {
  validate_trace_table(traces);
  return std::make_shared<const Field>(std::move(traces));
}

Element::Element(FieldPtr field, std::vector<Integer> coords) : field_(std::move(field)), coords_(std::move(coords)) {
  if (!field_) throw Error(ErrorKind::FieldMismatch, "element without a field");
  if (static_cast<std::int64_t>(coords_.size()) != field_->degree())
    throw Error(ErrorKind::BadParams, "element needs exactly p coordinates");
}

Element Element::zero(const FieldPtr& field) {
  return Element(field, std::vector<Integer>(static_cast<std::size_t>(field->degree())));
}

Element Element::one(const FieldPtr& field) {
  std::vector<Integer> c(static_cast<std::size_t>(field->degree()));
  if (field->spec().ramified) {
    c[0] = 1;
  } else {
    // sum_i theta^i(t) = Tr(t) = (-1)^s
    const Integer sign = field->spec().s % 2 == 0 ? 1 : -1;
    for (auto& v : c) v = sign;
  }
  return Element(field, std::move(c));
}

Element Element::basis(const FieldPtr& field, std::size_t index) {
  if (static_cast<std::int64_t>(index) >= field->degree()) throw Error(ErrorKind::BadIndex, "basis index out of range");
  std::vector<Integer> c(static_cast<std::size_t>(field->degree()));
  c[index] = 1;
  return Element(field, std::move(c));
}

Element Element::theta_power_of_t(const FieldPtr& field, std::int64_t k) {
  const std::int64_t p = field->degree();
  k = ((k % p) + p) % p;
  std::vector<Integer> c(static_cast<std::size_t>(p));
  if (field->spec().ramified && k == 0) {
    for (std::size_t i = 1; i < c.size(); ++i) c[i] = -1;
  } else {
    c[static_cast<std::size_t>(k)] = 1;
  }
  return Element(field, std::move(c));
}

Element Element::apply_theta(std::int64_t times) const {
  const auto p = static_cast<std::size_t>(field_->degree());
  times = ((times % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
  std::vector<Integer> c = coords_;
  for (std::int64_t step = 0; step < times; ++step) {
    std::vector<Integer> next(p);
    if (field_->spec().ramified) {
      // Shift the redundant coefficients of theta^0(t)..theta^{p-1}(t)
      // (theta^0 coefficient 0), then absorb the new theta^0 coefficient
      // through sum_i theta^i(t) = 0.
      next[0] = c[0];
      const Integer& wrapped = c[p - 1];
      next[1] = -wrapped;
      for (std::size_t i = 2; i < p; ++i) next[i] = c[i - 1] - wrapped;
    } else {
      for (std::size_t i = 0; i < p; ++i) next[(i + 1) % p] = c[i];
    }
    c = std::move(next);
  }
  return Element(field_, std::move(c));
}

bool Element::is_rational_integer() const { return apply_theta() == *this; }

Element Element::operator+(const Element& other) const {
  require_same_field(*this, other);
  std::vector<Integer> c = coords_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.coords_[i];
  return Element(field_, std::move(c));
}

Element Element::operator-(const Element& other) const {
  require_same_field(*this, other);
  std::vector<Integer> c = coords_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= other.coords_[i];
  return Element(field_, std::move(c));
}

Element Element::operator-() const {
  std::vector<Integer> c = coords_;
  for (auto& v : c) v = -v;
  return Element(field_, std::move(c));
}

Element operator*(const Integer& scalar, const Element& x) {
  std::vector<Integer> c(x.coords_.begin(), x.coords_.end());
  for (auto& v : c) v *= scalar;
  return Element(x.field_, std::move(c));
}

bool Element::operator==(const Element& other) const {
  return field_->spec().p == other.field_->spec().p && field_->spec().n == other.field_->spec().n &&
         coords_ == other.coords_;
}

void require_same_field(const Element& x, const Element& y) {
  const auto& a = x.field()->spec();
  const auto& b = y.field()->spec();
  if (a.p != b.p || a.n != b.n)
    throw Error(ErrorKind::FieldMismatch, "elements belong to different fields");
}

Rational trace_linear(const Element& x) {
  const TraceTable& t = x.field()->traces();
  const auto c = x.coords();
  Integer sum = 0;
  const std::size_t first = t.field.ramified ? 1 : 0;
  for (std::size_t i = first; i < c.size(); ++i) sum += c[i];
  Integer total = t.tr_theta * sum;
  if (t.field.ramified) total += t.tr_one * c[0];
  return Rational(total);
}

Rational trace_bilinear(const Element& x, const Element& y) {
  require_same_field(x, y);
  const TraceTable& t = x.field()->traces();
  const auto a = x.coords();
  const auto b = y.coords();
  const std::size_t first = t.field.ramified ? 1 : 0;
  Integer sum_a = 0, sum_b = 0, dot = 0;
  for (std::size_t i = first; i < a.size(); ++i) {
    sum_a += a[i];
    sum_b += b[i];
    dot += a[i] * b[i];
  }
  // sum_{i,j} a_i b_j Tr(theta^i(t) theta^j(t)) with off-diagonal value constant
  Integer total = t.tr_pair_off * sum_a * sum_b + (t.tr_pair_diag - t.tr_pair_off) * dot;
  if (t.field.ramified) total += t.tr_one * a[0] * b[0] + t.tr_theta * (a[0] * sum_b + b[0] * sum_a);
  return Rational(total);
}

}  // namespace wrlat
