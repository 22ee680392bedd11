#include "wrlat/modules.hpp"

#include <cmath>
#include <string>

#include "wrlat/detail/numeric.hpp"
#include "wrlat/error.hpp"

namespace wrlat {

namespace {

std::size_t degree_of(const FieldPtr& field) { return static_cast<std::size_t>(field->degree()); }

void require_ramified(const FieldPtr& field, bool ramified, const char* what) {
  if (field->spec().ramified != ramified)
    throw Error(ErrorKind::WrongCase,
                std::string(what) + (ramified ? " needs a ramified field" : " needs an unramified field"));
}

void require_positive(std::int64_t m, std::int64_t lowest, const char* name) {
  if (m < lowest)
    throw Error(ErrorKind::BadParams, std::string(name) + " must be at least " + std::to_string(lowest));
}

Integer exact_integer(const Rational& r, const char* what) {
  if (denominator(r) != 1) throw Error(ErrorKind::VerificationFailed, std::string(what) + " is not an integer");
  return numerator(r);
}

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

ModuleBasis make_basis(const FieldPtr& field, Family family, ModuleParams params, IntMatrix coords) {
  ModuleBasis b;
  b.field = field;
  b.family = family;
  b.params = params;
  b.coords = std::move(coords);
  if (determinant(b.coords) == 0) throw Error(ErrorKind::BadParams, "module basis is singular");
  return b;
}

// Rows (first, 0, ..., 0) and (shift, ..., -1 at i, ...).
IntMatrix shifted_unit_rows(std::size_t p, const Integer& first, const Integer& shift) {
  IntMatrix c(p, p);
  c(0, 0) = first;
  for (std::size_t i = 1; i < p; ++i) {
    c(i, 0) = shift;
    c(i, i) = -1;
  }
  return c;
}

Integer sum_from(std::span<const Integer> a, std::size_t first) {
  Integer s = 0;
  for (std::size_t i = first; i < a.size(); ++i) s += a[i];
  return s;
}

Integer sum_sq_from(std::span<const Integer> a, std::size_t first) {
  Integer s = 0;
  for (std::size_t i = first; i < a.size(); ++i) s += a[i] * a[i];
  return s;
}

void require_length(const FieldSpec& field, std::span<const Integer> a) {
  if (static_cast<std::int64_t>(a.size()) != field.p)
    throw Error(ErrorKind::BadParams, "coefficient vector needs exactly p entries");
}

// Value of the M_{m,c} functional a_0 + c sum_{i>=1} a_i on integral coordinates.
Integer mmc_functional(std::span<const Integer> x, std::int64_t c) { return x[0] + c * sum_from(x, 1); }

enum class Closure { TraceModM, TraceOverPModM, MmcNumeric, Everything };

Closure closure_rule(const ModuleBasis& basis) {
  switch (basis.family) {
    case Family::OK:
      return Closure::Everything;
    case Family::MmUnramified:
    case Family::MmRamified:
    case Family::Bj:
      return Closure::TraceModM;
    case Family::Mmc:
    case Family::BRamified:
      return *basis.params.c == 0 ? Closure::TraceOverPModM : Closure::MmcNumeric;
    case Family::OrbitM:
    case Family::Custom:
      break;
  }
  throw Error(ErrorKind::UnsupportedFamily,
              std::string(family_label(basis.family)) + " has no trace characterization for the ideal test");
}

bool ideal_test_impl(const ModuleBasis& basis, const EmbeddingMatrix* embedding) {
  const Closure rule = closure_rule(basis);
  if (rule == Closure::Everything) return true;
  if (rule == Closure::MmcNumeric && embedding == nullptr)
    throw Error(ErrorKind::MissingDerivedData, "M_{m,c} with c != 0 needs an embedding for Tr(x y t)");
  const FieldPtr& field = basis.field;
  const std::int64_t p = field->degree();
  const Integer m = *basis.params.m;
  const Element t = Element::theta_power_of_t(field, 0);
  const Integer n = field->spec().n;
  for (std::size_t r = 0; r < basis.dimension(); ++r) {
    const Element b = basis.row(r);
    for (std::size_t k = 0; k < degree_of(field); ++k) {
      const Element e = Element::basis(field, k);
      const Integer tr = exact_integer(trace_bilinear(b, e), "Tr(b e)");
      switch (rule) {
        case Closure::TraceModM:
          if (mod_floor(tr, m) != 0) return false;
          break;
        case Closure::TraceOverPModM:
          // the coefficient of 1 in b e is Tr(b e)/p
          if (mod_floor(tr, p) != 0 || mod_floor(tr / p, m) != 0) return false;
          break;
        case Closure::MmcNumeric: {
          // x_0 = Tr(x)/p and sum_{i>=1} x_i = -(p/n) Tr(x t)
          const Element factors[] = {b, e, t};
          const Integer tr_t = numeric_trace_product(*embedding, factors);
          if (mod_floor(tr, p) != 0 || mod_floor(tr_t * p, n) != 0) return false;
          const Integer value = tr / p + *basis.params.c * (-(tr_t * p) / n);
          if (mod_floor(value, m) != 0) return false;
          break;
        }
        case Closure::Everything:
          break;
      }
    }
  }
  return true;
}

// Solves E^T x = v for the integral coordinates x (partial-pivot elimination).
std::vector<double> solve_transposed(const EmbeddingMatrix& e, std::vector<double> v) {
  const std::size_t p = e.dim;
  std::vector<double> a(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) a[j * p + i] = e(i, j);
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::abs(a[r * p + col]) > std::abs(a[pivot * p + col])) pivot = r;
    if (a[pivot * p + col] == 0.0) throw Error(ErrorKind::PrecisionLoss, "embedding matrix is numerically singular");
    if (pivot != col) {
      for (std::size_t k = 0; k < p; ++k) std::swap(a[col * p + k], a[pivot * p + k]);
      std::swap(v[col], v[pivot]);
    }
    for (std::size_t r = col + 1; r < p; ++r) {
      const double f = a[r * p + col] / a[col * p + col];
      for (std::size_t k = col; k < p; ++k) a[r * p + k] -= f * a[col * p + k];
      v[r] -= f * v[col];
    }
  }
  std::vector<double> x(p);
  for (std::size_t i = p; i-- > 0;) {
    double s = v[i];
    for (std::size_t k = i + 1; k < p; ++k) s -= a[i * p + k] * x[k];
    x[i] = s / a[i * p + i];
  }
  return x;
}

std::int64_t smallest_primitive_root_mod_prime_square(std::int64_t p) {
  const std::int64_t q = p * p;
  const std::int64_t order = p * (p - 1);
  std::vector<std::int64_t> prime_factors;
  for (const auto& pp : factorize(order)) prime_factors.push_back(pp.prime);
  for (std::int64_t r = 2; r < q; ++r) {
    if (r % p == 0) continue;
    bool primitive = true;
    for (const std::int64_t f : prime_factors)
      if (detail::pow_mod(r, order / f, q) == 1) {
        primitive = false;
        break;
      }
    if (primitive) return r;
  }
  throw Error(ErrorKind::NotFound, "no primitive root modulo p^2");
}

}  // namespace

std::string_view family_label(Family family) noexcept {
  switch (family) {
    case Family::OK:
      return "OK";
    case Family::MmUnramified:
      return "Mm_unram";
    case Family::MmRamified:
      return "Mm_ram";
    case Family::Mmc:
      return "Mmc";
    case Family::OrbitM:
      return "OrbitM";
    case Family::Bj:
      return "Bj";
    case Family::BRamified:
      return "Bramified";
    case Family::Custom:
      return "Custom";
  }
  return "?";
}

Element ModuleBasis::row(std::size_t i) const {
  const auto r = coords.row(i);
  return Element(field, std::vector<Integer>(r.begin(), r.end()));
}

Integer ModuleBasis::index() const { return abs(determinant(coords)); }

ModuleBasis build_OK(const FieldPtr& field) {
  return make_basis(field, Family::OK, {}, IntMatrix::identity(degree_of(field)));
}

ModuleBasis build_Mm_unramified(const FieldPtr& field, std::int64_t m) {
  require_ramified(field, false, "M_m (unramified)");
  require_positive(m, 1, "m");
  const std::size_t p = degree_of(field);
  // m t and theta^i(t) - t
  IntMatrix c(p, p);
  c(0, 0) = m;
  for (std::size_t i = 1; i < p; ++i) {
    c(i, 0) = -1;
    c(i, i) = 1;
  }
  return make_basis(field, Family::MmUnramified, {m, std::nullopt, std::nullopt}, std::move(c));
}

ModuleBasis build_Mmc(const FieldPtr& field, std::int64_t m, std::int64_t c) {
  require_ramified(field, true, "M_{m,c}");
  require_positive(m, 1, "m");
  if (c < 0 || c >= m) throw Error(ErrorKind::BadParams, "c must satisfy 0 <= c < m");
  return make_basis(field, Family::Mmc, {m, c, std::nullopt}, shifted_unit_rows(degree_of(field), m, c));
}

ModuleBasis build_Mm_ramified(const FieldPtr& field, std::int64_t m) {
  require_ramified(field, true, "M_m (ramified)");
  require_positive(m, 2, "m");
  const std::int64_t p = field->degree();
  const bool divides = m % p == 0;
  ModuleBasis b = make_basis(field, Family::MmRamified, {m, std::nullopt, std::nullopt},
                             shifted_unit_rows(degree_of(field), divides ? m / p : m, m));
  b.ramified_case = divides ? MmRamifiedCase::PDividesM : MmRamifiedCase::PCoprimeM;
  return b;
}

ModuleBasis build_orbit_M(const FieldPtr& field, std::int64_t m) {
  require_ramified(field, true, "orbit module");
  require_positive(m, 1, "m");
  if (m % field->degree() == 0) throw Error(ErrorKind::BadParams, "orbit module needs p not dividing m");
  const std::size_t p = degree_of(field);
  IntMatrix c = shifted_unit_rows(p, m, m);
  // m - t with t = -sum_{i>=1} theta^i(t)
  for (std::size_t i = 1; i < p; ++i) c(0, i) = 1;
  return make_basis(field, Family::OrbitM, {m, std::nullopt, std::nullopt}, std::move(c));
}

ModuleBasis build_Bj_unramified(const FieldPtr& field, std::int64_t j) {
  require_ramified(field, false, "B_j");
  const auto& primes = field->spec().primes;
  if (j < 1 || j > static_cast<std::int64_t>(primes.size()))
    throw Error(ErrorKind::BadIndex, "j must lie in 1.." + std::to_string(primes.size()));
  const std::int64_t pj = primes[static_cast<std::size_t>(j - 1)];
  ModuleBasis b = build_Mm_unramified(field, pj);
  b.family = Family::Bj;
  b.params.j = j;
  return b;
}

ModuleBasis build_custom(const FieldPtr& field, IntMatrix coords) {
  const std::size_t p = degree_of(field);
  if (coords.rows() != p || coords.cols() != p) throw Error(ErrorKind::BadParams, "custom basis must be p x p");
  return make_basis(field, Family::Custom, {}, std::move(coords));
}

bool family_predicate(const ModuleBasis& basis, const Element& x) {
  if (x.field()->spec() != basis.field->spec())
    throw Error(ErrorKind::FieldMismatch, "element and module belong to different fields");
  const auto a = x.coords();
  const std::int64_t p = basis.field->degree();
  switch (basis.family) {
    case Family::OK:
      return true;
    case Family::MmUnramified:
    case Family::Bj:
      return mod_floor(sum_from(a, 0), *basis.params.m) == 0;
    case Family::MmRamified:
      return mod_floor(Integer(p) * a[0], *basis.params.m) == 0;
    case Family::Mmc:
    case Family::BRamified:
      return mod_floor(mmc_functional(a, *basis.params.c), *basis.params.m) == 0;
    case Family::OrbitM: {
      const Integer m = *basis.params.m;
      return mod_floor(a[0] + m * sum_from(a, 1), m * p) == 0;
    }
    case Family::Custom:
      break;
  }
  throw Error(ErrorKind::UnsupportedFamily, "custom bases have no family predicate");
}

bool membership(const Element& x, const ModuleBasis& basis) {
  if (x.field()->spec() != basis.field->spec())
    throw Error(ErrorKind::FieldMismatch, "element and module belong to different fields");
  return in_row_span(basis.coords, x.coords());
}

bool same_module(const ModuleBasis& a, const ModuleBasis& b) {
  if (a.field->spec() != b.field->spec()) throw Error(ErrorKind::FieldMismatch, "modules over different fields");
  return hermite_normal_form(a.coords) == hermite_normal_form(b.coords);
}

std::vector<Integer> quotient_structure(const ModuleBasis& basis) {
  std::vector<Integer> out;
  for (const Integer& d : smith_invariants(basis.coords))
    if (d > 1) out.push_back(d);
  return out;
}

bool ideal_test(const ModuleBasis& basis) { return ideal_test_impl(basis, nullptr); }

bool ideal_test(const ModuleBasis& basis, const EmbeddingMatrix& embedding) {
  if (embedding.field != basis.field->spec())
    throw Error(ErrorKind::FieldMismatch, "embedding belongs to a different field");
  return ideal_test_impl(basis, &embedding);
}

std::int64_t find_ell(const FieldPtr& field, const EmbeddingMatrix& embedding) {
  require_ramified(field, true, "find_ell");
  const std::int64_t p = field->degree();
  std::vector<std::int64_t> passing;
  for (std::int64_t c = 0; c < p; ++c)
    if (ideal_test(build_Mmc(field, p, c), embedding)) passing.push_back(c);
  if (passing.empty()) throw Error(ErrorKind::NotFound, "no M_{p,c} is an ideal");
  if (passing.size() > 1) throw Error(ErrorKind::VerificationFailed, "several M_{p,c} are ideals");
  return passing.front();
}

ModuleBasis build_B_ramified(const FieldPtr& field, const EmbeddingMatrix& embedding) {
  const std::int64_t p = field->degree();
  ModuleBasis b = build_Mmc(field, p, find_ell(field, embedding));
  b.family = Family::BRamified;
  return b;
}

LambdaGenerator lambda_generator(const FieldPtr& field, const EmbeddingMatrix& embedding) {
  require_ramified(field, true, "lambda_generator");
  const FieldSpec& spec = field->spec();
  if (spec.s != 0) throw Error(ErrorKind::WrongCase, "lambda_generator needs n = p^2");
  const std::int64_t p = spec.p;
  const std::int64_t n = spec.n;
  const std::int64_t r = smallest_primitive_root_mod_prime_square(p);
  const std::int64_t g = embedding.choice.coset_generator;

  std::vector<double> conj(static_cast<std::size_t>(p));
  std::int64_t shift = 1;  // g^j
  for (std::size_t j = 0; j < conj.size(); ++j) {
    detail::Complex<double> product{1.0, 0.0};
    for (std::int64_t k = 1; k < p; ++k) {
      const std::int64_t exponent = detail::mul_mod(shift, detail::pow_mod(r, k * p, n), n);
      const auto z = detail::root_of_unity<double>(exponent, n);
      product = product * detail::Complex<double>{1.0 - z.re, -z.im};
    }
    if (std::abs(product.im) > detail::kImaginaryTolerance * std::max(1.0, product.abs()))
      throw Error(ErrorKind::PrecisionLoss, "conjugate of lambda is not real");
    conj[j] = product.re;
    shift = detail::mul_mod(shift, g, n);
  }

  const std::vector<double> x = solve_transposed(embedding, conj);
  std::vector<Integer> coords(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rounded = std::round(x[i]);
    if (std::abs(x[i] - rounded) >= 1e-6)
      throw Error(ErrorKind::PrecisionLoss, "lambda coordinates are not within 1e-6 of integers");
    coords[i] = static_cast<long long>(rounded);
  }
  LambdaGenerator out{Element(field, std::move(coords)), std::move(conj), 0.0, 0};
  out.ell = find_ell(field, embedding);
  if (!family_predicate(build_Mmc(field, p, out.ell), out.lambda))
    throw Error(ErrorKind::VerificationFailed, "lambda does not lie in M_{p,l}");
  double norm = 1.0;
  for (const double v : out.conjugates) norm *= v;
  out.norm = norm;
  if (std::abs(std::abs(norm) - static_cast<double>(p)) > 1e-6 * static_cast<double>(p))
    throw Error(ErrorKind::VerificationFailed, "|N(lambda)| differs from p");
  return out;
}

GramMatrix gram(const ModuleBasis& basis) {
  const std::size_t p = basis.dimension();
  GramMatrix g;
  g.entries = IntMatrix(p, p);
  g.source = std::string(family_label(basis.family));
  std::vector<Element> rows;
  rows.reserve(p);
  for (std::size_t i = 0; i < p; ++i) rows.push_back(basis.row(i));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      g.entries(i, j) = exact_integer(trace_bilinear(rows[i], rows[j]), "Gram entry");
      g.entries(j, i) = g.entries(i, j);
    }
  const Integer det_coords = determinant(basis.coords);
  const Integer expected = det_coords * det_coords * discriminant(basis.field->spec());
  if (determinant(g.entries) != expected)
    throw Error(ErrorKind::VerificationFailed, "det(Gram) differs from det(coords)^2 n^{p-1}");
  return g;
}

Integer trace_sq_Mmc(const FieldSpec& field, std::int64_t m, std::int64_t c, std::span<const Integer> a) {
  if (!field.ramified) throw Error(ErrorKind::WrongCase, "M_{m,c} needs a ramified field");
  require_length(field, a);
  const Integer p = field.p;
  const Integer s = sum_from(a, 1);
  const Integer lead = a[0] * m + c * s;
  return p * (lead * lead + field.u * (p * sum_sq_from(a, 1) - s * s));
}

Rational trace_sq_Mm_pdiv(const FieldSpec& field, std::int64_t m, std::span<const Integer> a) {
  if (!field.ramified) throw Error(ErrorKind::WrongCase, "M_m (p | m) needs a ramified field");
  if (m % field.p != 0) throw Error(ErrorKind::BadParams, "p must divide m");
  require_length(field, a);
  const Integer p = field.p;
  const Integer s = sum_from(a, 1);
  const Rational lead = Rational(a[0] * m, p) + Rational(m * s);
  return Rational(p) * (lead * lead + Rational(field.u * (p * sum_sq_from(a, 1) - s * s)));
}

Integer trace_sq_Mm_pcoprime(const FieldSpec& field, std::int64_t m, std::span<const Integer> a) {
  if (!field.ramified) throw Error(ErrorKind::WrongCase, "M_m (p does not divide m) needs a ramified field");
  if (m % field.p == 0) throw Error(ErrorKind::BadParams, "p must not divide m");
  require_length(field, a);
  const Integer p = field.p;
  const Integer s = sum_from(a, 1);
  const Integer all = a[0] + s;
  return p * (Integer(m) * m * all * all + field.u * (p * sum_sq_from(a, 1) - s * s));
}

Integer trace_sq_orbit(const FieldSpec& field, std::int64_t m, std::span<const Integer> a) {
  if (!field.ramified) throw Error(ErrorKind::WrongCase, "orbit module needs a ramified field");
  require_length(field, a);
  const Integer p = field.p;
  const Integer s = sum_from(a, 0);
  return p * (Integer(field.u) * p * sum_sq_from(a, 0) + (Integer(m) * m - field.u) * s * s);
}

bool has_closed_form_minimum(const ModuleBasis& basis) noexcept {
  return basis.family == Family::MmRamified || basis.family == Family::OrbitM;
}

Integer closed_form_minimum(const ModuleBasis& basis) {
  const FieldSpec& f = basis.field->spec();
  const Integer p = f.p;
  const Integer u = f.u;
  if (basis.family == Family::MmRamified) {
    const Integer m = *basis.params.m;
    const Integer tail = u * p * (p - 1);
    const Integer head =
        *basis.ramified_case == MmRamifiedCase::PDividesM ? Integer(m * m / p) : Integer(p * m * m);
    return head < tail ? head : tail;
  }
  if (basis.family == Family::OrbitM) {
    const Integer m = *basis.params.m;
    return p * (u * (p - 1) + m * m);
  }
  throw Error(ErrorKind::UnsupportedFamily,
              std::string(family_label(basis.family)) + " has no closed-form minimum");
}

bool wr_window_unramified(const FieldSpec& field, std::int64_t m) {
  if (field.ramified) throw Error(ErrorKind::WrongCase, "the window applies to unramified fields");
  if (m < 1 || m % field.p != 1)
    throw Error(ErrorKind::NotApplicable, "the window is stated for m = 1 mod p");
  const Integer m2 = Integer(m) * m;
  const Integer n = field.n;
  return n <= m2 * (field.p + 1) && m2 <= n * (field.p + 1);
}

std::optional<Integer> stated_divisor(const ModuleBasis& basis) {
  switch (basis.family) {
    case Family::OK:
      return Integer(1);
    case Family::MmUnramified:
    case Family::MmRamified:
    case Family::Mmc:
    case Family::OrbitM:
      return Integer(*basis.params.m);
    case Family::Bj:
      return Integer(basis.field->spec().primes[static_cast<std::size_t>(*basis.params.j - 1)]);
    case Family::BRamified:
      return Integer(basis.field->spec().p);
    case Family::Custom:
      break;
  }
  return std::nullopt;
}

DensityReport center_density(const ModuleBasis& basis, const GramMatrix& g, const Integer& minimum) {
  const FieldSpec& f = basis.field->spec();
  const auto p = static_cast<unsigned>(f.p);
  DensityReport d;
  d.minimum = minimum;
  d.volume_sq = determinant(g.entries);
  d.index = basis.index();
  d.delta_sq = Rational(integer_power(minimum, p), integer_power(Integer(4), p) * d.volume_sq);
  using boost::multiprecision::numerator;
  const long double log_delta_sq = std::log(numerator(d.delta_sq).convert_to<long double>()) -
                                   std::log(denominator(d.delta_sq).convert_to<long double>());
  d.delta_computed = static_cast<double>(std::exp(log_delta_sq / 2));

  d.stated_divisor = stated_divisor(basis);
  if (d.stated_divisor) {
    d.formula_minimum = has_closed_form_minimum(basis) ? closed_form_minimum(basis) : minimum;
    const long double lp = static_cast<long double>(p);
    const long double log_closed = lp / 2 * std::log(d.formula_minimum->convert_to<long double>()) -
                                  lp * std::log(2.0L) - (lp - 1) / 2 * std::log(static_cast<long double>(f.n)) -
                                  std::log(d.stated_divisor->convert_to<long double>());
    const long double closed = std::exp(log_closed);
    const long double computed = std::exp(log_delta_sq / 2);
    d.delta_closed_form = static_cast<double>(closed);
    d.discrepancy_flag = std::abs(closed - computed) > kDensityTolerance * computed;
  }
  return d;
}

}  // namespace wrlat
