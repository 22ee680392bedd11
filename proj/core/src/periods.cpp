#include "wrlat/periods.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "wrlat/detail/numeric.hpp"
#include "wrlat/error.hpp"

namespace wrlat {

namespace {

using detail::mul_mod;
using detail::pow_mod;

template <class Real>
double to_double(const Real& value) {
  if constexpr (std::is_same_v<Real, double>) {
    return value;
  } else {
    return value.template convert_to<double>();
  }
}

std::int64_t primitive_root_prime_power(std::int64_t q, int e) {
  const std::int64_t order = q - 1;
  const auto factors = factorize(order);
  std::int64_t g = 2;
  for (;; ++g) {
    bool ok = true;
    for (const auto& f : factors)
      if (pow_mod(g, order / f.prime, q) == 1) {
        ok = false;
        break;
      }
    if (ok) break;
  }
  if (e > 1 && pow_mod(g, q - 1, q * q) == 1) g += q;
  return g;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = a % m, r = m, old_s = 1, s = 0;
  if (old_r < 0) old_r += m;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  old_s %= m;
  return old_s < 0 ? old_s + m : old_s;
}

struct Component {
  std::int64_t modulus = 0;
  std::int64_t generator = 0;
  std::int64_t lifted = 0;
  std::vector<int> log_mod_p;  // -1 for non-units
};

std::vector<Component> cyclic_components(const FieldSpec& field) {
  std::vector<Component> out;
  for (const auto& [q, e] : field.factorization) {
    Component c;
    c.modulus = 1;
    for (int k = 0; k < e; ++k) c.modulus *= q;
    c.generator = primitive_root_prime_power(q, e);
    const std::int64_t order = c.modulus / q * (q - 1);
    c.log_mod_p.assign(static_cast<std::size_t>(c.modulus), -1);
    std::int64_t v = 1;
    for (std::int64_t k = 0; k < order; ++k) {
      c.log_mod_p[static_cast<std::size_t>(v)] = static_cast<int>(k % field.p);
      v = mul_mod(v, c.generator, c.modulus);
    }
    const std::int64_t cofactor = field.n / c.modulus;
    if (cofactor == 1) {
      c.lifted = c.generator;
    } else {
      const std::int64_t k = mul_mod((c.generator - 1 + c.modulus) % c.modulus, inverse_mod(cofactor % c.modulus, c.modulus), c.modulus);
      c.lifted = (1 + mul_mod(cofactor, k, field.n)) % field.n;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

bool CharacterChoice::contains(std::int64_t residue) const {
  residue %= field.n;
  if (residue < 0) residue += field.n;
  return std::binary_search(kernel.begin(), kernel.end(), residue);
}

bool conductor_is_exact(std::span<const std::int64_t> sorted_kernel, std::int64_t n) {
  for (const auto& [q, e] : factorize(n)) {
    const std::int64_t d = n / q;
    bool contained = true;
    for (std::int64_t k = 0; k < q && contained; ++k) {
      const std::int64_t x = (1 + d * k) % n;
      if (std::gcd(x, n) != 1) continue;
      contained = std::binary_search(sorted_kernel.begin(), sorted_kernel.end(), x);
    }
    if (contained) return false;
  }
  return true;
}

std::vector<CharacterChoice> enumerate_characters(const FieldSpec& field) {
  const auto components = cyclic_components(field);
  const std::size_t r = components.size();
  const int p = static_cast<int>(field.p);

  std::vector<CharacterChoice> out;
  std::set<std::vector<std::int64_t>> seen;
  // Characters nontrivial on every component; the first exponent is
  // normalized to 1 since chi and chi^k share a kernel.
  std::vector<int> exps(r, 1);
  while (true) {
    CharacterChoice choice;
    choice.field = field;
    choice.exponent_vector = exps;
    for (const auto& c : components) {
      choice.component_moduli.push_back(c.modulus);
      choice.generators.push_back(c.lifted);
    }
    for (std::int64_t x = 1; x < field.n; ++x) {
      int value = 0;
      bool unit = true;
      for (std::size_t j = 0; j < r; ++j) {
        const int lg = components[j].log_mod_p[static_cast<std::size_t>(x % components[j].modulus)];
        if (lg < 0) {
          unit = false;
          break;
        }
        value = (value + exps[j] * lg) % p;
      }
      if (unit && value == 0) choice.kernel.push_back(x);
    }
    if (conductor_is_exact(choice.kernel, field.n) && seen.insert(choice.kernel).second) {
      for (std::int64_t g = 2; g < field.n; ++g) {
        if (std::gcd(g, field.n) == 1 && !choice.contains(g)) {
          choice.coset_generator = g;
          break;
        }
      }
      out.push_back(std::move(choice));
    }
    std::size_t k = 1;
    while (k < r && exps[k] == p - 1) exps[k++] = 1;
    if (k >= r) break;
    ++exps[k];
  }
  std::sort(out.begin(), out.end(),
            [](const CharacterChoice& a, const CharacterChoice& b) { return a.kernel < b.kernel; });
  return out;
}

std::vector<double> gaussian_periods(const CharacterChoice& choice, Precision precision) {
  return dispatch_precision(precision, [&](auto tag) {
    using Real = decltype(tag);
    const auto eta = detail::periods_at<Real>(choice);
    std::vector<double> out;
    out.reserve(eta.size());
    for (const auto& v : eta) out.push_back(to_double(v));
    return out;
  });
}

EmbeddingMatrix embedding_matrix(const CharacterChoice& choice, Precision precision) {
  EmbeddingMatrix e;
  e.field = choice.field;
  e.choice = choice;
  e.dim = static_cast<std::size_t>(choice.field.p);
  e.precision_bits = precision.tier();
  e.entries = dispatch_precision(precision, [&](auto tag) {
    using Real = decltype(tag);
    const auto rows = detail::embedding_at<Real>(choice);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& v : rows) out.push_back(to_double(v));
    return out;
  });
  return e;
}

std::vector<double> conjugates(const EmbeddingMatrix& embedding, const Element& x) {
  return detail::conjugates_at<double>(embedding.entries, x);
}

std::vector<double> numeric_gram(const EmbeddingMatrix& embedding) {
  const std::size_t p = embedding.dim;
  std::vector<double> g(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      detail::KahanSum<double> acc;
      for (std::size_t k = 0; k < p; ++k) acc.add(embedding(i, k) * embedding(j, k));
      g[i * p + j] = acc.sum;
    }
  return g;
}

double embedding_determinant(const EmbeddingMatrix& embedding) {
  const std::size_t p = embedding.dim;
  std::vector<double> a = embedding.entries;
  double det = 1.0;
  for (std::size_t k = 0; k < p; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < p; ++i)
      if (std::abs(a[i * p + k]) > std::abs(a[pivot * p + k])) pivot = i;
    if (a[pivot * p + k] == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t j = 0; j < p; ++j) std::swap(a[k * p + j], a[pivot * p + j]);
      det = -det;
    }
    det *= a[k * p + k];
    for (std::size_t i = k + 1; i < p; ++i) {
      const double f = a[i * p + k] / a[k * p + k];
      for (std::size_t j = k; j < p; ++j) a[i * p + j] -= f * a[k * p + j];
    }
  }
  return std::abs(det);
}

PairTraces derive_unramified_pair_traces(const CharacterChoice& choice, Precision precision) {
  if (choice.field.ramified)
    throw Error(ErrorKind::WrongCase, "pair traces of ramified fields are closed-form");
  const auto values = dispatch_precision(precision, [&](auto tag) {
    using Real = decltype(tag);
    const auto eta = detail::periods_at<Real>(choice);
    const std::size_t p = eta.size();
    std::vector<double> out(p);
    for (std::size_t k = 0; k < p; ++k) {
      detail::KahanSum<Real> acc;
      for (std::size_t j = 0; j < p; ++j) acc.add(eta[j] * eta[(j + k) % p]);
      out[k] = to_double(acc.sum);
    }
    return out;
  });
  std::vector<std::int64_t> rounded;
  for (const double v : values) {
    const double r = std::round(v);
    if (std::abs(v - r) >= 1e-6)
      throw Error(ErrorKind::PrecisionLoss, "pair trace " + std::to_string(v) + " is not within 1e-6 of an integer");
    rounded.push_back(static_cast<std::int64_t>(r));
  }
  for (std::size_t k = 2; k < rounded.size(); ++k)
    if (rounded[k] != rounded[1])
      throw Error(ErrorKind::InconsistentTraces, "Tr(t theta^k(t)) depends on k");
  return PairTraces{rounded[0], rounded[1]};
}

PairTraces derive_unramified_pair_traces(const FieldSpec& field, Precision precision) {
  const auto choices = enumerate_characters(field);
  if (choices.empty()) throw Error(ErrorKind::NotFound, "no character of conductor " + std::to_string(field.n));
  const PairTraces first = derive_unramified_pair_traces(choices.front(), precision);
  for (std::size_t i = 1; i < choices.size(); ++i) {
    const PairTraces other = derive_unramified_pair_traces(choices[i], precision);
    if (other.diag != first.diag || other.off != first.off)
      throw Error(ErrorKind::InconsistentTraces, "pair traces differ between character choices");
  }
  return first;
}

Integer numeric_trace_product(const EmbeddingMatrix& embedding, std::span<const Element> factors) {
  const std::size_t p = embedding.dim;
  std::vector<double> product(p, 1.0);
  for (const Element& x : factors) {
    const auto c = conjugates(embedding, x);
    for (std::size_t j = 0; j < p; ++j) product[j] *= c[j];
  }
  detail::KahanSum<double> acc;
  for (const double v : product) acc.add(v);
  const double r = std::round(acc.sum);
  if (std::abs(acc.sum - r) >= 1e-6)
    throw Error(ErrorKind::PrecisionLoss, "numeric trace is not within 1e-6 of an integer");
  return Integer(static_cast<long long>(r));
}

FieldPtr open_field(std::int64_t p, std::int64_t n, Precision precision) {
  const FieldSpec spec = validate_field(p, n);
  if (spec.ramified) return make_field(trace_table(spec));
  return make_field(trace_table(spec, derive_unramified_pair_traces(spec, precision)));
}

FieldContext open_field_context(std::int64_t p, std::int64_t n, NumericOptions options) {
  FieldContext ctx;
  ctx.options = options;
  ctx.field = open_field(p, n, options.precision);
  ctx.choices = enumerate_characters(ctx.field->spec());
  if (options.choice >= ctx.choices.size())
    throw Error(ErrorKind::BadIndex, "character choice " + std::to_string(options.choice) + " out of range (" +
                                         std::to_string(ctx.choices.size()) + " available)");
  ctx.embedding = embedding_matrix(ctx.choices[options.choice], options.precision);
  return ctx;
}

}  // namespace wrlat
