#include "wrlat/verify.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <utility>

#include "wrlat/error.hpp"
#include "wrlat/modules.hpp"
#include "wrlat/periods.hpp"
#include "wrlat/svp.hpp"

namespace wrlat {

namespace {

using FieldGrid = std::vector<std::pair<std::int64_t, std::int64_t>>;

const FieldGrid kRamifiedGrid = {{3, 9}, {3, 63}, {5, 25}, {5, 275}, {7, 49}};
const FieldGrid kUnramifiedGrid = {{3, 7}, {3, 13}, {3, 31}, {5, 11}};
constexpr int kRandomAlphaCount = 500;

std::string field_label(const FieldSpec& f) {
  return "p=" + std::to_string(f.p) + " n=" + std::to_string(f.n);
}

class Claim {
 public:
  explicit Claim(std::string text) { result_.claim = std::move(text); }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.cases;
    if (ok) return;
    if (result_.failures++ == 0) result_.first_failure = describe();
  }

  // Runs body and turns library errors into a failing case.
  void guarded(const std::function<void()>& body, const std::function<std::string()>& describe) {
    try {
      body();
    } catch (const Error& e) {
      check(false, [&] { return describe() + ": " + e.what(); });
    }
  }

  ClaimResult finish() { return std::move(result_); }

 private:
  ClaimResult result_;
};

std::string coefficients(std::span<const Integer> a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + to_decimal(a[i]);
  return s + ")";
}

SuiteResult trace_identities() {
  SuiteResult out{"trace-identities", {}};
  Claim exact("integral-basis Gram of a ramified field: Tr(1)=p, Tr(theta^i t)=0, "
              "Tr((theta^i t)^2)=n(p-1)/p, Tr(theta^i t theta^j t)=-n/p");
  Claim numeric("exact integral-basis Gram agrees with the periods Gram within 1e-6 for every character choice");
  Claim disc("det of the integral-basis Gram equals n^{p-1}");
  Claim unram("derived unramified pair traces are integral, choice independent and give det n^{p-1}");
  for (const auto& [p, n] : kRamifiedGrid) {
    const FieldPtr field = open_field(p, n);
    const FieldSpec& f = field->spec();
    const GramMatrix g = gram(build_OK(field));
    const auto dim = static_cast<std::size_t>(p);
    IntMatrix expected(dim, dim);
    expected(0, 0) = p;
    for (std::size_t i = 1; i < dim; ++i)
      for (std::size_t j = 1; j < dim; ++j) expected(i, j) = i == j ? n * (p - 1) / p : -n / p;
    exact.check(g.entries == expected, [&] { return field_label(f); });
    disc.check(determinant(g.entries) == discriminant(f), [&] { return field_label(f); });
    for (const auto& choice : enumerate_characters(f)) {
      numeric.guarded(
          [&] {
            const auto num = numeric_gram(embedding_matrix(choice));
            double worst = 0;
            for (std::size_t i = 0; i < dim; ++i)
              for (std::size_t j = 0; j < dim; ++j)
                worst = std::max(worst, std::abs(num[i * dim + j] - g.entries(i, j).convert_to<double>()));
            numeric.check(worst < 1e-6, [&] {
              return field_label(f) + " generator " + std::to_string(choice.coset_generator) +
                     " max deviation " + std::to_string(worst);
            });
          },
          [&] { return field_label(f); });
    }
  }
  for (const auto& [p, n] : kUnramifiedGrid) {
    unram.guarded(
        [&] {
          const FieldPtr field = open_field(p, n);
          const IntMatrix g = gram(build_OK(field)).entries;
          unram.check(determinant(g) == discriminant(field->spec()), [&] { return field_label(field->spec()); });
        },
        [&, p = p, n = n] { return "p=" + std::to_string(p) + " n=" + std::to_string(n); });
  }
  out.claims = {exact.finish(), numeric.finish(), disc.finish(), unram.finish()};
  return out;
}

SuiteResult minima() {
  SuiteResult out{"minima", {}};
  Claim divisible("M_m with p | m (m = p..10p): minimum is min{m^2/p, up(p-1)}");
  Claim coprime("M_m with p not dividing m (m = 2..20): minimum is min{pm^2, up(p-1)}");
  Claim orbit("orbit module (m = 1..10, p not dividing m): minimum is p(u(p-1)+m^2)");
  for (const auto& [p, n] : kRamifiedGrid) {
    const FieldPtr field = open_field(p, n);
    const FieldSpec& f = field->spec();
    auto run = [&](Claim& claim, ModuleBasis basis) {
      const std::int64_t m = *basis.params.m;
      claim.guarded(
          [&] {
            const ClosedFormCheck c = verify_closed_form(basis);
            claim.check(c.agree, [&] {
              return field_label(f) + " m=" + std::to_string(m) + " closed form " + to_decimal(c.closed_min) +
                     " enumeration " + to_decimal(c.enum_min);
            });
          },
          [&] { return field_label(f) + " m=" + std::to_string(m); });
    };
    for (std::int64_t m = p; m <= 10 * p; m += p) run(divisible, build_Mm_ramified(field, m));
    for (std::int64_t m = 2; m <= 20; ++m)
      if (m % p != 0) run(coprime, build_Mm_ramified(field, m));
    for (std::int64_t m = 1; m <= 10; ++m)
      if (m % p != 0) run(orbit, build_orbit_M(field, m));
  }
  out.claims = {divisible.finish(), coprime.finish(), orbit.finish()};
  return out;
}

SuiteResult wr_window() {
  SuiteResult out{"wr-window", {}};
  Claim window("unramified M_m with m = 1 mod p, m <= 12: well rounded iff n/(p+1) <= m^2 <= n(p+1)");
  for (const auto& [p, n] : kUnramifiedGrid) {
    const FieldPtr field = open_field(p, n);
    for (std::int64_t m = 1; m <= 12; m += p) {
      const bool predicted = wr_window_unramified(field->spec(), m);
      const ShortVectorReport r = enumerate_minimum(gram(build_Mm_unramified(field, m)));
      window.check(predicted == r.well_rounded, [&] {
        return field_label(field->spec()) + " m=" + std::to_string(m) + " window " + (predicted ? "yes" : "no") +
               " enumeration " + (r.well_rounded ? "WR" : "not WR") + " minimum " + to_decimal(r.minimum);
      });
    }
  }
  out.claims = {window.finish()};
  return out;
}

// Every lattice of the grids: M_m both cases, orbit module, O_K.
std::vector<ModuleBasis> density_lattices() {
  std::vector<ModuleBasis> all;
  for (const auto& [p, n] : kRamifiedGrid) {
    const FieldPtr field = open_field(p, n);
    all.push_back(build_OK(field));
    for (std::int64_t m = 2; m <= 20; ++m) all.push_back(build_Mm_ramified(field, m));
    for (std::int64_t m = 1; m <= 10; ++m)
      if (m % p != 0) all.push_back(build_orbit_M(field, m));
  }
  for (const auto& [p, n] : kUnramifiedGrid) {
    const FieldPtr field = open_field(p, n);
    for (std::int64_t m = 1; m <= 12; ++m) all.push_back(build_Mm_unramified(field, m));
  }
  return all;
}

std::string basis_label(const ModuleBasis& b) {
  std::string s = field_label(b.field->spec()) + " " + std::string(family_label(b.family));
  if (b.params.m) s += " m=" + std::to_string(*b.params.m);
  return s;
}

SuiteResult density() {
  SuiteResult out{"density", {}};
  Claim identity("delta^2 * 4^p * det(Gram) = t^p exactly");
  Claim agreement("closed-form density agrees with the computed one whenever the index equals the stated divisor");
  Claim anchor("orbit module of (3,9) with m=1 has Gram 9I and density 1/8");
  for (const ModuleBasis& b : density_lattices()) {
    const GramMatrix g = gram(b);
    const ShortVectorReport r = enumerate_minimum(g);
    const DensityReport d = center_density(b, g, r.minimum);
    const auto p = static_cast<unsigned>(b.field->degree());
    identity.check(d.delta_sq * integer_power(4, p) * Rational(d.volume_sq) == Rational(integer_power(r.minimum, p)),
                   [&] { return basis_label(b); });
    if (d.stated_divisor && *d.stated_divisor == d.index && d.formula_minimum == d.minimum)
      agreement.check(!d.discrepancy_flag, [&] {
        return basis_label(b) + " computed " + std::to_string(d.delta_computed) + " formula " +
               std::to_string(d.delta_closed_form.value_or(0));
      });
  }
  const FieldPtr field = open_field(3, 9);
  const ModuleBasis orbit = build_orbit_M(field, 1);
  const GramMatrix g = gram(orbit);
  const DensityReport d = center_density(orbit, g, enumerate_minimum(g).minimum);
  IntMatrix nine(3, 3);
  for (std::size_t i = 0; i < 3; ++i) nine(i, i) = 9;
  anchor.check(g.entries == nine && d.delta_sq == Rational(1, 64), [&] {
    return "delta^2 = " + d.delta_sq.str();
  });
  out.claims = {identity.finish(), agreement.finish(), anchor.finish()};
  return out;
}

Element random_non_rational(const FieldPtr& field, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  while (true) {
    std::vector<Integer> c(static_cast<std::size_t>(field->degree()));
    for (auto& v : c) v = coef(rng);
    Element x(field, std::move(c));
    if (!x.is_rational_integer()) return x;
  }
}

SuiteResult circulant() {
  SuiteResult out{"circulant", {}};
  Claim rank("Galois orbit of alpha not in Z has rank p iff Tr(alpha) != 0");
  Claim det("circulant determinant of the conjugates is nonzero iff Tr(alpha) != 0");
  Claim factors("f(zeta_p^i), i >= 1, never vanishes for alpha not in Z");
  Claim coords("|circulant determinant| = |det(orbit coordinates)| * |det(embedding)|");
  std::mt19937_64 rng(20240611);
  FieldGrid grid = kRamifiedGrid;
  grid.insert(grid.end(), kUnramifiedGrid.begin(), kUnramifiedGrid.end());
  for (const auto& [p, n] : grid) {
    const FieldContext ctx = open_field_context(p, n);
    const FieldSpec& f = ctx.field->spec();
    for (int k = 0; k < kRandomAlphaCount; ++k) {
      // Every tenth sample is pushed onto the trace-zero hyperplane.
      Element alpha = random_non_rational(ctx.field, rng);
      if (k % 10 == 0) {
        // Tr(p alpha - Tr(alpha)) = 0 since Tr(1) = p
        const Element centered = Integer(p) * alpha - numerator(trace_linear(alpha)) * Element::one(ctx.field);
        if (!centered.is_rational_integer() && trace_linear(centered) == 0) alpha = centered;
      }
      const auto label = [&] { return field_label(f) + " alpha=" + coefficients(alpha.coords()); };
      const bool trace_nonzero = trace_linear(alpha) != 0;
      const OrbitSublattice orbit = orbit_sublattice(alpha);
      rank.check(orbit.full_rank == trace_nonzero, label);
      det.guarded(
          [&] {
            const CirculantCheck c = circulant_det_check(alpha, ctx.embedding.choice);
            det.check(c.nonzero == trace_nonzero, label);
            bool clear = true;
            for (std::size_t i = 1; i < c.factor_moduli.size(); ++i) clear = clear && c.factor_moduli[i] > c.factor_tolerance;
            factors.check(clear, label);
            const double scale = std::max(std::abs(c.det_numeric), c.tolerance);
            coords.check(std::abs(std::abs(c.det_numeric) - c.det_from_coordinates) <= 1e-6 * scale, label);
          },
          label);
    }
  }
  out.claims = {rank.finish(), det.finish(), factors.finish(), coords.finish()};
  return out;
}

SuiteResult orbit() {
  SuiteResult out{"orbit", {}};
  Claim wr("orbit module (m = 1..10, p not dividing m) is well rounded with a minimal basis");
  Claim norms("every orbit basis vector has norm p(u(p-1)+m^2)");
  for (const auto& [p, n] : kRamifiedGrid) {
    const FieldPtr field = open_field(p, n);
    const FieldSpec& f = field->spec();
    for (std::int64_t m = 1; m <= 10; ++m) {
      if (m % p == 0) continue;
      const ModuleBasis b = build_orbit_M(field, m);
      const GramMatrix g = gram(b);
      const ShortVectorReport r = enumerate_minimum(g);
      const Integer expected = Integer(p) * (Integer(f.u) * (p - 1) + Integer(m) * m);
      bool basis_minimal = true;
      bool basis_norms = true;
      for (std::size_t i = 0; i < g.entries.rows(); ++i) {
        basis_minimal = basis_minimal && g.entries(i, i) == r.minimum;
        basis_norms = basis_norms && g.entries(i, i) == expected;
      }
      const auto label = [&] {
        return field_label(f) + " m=" + std::to_string(m) + " minimum " + to_decimal(r.minimum) + " basis norm " +
               to_decimal(g.entries(0, 0)) + (r.well_rounded ? " WR" : " not WR");
      };
      wr.check(r.well_rounded && basis_minimal, label);
      norms.check(basis_norms, label);
    }
  }
  out.claims = {wr.finish(), norms.finish()};
  return out;
}

SuiteResult ideal_index() {
  SuiteResult out{"ideal-index", {}};
  Claim ideal("M_m is an ideal iff m | n (m <= 30)");
  Claim unram_index("unramified M_m has index m");
  Claim coprime_index("ramified M_m with p not dividing m has index m");
  Claim divisible_index("ramified M_m with p | m has index m/p (stated: m)");
  Claim orbit_index("orbit module has index pm (stated: m)");
  Claim bj("B_j is an ideal of prime index p_j");
  for (const auto& [p, n] : kRamifiedGrid) {
    const FieldContext ctx = open_field_context(p, n);
    const FieldSpec& f = ctx.field->spec();
    for (std::int64_t m = 2; m <= 30; ++m) {
      const ModuleBasis b = build_Mm_ramified(ctx.field, m);
      const bool is_ideal = ideal_test(b, ctx.embedding);
      ideal.check(is_ideal == (n % m == 0), [&] {
        return field_label(f) + " m=" + std::to_string(m) + " ideal test " + (is_ideal ? "true" : "false");
      });
      const Integer expected = m % p == 0 ? Integer(m / p) : Integer(m);
      (m % p == 0 ? divisible_index : coprime_index).check(b.index() == expected, [&] {
        return field_label(f) + " m=" + std::to_string(m) + " index " + to_decimal(b.index());
      });
    }
    for (std::int64_t m = 1; m <= 10; ++m) {
      if (m % p == 0) continue;
      const ModuleBasis b = build_orbit_M(ctx.field, m);
      orbit_index.check(b.index() == Integer(p * m), [&] {
        return field_label(f) + " m=" + std::to_string(m) + " index " + to_decimal(b.index());
      });
    }
  }
  for (const auto& [p, n] : kUnramifiedGrid) {
    const FieldPtr field = open_field(p, n);
    const FieldSpec& f = field->spec();
    for (std::int64_t m = 1; m <= 30; ++m) {
      const ModuleBasis b = build_Mm_unramified(field, m);
      const bool is_ideal = ideal_test(b);
      ideal.check(is_ideal == (n % m == 0), [&] {
        return field_label(f) + " m=" + std::to_string(m) + " ideal test " + (is_ideal ? "true" : "false");
      });
      unram_index.check(b.index() == Integer(m), [&] {
        return field_label(f) + " m=" + std::to_string(m) + " index " + to_decimal(b.index());
      });
    }
    for (std::size_t j = 1; j <= f.primes.size(); ++j) {
      const ModuleBasis b = build_Bj_unramified(field, static_cast<std::int64_t>(j));
      bj.check(ideal_test(b) && b.index() == Integer(f.primes[j - 1]),
               [&] { return field_label(f) + " j=" + std::to_string(j); });
    }
  }
  out.claims = {ideal.finish(), unram_index.finish(), coprime_index.finish(), divisible_index.finish(),
                orbit_index.finish(), bj.finish()};
  return out;
}

}  // namespace

bool SuiteResult::passed() const noexcept {
  for (const auto& c : claims)
    if (!c.passed()) return false;
  return true;
}

const ClaimResult* SuiteResult::first_failure() const noexcept {
  for (const auto& c : claims)
    if (!c.passed()) return &c;
  return nullptr;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"trace-identities", "minima",      "wr-window", "density",
                                                 "circulant",        "orbit",       "ideal-index"};
  return names;
}

SuiteResult run_suite(std::string_view name) {
  if (name == "trace-identities") return trace_identities();
  if (name == "minima") return minima();
  if (name == "wr-window") return wr_window();
  if (name == "density") return density();
  if (name == "circulant") return circulant();
  if (name == "orbit") return orbit();
  if (name == "ideal-index") return ideal_index();
  throw Error(ErrorKind::BadParams, "unknown suite " + std::string(name));
}

}  // namespace wrlat
