#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wrlat/field.hpp"
#include "wrlat/integer.hpp"
#include "wrlat/periods.hpp"

namespace wrlat {

enum class Family { OK, MmUnramified, MmRamified, Mmc, OrbitM, Bj, BRamified, Custom };

std::string_view family_label(Family family) noexcept;

struct ModuleParams {
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> c;
  std::optional<std::int64_t> j;
};

enum class MmRamifiedCase { PDividesM, PCoprimeM };

/// A full-rank Z-submodule of O_K; rows of `coords` are basis vectors over the
/// integral basis.
struct ModuleBasis {
  FieldPtr field;
  Family family = Family::Custom;
  ModuleParams params;
  IntMatrix coords;
  std::optional<MmRamifiedCase> ramified_case;

  std::size_t dimension() const noexcept { return coords.rows(); }
  Element row(std::size_t i) const;
  /// |det(coords)| = [O_K : M].
  Integer index() const;
};

ModuleBasis build_OK(const FieldPtr& field);
/// {m t, theta^i(t) - t}: elements whose trace is divisible by m.
ModuleBasis build_Mm_unramified(const FieldPtr& field, std::int64_t m);
/// {m, c - theta^i(t)}: a_0 + c sum_{i>=1} a_i = 0 mod m.
ModuleBasis build_Mmc(const FieldPtr& field, std::int64_t m, std::int64_t c);
/// Trace divisible by m, ramified case; basis starts with m/p when p | m.
ModuleBasis build_Mm_ramified(const FieldPtr& field, std::int64_t m);
/// Z-span of the Galois orbit {m - theta^i(t) : 0 <= i < p}, p not dividing m.
ModuleBasis build_orbit_M(const FieldPtr& field, std::int64_t m);
/// Prime ideal above p_j (1-based j) in the unramified case.
ModuleBasis build_Bj_unramified(const FieldPtr& field, std::int64_t j);
ModuleBasis build_custom(const FieldPtr& field, IntMatrix coords);

/// Family-specific membership rule read off the coordinates.
bool family_predicate(const ModuleBasis& basis, const Element& x);

/// Exact membership through the Hermite normal form of the basis.
bool membership(const Element& x, const ModuleBasis& basis);

bool same_module(const ModuleBasis& a, const ModuleBasis& b);

/// Invariant factors of O_K / M greater than one.
std::vector<Integer> quotient_structure(const ModuleBasis& basis);

/// Closure of the module under multiplication by the integral basis. Trace
/// defined families use the exact bilinear trace; M_{m,c} with c != 0 also
/// needs Tr(x y t), taken from the embedding.
bool ideal_test(const ModuleBasis& basis);
bool ideal_test(const ModuleBasis& basis, const EmbeddingMatrix& embedding);

/// The residue l with B = M_{p,l} the prime above p (ramified case).
std::int64_t find_ell(const FieldPtr& field, const EmbeddingMatrix& embedding);

ModuleBasis build_B_ramified(const FieldPtr& field, const EmbeddingMatrix& embedding);

struct LambdaGenerator {
  Element lambda;
  std::vector<double> conjugates;
  double norm = 0.0;
  std::int64_t ell = 0;
};

/// N_{L/K}(1 - zeta_{p^2}) for conductor p^2, solved into integral
/// coordinates and verified against M_{p,l} and |N(lambda)| = p.
LambdaGenerator lambda_generator(const FieldPtr& field, const EmbeddingMatrix& embedding);

struct GramMatrix {
  IntMatrix entries;
  std::string source;
};

/// Pairwise traces of the basis rows; checks det = det(coords)^2 n^{p-1}.
GramMatrix gram(const ModuleBasis& basis);

// Literal trace-form expansions over the respective bases.
Integer trace_sq_Mmc(const FieldSpec& field, std::int64_t m, std::int64_t c, std::span<const Integer> a);
Rational trace_sq_Mm_pdiv(const FieldSpec& field, std::int64_t m, std::span<const Integer> a);
Integer trace_sq_Mm_pcoprime(const FieldSpec& field, std::int64_t m, std::span<const Integer> a);
Integer trace_sq_orbit(const FieldSpec& field, std::int64_t m, std::span<const Integer> a);

/// min{m^2/p, up(p-1)} (p | m), min{pm^2, up(p-1)} (p does not divide m) or
/// p(u(p-1) + m^2) for the orbit module.
Integer closed_form_minimum(const ModuleBasis& basis);
bool has_closed_form_minimum(const ModuleBasis& basis) noexcept;

/// n/(p+1) <= m^2 <= n(p+1); only defined for m = 1 mod p.
bool wr_window_unramified(const FieldSpec& field, std::int64_t m);

/// The index the closed-form density displays divide by (m for the M_m
/// families); nullopt for custom bases.
std::optional<Integer> stated_divisor(const ModuleBasis& basis);

struct DensityReport {
  Integer minimum;
  Integer volume_sq;
  Integer index;
  Rational delta_sq;  // t^p / (4^p det Gram)
  double delta_computed = 0.0;
  std::optional<Integer> formula_minimum;
  std::optional<Integer> stated_divisor;
  std::optional<double> delta_closed_form;
  bool discrepancy_flag = false;
};

inline constexpr double kDensityTolerance = 1e-12;

DensityReport center_density(const ModuleBasis& basis, const GramMatrix& gram, const Integer& minimum);

}  // namespace wrlat
