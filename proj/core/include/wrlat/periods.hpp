#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wrlat/field.hpp"
#include "wrlat/precision.hpp"

namespace wrlat {

/// A degree-p character of (Z/nZ)* with conductor exactly n, identified by its
/// kernel H (the subgroup fixing K inside Q(zeta_n)).
struct CharacterChoice {
  FieldSpec field;
  std::vector<std::int64_t> component_moduli;  // q^e for each prime power of n
  std::vector<std::int64_t> generators;        // lifted primitive roots, one per component
  std::vector<int> exponent_vector;            // chi(generator_j) = exponent_j / p
  std::vector<std::int64_t> kernel;            // sorted residues h with chi(h) = 1
  std::int64_t coset_generator = 0;            // smallest residue outside H; theta = sigma_g

  bool contains(std::int64_t residue) const;
};

/// All conductor-exact index-p subgroups, ordered by their sorted kernels.
std::vector<CharacterChoice> enumerate_characters(const FieldSpec& field);

/// True iff H contains no kernel of (Z/nZ)* -> (Z/dZ)* for a proper divisor d.
bool conductor_is_exact(std::span<const std::int64_t> sorted_kernel, std::int64_t n);

/// eta_i = sum_{h in g^i H} cos(2 pi h / n); eta_0 is t.
std::vector<double> gaussian_periods(const CharacterChoice& choice, Precision precision = {});

/// Row i holds the p real conjugates of the i-th integral basis element;
/// conjugate j is sigma_{g^j}.
struct EmbeddingMatrix {
  FieldSpec field;
  CharacterChoice choice;
  std::size_t dim = 0;
  std::vector<double> entries;
  int precision_bits = 53;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
};

EmbeddingMatrix embedding_matrix(const CharacterChoice& choice, Precision precision = {});

/// sigma(x) as a vector of p reals.
std::vector<double> conjugates(const EmbeddingMatrix& embedding, const Element& x);

/// entries * entries^T.
std::vector<double> numeric_gram(const EmbeddingMatrix& embedding);

/// |det(entries)| via partial-pivot LU.
double embedding_determinant(const EmbeddingMatrix& embedding);

/// Tr(t theta^k(t)) for an unramified field, rounded from the numeric Gram and
/// checked for integrality and k-independence.
PairTraces derive_unramified_pair_traces(const CharacterChoice& choice, Precision precision = {});

/// Derives the pair traces from every character choice and asserts they agree.
PairTraces derive_unramified_pair_traces(const FieldSpec& field, Precision precision = {});

/// Tr(x_1 x_2 ... x_k) from embedding conjugates, rounded to an integer.
Integer numeric_trace_product(const EmbeddingMatrix& embedding, std::span<const Element> factors);

struct NumericOptions {
  std::size_t choice = 0;
  Precision precision{};
};

/// Validates (p, n) and builds the field with a complete trace table.
FieldPtr open_field(std::int64_t p, std::int64_t n, Precision precision = {});

/// Field together with the character choice used for numeric work.
struct FieldContext {
  FieldPtr field;
  std::vector<CharacterChoice> choices;
  EmbeddingMatrix embedding;
  NumericOptions options;
};

FieldContext open_field_context(std::int64_t p, std::int64_t n, NumericOptions options = {});

}  // namespace wrlat
