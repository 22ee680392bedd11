#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wrlat/error.hpp"
#include "wrlat/field.hpp"
#include "wrlat/periods.hpp"

using namespace wrlat;

namespace {

ErrorKind error_of(std::int64_t p, std::int64_t n) {
  try {
    validate_field(p, n);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for p=" << p << " n=" << n;
  return ErrorKind::Overflow;
}

Element element(const FieldPtr& f, std::vector<int> c) {
  return Element(f, std::vector<Integer>(c.begin(), c.end()));
}

Element random_element(const FieldPtr& f, std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  std::vector<Integer> c(static_cast<std::size_t>(f->degree()));
  for (auto& v : c) v = d(rng);
  return Element(f, std::move(c));
}

}  // namespace

TEST(ValidateField, AdmissibleShapes) {
  const FieldSpec a = validate_field(3, 9);
  EXPECT_TRUE(a.ramified);
  EXPECT_EQ(a.s, 0);
  EXPECT_EQ(a.u, 1);
  const FieldSpec b = validate_field(3, 7);
  EXPECT_FALSE(b.ramified);
  EXPECT_EQ(b.s, 1);
  const FieldSpec c = validate_field(5, 275);
  EXPECT_TRUE(c.ramified);
  EXPECT_EQ(c.u, 11);
  EXPECT_EQ(c.primes, std::vector<std::int64_t>{11});
  const FieldSpec d = validate_field(3, 91);
  EXPECT_EQ(d.s, 2);
  EXPECT_EQ(discriminant(a), 81);
}

TEST(ValidateField, RejectsEachRule) {
  EXPECT_EQ(error_of(3, 27), ErrorKind::BadConductor);   // valuation 3
  EXPECT_EQ(error_of(3, 3), ErrorKind::BadConductor);    // valuation 1
  EXPECT_EQ(error_of(3, 12), ErrorKind::BadConductor);   // factor 2
  EXPECT_EQ(error_of(3, 49), ErrorKind::BadConductor);   // repeated factor
  EXPECT_EQ(error_of(3, 1), ErrorKind::BadConductor);
  EXPECT_EQ(error_of(9, 19), ErrorKind::NotPrime);
  EXPECT_EQ(error_of(2, 9), ErrorKind::EvenOrTwo);
  EXPECT_EQ(error_of(4, 9), ErrorKind::EvenOrTwo);
}

TEST(TraceTable, ClosedFormValues) {
  const TraceTable t = trace_table(validate_field(3, 9));
  EXPECT_EQ(t.tr_one, 3);
  EXPECT_EQ(t.tr_theta, 0);
  EXPECT_EQ(t.tr_pair_diag, 6);
  EXPECT_EQ(t.tr_pair_off, -3);
  const TraceTable u = trace_table(validate_field(5, 25));
  EXPECT_EQ(u.tr_pair_diag, 20);
  EXPECT_EQ(u.tr_pair_off, -5);
}

TEST(TraceTable, UnramifiedNeedsDerivedData) {
  try {
    trace_table(validate_field(3, 7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingDerivedData);
  }
  const FieldPtr f = open_field(3, 7);
  EXPECT_EQ(f->traces().tr_theta, -1);
  EXPECT_EQ(f->traces().tr_pair_diag, 5);
  EXPECT_EQ(f->traces().tr_pair_off, -2);
  EXPECT_EQ(f->traces().tr_pair_diag_source, Provenance::DerivedNumeric);
}

TEST(TraceTable, InconsistentDerivedDataRejected) {
  try {
    trace_table(validate_field(3, 7), PairTraces{5, -1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InconsistentTraces);
  }
}

TEST(TraceTable, RamanujanSumOracleForAllGridFields) {
  for (const auto& [p, n] : std::vector<std::pair<int, int>>{
           {3, 9}, {3, 63}, {5, 25}, {5, 275}, {7, 49}, {3, 7}, {3, 13}, {3, 31}, {5, 11}, {3, 91}}) {
    const FieldPtr f = open_field(p, n);
    for (const auto& choice : enumerate_characters(f->spec())) {
      const IntMatrix g = oracle::integral_basis_gram(choice);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
          EXPECT_EQ(trace_bilinear(Element::basis(f, i), Element::basis(f, j)), Rational(g(i, j)))
              << "p=" << p << " n=" << n << " entry " << i << "," << j;
    }
  }
}

TEST(Traces, SpecExamples) {
  const FieldPtr f = open_field(3, 9);
  EXPECT_EQ(trace_linear(Element::one(f)), 3);
  EXPECT_EQ(trace_linear(Element::basis(f, 1)), 0);
  const Element x = element(f, {1, -1, 0});
  const Element y = element(f, {1, 0, -1});
  EXPECT_EQ(trace_bilinear(x, y), 0);
  EXPECT_EQ(trace_bilinear(x, x), 9);
  EXPECT_EQ(trace_bilinear(Element::zero(f), x), 0);

  const FieldPtr g = open_field(3, 7);
  EXPECT_EQ(trace_linear(element(g, {1, 1, 1})), -3);
}

TEST(Traces, FieldMismatch) {
  const FieldPtr a = open_field(3, 9);
  const FieldPtr b = open_field(3, 7);
  try {
    trace_bilinear(Element::one(a), Element::one(b));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FieldMismatch);
  }
}

TEST(Traces, BilinearMatchesNumericInnerProduct) {
  std::mt19937_64 rng(11);
  for (const auto& [p, n] : std::vector<std::pair<int, int>>{{3, 9}, {5, 25}, {3, 63}, {3, 7}, {5, 11}, {7, 49}}) {
    const FieldContext ctx = open_field_context(p, n);
    for (int trial = 0; trial < 100; ++trial) {
      const Element x = random_element(ctx.field, rng, 5);
      const Element y = random_element(ctx.field, rng, 5);
      const auto cx = conjugates(ctx.embedding, x);
      const auto cy = conjugates(ctx.embedding, y);
      double dot = 0;
      for (std::size_t j = 0; j < cx.size(); ++j) dot += cx[j] * cy[j];
      const double exact = trace_bilinear(x, y).convert_to<double>();
      EXPECT_NEAR(dot, exact, 1e-8 * std::max(1.0, std::abs(exact)));
      EXPECT_EQ(trace_bilinear(x, y), trace_bilinear(y, x));
      if (ctx.field->spec().ramified) EXPECT_EQ(trace_linear(x), trace_bilinear(x, Element::one(ctx.field)));
    }
  }
}

TEST(Galois, ThetaHasOrderPAndMatchesConjugateShift) {
  std::mt19937_64 rng(12);
  for (const auto& [p, n] : std::vector<std::pair<int, int>>{{3, 9}, {5, 25}, {3, 7}, {5, 11}}) {
    const FieldContext ctx = open_field_context(p, n);
    for (int trial = 0; trial < 20; ++trial) {
      const Element x = random_element(ctx.field, rng, 4);
      EXPECT_EQ(x.apply_theta(p), x);
      // sigma_{g^j}(theta x) = sigma_{g^{j+1}}(x)
      const auto before = conjugates(ctx.embedding, x);
      const auto after = conjugates(ctx.embedding, x.apply_theta());
      for (std::size_t j = 0; j < before.size(); ++j)
        EXPECT_NEAR(after[j], before[(j + 1) % before.size()], 1e-9 * (1 + std::abs(before[j])));
    }
    EXPECT_TRUE(Element::one(ctx.field).is_rational_integer());
    EXPECT_FALSE(Element::theta_power_of_t(ctx.field, 1).is_rational_integer());
  }
}

TEST(Galois, RamifiedTIsMinusSumOfConjugates) {
  const FieldPtr f = open_field(5, 25);
  Element sum = Element::zero(f);
  for (int k = 0; k < 5; ++k) sum = sum + Element::theta_power_of_t(f, k);
  EXPECT_EQ(sum, Element::zero(f));
}
