#include <cstdlib>

#include <gtest/gtest.h>

#include "wrlat/error.hpp"
#include "wrlat/report.hpp"
#include "wrlat/serialize.hpp"

using namespace wrlat;

namespace {

std::string scan_json(const std::vector<ScanRow>& rows) {
  Json list = Json::array();
  for (const auto& r : rows) list.push_back(to_json_value(r));
  return dump(list);
}

}  // namespace

TEST(Analyze, OrbitAnchor) {
  const FieldContext ctx = open_field_context(3, 9);
  const LatticeReport r = analyze_lattice(ctx, {FamilyOption::Orbit, 1, 0, 0});
  EXPECT_TRUE(r.shortest.well_rounded);
  EXPECT_NEAR(r.density.delta_computed, 0.125, 1e-15);
  EXPECT_TRUE(r.density.discrepancy_flag);
  EXPECT_TRUE(*r.closed_form_agrees);
  EXPECT_FALSE(r.is_ideal.has_value());
}

TEST(Analyze, FamiliesResolveByField) {
  const FieldContext u = open_field_context(3, 7);
  const LatticeReport a = analyze_lattice(u, {FamilyOption::Mm, 4, 0, 0});
  EXPECT_EQ(a.basis.family, Family::MmUnramified);
  EXPECT_TRUE(a.shortest.well_rounded);
  EXPECT_TRUE(*a.wr_window);
  EXPECT_TRUE(a.flags.empty());
  const LatticeReport b = analyze_lattice(open_field_context(3, 9), {FamilyOption::Mmc, 5, 2, 0});
  EXPECT_EQ(b.density.index, 5);
  const LatticeReport c = analyze_lattice(open_field_context(3, 9), {FamilyOption::BRam, 0, 0, 0});
  ASSERT_TRUE(c.lambda.has_value());
  EXPECT_EQ(c.quotient_invariants, std::vector<Integer>{3});
  EXPECT_TRUE(*c.is_ideal);
  try {
    analyze_lattice(u, {FamilyOption::Orbit, 1, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongCase);
  }
}

TEST(Analyze, FlagsIndexDifferences) {
  const FieldContext ctx = open_field_context(3, 9);
  const LatticeReport r = analyze_lattice(ctx, {FamilyOption::Mm, 6, 0, 0});
  EXPECT_EQ(r.density.index, 2);
  EXPECT_EQ(*r.density.stated_divisor, 6);
  EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "index-differs-from-stated"), r.flags.end());
}

TEST(Scan, OrderAndContentIndependentOfJobs) {
  const FieldContext ctx = open_field_context(3, 9);
  ScanRequest req;
  req.family = FamilyOption::Mmc;
  req.m_first = 1;
  req.m_last = 7;
  req.jobs = 1;
  const auto one = run_scan(ctx, req);
  req.jobs = 6;
  const auto many = run_scan(ctx, req);
  EXPECT_EQ(scan_json(one), scan_json(many));
  ASSERT_EQ(one.size(), 28u);
  EXPECT_EQ(one[1].m, 2);
  EXPECT_EQ(*one[1].c, 0);
  EXPECT_EQ(*one[2].c, 1);
}

TEST(Scan, OnlyWellRoundedRowsAndErrorRows) {
  const FieldContext u = open_field_context(3, 7);
  ScanRequest req;
  req.family = FamilyOption::Mm;
  req.m_first = 1;
  req.m_last = 12;
  req.only_wr = true;
  std::vector<std::int64_t> ms;
  for (const auto& row : run_scan(u, req)) {
    EXPECT_TRUE(*row.well_rounded);
    ms.push_back(row.m);
  }
  EXPECT_NE(std::find(ms.begin(), ms.end(), 4), ms.end());
  EXPECT_EQ(std::find(ms.begin(), ms.end(), 1), ms.end());

  ScanRequest orbit;
  orbit.family = FamilyOption::Orbit;
  orbit.m_first = 1;
  orbit.m_last = 4;
  const auto rows = run_scan(open_field_context(3, 9), orbit);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_FALSE(rows[2].error.empty());
  EXPECT_TRUE(rows[0].error.empty());
}

TEST(Serialize, FieldAndTraceJson) {
  const FieldPtr f = open_field(3, 9);
  const Json j = to_json_value(f->spec());
  EXPECT_EQ(j["p"], "3");
  EXPECT_EQ(j["n"], "9");
  EXPECT_EQ(j["ramified"], true);
  EXPECT_EQ(j["u"], "1");
  EXPECT_TRUE(j["primes"].empty());
  EXPECT_TRUE(to_json_value(open_field(3, 7)->spec())["u"].is_null());
  const Json t = to_json_value(open_field(3, 7)->traces());
  EXPECT_EQ(t["tr_pair_diag"]["source"], "derived-numeric");
  EXPECT_EQ(t["tr_pair_diag"]["value"], "5");
  EXPECT_EQ(t["tr_theta"]["source"], "closed-form");
}

TEST(Serialize, ShortVectorReportSchema) {
  const FieldContext ctx = open_field_context(3, 9);
  const LatticeReport r = analyze_lattice(ctx, {FamilyOption::Orbit, 1, 0, 0});
  const Json j = to_json_value(r.shortest);
  EXPECT_EQ(j["minimum"], "9");
  EXPECT_EQ(j["count_pairs"], 3);
  EXPECT_EQ(j["well_rounded"], true);
  EXPECT_EQ(j["witness"].size(), 3u);
  const std::string text = dump(to_json_value(r));
  // keys come out sorted
  EXPECT_LT(text.find("\"basis\""), text.find("\"density\""));
}

TEST(Serialize, CsvExports) {
  EXPECT_EQ(matrix_csv(IntMatrix::from_rows({{1, -2}, {3, 4}})), "1,-2\n3,4\n");
  const FieldContext ctx = open_field_context(3, 7);
  const std::string csv = embedding_csv(ctx.embedding);
  const auto first = csv.substr(0, csv.find(','));
  EXPECT_EQ(std::stod(first), ctx.embedding(0, 0));
}

TEST(Serialize, ManifestTimestampHonoursSourceDateEpoch) {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  EXPECT_EQ(manifest_timestamp(), "1970-01-01T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(manifest_timestamp().size(), 20u);
}
