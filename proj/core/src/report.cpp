#include "wrlat/report.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "wrlat/error.hpp"

namespace wrlat {

std::optional<FamilyOption> parse_family(std::string_view name) {
  if (name == "ok") return FamilyOption::OK;
  if (name == "mm") return FamilyOption::Mm;
  if (name == "mmc") return FamilyOption::Mmc;
  if (name == "orbit") return FamilyOption::Orbit;
  if (name == "bj") return FamilyOption::Bj;
  if (name == "bram") return FamilyOption::BRam;
  return std::nullopt;
}

std::string_view family_option_name(FamilyOption family) noexcept {
  switch (family) {
    case FamilyOption::OK:
      return "ok";
    case FamilyOption::Mm:
      return "mm";
    case FamilyOption::Mmc:
      return "mmc";
    case FamilyOption::Orbit:
      return "orbit";
    case FamilyOption::Bj:
      return "bj";
    case FamilyOption::BRam:
      return "bram";
  }
  return "?";
}

ModuleBasis build_family(const FieldContext& ctx, const LatticeParams& params) {
  switch (params.family) {
    case FamilyOption::OK:
      return build_OK(ctx.field);
    case FamilyOption::Mm:
      return ctx.field->spec().ramified ? build_Mm_ramified(ctx.field, params.m)
                                        : build_Mm_unramified(ctx.field, params.m);
    case FamilyOption::Mmc:
      return build_Mmc(ctx.field, params.m, params.c);
    case FamilyOption::Orbit:
      return build_orbit_M(ctx.field, params.m);
    case FamilyOption::Bj:
      return build_Bj_unramified(ctx.field, params.j);
    case FamilyOption::BRam:
      return build_B_ramified(ctx.field, ctx.embedding);
  }
  throw Error(ErrorKind::BadParams, "unknown family");
}

LatticeReport analyze_lattice(const FieldContext& ctx, const LatticeParams& params) {
  LatticeReport r;
  r.params = params;
  r.basis = build_family(ctx, params);
  r.gram = gram(r.basis);
  r.shortest = enumerate_minimum(r.gram);
  const FieldSpec& spec = ctx.field->spec();

  if (has_closed_form_minimum(r.basis)) {
    r.closed_form_minimum = closed_form_minimum(r.basis);
    r.closed_form_agrees = *r.closed_form_minimum == r.shortest.minimum;
    if (!*r.closed_form_agrees) r.flags.emplace_back("closed-form-minimum-differs");
  }
  if (r.basis.family == Family::MmUnramified && params.m % spec.p == 1) {
    r.wr_window = wr_window_unramified(spec, params.m);
    if (*r.wr_window != r.shortest.well_rounded) r.flags.emplace_back("wr-window-differs");
  }

  r.density = center_density(r.basis, r.gram, r.shortest.minimum);
  if (r.density.stated_divisor && *r.density.stated_divisor != r.density.index)
    r.flags.emplace_back("index-differs-from-stated");
  if (r.density.discrepancy_flag) r.flags.emplace_back("density-discrepancy");
  r.quotient_invariants = quotient_structure(r.basis);

  switch (r.basis.family) {
    case Family::OrbitM:
    case Family::Custom:
      break;
    default:
      r.is_ideal = ideal_test(r.basis, ctx.embedding);
  }
  if (r.basis.family == Family::BRamified && spec.s == 0) r.lambda = lambda_generator(ctx.field, ctx.embedding);
  return r;
}

ScanRow summarize(const LatticeReport& report) {
  ScanRow row;
  row.m = report.params.m;
  if (report.params.family == FamilyOption::Mmc) row.c = report.params.c;
  row.index = report.density.index;
  row.closed_min = report.closed_form_minimum;
  row.enum_min = report.shortest.minimum;
  row.agree = report.closed_form_agrees;
  row.well_rounded = report.shortest.well_rounded;
  row.wr_window = report.wr_window;
  row.delta_computed = report.density.delta_computed;
  row.delta_closed_form = report.density.delta_closed_form;
  row.flags = report.flags;
  return row;
}

std::vector<ScanRow> run_scan(const FieldContext& ctx, const ScanRequest& request) {
  if (request.m_first < 1 || request.m_last < request.m_first)
    throw Error(ErrorKind::BadParams, "m range must satisfy 1 <= a <= b");
  std::vector<LatticeParams> tuples;
  for (std::int64_t m = request.m_first; m <= request.m_last; ++m) {
    if (request.family == FamilyOption::Mmc) {
      for (std::int64_t c = 0; c < m; ++c) tuples.push_back({request.family, m, c, request.j});
    } else {
      tuples.push_back({request.family, m, 0, request.j});
    }
  }

  std::vector<ScanRow> rows(tuples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tuples.size(); i = next++) {
      try {
        rows[i] = summarize(analyze_lattice(ctx, tuples[i]));
      } catch (const std::exception& e) {
        rows[i] = ScanRow{};
        rows[i].m = tuples[i].m;
        if (request.family == FamilyOption::Mmc) rows[i].c = tuples[i].c;
        rows[i].error = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(request.jobs, static_cast<unsigned>(tuples.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (request.only_wr)
    std::erase_if(rows, [](const ScanRow& row) { return !row.error.empty() || !row.well_rounded.value_or(false); });
  return rows;
}

}  // namespace wrlat
