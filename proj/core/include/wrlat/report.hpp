#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wrlat/modules.hpp"
#include "wrlat/periods.hpp"
#include "wrlat/svp.hpp"

namespace wrlat {

/// Module families as named on the command line.
enum class FamilyOption { OK, Mm, Mmc, Orbit, Bj, BRam };

std::optional<FamilyOption> parse_family(std::string_view name);
std::string_view family_option_name(FamilyOption family) noexcept;

struct LatticeParams {
  FamilyOption family = FamilyOption::OK;
  std::int64_t m = 0;
  std::int64_t c = 0;
  std::int64_t j = 0;
};

/// mm resolves to the ramified or unramified constructor by the field.
ModuleBasis build_family(const FieldContext& ctx, const LatticeParams& params);

struct LatticeReport {
  LatticeParams params;
  ModuleBasis basis;
  GramMatrix gram;
  ShortVectorReport shortest;
  std::optional<Integer> closed_form_minimum;
  std::optional<bool> closed_form_agrees;
  std::optional<bool> wr_window;  // unramified M_m with m = 1 mod p
  DensityReport density;
  std::vector<Integer> quotient_invariants;
  std::optional<bool> is_ideal;
  std::optional<LambdaGenerator> lambda;
  std::vector<std::string> flags;
};

/// Basis, Gram, exact minimum, closed form comparison and density.
LatticeReport analyze_lattice(const FieldContext& ctx, const LatticeParams& params);

struct ScanRequest {
  FamilyOption family = FamilyOption::Mm;
  std::int64_t m_first = 1;
  std::int64_t m_last = 1;
  std::int64_t j = 0;
  bool only_wr = false;
  unsigned jobs = 1;
};

struct ScanRow {
  std::int64_t m = 0;
  std::optional<std::int64_t> c;
  std::optional<Integer> index;
  std::optional<Integer> closed_min;
  std::optional<Integer> enum_min;
  std::optional<bool> agree;
  std::optional<bool> well_rounded;
  std::optional<bool> wr_window;
  std::optional<double> delta_computed;
  std::optional<double> delta_closed_form;
  std::vector<std::string> flags;
  std::string error;
};

ScanRow summarize(const LatticeReport& report);

/// One row per parameter tuple in ascending (m, c) order regardless of jobs.
std::vector<ScanRow> run_scan(const FieldContext& ctx, const ScanRequest& request);

}  // namespace wrlat
