#pragma once

// Named verification sweeps: each claim is evaluated on a fixed grid of
// fields and parameters and compared against the exact machinery.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace wrlat {

struct ClaimResult {
  std::string claim;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;  // inputs and observed values of the first failing case
  bool passed() const noexcept { return failures == 0; }
};

struct SuiteResult {
  std::string name;
  std::vector<ClaimResult> claims;
  bool passed() const noexcept;
  const ClaimResult* first_failure() const noexcept;
};

const std::vector<std::string>& suite_names();

/// Throws BadParams for an unknown name.
SuiteResult run_suite(std::string_view name);

}  // namespace wrlat
