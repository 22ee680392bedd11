#pragma once

// JSON, CSV and aligned-text renderings. JSON objects are key-sorted and
// integers are written as decimal strings.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wrlat/field.hpp"
#include "wrlat/modules.hpp"
#include "wrlat/periods.hpp"
#include "wrlat/report.hpp"
#include "wrlat/svp.hpp"

namespace wrlat {

using Json = nlohmann::json;

Json to_json_value(const FieldSpec& field);
Json to_json_value(const TraceTable& traces);
Json to_json_value(const CharacterChoice& choice, bool with_kernel = false);
Json to_json_value(const IntMatrix& matrix);
Json to_json_value(const ModuleBasis& basis);
Json to_json_value(const GramMatrix& gram);
Json to_json_value(const ShortVectorReport& report);
Json to_json_value(const DensityReport& density);
Json to_json_value(const LambdaGenerator& lambda);
Json to_json_value(const LatticeReport& report);
Json to_json_value(const ScanRow& row);
Json to_json_value(const CirculantCheck& check);

struct RunManifest {
  std::vector<std::string> command_line;
  std::int64_t p = 0;
  std::int64_t n = 0;
  std::size_t choice = 0;
  int precision_bits = 53;
  std::string version;
  std::string timestamp;
};

/// UTC ISO-8601 from SOURCE_DATE_EPOCH when set, else the current time.
std::string manifest_timestamp();
std::string library_version();

Json to_json_value(const RunManifest& manifest);

/// Pretty JSON with a trailing newline.
std::string dump(const Json& value);

std::string matrix_csv(const IntMatrix& matrix);
/// 17 significant digits, enough to round-trip doubles.
std::string embedding_csv(const EmbeddingMatrix& embedding);
std::string scan_csv(const std::vector<ScanRow>& rows);
std::string scan_table(const std::vector<ScanRow>& rows);
std::string lattice_table(const LatticeReport& report);
std::string field_table(const FieldSpec& field, const TraceTable& traces, std::size_t choice_count);

/// Aligned columns; the first row is the header.
std::string aligned(const std::vector<std::vector<std::string>>& rows);

}  // namespace wrlat
