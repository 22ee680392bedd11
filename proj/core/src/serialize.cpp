#include "wrlat/serialize.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "wrlat/error.hpp"

#ifndef WRLAT_VERSION
#define WRLAT_VERSION "0.0.0"
#endif

namespace wrlat {

namespace {

std::string provenance_name(Provenance p) { return p == Provenance::ClosedForm ? "closed-form" : "derived-numeric"; }

Json trace_entry(const Integer& value, Provenance source) {
  return Json{{"value", to_decimal(value)}, {"source", provenance_name(source)}};
}

Json vectors_json(const std::vector<CoefficientVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(v);
  return out;
}

Json optional_integer(const std::optional<Integer>& v) { return v ? Json(to_decimal(*v)) : Json(nullptr); }

template <class T>
Json optional_value(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string yes_no(const std::optional<bool>& v) { return v ? (*v ? "yes" : "no") : "-"; }

std::string joined(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> scan_cells(const ScanRow& r) {
  return {std::to_string(r.m),
          r.c ? std::to_string(*r.c) : "-",
          r.index ? to_decimal(*r.index) : "-",
          r.closed_min ? to_decimal(*r.closed_min) : "-",
          r.enum_min ? to_decimal(*r.enum_min) : "-",
          yes_no(r.agree),
          yes_no(r.well_rounded),
          yes_no(r.wr_window),
          r.delta_computed ? format_double(*r.delta_computed, 10) : "-",
          r.delta_closed_form ? format_double(*r.delta_closed_form, 10) : "-",
          r.flags.empty() ? "-" : joined(r.flags, ";"),
          r.error.empty() ? "-" : r.error};
}

const std::vector<std::string> kScanHeader = {"m",     "c",  "index",          "closed_min",  "enum_min", "agree",
                                              "wr",    "window", "delta_computed", "delta_closed_form", "flags",    "error"};

}  // namespace

Json to_json_value(const FieldSpec& field) {
  Json primes = Json::array();
  for (const auto q : field.primes) primes.push_back(std::to_string(q));
  return Json{{"p", std::to_string(field.p)},
              {"n", std::to_string(field.n)},
              {"ramified", field.ramified},
              {"u", field.ramified ? Json(std::to_string(field.u)) : Json(nullptr)},
              {"s", field.s},
              {"primes", primes},
              {"discriminant", to_decimal(discriminant(field))}};
}

Json to_json_value(const TraceTable& t) {
  return Json{{"tr_one", trace_entry(t.tr_one, t.tr_one_source)},
              {"tr_theta", trace_entry(t.tr_theta, t.tr_theta_source)},
              {"tr_pair_diag", trace_entry(t.tr_pair_diag, t.tr_pair_diag_source)},
              {"tr_pair_off", trace_entry(t.tr_pair_off, t.tr_pair_off_source)}};
}

Json to_json_value(const CharacterChoice& choice, bool with_kernel) {
  Json out{{"component_moduli", choice.component_moduli},
           {"generators", choice.generators},
           {"exponents", choice.exponent_vector},
           {"kernel_size", choice.kernel.size()},
           {"coset_generator", choice.coset_generator}};
  if (with_kernel) out["kernel"] = choice.kernel;
  return out;
}

Json to_json_value(const IntMatrix& matrix) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    Json row = Json::array();
    for (const Integer& v : matrix.row(i)) row.push_back(to_decimal(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json_value(const ModuleBasis& basis) {
  Json params = Json::object();
  if (basis.params.m) params["m"] = std::to_string(*basis.params.m);
  if (basis.params.c) params["c"] = std::to_string(*basis.params.c);
  if (basis.params.j) params["j"] = std::to_string(*basis.params.j);
  Json out{{"family", std::string(family_label(basis.family))},
           {"params", params},
           {"coords", to_json_value(basis.coords)},
           {"index", to_decimal(basis.index())}};
  if (basis.ramified_case)
    out["ramified_case"] = *basis.ramified_case == MmRamifiedCase::PDividesM ? "p-divides-m" : "p-coprime-m";
  return out;
}

Json to_json_value(const GramMatrix& gram) {
  return Json{{"entries", to_json_value(gram.entries)},
              {"source", gram.source},
              {"determinant", to_decimal(determinant(gram.entries))}};
}

Json to_json_value(const ShortVectorReport& r) {
  return Json{{"minimum", to_decimal(r.minimum)},
              {"count_pairs", r.minimal_vectors.size()},
              {"minimal_vectors", vectors_json(r.minimal_vectors)},
              {"span_rank", r.span_rank},
              {"well_rounded", r.well_rounded},
              {"witness", vectors_json(r.witness)}};
}

Json to_json_value(const DensityReport& d) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  return Json{{"minimum", to_decimal(d.minimum)},
              {"volume_sq", to_decimal(d.volume_sq)},
              {"index", to_decimal(d.index)},
              {"delta_sq", Json{{"numerator", to_decimal(numerator(d.delta_sq))},
                                {"denominator", to_decimal(denominator(d.delta_sq))}}},
              {"delta_computed", d.delta_computed},
              {"formula_minimum", optional_integer(d.formula_minimum)},
              {"stated_divisor", optional_integer(d.stated_divisor)},
              {"delta_closed_form", optional_value(d.delta_closed_form)},
              {"discrepancy_flag", d.discrepancy_flag}};
}

Json to_json_value(const LambdaGenerator& l) {
  Json coords = Json::array();
  for (const Integer& v : l.lambda.coords()) coords.push_back(to_decimal(v));
  return Json{{"coords", coords}, {"conjugates", l.conjugates}, {"norm", l.norm}, {"ell", l.ell}};
}

Json to_json_value(const LatticeReport& r) {
  Json quotient = Json::array();
  for (const Integer& d : r.quotient_invariants) quotient.push_back(to_decimal(d));
  Json out{{"family", std::string(family_option_name(r.params.family))},
           {"basis", to_json_value(r.basis)},
           {"gram", to_json_value(r.gram)},
           {"shortest", to_json_value(r.shortest)},
           {"closed_form_minimum", optional_integer(r.closed_form_minimum)},
           {"closed_form_agrees", optional_value(r.closed_form_agrees)},
           {"wr_window", optional_value(r.wr_window)},
           {"density", to_json_value(r.density)},
           {"quotient_invariants", quotient},
           {"is_ideal", optional_value(r.is_ideal)},
           {"flags", r.flags}};
  out["lambda"] = r.lambda ? to_json_value(*r.lambda) : Json(nullptr);
  return out;
}

Json to_json_value(const ScanRow& r) {
  return Json{{"m", std::to_string(r.m)},
              {"c", r.c ? Json(std::to_string(*r.c)) : Json(nullptr)},
              {"index", optional_integer(r.index)},
              {"closed_min", optional_integer(r.closed_min)},
              {"enum_min", optional_integer(r.enum_min)},
              {"agree", optional_value(r.agree)},
              {"well_rounded", optional_value(r.well_rounded)},
              {"wr_window", optional_value(r.wr_window)},
              {"delta_computed", optional_value(r.delta_computed)},
              {"delta_closed_form", optional_value(r.delta_closed_form)},
              {"flags", r.flags},
              {"error", r.error.empty() ? Json(nullptr) : Json(r.error)}};
}

Json to_json_value(const CirculantCheck& c) {
  return Json{{"det_numeric", c.det_numeric},
              {"nonzero", c.nonzero},
              {"factor_moduli", c.factor_moduli},
              {"tolerance", c.tolerance},
              {"factor_tolerance", c.factor_tolerance},
              {"det_from_coordinates", c.det_from_coordinates},
              {"precision_bits", c.precision_bits},
              {"trace", c.trace.str()}};
}

std::string manifest_timestamp() {
  std::time_t when = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long value = std::strtoll(epoch, &end, 10);
    if (end == epoch || *end != '\0') throw Error(ErrorKind::BadParams, "SOURCE_DATE_EPOCH is not an integer");
    when = static_cast<std::time_t>(value);
  } else {
    when = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm utc{};
  gmtime_r(&when, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string library_version() { return WRLAT_VERSION; }

Json to_json_value(const RunManifest& m) {
  return Json{{"command_line", m.command_line},
              {"p", std::to_string(m.p)},
              {"n", std::to_string(m.n)},
              {"choice", m.choice},
              {"precision_bits", m.precision_bits},
              {"version", m.version},
              {"timestamp", m.timestamp}};
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

std::string matrix_csv(const IntMatrix& matrix) {
  std::string out;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out += ',';
      out += to_decimal(matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string embedding_csv(const EmbeddingMatrix& e) {
  std::string out;
  for (std::size_t i = 0; i < e.dim; ++i) {
    for (std::size_t j = 0; j < e.dim; ++j) {
      if (j > 0) out += ',';
      out += format_double(e(i, j), 17);
    }
    out += '\n';
  }
  return out;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = joined(kScanHeader, ",") + "\n";
  for (const auto& r : rows) {
    auto cells = scan_cells(r);
    for (auto& c : cells) c = csv_field(c);
    out += joined(cells, ",") + "\n";
  }
  return out;
}

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (width.size() <= j) width.push_back(0);
      width[j] = std::max(width[j], row[j].size());
    }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) line += "  ";
      line += row[j];
      if (j + 1 < row.size()) line.append(width[j] - row[j].size(), ' ');
    }
    line.erase(line.find_last_not_of(' ') + 1);
    out += line + "\n";
  }
  return out;
}

std::string scan_table(const std::vector<ScanRow>& rows) {
  std::vector<std::vector<std::string>> cells{kScanHeader};
  for (const auto& r : rows) cells.push_back(scan_cells(r));
  return aligned(cells);
}

std::string lattice_table(const LatticeReport& r) {
  std::vector<std::vector<std::string>> cells{{"quantity", "value"}};
  cells.push_back({"family", std::string(family_label(r.basis.family))});
  if (r.basis.params.m) cells.push_back({"m", std::to_string(*r.basis.params.m)});
  if (r.basis.params.c) cells.push_back({"c", std::to_string(*r.basis.params.c)});
  if (r.basis.params.j) cells.push_back({"j", std::to_string(*r.basis.params.j)});
  cells.push_back({"index", to_decimal(r.density.index)});
  cells.push_back({"det Gram", to_decimal(r.density.volume_sq)});
  cells.push_back({"minimum", to_decimal(r.shortest.minimum)});
  cells.push_back({"closed-form minimum", r.closed_form_minimum ? to_decimal(*r.closed_form_minimum) : "-"});
  cells.push_back({"minimal pairs", std::to_string(r.shortest.minimal_vectors.size())});
  cells.push_back({"span rank", std::to_string(r.shortest.span_rank)});
  cells.push_back({"well rounded", r.shortest.well_rounded ? "yes" : "no"});
  cells.push_back({"WR window", yes_no(r.wr_window)});
  cells.push_back({"ideal", yes_no(r.is_ideal)});
  cells.push_back({"delta computed", format_double(r.density.delta_computed, 12)});
  cells.push_back({"delta formula", r.density.delta_closed_form ? format_double(*r.density.delta_closed_form, 12) : "-"});
  cells.push_back({"density discrepancy", r.density.discrepancy_flag ? "yes" : "no"});
  cells.push_back({"flags", r.flags.empty() ? "-" : joined(r.flags, ";")});
  std::string out = aligned(cells);
  out += "basis rows (integral coordinates):\n" + matrix_csv(r.basis.coords);
  out += "Gram:\n" + matrix_csv(r.gram.entries);
  return out;
}

std::string field_table(const FieldSpec& f, const TraceTable& t, std::size_t choice_count) {
  std::vector<std::vector<std::string>> cells{{"quantity", "value", "source"}};
  cells.push_back({"p", std::to_string(f.p), ""});
  cells.push_back({"n", std::to_string(f.n), ""});
  cells.push_back({"case", f.ramified ? "ramified" : "unramified", ""});
  if (f.ramified) cells.push_back({"u", std::to_string(f.u), ""});
  cells.push_back({"discriminant", to_decimal(discriminant(f)), ""});
  cells.push_back({"Tr(1)", to_decimal(t.tr_one), provenance_name(t.tr_one_source)});
  cells.push_back({"Tr(theta^i(t))", to_decimal(t.tr_theta), provenance_name(t.tr_theta_source)});
  cells.push_back({"Tr(theta^i(t)^2)", to_decimal(t.tr_pair_diag), provenance_name(t.tr_pair_diag_source)});
  cells.push_back({"Tr(theta^i(t) theta^j(t))", to_decimal(t.tr_pair_off), provenance_name(t.tr_pair_off_source)});
  cells.push_back({"character choices", std::to_string(choice_count), ""});
  return aligned(cells);
}

}  // namespace wrlat
