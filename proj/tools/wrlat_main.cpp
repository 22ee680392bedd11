// wrlat: construct and analyze lattices from cyclic fields of odd prime degree.
// Exit codes: 0 ok, 1 verification failure, 2 usage or domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wrlat/error.hpp"
#include "wrlat/modules.hpp"
#include "wrlat/periods.hpp"
#include "wrlat/report.hpp"
#include "wrlat/serialize.hpp"
#include "wrlat/svp.hpp"
#include "wrlat/verify.hpp"

namespace {

constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::int64_t p = 0;
  std::int64_t n = 0;
  std::string family = "ok";
  std::int64_t m = 0;
  std::int64_t c = 0;
  std::int64_t j = 0;
  std::string m_range;
  std::size_t choice = 0;
  std::optional<int> precision;
  std::string format;  // per-command default when empty
  unsigned jobs = 1;
  std::string out;
  bool only_wr = false;
  bool kernels = false;
  std::string suite = "all";
};

// Flags that only affect scheduling or destination are left out so that the
// manifest, and with it the output, does not depend on them.
std::vector<std::string> canonical_command_line(int argc, char** argv) {
  std::vector<std::string> out{"wrlat"};
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--jobs" || arg == "--out") {
      ++i;
      continue;
    }
    if (arg.rfind("--jobs=", 0) == 0 || arg.rfind("--out=", 0) == 0) continue;
    out.push_back(arg);
  }
  return out;
}

wrlat::Precision precision_of(const Options& o) {
  if (o.precision) {
    wrlat::Precision p{*o.precision};
    p.tier();
    return p;
  }
  return wrlat::precision_from_environment();
}

wrlat::FieldContext context_of(const Options& o) {
  return wrlat::open_field_context(o.p, o.n, {o.choice, precision_of(o)});
}

wrlat::RunManifest manifest_of(const Options& o, const std::vector<std::string>& command_line) {
  wrlat::RunManifest m;
  m.command_line = command_line;
  m.p = o.p;
  m.n = o.n;
  m.choice = o.choice;
  m.precision_bits = precision_of(o).tier();
  m.version = wrlat::library_version();
  m.timestamp = wrlat::manifest_timestamp();
  return m;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw wrlat::Error(wrlat::ErrorKind::BadParams, "cannot write " + o.out);
  file << text;
}

std::string with_manifest(const wrlat::Json& result, const wrlat::RunManifest& manifest) {
  return wrlat::dump(wrlat::Json{{"manifest", wrlat::to_json_value(manifest)}, {"result", result}});
}

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (o.format == f) return;
  throw wrlat::Error(wrlat::ErrorKind::BadParams, "format " + o.format + " is not available for this command");
}

wrlat::FamilyOption family_of(const Options& o) {
  const auto f = wrlat::parse_family(o.family);
  if (!f) throw wrlat::Error(wrlat::ErrorKind::BadParams, "unknown family " + o.family);
  return *f;
}

int cmd_field_info(const Options& o, const std::vector<std::string>& cl) {
  require_format(o, {"json", "table"});
  const wrlat::FieldContext ctx = context_of(o);
  const auto& spec = ctx.field->spec();
  if (o.format == "table") {
    emit(o, wrlat::field_table(spec, ctx.field->traces(), ctx.choices.size()));
    return 0;
  }
  wrlat::Json choices = wrlat::Json::array();
  for (const auto& c : ctx.choices) choices.push_back(wrlat::to_json_value(c, o.kernels));
  const wrlat::Json result{{"field", wrlat::to_json_value(spec)},
                           {"traces", wrlat::to_json_value(ctx.field->traces())},
                           {"character_choices", choices},
                           {"choice_count", ctx.choices.size()}};
  emit(o, with_manifest(result, manifest_of(o, cl)));
  return 0;
}

int cmd_lattice(const Options& o, const std::vector<std::string>& cl) {
  require_format(o, {"json", "table", "csv"});
  const wrlat::FieldContext ctx = context_of(o);
  const wrlat::LatticeReport r = wrlat::analyze_lattice(ctx, {family_of(o), o.m, o.c, o.j});
  if (o.format == "table") {
    emit(o, wrlat::lattice_table(r));
  } else if (o.format == "csv") {
    emit(o, wrlat::matrix_csv(r.gram.entries));
  } else {
    emit(o, with_manifest(wrlat::to_json_value(r), manifest_of(o, cl)));
  }
  return 0;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  static const std::regex pattern(R"((\d+)(?:\.\.(\d+))?)");
  std::smatch match;
  if (!std::regex_match(text, match, pattern))
    throw wrlat::Error(wrlat::ErrorKind::BadParams, "expected m or a range a..b, got '" + text + "'");
  const std::int64_t first = std::stoll(match[1]);
  return {first, match[2].matched ? std::stoll(match[2]) : first};
}

int cmd_scan(const Options& o, const std::vector<std::string>& cl) {
  require_format(o, {"json", "table", "csv"});
  const wrlat::FieldContext ctx = context_of(o);
  wrlat::ScanRequest request;
  request.family = family_of(o);
  std::tie(request.m_first, request.m_last) = parse_range(o.m_range);
  request.j = o.j;
  request.only_wr = o.only_wr;
  request.jobs = o.jobs;
  const auto rows = wrlat::run_scan(ctx, request);
  if (o.format == "table") {
    emit(o, wrlat::scan_table(rows));
  } else if (o.format == "csv") {
    emit(o, wrlat::scan_csv(rows));
  } else {
    wrlat::Json list = wrlat::Json::array();
    for (const auto& row : rows) list.push_back(wrlat::to_json_value(row));
    const wrlat::Json result{{"family", o.family}, {"rows", list}};
    emit(o, with_manifest(result, manifest_of(o, cl)));
  }
  return 0;
}

int cmd_embedding(const Options& o, const std::vector<std::string>& cl) {
  require_format(o, {"json", "csv"});
  const wrlat::FieldContext ctx = context_of(o);
  if (o.format == "csv") {
    emit(o, wrlat::embedding_csv(ctx.embedding));
    return 0;
  }
  const wrlat::Json result{{"choice", wrlat::to_json_value(ctx.embedding.choice)},
                           {"precision_bits", ctx.embedding.precision_bits},
                           {"entries", ctx.embedding.entries},
                           {"determinant", wrlat::embedding_determinant(ctx.embedding)}};
  emit(o, with_manifest(result, manifest_of(o, cl)));
  return 0;
}

int cmd_verify(const Options& o) {
  std::vector<std::string> suites;
  if (o.suite == "all") {
    suites = wrlat::suite_names();
  } else {
    suites.push_back(o.suite);
  }
  std::string text;
  int status = 0;
  for (const auto& name : suites) {
    const wrlat::SuiteResult result = wrlat::run_suite(name);
    text += "suite " + result.name + ": " + (result.passed() ? "PASS" : "FAIL") + "\n";
    for (const auto& claim : result.claims) {
      text += "  [" + std::string(claim.passed() ? "pass" : "FAIL") + "] " + claim.claim + " (" +
              std::to_string(claim.cases - claim.failures) + "/" + std::to_string(claim.cases) + ")\n";
      if (!claim.passed()) text += "         first failing case: " + claim.first_failure + "\n";
    }
    if (!result.passed()) status = kExitVerification;
  }
  emit(o, text);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattices from cyclic number fields of odd prime degree"};
  app.require_subcommand(1);
  Options o;

  auto add_field = [&](CLI::App* cmd) {
    cmd->add_option("-p", o.p, "prime degree")->required();
    cmd->add_option("-n", o.n, "conductor")->required();
    cmd->add_option("--choice", o.choice, "character choice index");
    cmd->add_option("--precision", o.precision, "working precision in bits (53, 106, 212, 424)");
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "output format");
    cmd->add_option("--out", o.out, "write output to FILE");
  };

  auto* info = app.add_subcommand("field-info", "field data, traces and character choices");
  add_field(info);
  info->add_flag("--kernels", o.kernels, "include the kernel residues of each choice");
  add_output(info);

  auto* lattice = app.add_subcommand("lattice", "build and analyze one module lattice");
  add_field(lattice);
  lattice->add_option("--family", o.family, "ok|mm|mmc|orbit|bj|bram")->required();
  lattice->add_option("-m", o.m, "modulus m");
  lattice->add_option("-c", o.c, "residue c for mmc");
  lattice->add_option("-j", o.j, "prime index j for bj");
  add_output(lattice);

  auto* scan = app.add_subcommand("scan", "analyze a range of m");
  add_field(scan);
  scan->add_option("--family", o.family, "ok|mm|mmc|orbit|bj|bram")->required();
  scan->add_option("-m,--m", o.m_range, "m or a range a..b")->required();
  scan->add_option("-j", o.j, "prime index j for bj");
  scan->add_flag("--only-wr", o.only_wr, "keep only well-rounded rows");
  scan->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  add_output(scan);

  auto* embedding = app.add_subcommand("embedding", "canonical embedding matrix");
  add_field(embedding);
  add_output(embedding);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", o.suite, "suite name or 'all'");
  verify->add_option("--out", o.out, "write output to FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (o.format.empty()) o.format = embedding->parsed() ? "csv" : "json";
  const auto command_line = canonical_command_line(argc, argv);
  try {
    if (info->parsed()) return cmd_field_info(o, command_line);
    if (lattice->parsed()) return cmd_lattice(o, command_line);
    if (scan->parsed()) return cmd_scan(o, command_line);
    if (embedding->parsed()) return cmd_embedding(o, command_line);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const wrlat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == wrlat::ErrorKind::VerificationFailed ? kExitVerification : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
