#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "minicheck/checks.hpp"
#include "minicheck/coverage.hpp"
#include "minicheck/diagnostics.hpp"
#include "minicheck/effectless.hpp"
#include "minicheck/parser.hpp"
#include "minicheck/preprocessor.hpp"

namespace minicheck::driver {

// Process exit codes. Suppressed findings never count.
inline constexpr int exit_clean = 0;     // no findings
inline constexpr int exit_definite = 1;  // at least one definite finding
inline constexpr int exit_possible = 2;  // possible findings only
inline constexpr int exit_usage = 3;     // usage, input, or internal error

enum class OutputFormat { Text, Ndjson };

struct CheckOptions {
  std::vector<std::string> files;
  std::vector<std::string> defines;        // NAME or NAME=VALUE
  std::vector<std::string> include_paths;  // quoted-include search dirs
  checks::Profile profile = checks::Profile::Strict;
  effectless::ReportMode effectless_mode = effectless::ReportMode::Directive;
  // Check-id filters; both validated against the known ids. An empty
  // `enabled` means everything.
  std::vector<std::string> enabled;
  std::vector<std::string> disabled;
  std::string coverage_file;     // execution-count records
  std::string ledger_file;       // justification / suppression entries
  std::string annotations_file;  // extra entry-point names
  OutputFormat format = OutputFormat::Text;
  bool dump_cfg = false;
};

// One file through the whole front half: preprocess, parse, type, then
// per-function control flow and dataflow plus the unit call graph. Owns
// everything the analyses point into.
struct AnalyzedUnit {
  std::unique_ptr<SourceManager> sm;
  frontend::PreprocessResult pp;
  std::unique_ptr<TranslationUnit> tu;
  std::unique_ptr<sema::TypedUnit> typed;
  std::vector<checks::AnalyzedFunction> functions;  // defined functions
  flow::CallGraph callgraph;
};

// Throws FatalError with a pre-formatted "FILE:LINE:COL: error: ..."
// message on any front-end failure.
AnalyzedUnit analyze_file(const std::string& path,
                          const std::vector<std::string>& defines = {},
                          const std::vector<std::string>& include_paths = {});
AnalyzedUnit analyze_text(const std::string& name, const std::string& text,
                          const std::vector<std::string>& defines = {},
                          const std::vector<std::string>& include_paths = {});

// The `check` pipeline: analyze every file, run the enabled checks, fold in
// effectless findings and coverage evidence, apply ledger suppression, sort,
// render. Diagnostics go to `out`, errors and warnings to `err`.
int run_check(const CheckOptions& opt, std::ostream& out, std::ostream& err);

struct ProgramOptions {
  std::string file;
  std::vector<std::string> defines;
  std::vector<std::string> include_paths;
  std::string entry = "main";
  std::vector<std::int64_t> args;
  std::int64_t fuel = 10000;
};

// The `run` pipeline: interpret one file and print its trace. Exit is 0
// whenever the interpreter produced a trace, whatever the outcome.
int run_program(const ProgramOptions& opt, std::ostream& out,
                std::ostream& err);

// The `registry` pipeline: render the guideline table.
int run_registry(std::ostream& out);

// Renderers, shared with the tests. Both end with a newline.
std::string render_text_line(const Diagnostic& d, const SourceManager& sm);
std::string render_ndjson_line(const Diagnostic& d, const SourceManager& sm);

}  // namespace minicheck::driver
