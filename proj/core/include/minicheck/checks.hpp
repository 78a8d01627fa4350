#pragma once

#include <set>
#include <string>
#include <vector>

#include "minicheck/callgraph.hpp"
#include "minicheck/cfg.hpp"
#include "minicheck/dataflow.hpp"
#include "minicheck/diagnostics.hpp"
#include "minicheck/sema.hpp"

namespace minicheck::checks {

// Strict keeps every conservative finding. Heuristic drops or downgrades
// findings the flow facts argue against; it may only ever report a subset
// of what strict reports.
enum class Profile { Strict, Heuristic };

// Flow results for one defined function, computed once and shared by all
// checks.
struct AnalyzedFunction {
  const FunctionDef* fn = nullptr;
  flow::Cfg cfg;
  flow::DataflowFacts facts;
};

struct CheckInput {
  const sema::TypedUnit& typed;
  const SourceManager& sm;
  Profile profile = Profile::Strict;
  const flow::CallGraph* callgraph = nullptr;
  const std::vector<AnalyzedFunction>* functions = nullptr;
};

using CheckFn = void (*)(const CheckInput&, std::vector<Diagnostic>&);

struct CheckDef {
  const char* id;
  CheckFn run;
};

// Every registered check, in fixed registration order. Ids match the
// implemented_check column of the guideline registry.
const std::vector<CheckDef>& all_checks();

// Runs the checks named in `enabled` (all of them when empty) and appends
// their findings. Output order is whatever the checks produce; callers
// sort before reporting.
void run_checks(const CheckInput& in, const std::set<std::string>& enabled,
                std::vector<Diagnostic>& out);

// Individual entry points, one per check family.
void check_file_deref(const CheckInput&, std::vector<Diagnostic>&);      // R22.5
void check_readonly_params(const CheckInput&, std::vector<Diagnostic>&); // R17.8
void check_const_candidates(const CheckInput&, std::vector<Diagnostic>&); // R8.13
void check_eof_domain(const CheckInput&, std::vector<Diagnostic>&);      // R21.13
void check_cstring(const CheckInput&, std::vector<Diagnostic>&);         // R21.14/19
void check_init_at_decl(const CheckInput&, std::vector<Diagnostic>&);    // R9.1
void check_determinate_for(const CheckInput&, std::vector<Diagnostic>&); // R14.1/2
void check_no_recursion(const CheckInput&, std::vector<Diagnostic>&);    // R17.2
void check_errno_protocol(const CheckInput&, std::vector<Diagnostic>&);  // R22.8/9/10
void check_stream_ownership(const CheckInput&, std::vector<Diagnostic>&); // R22.1

}  // namespace minicheck::checks
