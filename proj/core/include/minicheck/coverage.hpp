#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "minicheck/callgraph.hpp"
#include "minicheck/checks.hpp"
#include "minicheck/diagnostics.hpp"
#include "minicheck/sema.hpp"

namespace minicheck::coverage {

// Execution counts keyed by source position. Duplicate records sum.
struct CoverageData {
  std::map<std::pair<std::string, int>, std::int64_t> stmt_counts;
  std::map<std::tuple<std::string, int, int>, std::int64_t> branch_counts;
  bool empty() const { return stmt_counts.empty() && branch_counts.empty(); }
};

// Record format, one per line:
//   S <file> <line> <count>
//   B <file> <line> <branch-index> <count>
// '#' lines and blank lines are skipped. Fatal on anything else, with the
// offending line number.
CoverageData parse_coverage(const std::string& text, const std::string& name);

// Extra entry points for reachability (interrupt handlers, functions called
// from assembly). One function name per line; '#' comments.
std::vector<std::string> parse_annotations(const std::string& text);

enum class StmtStatus {
  Covered,
  UncoveredStaticallyUnreachable,  // analysis already proves it dead
  UncoveredUnknown,                // needs more tests or is dynamically dead
};

enum class BranchStatus { BothTaken, OneSideNever, StaticallyConstant };

const char* stmt_status_name(StmtStatus s);
const char* branch_status_name(BranchStatus s);

struct StmtEvidence {
  const Stmt* stmt = nullptr;
  StmtStatus status = StmtStatus::UncoveredUnknown;
  std::int64_t count = 0;
};

struct BranchEvidence {
  const Stmt* decision = nullptr;  // the branching statement
  int index = 0;                   // side index, see README
  BranchStatus status = BranchStatus::BothTaken;
  std::int64_t count = 0;
};

// Merged static + dynamic verdicts. The pass flags answer the two
// evidence-based rules: full statement coverage with no statically dead
// code, and every branch side exercised with no constant conditions.
struct EvidenceReport {
  std::vector<StmtEvidence> statements;  // every executable statement
  std::vector<BranchEvidence> branches;  // every conditional edge
  bool r2_1_pass = true;
  std::vector<const Stmt*> r2_1_open;  // statements blocking the claim
  bool r14_3_pass = true;
  std::vector<BranchEvidence> r14_3_open;
  // Constant controlling expressions are definite findings regardless of
  // what the coverage data says.
  std::vector<Diagnostic> diagnostics;
  // Coverage records that point at no statement/branch, unknown annotation
  // names, and similar oddities.
  std::vector<std::string> warnings;
};

// Throws when the data claims execution of something the static analysis
// proved unreachable: that is an internal soundness violation, not an input
// error.
EvidenceReport merge_evidence(const sema::TypedUnit& typed,
                              const std::vector<checks::AnalyzedFunction>& fns,
                              const flow::CallGraph& cg,
                              const CoverageData& data,
                              const std::vector<std::string>& annotations,
                              const SourceManager& sm);

}  // namespace minicheck::coverage
