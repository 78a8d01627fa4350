#pragma once

#include <string>
#include <vector>

#include "minicheck/dataflow.hpp"
#include "minicheck/diagnostics.hpp"
#include "minicheck/preprocessor.hpp"
#include "minicheck/sema.hpp"

namespace minicheck::effectless {

// What makes the operation effectless.
enum class OperationKind {
  NoEffectExprStatement,  // whole statement computes an unused value
  NeutralOperand,         // x+0, x*1, x<<0, ... one operand changes nothing
  DeadStore,              // stored value never read
  NoEffectCall,           // call to a function with an empty body
};

const char* operation_kind_name(OperationKind k);

// Why an effectless operation is (or is not) acceptable. Order matters: the
// classifier stops at the first reason that applies.
enum class Justification {
  MacroAbstraction,   // neutral value came out of a macro expansion
  SizeofAbstraction,  // neutral value is a sizeof
  EnumSeries,         // enumerator shaped like its siblings
  LoopControl,        // dead store feeds a later iteration lexically
  ConfigFunction,     // body emptiness depends on preprocessing conditionals
  LedgerEntry,        // explicitly recorded by a human
  Unjustified,
};

const char* justification_name(Justification j);

struct Finding {
  OperationKind kind = OperationKind::NoEffectExprStatement;
  SourceSpan span;
  std::vector<std::string> origin;  // macro chain of the decisive token
  Justification justification = Justification::Unjustified;
  std::string detail;          // operation-specific text
  std::string ledger_entry;    // set when justification == LedgerEntry
  const Stmt* stmt = nullptr;  // owning statement when known
  Symbol* symbol = nullptr;    // dead stores

  // Neutral-operand context.
  const Expr* neutral_operand = nullptr;
  // Enumerator-initializer context of a neutral operand, when applicable.
  const EnumDef* enum_ctx = nullptr;
  int enum_index = -1;
  // Callee of a no-effect call.
  const FunctionDef* callee = nullptr;
};

// One line of a justification ledger: FILE:LINE:CHECK_ID: reason.
struct LedgerEntry {
  std::string file;
  int line = 0;
  std::string check_id;
  std::string reason;
};

// Parses `FILE:LINE:CHECK_ID: reason` lines; '#' starts a comment and blank
// lines are skipped. Fatal on malformed lines, with the line number.
std::vector<LedgerEntry> parse_ledger(const std::string& text,
                                      const std::string& ledger_name);

// Per-function flow facts the detector consumes (dead stores).
struct FunctionFacts {
  const FunctionDef* fn = nullptr;
  const flow::DataflowFacts* facts = nullptr;
};

// Detects every effectless operation in the unit. Results are in source
// order; each site appears once (a neutral operand inside an otherwise
// effect-free expression statement reports as the more specific neutral
// operand finding).
std::vector<Finding> detect(const sema::TypedUnit& typed,
                            const std::vector<FunctionFacts>& flow_facts,
                            const frontend::PreprocessResult& pp);

// Applies the justification order to each finding in place.
void classify(std::vector<Finding>& findings, const sema::TypedUnit& typed,
              const frontend::PreprocessResult& pp,
              const std::vector<LedgerEntry>& ledger,
              const SourceManager& sm);

enum class ReportMode {
  Directive,   // unjustified findings only, as the planning directive
  StrictR22,   // every finding, as dead-code rule violations
  Off,
};

// Renders findings as diagnostics per mode. Directive mode emits rule
// D-EFFECTLESS; strict mode emits R2.2 and mentions the justification.
std::vector<Diagnostic> report(const std::vector<Finding>& findings,
                               ReportMode mode);

}  // namespace minicheck::effectless
