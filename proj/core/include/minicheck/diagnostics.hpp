#pragma once

#include <string>
#include <vector>

#include "minicheck/source.hpp"

namespace minicheck {

// Confidence of a finding. `Definite`: every execution reaching the flagged
// construct violates the rule as approximated. `Possible`: the analysis
// cannot rule a violation out.
enum class VerdictKind { Definite, Possible };

// How the approximation a check implements relates to the official rule
// text: an over-approximation may flag compliant code but misses nothing
// the approximation covers; an under-approximation flags only genuine
// violations but can stay silent; exact means the check decides its
// restated rule completely.
enum class Relation { OverApprox, UnderApprox, Exact };

const char* verdict_name(VerdictKind v);   // "definite" / "possible"
const char* relation_name(Relation r);     // "over-approx" / ...

struct Diagnostic {
  std::string rule_id;   // e.g. "R22.5", or "D-EFFECTLESS"
  std::string check_id;  // stable check name, e.g. "file-deref-r22-5"
  VerdictKind verdict = VerdictKind::Possible;
  Relation relation = Relation::OverApprox;
  SourceSpan span;
  std::string message;
  // Macro origin chain of the flagged token, innermost first; empty when
  // the construct was written directly.
  std::vector<std::string> origin;
  // When a justification ledger entry matched this finding, the entry in
  // FILE:LINE:CHECK form. Suppressed findings are still rendered; they no
  // longer count toward the exit code.
  std::string suppressed_by;

  bool suppressed() const { return !suppressed_by.empty(); }
};

// Report order: file name, line, column, then rule id. Stable for ties so
// repeated runs emit byte-identical output.
void sort_diagnostics(std::vector<Diagnostic>& ds, const SourceManager& sm);

// "A<-B" for a chain, "direct" when empty. Matches the origin notation used
// by token formatting.
std::string origin_label(const std::vector<std::string>& origin);

// Just the macro names of a token's expansion chain, innermost first.
std::vector<std::string> origin_names(const MacroOrigin& origin);

}  // namespace minicheck
