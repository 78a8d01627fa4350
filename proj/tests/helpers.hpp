#pragma once

#include <set>
#include <string>
#include <vector>

#include "minicheck/checks.hpp"
#include "minicheck/diagnostics.hpp"
#include "minicheck/driver.hpp"

// Shared plumbing for the unit tests: build an analyzed unit from inline
// source, then run one named check against it.

namespace mt {

inline minicheck::driver::AnalyzedUnit analyze(
    const std::string& text, const std::string& name = "unit.c",
    const std::vector<std::string>& defines = {}) {
  return minicheck::driver::analyze_text(name, text, defines);
}

inline minicheck::checks::CheckInput input_of(
    const minicheck::driver::AnalyzedUnit& u,
    minicheck::checks::Profile p = minicheck::checks::Profile::Strict) {
  return minicheck::checks::CheckInput{*u.typed, *u.sm, p, &u.callgraph,
                                       &u.functions};
}

inline std::vector<minicheck::Diagnostic> run_check(
    const minicheck::driver::AnalyzedUnit& u, const std::string& id,
    minicheck::checks::Profile p = minicheck::checks::Profile::Strict) {
  std::vector<minicheck::Diagnostic> out;
  minicheck::checks::run_checks(input_of(u, p), std::set<std::string>{id},
                                out);
  minicheck::sort_diagnostics(out, *u.sm);
  return out;
}

inline int count_rule(const std::vector<minicheck::Diagnostic>& ds,
                      const std::string& rule) {
  int n = 0;
  for (const auto& d : ds)
    if (d.rule_id == rule) ++n;
  return n;
}

inline std::vector<int> lines_of(const std::vector<minicheck::Diagnostic>& ds,
                                 const std::string& rule = "") {
  std::vector<int> out;
  for (const auto& d : ds)
    if (rule.empty() || d.rule_id == rule) out.push_back(d.span.line);
  return out;
}

inline std::string corpus_path(const std::string& name) {
  return std::string(MINICHECK_CORPUS_DIR) + "/" + name;
}

}  // namespace mt
