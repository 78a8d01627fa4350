#include "minicheck/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace minicheck {

const char* verdict_name(VerdictKind v) {
  return v == VerdictKind::Definite ? "definite" : "possible";
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::OverApprox: return "over-approx";
    case Relation::UnderApprox: return "under-approx";
    case Relation::Exact: return "exact";
  }
  return "?";
}

void sort_diagnostics(std::vector<Diagnostic>& ds, const SourceManager& sm) {
  std::stable_sort(ds.begin(), ds.end(),
                   [&](const Diagnostic& a, const Diagnostic& b) {
                     return std::make_tuple(sm.file_name(a.span.file),
                                            a.span.line, a.span.col,
                                            a.rule_id) <
                            std::make_tuple(sm.file_name(b.span.file),
                                            b.span.line, b.span.col,
                                            b.rule_id);
                   });
}

std::vector<std::string> origin_names(const MacroOrigin& origin) {
  std::vector<std::string> names;
  names.reserve(origin.size());
  for (const auto& link : origin) names.push_back(link.name);
  return names;
}

std::string origin_label(const std::vector<std::string>& origin) {
  if (origin.empty()) return "direct";
  std::string out;
  for (const auto& m : origin) {
    if (!out.empty()) out += "<-";
    out += m;
  }
  return out;
}

}  // namespace minicheck
