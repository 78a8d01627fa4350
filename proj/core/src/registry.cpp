#include "minicheck/registry.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace minicheck {

const char* category_name(Category c) {
  switch (c) {
    case Category::Mandatory: return "mandatory";
    case Category::Required: return "required";
    case Category::Advisory: return "advisory";
  }
  return "?";
}

namespace {

// Cause abbreviations: f = flow, n = numeric, p = pointee, s = side effects.
GuidelineInfo row(const char* id, Category cat, const char* causes,
                  int g_flow, int g_type, int g_other, const char* flags,
                  const char* check) {
  GuidelineInfo g;
  g.rule_id = id;
  g.category = cat;
  for (const char* c = causes; *c; ++c) {
    switch (*c) {
      case 'f': g.causes.flow = true; break;
      case 'n': g.causes.numeric = true; break;
      case 'p': g.causes.pointee = true; break;
      case 's': g.causes.side_effects = true; break;
    }
  }
  g.grades.flow_insensitive = g_flow;
  g.grades.type_based = g_type;
  g.grades.other = g_other;
  for (const char* c = flags; *c; ++c) {
    switch (*c) {
      case 'c': g.needs_coverage = true; break;
      case 'u': g.not_provable = true; break;
      case 'd': g.definition_issues = true; break;
    }
  }
  g.implemented_check = check;
  return g;
}

std::vector<GuidelineInfo> build_registry() {
  using C = Category;
  std::vector<GuidelineInfo> t;
  t.reserve(37);
  // rule        category      causes  fi ty ot  flags  check
  t.push_back(row("R1.2",  C::Advisory,  "",     0, 0, 0, "d", ""));
  t.push_back(row("R1.3",  C::Required,  "fnps", 0, 0, 0, "",  ""));
  t.push_back(row("R2.1",  C::Required,  "f",    0, 0, 0, "c", "coverage-evidence-r2-1-r14-3"));
  t.push_back(row("R2.2",  C::Required,  "f",    0, 0, 0, "ud", ""));
  t.push_back(row("R8.13", C::Advisory,  "f",    0, 3, 0, "",  "const-candidates-r8-13"));
  t.push_back(row("R9.1",  C::Mandatory, "fp",   0, 0, 1, "",  "init-at-decl-r9-1"));
  t.push_back(row("R12.2", C::Required,  "fn",   0, 0, 0, "",  ""));
  t.push_back(row("R13.1", C::Required,  "fs",   1, 0, 3, "",  ""));
  t.push_back(row("R13.2", C::Required,  "fps",  0, 0, 1, "d", ""));
  t.push_back(row("R13.5", C::Required,  "fs",   1, 0, 3, "",  ""));
  t.push_back(row("R14.1", C::Required,  "fn",   0, 0, 1, "",  "determinate-for-r14-1-2"));
  t.push_back(row("R14.2", C::Required,  "fnp",  0, 0, 1, "",  "determinate-for-r14-1-2"));
  t.push_back(row("R14.3", C::Required,  "f",    0, 0, 0, "c", "coverage-evidence-r2-1-r14-3"));
  t.push_back(row("R17.2", C::Required,  "fp",   0, 1, 0, "",  "no-recursion-r17-2"));
  t.push_back(row("R17.5", C::Advisory,  "fp",   0, 0, 0, "",  ""));
  t.push_back(row("R17.8", C::Advisory,  "fp",   0, 3, 0, "",  "readonly-params-r17-8"));
  t.push_back(row("R18.1", C::Required,  "fnp",  0, 0, 0, "",  ""));
  t.push_back(row("R18.2", C::Required,  "fp",   1, 0, 0, "",  ""));
  t.push_back(row("R18.3", C::Required,  "fp",   1, 0, 0, "",  ""));
  t.push_back(row("R18.6", C::Required,  "fp",   0, 0, 1, "",  ""));
  t.push_back(row("R19.1", C::Mandatory, "fp",   1, 0, 0, "",  ""));
  t.push_back(row("R21.13", C::Mandatory, "fn",  0, 2, 0, "",  "eof-domain-r21-13"));
  t.push_back(row("R21.14", C::Required, "fp",   0, 2, 0, "",  "cstring-r21-14-19"));
  t.push_back(row("R21.17", C::Mandatory, "fnp", 0, 0, 0, "",  ""));
  t.push_back(row("R21.18", C::Mandatory, "fnp", 0, 0, 0, "",  ""));
  t.push_back(row("R21.19", C::Mandatory, "fp",  0, 2, 0, "",  "cstring-r21-14-19"));
  t.push_back(row("R21.20", C::Mandatory, "fp",  0, 0, 0, "",  ""));
  t.push_back(row("R22.1", C::Required,  "fp",   0, 0, 1, "",  "stream-ownership-r22-1"));
  t.push_back(row("R22.2", C::Mandatory, "fp",   0, 0, 1, "",  ""));
  t.push_back(row("R22.3", C::Required,  "f",    0, 0, 0, "d", ""));
  t.push_back(row("R22.4", C::Mandatory, "fp",   0, 2, 0, "",  ""));
  t.push_back(row("R22.5", C::Mandatory, "f",    2, 0, 0, "",  "file-deref-r22-5"));
  t.push_back(row("R22.6", C::Mandatory, "f",    0, 0, 1, "",  ""));
  t.push_back(row("R22.7", C::Required,  "f",    0, 2, 0, "",  ""));
  t.push_back(row("R22.8", C::Required,  "f",    0, 0, 2, "",  "errno-protocol-r22-8-9-10"));
  t.push_back(row("R22.9", C::Required,  "f",    0, 0, 2, "",  "errno-protocol-r22-8-9-10"));
  t.push_back(row("R22.10", C::Required, "f",    0, 0, 2, "",  "errno-protocol-r22-8-9-10"));
  return t;
}

}  // namespace

const std::vector<GuidelineInfo>& registry() {
  static const std::vector<GuidelineInfo> table = build_registry();
  return table;
}

const GuidelineInfo* find_guideline(const std::string& rule_id) {
  for (const auto& g : registry())
    if (g.rule_id == rule_id) return &g;
  return nullptr;
}

std::vector<std::string> all_check_ids() {
  std::set<std::string> ids;
  for (const auto& g : registry())
    if (g.has_check()) ids.insert(g.implemented_check);
  return {ids.begin(), ids.end()};
}

std::string render_registry() {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-7s %-9s %-8s %-12s %-8s %s\n", "rule",
                "category", "causes", "approx(f/t/o)", "flags", "check");
  out += buf;
  out.append(78, '-');
  out += '\n';
  for (const auto& g : registry()) {
    std::string causes;
    if (g.causes.flow) causes += "flow ";
    if (g.causes.numeric) causes += "num ";
    if (g.causes.pointee) causes += "ptr ";
    if (g.causes.side_effects) causes += "fx ";
    if (!causes.empty()) causes.pop_back();
    std::string grades = std::to_string(g.grades.flow_insensitive) + "/" +
                         std::to_string(g.grades.type_based) + "/" +
                         std::to_string(g.grades.other);
    std::string flags;
    if (g.needs_coverage) flags += "cov ";
    if (g.not_provable) flags += "noprove ";
    if (g.definition_issues) flags += "defn ";
    if (!flags.empty()) flags.pop_back();
    std::snprintf(buf, sizeof buf, "%-7s %-9s %-8s %-12s %-8s %s\n",
                  g.rule_id.c_str(), category_name(g.category), causes.c_str(),
                  grades.c_str(), flags.c_str(),
                  g.has_check() ? g.implemented_check.c_str() : "-");
    out += buf;
  }
  return out;
}

}  // namespace minicheck
