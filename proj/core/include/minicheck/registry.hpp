#pragma once

#include <string>
#include <vector>

namespace minicheck {

enum class Category { Mandatory, Required, Advisory };

const char* category_name(Category c);

// Why deciding the rule exactly would require solving undecidable questions.
// A rule can have several: e.g. whether an expression divides by zero needs
// both reachability (flow) and value (numeric) information.
struct UndecidabilityCauses {
  bool flow = false;         // depends on which paths execute
  bool numeric = false;      // depends on arithmetic values
  bool pointee = false;      // depends on what pointers reference
  bool side_effects = false; // depends on whether evaluation has effects
};

// 0 = not applicable; 1..3 = how coarse a decidable approximation of this
// aspect must be (higher = more approximation needed).
struct ApproxGrades {
  int flow_insensitive = 0;  // ignore statement ordering
  int type_based = 0;        // reason from declared types only
  int other = 0;             // other conservative abstraction
};

struct GuidelineInfo {
  std::string rule_id;       // "R22.5"
  Category category = Category::Required;
  UndecidabilityCauses causes;
  ApproxGrades grades;
  bool needs_coverage = false;    // compliance claims need execution evidence
  bool not_provable = false;      // compliance cannot be demonstrated at all
  bool definition_issues = false; // official statement has known gaps
  // Stable id of the check implementing an approximation, "" when this
  // entry is informational only.
  std::string implemented_check;

  bool has_check() const { return !implemented_check.empty(); }
};

// All 37 guideline entries, ordered by rule number. The table is immutable
// and built once.
const std::vector<GuidelineInfo>& registry();

// Looks up one entry; null when the id is unknown.
const GuidelineInfo* find_guideline(const std::string& rule_id);

// Every check id that appears in the registry, sorted, deduplicated.
std::vector<std::string> all_check_ids();

// Human-readable aligned table of the whole registry.
std::string render_registry();

}  // namespace minicheck
