#include "minicheck/driver.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "minicheck/callgraph.hpp"
#include "minicheck/cfg.hpp"
#include "minicheck/dataflow.hpp"
#include "minicheck/libc_profile.hpp"
#include "minicheck/oracle.hpp"
#include "minicheck/registry.hpp"
#include "minicheck/sema.hpp"

namespace minicheck::driver {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FatalError({}, path + ": error: cannot read file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string basename_of(const std::string& path) {
  std::size_t p = path.find_last_of('/');
  return p == std::string::npos ? path : path.substr(p + 1);
}

AnalyzedUnit build_unit(std::unique_ptr<SourceManager> sm, FileId fid,
                        const std::vector<std::string>& defines,
                        const std::vector<std::string>& include_paths) {
  AnalyzedUnit u;
  u.sm = std::move(sm);
  try {
    frontend::PreprocessOptions popt;
    popt.defines = sema::default_defines();
    popt.defines.insert(popt.defines.end(), defines.begin(), defines.end());
    popt.include_paths = include_paths;
    u.pp = frontend::preprocess(*u.sm, fid, popt);
    u.tu = frontend::parse(u.pp.tokens);
    u.typed = sema::resolve_and_type(*u.tu, *u.sm);
    for (FunctionDef* fn : u.tu->functions) {
      if (!fn->is_definition) continue;
      checks::AnalyzedFunction af;
      af.fn = fn;
      af.cfg = flow::build_cfg(*fn);
      af.facts = flow::analyze_function(af.cfg, *u.typed);
      u.functions.push_back(std::move(af));
    }
    u.callgraph = flow::build_call_graph(*u.typed);
  } catch (const FatalError& e) {
    std::string at = e.span().valid() ? format_location(*u.sm, e.span())
                                      : u.sm->file_name(fid);
    throw FatalError(e.span(), at + ": error: " + e.what());
  }
  return u;
}

}  // namespace

AnalyzedUnit analyze_file(const std::string& path,
                          const std::vector<std::string>& defines,
                          const std::vector<std::string>& include_paths) {
  std::string text = read_file(path);
  auto sm = std::make_unique<SourceManager>();
  FileId fid = sm->add_file(path, std::move(text));
  return build_unit(std::move(sm), fid, defines, include_paths);
}

AnalyzedUnit analyze_text(const std::string& name, const std::string& text,
                          const std::vector<std::string>& defines,
                          const std::vector<std::string>& include_paths) {
  auto sm = std::make_unique<SourceManager>();
  FileId fid = sm->add_file(name, text);
  return build_unit(std::move(sm), fid, defines, include_paths);
}

std::string render_text_line(const Diagnostic& d, const SourceManager& sm) {
  std::string out = format_location(sm, d.span);
  out += ": [" + d.rule_id + "][" + verdict_name(d.verdict) + "] ";
  out += d.message;
  out += " (check: " + d.check_id + ", origin: " + origin_label(d.origin);
  if (d.suppressed()) out += ", suppressed: " + d.suppressed_by;
  out += ")\n";
  return out;
}

std::string render_ndjson_line(const Diagnostic& d, const SourceManager& sm) {
  nlohmann::ordered_json j;
  j["rule"] = d.rule_id;
  j["check"] = d.check_id;
  j["verdict"] = verdict_name(d.verdict);
  j["relation"] = relation_name(d.relation);
  j["file"] = d.span.valid() ? sm.file_name(d.span.file) : "";
  j["line"] = d.span.line;
  j["col"] = d.span.col;
  j["message"] = d.message;
  j["origin"] = origin_label(d.origin);
  if (d.suppressed())
    j["suppressed_by"] = d.suppressed_by;
  else
    j["suppressed_by"] = nullptr;
  return j.dump() + "\n";
}

namespace {

// Evidence findings rendered as diagnostics. Constant conditions are
// already diagnostics inside the report; this adds the coverage-dependent
// verdicts.
void evidence_diagnostics(const coverage::EvidenceReport& rep,
                          std::vector<Diagnostic>& out) {
  for (const coverage::StmtEvidence& ev : rep.statements) {
    if (ev.status == coverage::StmtStatus::Covered) continue;
    Diagnostic d;
    d.rule_id = "R2.1";
    d.check_id = "coverage-evidence-r2-1-r14-3";
    d.span = ev.stmt->span();
    d.origin = origin_names(ev.stmt->tok.origin);
    if (ev.status == coverage::StmtStatus::UncoveredStaticallyUnreachable) {
      d.verdict = VerdictKind::Definite;
      d.relation = Relation::Exact;
      d.message = "statement is statically unreachable";
    } else {
      d.verdict = VerdictKind::Possible;
      d.relation = Relation::OverApprox;
      d.message = "no execution evidence for this statement";
    }
    out.push_back(std::move(d));
  }
  for (const coverage::BranchEvidence& b : rep.branches) {
    if (b.status != coverage::BranchStatus::OneSideNever || b.count != 0)
      continue;
    Diagnostic d;
    d.rule_id = "R14.3";
    d.check_id = "coverage-evidence-r2-1-r14-3";
    d.verdict = VerdictKind::Possible;
    d.relation = Relation::OverApprox;
    d.span = b.decision->span();
    d.origin = origin_names(b.decision->tok.origin);
    d.message = "controlling expression may be invariant: side " +
                std::to_string(b.index) + " was never observed";
    out.push_back(std::move(d));
  }
}

void apply_suppression(std::vector<Diagnostic>& diags,
                       const std::vector<effectless::LedgerEntry>& ledger,
                       const SourceManager& sm) {
  if (ledger.empty()) return;
  for (Diagnostic& d : diags) {
    if (!d.span.valid()) continue;
    const std::string file = sm.file_name(d.span.file);
    const std::string base = basename_of(file);
    for (const effectless::LedgerEntry& e : ledger) {
      if (e.line != d.span.line || e.check_id != d.check_id) continue;
      if (e.file != file && basename_of(e.file) != base) continue;
      d.suppressed_by =
          e.file + ":" + std::to_string(e.line) + ":" + e.check_id;
      break;
    }
  }
}

}  // namespace

int run_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.files.empty()) {
    err << "error: no input files\n";
    return exit_usage;
  }

  std::set<std::string> valid_ids;
  for (const std::string& id : all_check_ids()) valid_ids.insert(id);
  valid_ids.insert("effectless");
  std::set<std::string> enabled(opt.enabled.begin(), opt.enabled.end());
  std::set<std::string> disabled(opt.disabled.begin(), opt.disabled.end());
  for (const std::string& id : enabled) {
    if (!valid_ids.count(id)) {
      err << "error: unknown check id '" << id << "'\n";
      return exit_usage;
    }
    if (disabled.count(id)) {
      err << "error: check id '" << id << "' is both enabled and disabled\n";
      return exit_usage;
    }
  }
  for (const std::string& id : disabled) {
    if (!valid_ids.count(id)) {
      err << "error: unknown check id '" << id << "'\n";
      return exit_usage;
    }
  }
  auto active = [&](const std::string& id) {
    if (disabled.count(id)) return false;
    return enabled.empty() || enabled.count(id) != 0;
  };

  std::vector<effectless::LedgerEntry> ledger;
  coverage::CoverageData cov;
  std::vector<std::string> annotations;
  try {
    if (!opt.ledger_file.empty())
      ledger = effectless::parse_ledger(read_file(opt.ledger_file),
                                        opt.ledger_file);
    if (!opt.coverage_file.empty())
      cov = coverage::parse_coverage(read_file(opt.coverage_file),
                                     opt.coverage_file);
    if (!opt.annotations_file.empty())
      annotations =
          coverage::parse_annotations(read_file(opt.annotations_file));
  } catch (const FatalError& e) {
    err << e.what() << "\n";
    return exit_usage;
  }

  bool any_definite = false;
  bool any_possible = false;

  for (const std::string& path : opt.files) {
    AnalyzedUnit u;
    try {
      u = analyze_file(path, opt.defines, opt.include_paths);
    } catch (const FatalError& e) {
      err << e.what() << "\n";
      return exit_usage;
    }

    if (opt.dump_cfg)
      for (const checks::AnalyzedFunction& af : u.functions)
        out << flow::dump_cfg(af.cfg);

    std::vector<Diagnostic> diags;

    std::set<std::string> check_set;
    for (const checks::CheckDef& c : checks::all_checks())
      if (active(c.id)) check_set.insert(c.id);
    if (!check_set.empty()) {
      checks::CheckInput in{*u.typed, *u.sm, opt.profile, &u.callgraph,
                            &u.functions};
      checks::run_checks(in, check_set, diags);
    }

    if (active("effectless") &&
        opt.effectless_mode != effectless::ReportMode::Off) {
      std::vector<effectless::FunctionFacts> facts;
      for (const checks::AnalyzedFunction& af : u.functions)
        facts.push_back({af.fn, &af.facts});
      std::vector<effectless::Finding> found =
          effectless::detect(*u.typed, facts, u.pp);
      effectless::classify(found, *u.typed, u.pp, ledger, *u.sm);
      std::vector<Diagnostic> ds =
          effectless::report(found, opt.effectless_mode);
      diags.insert(diags.end(), ds.begin(), ds.end());
    }

    if (active("coverage-evidence-r2-1-r14-3")) {
      try {
        coverage::EvidenceReport rep = coverage::merge_evidence(
            *u.typed, u.functions, u.callgraph, cov, annotations, *u.sm);
        diags.insert(diags.end(), rep.diagnostics.begin(),
                     rep.diagnostics.end());
        if (!opt.coverage_file.empty()) {
          evidence_diagnostics(rep, diags);
          for (const std::string& w : rep.warnings)
            err << "warning: " << w << "\n";
        }
      } catch (const FatalError& e) {
        err << format_location(*u.sm, e.span()) << ": error: " << e.what()
            << "\n";
        return exit_usage;
      }
    }

    apply_suppression(diags, ledger, *u.sm);
    sort_diagnostics(diags, *u.sm);

    for (const Diagnostic& d : diags) {
      out << (opt.format == OutputFormat::Text
                  ? render_text_line(d, *u.sm)
                  : render_ndjson_line(d, *u.sm));
      if (d.suppressed()) continue;
      if (d.verdict == VerdictKind::Definite)
        any_definite = true;
      else
        any_possible = true;
    }
  }

  if (any_definite) return exit_definite;
  if (any_possible) return exit_possible;
  return exit_clean;
}

int run_program(const ProgramOptions& opt, std::ostream& out,
                std::ostream& err) {
  try {
    AnalyzedUnit u = analyze_file(opt.file, opt.defines, opt.include_paths);
    oracle::RunOptions ro;
    ro.entry = opt.entry;
    ro.args = opt.args;
    ro.fuel = opt.fuel;
    oracle::Trace t = oracle::run(*u.typed, ro);
    out << oracle::dump_trace(t);
    return exit_clean;
  } catch (const FatalError& e) {
    err << e.what() << "\n";
    return exit_usage;
  }
}

int run_registry(std::ostream& out) {
  out << render_registry();
  return exit_clean;
}

}  // namespace minicheck::driver
