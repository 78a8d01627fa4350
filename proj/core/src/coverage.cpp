#include "minicheck/coverage.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "minicheck/dataflow.hpp"

namespace minicheck::coverage {

const char* stmt_status_name(StmtStatus s) {
  switch (s) {
    case StmtStatus::Covered: return "covered";
    case StmtStatus::UncoveredStaticallyUnreachable:
      return "uncovered-statically-unreachable";
    case StmtStatus::UncoveredUnknown: return "uncovered-unknown";
  }
  return "?";
}

const char* branch_status_name(BranchStatus s) {
  switch (s) {
    case BranchStatus::BothTaken: return "both-taken";
    case BranchStatus::OneSideNever: return "one-side-never";
    case BranchStatus::StaticallyConstant: return "statically-constant";
  }
  return "?";
}

CoverageData parse_coverage(const std::string& text, const std::string& name) {
  CoverageData data;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag[0] == '#') continue;

    SourceSpan at;
    at.line = lineno;
    auto fail = [&](const std::string& why) -> FatalError {
      return FatalError(at, name + ":" + std::to_string(lineno) +
                                ": malformed coverage record: " + why);
    };

    if (tag == "S") {
      std::string file;
      std::int64_t ln = 0, count = 0;
      if (!(ls >> file >> ln >> count)) throw fail("expected S FILE LINE COUNT");
      std::string extra;
      if (ls >> extra) throw fail("trailing text after count");
      if (ln <= 0) throw fail("line must be positive");
      if (count < 0) throw fail("count must be non-negative");
      data.stmt_counts[{file, static_cast<int>(ln)}] += count;
    } else if (tag == "B") {
      std::string file;
      std::int64_t ln = 0, idx = 0, count = 0;
      if (!(ls >> file >> ln >> idx >> count))
        throw fail("expected B FILE LINE INDEX COUNT");
      std::string extra;
      if (ls >> extra) throw fail("trailing text after count");
      if (ln <= 0) throw fail("line must be positive");
      if (idx < 0) throw fail("branch index must be non-negative");
      if (count < 0) throw fail("count must be non-negative");
      data.branch_counts[{file, static_cast<int>(ln),
                          static_cast<int>(idx)}] += count;
    } else {
      throw fail("unknown record tag '" + tag + "'");
    }
  }
  return data;
}

std::vector<std::string> parse_annotations(const std::string& text) {
  std::vector<std::string> names;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    if (name[0] == '#') continue;
    names.push_back(name);
  }
  return names;
}

namespace {

std::string basename_of(const std::string& path) {
  std::size_t p = path.find_last_of('/');
  return p == std::string::npos ? path : path.substr(p + 1);
}

}  // namespace

EvidenceReport merge_evidence(const sema::TypedUnit& typed,
                              const std::vector<checks::AnalyzedFunction>& fns,
                              const flow::CallGraph& cg,
                              const CoverageData& data,
                              const std::vector<std::string>& annotations,
                              const SourceManager& sm) {
  EvidenceReport rep;

  // Unit-level reachability: externally visible functions are callable from
  // outside the unit, annotated names are promised to be called, and any
  // address-taken function may be reached indirectly.
  std::set<Symbol*> reachable_fns;
  std::vector<Symbol*> work;
  auto add_root = [&](Symbol* s) {
    if (s && reachable_fns.insert(s).second) work.push_back(s);
  };
  std::set<std::string> known_names;
  for (Symbol* s : cg.nodes) known_names.insert(s->name);
  for (Symbol* s : cg.nodes) {
    if (s->storage != Storage::Static) add_root(s);
    if (s->address_taken) add_root(s);
  }
  for (const std::string& name : annotations) {
    bool found = false;
    for (Symbol* s : cg.nodes)
      if (s->name == name) {
        add_root(s);
        found = true;
      }
    if (!found)
      rep.warnings.push_back("annotation names unknown function '" + name +
                             "'");
  }
  while (!work.empty()) {
    Symbol* s = work.back();
    work.pop_back();
    auto it = cg.callees.find(s);
    if (it == cg.callees.end()) continue;
    for (Symbol* callee : it->second) add_root(callee);
  }

  auto stmt_count = [&](const Stmt* s) -> std::int64_t {
    const std::string file = sm.file_name(s->span().file);
    auto it = data.stmt_counts.find({file, s->span().line});
    if (it == data.stmt_counts.end())
      it = data.stmt_counts.find({basename_of(file), s->span().line});
    return it == data.stmt_counts.end() ? 0 : it->second;
  };
  auto branch_count = [&](const Stmt* s, int idx) -> std::int64_t {
    const std::string file = sm.file_name(s->span().file);
    auto it = data.branch_counts.find({file, s->span().line, idx});
    if (it == data.branch_counts.end())
      it = data.branch_counts.find(
          {basename_of(file), s->span().line, idx});
    return it == data.branch_counts.end() ? 0 : it->second;
  };

  // Track which records matched anything, to warn about strays.
  std::set<std::pair<std::string, int>> used_stmt_keys;
  std::set<std::tuple<std::string, int, int>> used_branch_keys;
  auto note_stmt_key = [&](const Stmt* s) {
    const std::string file = sm.file_name(s->span().file);
    used_stmt_keys.insert({file, s->span().line});
    used_stmt_keys.insert({basename_of(file), s->span().line});
  };
  auto note_branch_key = [&](const Stmt* s, int idx) {
    const std::string file = sm.file_name(s->span().file);
    used_branch_keys.insert({file, s->span().line, idx});
    used_branch_keys.insert({basename_of(file), s->span().line, idx});
  };

  for (const checks::AnalyzedFunction& af : fns) {
    const bool fn_reachable =
        af.fn->sym && reachable_fns.count(af.fn->sym) != 0;
    const std::map<const Stmt*, std::int64_t> folded =
        flow::constant_conditions(af.cfg, typed);

    for (const Stmt* s : af.fn->stmts) {
      if (!s->executable) continue;
      note_stmt_key(s);
      const std::int64_t count = stmt_count(s);
      const bool static_dead =
          !fn_reachable || af.facts.unreachable.count(s->id) != 0;

      if (count > 0 && static_dead) {
        throw FatalError(
            s->span(),
            "internal soundness violation: statement reported executed but "
            "proven statically unreachable");
      }
      StmtEvidence ev;
      ev.stmt = s;
      ev.count = count;
      if (count > 0)
        ev.status = StmtStatus::Covered;
      else if (static_dead)
        ev.status = StmtStatus::UncoveredStaticallyUnreachable;
      else
        ev.status = StmtStatus::UncoveredUnknown;
      rep.statements.push_back(ev);
      if (ev.status != StmtStatus::Covered) {
        rep.r2_1_pass = false;
        rep.r2_1_open.push_back(s);
      }
    }

    // Branch evidence, per conditional out-edge of each decision block.
    for (const flow::BasicBlock& b : af.cfg.blocks) {
      if (b.stmts.empty()) continue;
      const Stmt* dec = b.stmts.back();
      std::vector<int> cond_edges;
      for (int ei : b.succ_edges) {
        const flow::CfgEdge& e = af.cfg.edges[(std::size_t)ei];
        if (e.kind == flow::EdgeKind::BranchTrue ||
            e.kind == flow::EdgeKind::BranchFalse ||
            e.kind == flow::EdgeKind::SwitchCase)
          cond_edges.push_back(ei);
      }
      if (cond_edges.size() < 2) continue;

      const bool constant = folded.count(dec) != 0;
      if (constant) {
        Diagnostic d;
        d.rule_id = "R14.3";
        d.check_id = "coverage-evidence-r2-1-r14-3";
        d.verdict = VerdictKind::Definite;
        d.relation = Relation::Exact;
        d.span = dec->span();
        d.message = "controlling expression is invariably " +
                    std::string(folded.at(dec) != 0 ? "true" : "false") +
                    (dec->kind == StmtKind::Switch
                         ? std::string(" (constant switch selector)")
                         : std::string());
        d.origin = origin_names(dec->tok.origin);
        rep.diagnostics.push_back(std::move(d));
      }

      bool all_taken = true;
      for (std::size_t i = 0; i < cond_edges.size(); ++i) {
        note_branch_key(dec, (int)i);
        BranchEvidence ev;
        ev.decision = dec;
        ev.index = (int)i;
        ev.count = branch_count(dec, (int)i);
        if (ev.count == 0) all_taken = false;
        ev.status = constant ? BranchStatus::StaticallyConstant
                             : (ev.count > 0 ? BranchStatus::BothTaken
                                             : BranchStatus::OneSideNever);
        rep.branches.push_back(ev);
      }
      // Normalize: a fully exercised decision reports both-taken on every
      // side; a partially exercised one reports one-side-never on every
      // side, so the decision's status reads off any of its rows.
      if (!constant && !all_taken) {
        for (std::size_t i = rep.branches.size() - cond_edges.size();
             i < rep.branches.size(); ++i)
          rep.branches[i].status = BranchStatus::OneSideNever;
      }
      if (constant || !all_taken) {
        rep.r14_3_pass = false;
        for (std::size_t i = rep.branches.size() - cond_edges.size();
             i < rep.branches.size(); ++i)
          rep.r14_3_open.push_back(rep.branches[i]);
      }
    }
  }

  for (const auto& [key, count] : data.stmt_counts) {
    if (!used_stmt_keys.count(key))
      rep.warnings.push_back("coverage: no executable statement at " +
                             key.first + ":" + std::to_string(key.second));
  }
  for (const auto& [key, count] : data.branch_counts) {
    if (!used_branch_keys.count(key))
      rep.warnings.push_back(
          "coverage: no branch " + std::to_string(std::get<2>(key)) +
          " at " + std::get<0>(key) + ":" + std::to_string(std::get<1>(key)));
  }

  return rep;
}

}  // namespace minicheck::coverage
