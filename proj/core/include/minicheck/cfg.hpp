#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minicheck/ast.hpp"

namespace minicheck::flow {

// Edge kinds. `Jump` covers the unconditional transfers that are not goto
// statements: break, continue, return. A do-while's back edge is the
// conditional branch-true edge; `LoopBack` is reserved for the implicit
// end-of-body (or post-increment) return to a loop header.
enum class EdgeKind {
  Fallthrough,
  BranchTrue,
  BranchFalse,
  SwitchCase,  // case_value / is_default discriminate the label
  LoopBack,
  Goto,
  Jump,
};

struct CfgEdge {
  int from = -1;
  int to = -1;
  EdgeKind kind = EdgeKind::Fallthrough;
  std::int64_t case_value = 0;
  bool is_default = false;
};

struct BasicBlock {
  int id = -1;
  std::vector<const Stmt*> stmts;  // in execution order
  std::vector<int> succ_edges;     // indices into Cfg::edges
  std::vector<int> pred_edges;
};

// Per-function control-flow graph at statement granularity. Branching
// statements (if/while/do/for/switch) sit last in the block that evaluates
// their condition. Every statement of the function, executable or not,
// appears in exactly one block; the entry block has no predecessors and
// only the exit block has no successors.
struct Cfg {
  const FunctionDef* fn = nullptr;
  std::vector<BasicBlock> blocks;
  std::vector<CfgEdge> edges;
  int entry = 0;
  int exit = 0;

  const BasicBlock& block(int id) const {
    return blocks[static_cast<std::size_t>(id)];
  }
  std::vector<int> succs(int id) const;
  std::vector<int> preds(int id) const;
};

// Lowers a function body. Fatal on goto to an unknown label, case/default
// outside a switch, duplicate case values, and break/continue outside a
// breakable construct.
Cfg build_cfg(const FunctionDef& fn);

// "fallthrough", "branch-true", "switch-case(3)", "switch-case(default)", ...
std::string edge_kind_name(const CfgEdge& e);

// One line per block, ordered by block id:
//   block N: [stmt_ids] -> M(kind) K(kind)
std::string dump_cfg(const Cfg& cfg);

}  // namespace minicheck::flow
