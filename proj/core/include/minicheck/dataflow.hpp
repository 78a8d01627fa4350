#pragma once

#include <set>
#include <utility>
#include <vector>

#include "minicheck/cfg.hpp"
#include "minicheck/sema.hpp"
#include "minicheck/symbols.hpp"

namespace minicheck::flow {

// Object accesses performed by one statement's own expressions (condition,
// initializers, expression), not by its sub-statements. Collected over every
// local object; the analyses filter by what they can track. sizeof operands
// are unevaluated and contribute nothing. Writes that only happen on some
// evaluations (right of && / ||, arms of ?:) are may_defs.
struct UseDef {
  std::vector<Symbol*> uses;
  std::vector<Symbol*> must_defs;
  std::vector<Symbol*> may_defs;
};

UseDef stmt_use_def(const Stmt& s);

using StmtSym = std::pair<int, Symbol*>;  // (stmt id, symbol)

struct DataflowFacts {
  std::set<int> reachable;    // stmt ids reachable after constant pruning
  std::set<int> unreachable;  // complement over the function's stmt ids
  std::set<StmtSym> dead_stores;
  std::set<StmtSym> maybe_uninit_reads;     // some path reaches uninitialized
  std::set<StmtSym> definite_uninit_reads;  // every path does; subset of maybe
  // Reads of locals the assignment analysis cannot track (arrays and
  // address-taken objects with no initializer at declaration).
  std::set<StmtSym> unknown_reads;
};

// Branching statements whose controlling expression folds to an integer
// constant, with the folded value. Only enumerators and const-qualified
// locals with constant initializers participate; calls, volatile reads,
// parameters and plain variables are never folded.
std::map<const Stmt*, std::int64_t> constant_conditions(
    const Cfg& cfg, const sema::TypedUnit& typed);

// Prunes the edges those constants rule out and returns the statements no
// path from entry can reach afterwards.
std::set<int> static_unreachable(const Cfg& cfg, const sema::TypedUnit& typed);

// Backward liveness over trackable locals. A store is dead when the stored
// symbol is not live out of the statement; declaration initializers are not
// candidates, and neither is any store to an address-taken, volatile, or
// static object.
std::set<StmtSym> liveness_dead_stores(const Cfg& cfg);

// Forward may/must-uninitialized analysis; fills the three read sets.
void definite_assignment(const Cfg& cfg, DataflowFacts& facts);

DataflowFacts analyze_function(const Cfg& cfg, const sema::TypedUnit& typed);

}  // namespace minicheck::flow
