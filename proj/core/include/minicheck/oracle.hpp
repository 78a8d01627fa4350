#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "minicheck/sema.hpp"

namespace minicheck::oracle {

// Reference interpreter. It executes the typed unit under the fixed dialect
// and reports exactly what happened; the analyses are then tested against
// these ground-truth traces. It refuses (outcome `unsupported`) rather than
// guess when a construct is outside its scope: goto, labels as jump targets,
// switch bodies whose labels are not immediate children, call depth past the
// cap, and values it cannot model.

enum class OutcomeKind {
  Terminated,       // entry returned, or exit() was called
  FuelExhausted,    // ran out of statement budget
  RuntimeError,     // the dialect traps this execution
  EnvironmentCall,  // needed an answer only the real environment has
  Unsupported,      // construct outside the interpreter's scope
};

enum class ErrorKind {
  DivisionByZero,
  SignedOverflow,
  UninitializedRead,
  NullDeref,
  OutOfBounds,
  BadFree,
};

const char* outcome_name(OutcomeKind k);
const char* error_name(ErrorKind k);

// One write to a named local. `live` is set when the stored value was read
// back before being overwritten or the frame died.
struct StoreEvent {
  int stmt_id = -1;
  std::string symbol;
  bool live = false;
};

struct Trace {
  std::vector<int> executed;  // fuel-ticking statement ids, execution order
  std::vector<StoreEvent> stores;
  OutcomeKind outcome = OutcomeKind::Terminated;
  ErrorKind error = ErrorKind::DivisionByZero;  // when RuntimeError
  std::int64_t exit_value = 0;                  // when Terminated
  std::string detail;  // human text for error/environment/unsupported
};

struct RunOptions {
  std::string entry = "main";
  std::vector<std::int64_t> args;  // integer arguments, missing ones are 0
  std::int64_t fuel = 10000;
};

Trace run(const sema::TypedUnit& typed, const RunOptions& opt);

// EXEC/STORE/OUTCOME lines; executed statements first, then store events,
// then the outcome.
std::string dump_trace(const Trace& t);

// Union of observations over a small input grid: every integer parameter of
// the entry point (the first three, at most) ranges over [-2, 2].
struct SweepResult {
  std::set<int> ever_executed;
  std::set<std::pair<int, std::string>> live_stores;  // (stmt id, symbol)
  int runs = 0;
};

SweepResult sweep(const sema::TypedUnit& typed, const std::string& entry,
                  std::int64_t fuel);

}  // namespace minicheck::oracle
