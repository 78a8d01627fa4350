#include "minicheck/oracle.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>

#include "minicheck/const_eval.hpp"
#include "minicheck/dialect.hpp"
#include "minicheck/literals.hpp"

namespace minicheck::oracle {

const char* outcome_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Terminated: return "terminated";
    case OutcomeKind::FuelExhausted: return "fuel-exhausted";
    case OutcomeKind::RuntimeError: return "runtime-error";
    case OutcomeKind::EnvironmentCall: return "environment-call";
    case OutcomeKind::Unsupported: return "unsupported";
  }
  return "?";
}

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DivisionByZero: return "division-by-zero";
    case ErrorKind::SignedOverflow: return "signed-overflow";
    case ErrorKind::UninitializedRead: return "uninitialized-read";
    case ErrorKind::NullDeref: return "null-deref";
    case ErrorKind::OutOfBounds: return "oob-access";
    case ErrorKind::BadFree: return "bad-free";
  }
  return "?";
}

namespace {

// Thrown to end the run; `go` turns it into the trace outcome.
struct Stop {
  OutcomeKind outcome;
  ErrorKind error = ErrorKind::DivisionByZero;
  std::int64_t exit_value = 0;
  std::string detail;
};

Stop runtime_error(ErrorKind e, std::string detail) {
  Stop s{OutcomeKind::RuntimeError};
  s.error = e;
  s.detail = std::move(detail);
  return s;
}
Stop unsupported(std::string detail) {
  return Stop{OutcomeKind::Unsupported, {}, 0, std::move(detail)};
}
Stop environment(std::string detail) {
  return Stop{OutcomeKind::EnvironmentCall, {}, 0, std::move(detail)};
}

struct Value {
  enum class Kind { Int, Float, Ptr, Func };
  Kind kind = Kind::Int;
  std::int64_t i = 0;  // bit pattern, sign-extended when the type is signed
  double f = 0.0;
  int alloc = 0;  // Ptr: 0 is the null pointer
  std::int64_t off = 0;
  const Symbol* func = nullptr;  // Func
  const Type* type = nullptr;
};

Value int_value(std::int64_t v, const Type* t) {
  Value r;
  r.kind = Value::Kind::Int;
  r.i = v;
  r.type = t;
  return r;
}

struct Allocation {
  enum class Kind { Global, Local, Heap, Stream };
  Kind kind = Kind::Local;
  std::vector<std::uint8_t> bytes;
  std::vector<bool> init;
  bool alive = true;
  const Symbol* sym = nullptr;
  // Pointer/function values stored in this memory, by byte offset. A byte
  // write over an entry invalidates it.
  std::map<std::int64_t, Value> shadow;
};

// Object designator: typed location inside one allocation.
struct Place {
  int alloc = 0;
  std::int64_t off = 0;
  const Type* type = nullptr;
};

std::int64_t wrap_int(std::int64_t x, int width, bool is_signed) {
  if (width >= 64) return x;
  std::uint64_t m = (std::uint64_t(1) << width) - 1;
  std::uint64_t u = std::uint64_t(x) & m;
  if (is_signed && (u >> (width - 1)) & 1) u |= ~m;
  return std::int64_t(u);
}

int int_width(const Type* t) {
  if (t->is_enum()) return 32;
  if (t->is_bool) return 8;
  return t->width;
}
bool int_signed(const Type* t) {
  if (t->is_enum()) return true;
  if (t->is_bool) return false;
  return t->is_signed;
}

class Interp {
 public:
  Interp(const sema::TypedUnit& typed, std::int64_t fuel)
      : typed_(typed), tu_(*typed.tu), fuel_(fuel) {
    allocs_.resize(1);  // id 0 is the null allocation
  }

  Trace go(const std::string& entry, const std::vector<std::int64_t>& args) {
    try {
      init_globals();
      Symbol* sym = typed_.find_symbol(entry);
      if (!sym || sym->kind != Symbol::Kind::Function || !sym->fn ||
          !sym->fn->is_definition)
        throw FatalError({}, "no definition for entry point '" + entry + "'");
      const FunctionDef* fn = sym->fn;
      std::vector<Value> argv;
      for (std::size_t i = 0; i < fn->params.size(); ++i) {
        std::int64_t raw = i < args.size() ? args[i] : 0;
        argv.push_back(make_argument(raw, fn->params[i]->type));
      }
      Value ret = call_function(sym, fn, argv);
      trace_.outcome = OutcomeKind::Terminated;
      trace_.exit_value = ret.kind == Value::Kind::Int ? ret.i : 0;
    } catch (const Stop& s) {
      trace_.outcome = s.outcome;
      trace_.error = s.error;
      trace_.exit_value = s.exit_value;
      trace_.detail = s.detail;
    }
    return std::move(trace_);
  }

 private:
  const sema::TypedUnit& typed_;
  TranslationUnit& tu_;
  std::int64_t fuel_;
  Trace trace_;

  std::vector<Allocation> allocs_;
  std::map<const Symbol*, int> globals_;
  std::map<const Symbol*, int> static_locals_;
  std::map<std::string, int> literal_allocs_;

  struct Frame {
    std::map<const Symbol*, int> locals;
  };
  std::vector<Frame> frames_;

  // Latest store event per allocation, awaiting a read-back.
  std::map<int, std::size_t> pending_store_;

  const Stmt* cur_stmt_ = nullptr;
  Value ret_value_;
  bool has_ret_value_ = false;

  enum class Flow { Next, Break, Continue, Return };

  // ---- memory ----

  int new_alloc(Allocation::Kind kind, std::uint64_t size, bool initialized,
                const Symbol* sym = nullptr) {
    Allocation a;
    a.kind = kind;
    a.bytes.assign(size, 0);
    a.init.assign(size, initialized);
    a.sym = sym;
    allocs_.push_back(std::move(a));
    return int(allocs_.size()) - 1;
  }

  Allocation& valid_alloc(int id) {
    if (id <= 0 || id >= int(allocs_.size()))
      throw runtime_error(ErrorKind::NullDeref, "null pointer dereference");
    Allocation& a = allocs_[std::size_t(id)];
    if (!a.alive)
      throw runtime_error(ErrorKind::OutOfBounds,
                          "access to released storage");
    return a;
  }

  Allocation& range_checked(int id, std::int64_t off, std::uint64_t n) {
    Allocation& a = valid_alloc(id);
    if (off < 0 || std::uint64_t(off) + n > a.bytes.size())
      throw runtime_error(ErrorKind::OutOfBounds,
                          "access outside the object's bounds");
    return a;
  }

  void mark_read(int id) {
    auto it = pending_store_.find(id);
    if (it != pending_store_.end()) trace_.stores[it->second].live = true;
  }

  void mem_read(int id, std::int64_t off, std::uint64_t n, std::uint8_t* dst,
                bool require_init) {
    Allocation& a = range_checked(id, off, n);
    if (require_init)
      for (std::uint64_t k = 0; k < n; ++k)
        if (!a.init[std::size_t(off) + k])
          throw runtime_error(ErrorKind::UninitializedRead,
                              "read of an uninitialized object");
    if (dst) std::memcpy(dst, a.bytes.data() + off, n);
    mark_read(id);
  }

  void erase_shadows(Allocation& a, std::int64_t off, std::uint64_t n) {
    auto it = a.shadow.lower_bound(off - 7);
    while (it != a.shadow.end() && it->first < off + std::int64_t(n))
      it = a.shadow.erase(it);
  }

  void mem_write(int id, std::int64_t off, const std::uint8_t* src,
                 std::uint64_t n) {
    Allocation& a = range_checked(id, off, n);
    if (src) std::memcpy(a.bytes.data() + off, src, n);
    for (std::uint64_t k = 0; k < n; ++k) a.init[std::size_t(off) + k] = true;
    erase_shadows(a, off, n);
    pending_store_.erase(id);
  }

  void mark_uninit(int id) {
    Allocation& a = allocs_[std::size_t(id)];
    a.init.assign(a.bytes.size(), false);
    a.shadow.clear();
    pending_store_.erase(id);
  }

  std::uint64_t sized(const Type* t, const char* what) {
    auto s = type_size(t);
    if (!s) throw unsupported(std::string(what) + " of unsized type");
    return *s;
  }

  Value load(const Place& p) {
    if (p.type->is_record())
      throw unsupported("record value used outside assignment");
    std::uint64_t n = sized(p.type, "load");
    if (p.type->is_pointer()) {
      Allocation& a = range_checked(p.alloc, p.off, n);
      auto it = a.shadow.find(p.off);
      if (it != a.shadow.end()) {
        mem_read(p.alloc, p.off, n, nullptr, true);
        Value v = it->second;
        v.type = p.type;
        return v;
      }
      std::uint64_t raw = 0;
      std::uint8_t buf[8] = {0};
      mem_read(p.alloc, p.off, n, buf, true);
      std::memcpy(&raw, buf, 8);
      if (raw == 0) {
        Value v;
        v.kind = Value::Kind::Ptr;
        v.type = p.type;
        return v;
      }
      throw unsupported("pointer value forged from raw bytes");
    }
    std::uint8_t buf[8] = {0};
    mem_read(p.alloc, p.off, n, buf, true);
    if (p.type->is_floating()) {
      Value v;
      v.kind = Value::Kind::Float;
      v.type = p.type;
      if (p.type->width == 32) {
        float g;
        std::memcpy(&g, buf, 4);
        v.f = g;
      } else {
        std::memcpy(&v.f, buf, 8);
      }
      return v;
    }
    std::uint64_t raw = 0;
    std::memcpy(&raw, buf, 8);
    return int_value(
        wrap_int(std::int64_t(raw), int(n) * 8, int_signed(p.type)), p.type);
  }

  void store(const Place& p, const Value& v) {
    std::uint64_t n = sized(p.type, "store");
    if (v.kind == Value::Kind::Ptr || v.kind == Value::Kind::Func) {
      Allocation& a = range_checked(p.alloc, p.off, n);
      std::uint8_t zeros[8] = {0};
      mem_write(p.alloc, p.off, zeros, n);
      if (v.kind == Value::Kind::Func || v.alloc != 0 || v.off != 0)
        a.shadow[p.off] = v;
      return;
    }
    std::uint8_t buf[8] = {0};
    if (v.kind == Value::Kind::Float) {
      if (p.type->width == 32) {
        float g = float(v.f);
        std::memcpy(buf, &g, 4);
      } else {
        std::memcpy(buf, &v.f, 8);
      }
    } else {
      std::uint64_t raw = std::uint64_t(v.i);
      std::memcpy(buf, &raw, 8);
    }
    mem_write(p.alloc, p.off, buf, n);
  }

  // ---- conversions ----

  Value make_argument(std::int64_t raw, const Type* t) {
    if (t->is_pointer()) {
      Value v;
      v.kind = Value::Kind::Ptr;
      v.type = t;
      if (raw != 0) throw unsupported("integer used as a pointer argument");
      return v;
    }
    if (t->is_floating()) {
      Value v;
      v.kind = Value::Kind::Float;
      v.f = double(raw);
      v.type = t;
      return v;
    }
    return int_value(wrap_int(raw, int_width(t), int_signed(t)), t);
  }

  Value convert(Value v, const Type* to) {
    if (to->is_void()) {
      Value r;
      r.type = to;
      return r;
    }
    if (to->is_pointer()) {
      if (v.kind == Value::Kind::Ptr || v.kind == Value::Kind::Func) {
        v.type = to;
        return v;
      }
      if (v.kind == Value::Kind::Int) {
        if (v.i != 0)
          throw unsupported("non-zero integer converted to a pointer");
        Value r;
        r.kind = Value::Kind::Ptr;
        r.type = to;
        return r;
      }
      throw unsupported("value cannot convert to a pointer");
    }
    if (to->is_floating()) {
      double d;
      if (v.kind == Value::Kind::Float) {
        d = v.f;
      } else if (v.kind == Value::Kind::Int) {
        d = v.type && !int_signed(v.type) ? double(std::uint64_t(v.i))
                                          : double(v.i);
      } else {
        throw unsupported("pointer converted to floating type");
      }
      Value r;
      r.kind = Value::Kind::Float;
      r.f = to->width == 32 ? double(float(d)) : d;
      r.type = to;
      return r;
    }
    // Integer-family target.
    if (v.kind == Value::Kind::Ptr && v.alloc == 0 && v.off == 0) {
      return int_value(0, to);
    }
    if (v.kind == Value::Kind::Ptr || v.kind == Value::Kind::Func)
      throw unsupported("pointer converted to an integer");
    if (to->is_bool) return int_value(truthy(v) ? 1 : 0, to);
    if (v.kind == Value::Kind::Float) {
      int w = int_width(to);
      if (int_signed(to)) {
        double lo = double(dialect::signed_min(w));
        double hi = double(dialect::signed_max(w));
        if (!(v.f >= lo) || !(v.f <= hi) || v.f != v.f)
          throw runtime_error(ErrorKind::SignedOverflow,
                              "floating value out of integer range");
        return int_value(std::int64_t(v.f), to);
      }
      if (!(v.f >= 0.0) || v.f >= double(dialect::unsigned_max(w)) + 1.0)
        throw runtime_error(ErrorKind::SignedOverflow,
                            "floating value out of integer range");
      return int_value(wrap_int(std::int64_t(std::uint64_t(v.f)), w, false),
                       to);
    }
    return int_value(wrap_int(v.i, int_width(to), int_signed(to)), to);
  }

  bool truthy(const Value& v) {
    switch (v.kind) {
      case Value::Kind::Int: return v.i != 0;
      case Value::Kind::Float: return v.f != 0.0;
      case Value::Kind::Ptr: return v.alloc != 0 || v.off != 0;
      case Value::Kind::Func: return true;
    }
    return false;
  }

  // ---- arithmetic ----

  const Type* arith_type(const Type* a, const Type* b) {
    if (a->is_floating() || b->is_floating()) {
      int w = std::max(a->is_floating() ? a->width : 0,
                       b->is_floating() ? b->width : 0);
      return tu_.types.float_type(w);
    }
    int wa = std::max(32, int_width(a));
    int wb = std::max(32, int_width(b));
    int w = std::max(wa, wb);
    bool sa = int_width(a) < 32 ? true : int_signed(a);
    bool sb = int_width(b) < 32 ? true : int_signed(b);
    bool s = wa == wb ? (sa && sb) : (wa > wb ? sa : sb);
    return tu_.types.int_type(w, s);
  }

  Value int_binop(const std::string& op, Value a, Value b, const Type* t) {
    int w = int_width(t);
    bool s = int_signed(t);
    std::int64_t x = a.i, y = b.i;
    auto out = [&](std::int64_t v) { return int_value(wrap_int(v, w, s), t); };

    if (op == "+" || op == "-" || op == "*") {
      if (s) {
        __int128 r = op == "+"   ? __int128(x) + y
                     : op == "-" ? __int128(x) - y
                                 : __int128(x) * y;
        if (r < dialect::signed_min(w) || r > dialect::signed_max(w))
          throw runtime_error(ErrorKind::SignedOverflow,
                              "signed integer overflow on '" + op + "'");
        return out(std::int64_t(r));
      }
      std::uint64_t r = op == "+"   ? std::uint64_t(x) + std::uint64_t(y)
                        : op == "-" ? std::uint64_t(x) - std::uint64_t(y)
                                    : std::uint64_t(x) * std::uint64_t(y);
      return out(std::int64_t(r));
    }
    if (op == "/" || op == "%") {
      if (y == 0)
        throw runtime_error(ErrorKind::DivisionByZero,
                            op == "/" ? "division by zero" : "modulo by zero");
      if (s) {
        if (x == dialect::signed_min(w) && y == -1)
          throw runtime_error(ErrorKind::SignedOverflow,
                              "signed integer overflow on '" + op + "'");
        return out(op == "/" ? x / y : x % y);
      }
      std::uint64_t ux = std::uint64_t(x) & dialect::unsigned_max(w);
      std::uint64_t uy = std::uint64_t(y) & dialect::unsigned_max(w);
      return out(std::int64_t(op == "/" ? ux / uy : ux % uy));
    }
    if (op == "&") return out(x & y);
    if (op == "|") return out(x | y);
    if (op == "^") return out(x ^ y);
    if (op == "<<" || op == ">>") {
      // Counts are taken modulo the width; evaluation is total.
      unsigned c = unsigned(std::uint64_t(y) & std::uint64_t(w - 1));
      std::uint64_t ux = std::uint64_t(x) & dialect::unsigned_max(w);
      if (op == "<<") return out(std::int64_t(ux << c));
      if (s) return out(x >> c);  // arithmetic shift, x is sign-extended
      return out(std::int64_t(ux >> c));
    }
    bool r;
    if (s) {
      r = op == "<"    ? x < y
          : op == "<=" ? x <= y
          : op == ">"  ? x > y
          : op == ">=" ? x >= y
          : op == "==" ? x == y
                       : x != y;
    } else {
      std::uint64_t ux = std::uint64_t(x), uy = std::uint64_t(y);
      r = op == "<"    ? ux < uy
          : op == "<=" ? ux <= uy
          : op == ">"  ? ux > uy
          : op == ">=" ? ux >= uy
          : op == "==" ? ux == uy
                       : ux != uy;
    }
    return int_value(r ? 1 : 0, tu_.types.int32());
  }

  Value float_binop(const std::string& op, Value a, Value b, const Type* t) {
    double x = a.f, y = b.f;
    if (op == "+" || op == "-" || op == "*" || op == "/") {
      double r = op == "+"   ? x + y
                 : op == "-" ? x - y
                 : op == "*" ? x * y
                             : x / y;
      Value v;
      v.kind = Value::Kind::Float;
      v.f = t->width == 32 ? double(float(r)) : r;
      v.type = t;
      return v;
    }
    bool r = op == "<"    ? x < y
             : op == "<=" ? x <= y
             : op == ">"  ? x > y
             : op == ">=" ? x >= y
             : op == "==" ? x == y
                          : x != y;
    return int_value(r ? 1 : 0, tu_.types.int32());
  }

  std::uint64_t pointee_size(const Type* pt) {
    if (!pt->is_pointer()) throw unsupported("arithmetic on a non-pointer");
    return sized(pt->pointee, "pointer arithmetic");
  }

  Value binop(const Expr* e, const std::string& op, Value a, Value b) {
    bool cmp = op == "<" || op == "<=" || op == ">" || op == ">=" ||
               op == "==" || op == "!=";
    // Pointer forms first.
    if (a.kind == Value::Kind::Ptr || b.kind == Value::Kind::Ptr ||
        a.kind == Value::Kind::Func || b.kind == Value::Kind::Func) {
      if (op == "==" || op == "!=") {
        // Function pointers compare by referent; a function never equals
        // null or a data pointer.
        bool eq;
        if (a.kind == Value::Kind::Func || b.kind == Value::Kind::Func) {
          eq = a.kind == Value::Kind::Func && b.kind == Value::Kind::Func &&
               a.func == b.func;
        } else {
          eq = a.alloc == b.alloc && a.off == b.off;
        }
        return int_value((op == "==") == eq ? 1 : 0, tu_.types.int32());
      }
      if (cmp) {
        if (a.kind != Value::Kind::Ptr || b.kind != Value::Kind::Ptr ||
            a.alloc != b.alloc)
          throw runtime_error(ErrorKind::OutOfBounds,
                              "relational comparison of unrelated pointers");
        return int_binop(op, int_value(a.off, tu_.types.int64()),
                         int_value(b.off, tu_.types.int64()),
                         tu_.types.int64());
      }
      if (op == "-" && a.kind == Value::Kind::Ptr &&
          b.kind == Value::Kind::Ptr) {
        if (a.alloc != b.alloc)
          throw runtime_error(ErrorKind::OutOfBounds,
                              "difference of unrelated pointers");
        std::uint64_t es = pointee_size(a.type);
        return int_value((a.off - b.off) / std::int64_t(es),
                         tu_.types.int64());
      }
      if (op == "+" || op == "-") {
        Value p = a.kind == Value::Kind::Ptr ? a : b;
        Value n = a.kind == Value::Kind::Ptr ? b : a;
        if (n.kind != Value::Kind::Int)
          throw unsupported("pointer arithmetic with a non-integer");
        std::uint64_t es = pointee_size(p.type);
        std::int64_t delta = n.i * std::int64_t(es);
        p.off += op == "+" ? delta : -delta;
        return p;
      }
      throw unsupported("operator '" + op + "' on pointers");
    }
    const Type* t = cmp ? arith_type(a.type, b.type) : e->type;
    if (!t || t->is_void()) t = arith_type(a.type, b.type);
    if (t->is_floating())
      return float_binop(op, convert(a, t), convert(b, t), t);
    if (op == "<<" || op == ">>") {
      // The left operand's promoted type governs; the count converts freely.
      const Type* lt = e->type && e->type->is_arith_integer()
                           ? e->type
                           : arith_type(a.type, a.type);
      return int_binop(op, convert(a, lt), convert(b, tu_.types.int64()), lt);
    }
    return int_binop(op, convert(a, t), convert(b, t), t);
  }

  // ---- places ----

  int alloc_for(const Symbol* sym) {
    if (!frames_.empty()) {
      auto it = frames_.back().locals.find(sym);
      if (it != frames_.back().locals.end()) return it->second;
    }
    if (auto it = globals_.find(sym); it != globals_.end()) return it->second;
    if (auto it = static_locals_.find(sym); it != static_locals_.end())
      return it->second;
    if (sym->kind == Symbol::Kind::Variable && !sym->is_global &&
        sym->storage == Storage::Static) {
      // Function-scope static storage: materialized once, zero filled, the
      // declaration's initializer applied at that moment.
      std::uint64_t n = sized(sym->type, "object");
      int id = new_alloc(Allocation::Kind::Global, n, true, sym);
      static_locals_[sym] = id;
      if (sym->decl && sym->decl->init)
        store_init({id, 0, sym->type}, sym->decl->init);
      return id;
    }
    if (sym->is_libc) {
      // Library objects appear when first touched; errno starts at zero.
      std::uint64_t n = sized(sym->type, "object");
      int id = new_alloc(Allocation::Kind::Global, n, true, sym);
      globals_[sym] = id;
      return id;
    }
    throw environment("object '" + sym->name + "' has no storage here");
  }

  Place lplace(const Expr* e) {
    switch (e->kind) {
      case ExprKind::Ident: {
        const Symbol* sym = e->sym;
        if (!sym) throw unsupported("unresolved name");
        return {alloc_for(sym), 0, sym->type};
      }
      case ExprKind::Unary: {
        if (e->op != "*") break;
        Value v = eval(e->kids[0]);
        if (v.kind != Value::Kind::Ptr)
          throw unsupported("dereference of a non-pointer value");
        if (v.alloc == 0)
          throw runtime_error(ErrorKind::NullDeref,
                              "null pointer dereference");
        return {v.alloc, v.off, v.type->pointee};
      }
      case ExprKind::Subscript: {
        Value base = eval(e->kids[0]);
        Value idx = eval(e->kids[1]);
        if (base.kind != Value::Kind::Ptr) std::swap(base, idx);
        if (base.kind != Value::Kind::Ptr)
          throw unsupported("subscript of a non-pointer value");
        if (base.alloc == 0)
          throw runtime_error(ErrorKind::NullDeref,
                              "null pointer dereference");
        const Type* elem = base.type->pointee;
        std::uint64_t es = sized(elem, "element");
        return {base.alloc, base.off + idx.i * std::int64_t(es), elem};
      }
      case ExprKind::Member: {
        const Type* base_ty;
        Place p;
        if (e->op == "->") {
          Value v = eval(e->kids[0]);
          if (v.kind != Value::Kind::Ptr)
            throw unsupported("'->' on a non-pointer value");
          if (v.alloc == 0)
            throw runtime_error(ErrorKind::NullDeref,
                                "null pointer dereference");
          base_ty = v.type->pointee;
          p = {v.alloc, v.off, base_ty};
        } else {
          p = lplace(e->kids[0]);
          base_ty = p.type;
        }
        if (!base_ty->is_record() || !base_ty->record ||
            !base_ty->record->complete)
          throw unsupported("member access on an incomplete type");
        const RecordMember* m = base_ty->record->find(e->member);
        if (!m) throw unsupported("no member named '" + e->member + "'");
        return {p.alloc, p.off + std::int64_t(m->offset), m->type};
      }
      default: break;
    }
    throw unsupported("expression is not an object designator");
  }

  // ---- store events ----

  void record_store(const Expr* target, std::size_t, int alloc_id) {
    if (!cur_stmt_) return;
    if (target->kind != ExprKind::Ident || !target->sym) return;
    if (!target->sym->is_local_object()) return;
    trace_.stores.push_back({cur_stmt_->id, target->sym->name, false});
    pending_store_[alloc_id] = trace_.stores.size() - 1;
  }

  void record_decl_store(const Symbol* sym, int alloc_id) {
    if (!cur_stmt_ || !sym->is_local_object()) return;
    trace_.stores.push_back({cur_stmt_->id, sym->name, false});
    pending_store_[alloc_id] = trace_.stores.size() - 1;
  }

  // ---- evaluation ----

  Value eval(const Expr* e) {
    Value v = eval_raw(e);
    auto it = typed_.implicit_conv.find(e);
    if (it != typed_.implicit_conv.end()) v = convert(v, it->second);
    return v;
  }

  Value place_value(const Expr* e) {
    // Arrays and functions evaluate to their address, everything else loads.
    const Place p = lplace(e);
    if (p.type->is_array()) {
      Value v;
      v.kind = Value::Kind::Ptr;
      v.alloc = p.alloc;
      v.off = p.off;
      v.type = p.type;  // decays via the recorded conversion
      return v;
    }
    if (p.type->is_function()) throw unsupported("function designator load");
    return load(p);
  }

  Value eval_raw(const Expr* e) {
    switch (e->kind) {
      case ExprKind::IntLit: {
        auto info = frontend::parse_int_literal(e->tok.text, e->span());
        return int_value(wrap_int(std::int64_t(info.value), info.width,
                                  !info.is_unsigned),
                         e->type);
      }
      case ExprKind::CharLit:
        return int_value(frontend::parse_char_literal(e->tok.text, e->span()),
                         e->type);
      case ExprKind::FloatLit: {
        Value v;
        v.kind = Value::Kind::Float;
        v.f = frontend::parse_float_literal(e->tok.text, e->span());
        if (e->type && e->type->width == 32) v.f = double(float(v.f));
        v.type = e->type;
        return v;
      }
      case ExprKind::StringLit: {
        int id = string_literal_alloc(e);
        Value v;
        v.kind = Value::Kind::Ptr;
        v.alloc = id;
        v.type = e->type;
        return v;
      }
      case ExprKind::Ident: {
        const Symbol* sym = e->sym;
        if (!sym) throw unsupported("unresolved name");
        if (sym->kind == Symbol::Kind::Enumerator)
          return int_value(sym->enum_value, e->type);
        if (sym->kind == Symbol::Kind::Function) {
          Value v;
          v.kind = Value::Kind::Func;
          v.func = sym;
          v.type = e->type;
          return v;
        }
        return place_value(e);
      }
      case ExprKind::Unary: return eval_unary(e);
      case ExprKind::PostIncDec: {
        Place p = lplace(e->kids[0]);
        Value old = load(p);
        Value next = step_value(old, e->op == "++" ? 1 : -1, p.type);
        store(p, next);
        record_store(e->kids[0], 0, p.alloc);
        return old;
      }
      case ExprKind::Binary: {
        if (e->op == "&&" || e->op == "||") {
          bool a = truthy(eval(e->kids[0]));
          if (e->op == "&&" && !a) return int_value(0, tu_.types.int32());
          if (e->op == "||" && a) return int_value(1, tu_.types.int32());
          return int_value(truthy(eval(e->kids[1])) ? 1 : 0,
                           tu_.types.int32());
        }
        Value a = eval(e->kids[0]);
        Value b = eval(e->kids[1]);
        return binop(e, e->op, a, b);
      }
      case ExprKind::Assign: return eval_assign(e);
      case ExprKind::Conditional:
        return truthy(eval(e->kids[0])) ? eval(e->kids[1]) : eval(e->kids[2]);
      case ExprKind::Call: return eval_call(e);
      case ExprKind::Subscript:
      case ExprKind::Member: return place_value(e);
      case ExprKind::Cast:
        return convert(eval(e->kids[0]), e->type);
      case ExprKind::SizeofExpr:
        return int_value(
            std::int64_t(sized(e->kids[0]->type, "sizeof")), e->type);
      case ExprKind::SizeofType:
        return int_value(std::int64_t(sized(e->cast_type, "sizeof")),
                         e->type);
      case ExprKind::Comma:
        eval(e->kids[0]);
        return eval(e->kids[1]);
      case ExprKind::InitList:
        throw unsupported("brace initializer outside a declaration");
    }
    throw unsupported("expression form");
  }

  Value step_value(const Value& v, int dir, const Type* t) {
    if (v.kind == Value::Kind::Ptr) {
      Value r = v;
      r.off += dir * std::int64_t(pointee_size(v.type));
      return r;
    }
    if (v.kind == Value::Kind::Float) {
      Value r = v;
      r.f += dir;
      return r;
    }
    return int_binop(dir > 0 ? "+" : "-", v, int_value(1, t), t);
  }

  Value eval_unary(const Expr* e) {
    const std::string& op = e->op;
    if (op == "&") {
      const Expr* k = e->kids[0];
      if (k->kind == ExprKind::Ident && k->sym &&
          k->sym->kind == Symbol::Kind::Function) {
        Value v;
        v.kind = Value::Kind::Func;
        v.func = k->sym;
        v.type = e->type;
        return v;
      }
      Place p = lplace(k);
      Value v;
      v.kind = Value::Kind::Ptr;
      v.alloc = p.alloc;
      v.off = p.off;
      v.type = e->type;
      return v;
    }
    if (op == "*") {
      Value v = eval(e->kids[0]);
      if (v.kind == Value::Kind::Func) return v;  // (*f)(...) form
      if (v.kind != Value::Kind::Ptr)
        throw unsupported("dereference of a non-pointer value");
      if (v.type->pointee && v.type->pointee->is_function()) return v;
      if (v.alloc == 0)
        throw runtime_error(ErrorKind::NullDeref, "null pointer dereference");
      Place p{v.alloc, v.off, v.type->pointee};
      if (p.type->is_array()) {
        Value r;
        r.kind = Value::Kind::Ptr;
        r.alloc = p.alloc;
        r.off = p.off;
        r.type = p.type;
        return r;
      }
      return load(p);
    }
    if (op == "++" || op == "--") {
      Place p = lplace(e->kids[0]);
      Value old = load(p);
      Value next = step_value(old, op == "++" ? 1 : -1, p.type);
      store(p, next);
      record_store(e->kids[0], 0, p.alloc);
      return next;
    }
    Value v = eval(e->kids[0]);
    if (op == "!") return int_value(truthy(v) ? 0 : 1, tu_.types.int32());
    if (op == "+") return convert(v, e->type);
    if (op == "-") {
      if (v.kind == Value::Kind::Float) {
        Value r = convert(v, e->type);
        r.f = -r.f;
        return r;
      }
      Value z = int_value(0, e->type);
      return int_binop("-", z, convert(v, e->type), e->type);
    }
    if (op == "~") {
      Value c = convert(v, e->type);
      return int_value(
          wrap_int(~c.i, int_width(e->type), int_signed(e->type)), e->type);
    }
    throw unsupported("unary operator '" + op + "'");
  }

  Value eval_assign(const Expr* e) {
    const Expr* lhs = e->kids[0];
    const Expr* rhs = e->kids[1];
    if (e->op == "=") {
      if (e->type && e->type->is_record()) {
        Place dst = lplace(lhs);
        Place src = lplace(rhs);
        copy_object(dst, src);
        record_store(lhs, 0, dst.alloc);
        Value v;
        v.type = e->type;
        return v;
      }
      Value v = eval(rhs);
      Place p = lplace(lhs);
      v = convert(v, p.type);
      store(p, v);
      record_store(lhs, 0, p.alloc);
      return v;
    }
    // Compound form: read, combine at the common type, write back.
    std::string op = e->op.substr(0, e->op.size() - 1);
    Place p = lplace(lhs);
    Value old = load(p);
    Value r = eval(rhs);
    Value next = binop(e, op, old, r);
    next = convert(next, p.type);
    store(p, next);
    record_store(lhs, 0, p.alloc);
    return next;
  }

  void copy_object(const Place& dst, const Place& src) {
    std::uint64_t n = sized(dst.type, "assignment");
    Allocation& sa = range_checked(src.alloc, src.off, n);
    std::vector<std::uint8_t> bytes(sa.bytes.begin() + src.off,
                                    sa.bytes.begin() + src.off + n);
    std::vector<bool> init(sa.init.begin() + src.off,
                           sa.init.begin() + src.off + n);
    std::vector<std::pair<std::int64_t, Value>> shadows;
    for (auto& [off, v] : sa.shadow)
      if (off >= src.off && off + 8 <= src.off + std::int64_t(n))
        shadows.push_back({off - src.off, v});
    mark_read(src.alloc);
    Allocation& da = range_checked(dst.alloc, dst.off, n);
    std::copy(bytes.begin(), bytes.end(), da.bytes.begin() + dst.off);
    for (std::uint64_t k = 0; k < n; ++k)
      da.init[std::size_t(dst.off) + k] = init[k];
    erase_shadows(da, dst.off, n);
    for (auto& [rel, v] : shadows) da.shadow[dst.off + rel] = v;
    pending_store_.erase(dst.alloc);
  }

  int string_literal_alloc(const Expr* e) {
    std::string text = frontend::decode_string_literal(e->tok.text, e->span());
    auto it = literal_allocs_.find(text);
    if (it != literal_allocs_.end()) return it->second;
    int id = new_alloc(Allocation::Kind::Global, text.size() + 1, true);
    std::memcpy(allocs_[std::size_t(id)].bytes.data(), text.data(),
                text.size());
    literal_allocs_[text] = id;
    return id;
  }

  // ---- calls ----

  Value eval_call(const Expr* e) {
    Value callee = eval(e->kids[0]);
    if (callee.kind == Value::Kind::Ptr && callee.alloc == 0 &&
        callee.off == 0)
      throw runtime_error(ErrorKind::NullDeref,
                          "call through a null function pointer");
    if (callee.kind != Value::Kind::Func)
      throw unsupported("call through a non-function value");
    const Symbol* sym = callee.func;

    std::vector<Value> args;
    for (std::size_t i = 1; i < e->kids.size(); ++i)
      args.push_back(eval(e->kids[i]));

    if (sym->is_libc) return libc_call(e, sym, args);
    if (!sym->fn || !sym->fn->is_definition)
      throw environment("call to external function '" + sym->name + "'");
    return call_function(sym, sym->fn, args);
  }

  Value call_function(const Symbol* sym, const FunctionDef* fn,
                      const std::vector<Value>& args) {
    if (frames_.size() >= 512)
      throw unsupported("call depth beyond the interpreter's cap");
    Frame frame;
    // Every local gets storage up front so that jumps over declarations
    // still find their object; values stay uninitialized until assigned.
    for (const Stmt* s : fn->stmts) {
      if (s->kind != StmtKind::Decl) continue;
      for (const VarDecl* d : s->decls) {
        if (!d->sym || !d->sym->is_local_object()) continue;
        std::uint64_t n = sized(d->type, "object");
        frame.locals[d->sym] =
            new_alloc(Allocation::Kind::Local, n, false, d->sym);
      }
    }
    for (std::size_t i = 0; i < fn->params.size(); ++i) {
      const VarDecl* p = fn->params[i];
      if (!p->sym) continue;
      std::uint64_t n = sized(p->type, "parameter");
      int id = new_alloc(Allocation::Kind::Local, n, false, p->sym);
      frame.locals[p->sym] = id;
      if (i < args.size()) store({id, 0, p->type}, convert(args[i], p->type));
    }
    frames_.push_back(std::move(frame));
    const Stmt* saved_stmt = cur_stmt_;
    Value saved_ret = ret_value_;
    bool saved_has = has_ret_value_;
    has_ret_value_ = false;

    Flow flow = exec(fn->body);
    (void)flow;

    Value result;
    if (has_ret_value_) {
      result = ret_value_;
    } else {
      // Fell off the end: a void function, or a value-returning one whose
      // result the dialect pins to zero for determinism.
      const Type* rt = fn->type->ret;
      result = rt->is_void() ? Value{} : make_argument(0, rt);
      result.type = rt;
    }
    for (auto& [s, id] : frames_.back().locals) {
      allocs_[std::size_t(id)].alive = false;
      pending_store_.erase(id);
    }
    frames_.pop_back();
    cur_stmt_ = saved_stmt;
    ret_value_ = saved_ret;
    has_ret_value_ = saved_has;
    return result;
  }

  // ---- statements ----

  void tick(const Stmt* s) {
    if (!s->executable) return;
    if (fuel_ <= 0) throw Stop{OutcomeKind::FuelExhausted};
    --fuel_;
    trace_.executed.push_back(s->id);
  }

  Flow exec(const Stmt* s) {
    if (!s) return Flow::Next;
    switch (s->kind) {
      case StmtKind::Compound:
        for (Stmt* item : s->items) {
          Flow f = exec(item);
          if (f != Flow::Next) return f;
        }
        return Flow::Next;
      case StmtKind::Null: return Flow::Next;
      case StmtKind::Expr:
        tick(s);
        cur_stmt_ = s;
        eval(s->expr);
        return Flow::Next;
      case StmtKind::Decl:
        tick(s);
        cur_stmt_ = s;
        exec_decl(s);
        return Flow::Next;
      case StmtKind::If: {
        tick(s);
        cur_stmt_ = s;
        if (truthy(eval(s->expr))) return exec(s->then_branch);
        return exec(s->else_branch);
      }
      case StmtKind::While: {
        for (;;) {
          tick(s);
          cur_stmt_ = s;
          if (!truthy(eval(s->expr))) return Flow::Next;
          Flow f = exec(s->body);
          if (f == Flow::Break) return Flow::Next;
          if (f == Flow::Return) return f;
        }
      }
      case StmtKind::Do: {
        for (;;) {
          Flow f = exec(s->body);
          if (f == Flow::Break) return Flow::Next;
          if (f == Flow::Return) return f;
          tick(s);
          cur_stmt_ = s;
          if (!truthy(eval(s->expr))) return Flow::Next;
        }
      }
      case StmtKind::For: {
        if (s->for_init) exec(s->for_init);
        for (;;) {
          tick(s);
          cur_stmt_ = s;
          if (s->for_cond && !truthy(eval(s->for_cond))) return Flow::Next;
          Flow f = exec(s->body);
          if (f == Flow::Break) return Flow::Next;
          if (f == Flow::Return) return f;
          if (s->for_incr) exec(s->for_incr);
        }
      }
      case StmtKind::Switch: return exec_switch(s);
      case StmtKind::Break:
        tick(s);
        return Flow::Break;
      case StmtKind::Continue:
        tick(s);
        return Flow::Continue;
      case StmtKind::Return:
        tick(s);
        cur_stmt_ = s;
        if (s->expr) {
          Value v = eval(s->expr);
          const Type* rt = s->fn ? s->fn->type->ret : nullptr;
          ret_value_ = rt && !rt->is_void() ? convert(v, rt) : v;
        } else {
          ret_value_ = Value{};
          ret_value_.type = s->fn ? s->fn->type->ret : nullptr;
        }
        has_ret_value_ = true;
        return Flow::Return;
      case StmtKind::Goto:
        tick(s);
        throw unsupported("goto");
      case StmtKind::Label:
        tick(s);
        return exec(s->body);
      case StmtKind::Case:
      case StmtKind::Default:
        // Reached by fallthrough from a previous label's statements.
        return exec(s->body);
    }
    return Flow::Next;
  }

  void exec_decl(const Stmt* s) {
    for (const VarDecl* d : s->decls) {
      if (!d->sym || !d->sym->is_local_object()) continue;
      int id = frames_.back().locals.at(d->sym);
      if (!d->init) {
        // A fresh object each time the declaration executes.
        mark_uninit(id);
        continue;
      }
      store_init({id, 0, d->type}, d->init);
      record_decl_store(d->sym, id);
    }
  }

  void store_init(const Place& p, const Expr* init) {
    if (init->kind == ExprKind::InitList) {
      std::uint64_t n = sized(p.type, "initializer");
      std::vector<std::uint8_t> zeros(n, 0);
      mem_write(p.alloc, p.off, zeros.data(), n);
      if (p.type->is_array()) {
        const Type* elem = p.type->pointee;
        std::uint64_t es = sized(elem, "element");
        for (std::size_t i = 0; i < init->kids.size(); ++i) {
          std::uint64_t cap = es ? n / es : 0;
          if (i >= cap) throw unsupported("excess array initializers");
          store_init({p.alloc, p.off + std::int64_t(i * es), elem},
                     init->kids[i]);
        }
        return;
      }
      if (p.type->is_record() && p.type->record) {
        const RecordDef* rd = p.type->record;
        if (init->kids.size() > rd->members.size())
          throw unsupported("excess member initializers");
        for (std::size_t i = 0; i < init->kids.size(); ++i) {
          const RecordMember& m = rd->members[i];
          store_init({p.alloc, p.off + std::int64_t(m.offset), m.type},
                     init->kids[i]);
        }
        return;
      }
      if (init->kids.size() != 1)
        throw unsupported("brace initializer shape");
      store_init(p, init->kids[0]);
      return;
    }
    if (init->kind == ExprKind::StringLit && p.type->is_array()) {
      std::string text =
          frontend::decode_string_literal(init->tok.text, init->span());
      std::uint64_t n = sized(p.type, "initializer");
      std::vector<std::uint8_t> buf(n, 0);
      std::uint64_t copy = std::min<std::uint64_t>(text.size(), n);
      std::memcpy(buf.data(), text.data(), copy);
      mem_write(p.alloc, p.off, buf.data(), n);
      return;
    }
    Value v = eval(init);
    store(p, convert(v, p.type));
  }

  Flow exec_switch(const Stmt* s) {
    tick(s);
    cur_stmt_ = s;
    Value sel = eval(s->expr);
    if (sel.kind != Value::Kind::Int)
      throw unsupported("switch selector is not an integer");

    if (!s->body || s->body->kind != StmtKind::Compound)
      throw unsupported("switch body is not a block");
    const auto& items = s->body->items;

    // Only flat bodies run: every label a direct child (label chains
    // included). Anything else is Duff-style flow this oracle refuses.
    for (const Stmt* item : items) {
      const Stmt* t = item;
      while (t && (t->kind == StmtKind::Case || t->kind == StmtKind::Default))
        t = t->body;
      if (t && has_nested_label(t))
        throw unsupported("switch label nested inside the body");
    }

    std::size_t target = items.size();
    std::size_t default_at = items.size();
    for (std::size_t i = 0; i < items.size() && target == items.size(); ++i) {
      const Stmt* t = items[i];
      while (t &&
             (t->kind == StmtKind::Case || t->kind == StmtKind::Default)) {
        if (t->kind == StmtKind::Default) {
          if (default_at == items.size()) default_at = i;
        } else {
          sema::ConstEnv env;
          env.use_symbols = true;
          auto v = sema::const_eval(t->expr, env);
          if (!v) throw unsupported("non-constant case label");
          if (*v == sel.i) {
            target = i;
            break;
          }
        }
        t = t->body;
      }
    }
    if (target == items.size()) target = default_at;
    if (target == items.size()) return Flow::Next;

    for (std::size_t i = target; i < items.size(); ++i) {
      Flow f = exec(items[i]);
      if (f == Flow::Break) return Flow::Next;
      if (f != Flow::Next) return f;
    }
    return Flow::Next;
  }

  bool has_nested_label(const Stmt* s) {
    if (!s) return false;
    if (s->kind == StmtKind::Case || s->kind == StmtKind::Default) return true;
    if (s->kind == StmtKind::Switch) return false;  // owns its own labels
    for (const Stmt* k : std::initializer_list<const Stmt*>{
             s->then_branch, s->else_branch, s->body, s->for_init,
             s->for_incr})
      if (has_nested_label(k)) return true;
    for (const Stmt* k : s->items)
      if (has_nested_label(k)) return true;
    return false;
  }

  // ---- globals ----

  void init_globals() {
    for (Symbol* sym : typed_.file_scope) {
      if (sym->kind != Symbol::Kind::Variable || !sym->is_global) continue;
      if (sym->is_libc && !sym->traits.errno_object) continue;
      auto size = type_size(sym->type);
      if (!size) continue;  // unsized externs stay unmapped
      globals_[sym] = new_alloc(Allocation::Kind::Global, *size, true, sym);
    }
    for (const VarDecl* g : tu_.globals) {
      if (!g->sym || !g->init) continue;
      auto it = globals_.find(g->sym);
      if (it == globals_.end()) continue;
      store_init({it->second, 0, g->type}, g->init);
    }
  }

  // ---- library model ----

  Place errno_place() {
    if (!typed_.errno_sym) throw environment("errno is not in the profile");
    return {alloc_for(typed_.errno_sym), 0,
            tu_.types.int_type(32, true)};
  }

  std::string read_cstring(const Value& p) {
    if (p.kind != Value::Kind::Ptr)
      throw unsupported("string argument is not a pointer");
    if (p.alloc == 0)
      throw runtime_error(ErrorKind::NullDeref, "null string argument");
    std::string out;
    for (std::int64_t i = 0;; ++i) {
      std::uint8_t b;
      mem_read(p.alloc, p.off + i, 1, &b, true);
      if (b == 0) break;
      out.push_back(char(b));
    }
    return out;
  }

  Value ptr_value(int alloc, std::int64_t off, const Type* t) {
    Value v;
    v.kind = Value::Kind::Ptr;
    v.alloc = alloc;
    v.off = off;
    v.type = t;
    return v;
  }

  Value libc_call(const Expr* e, const Symbol* sym, std::vector<Value>& args) {
    const std::string& name = sym->name;
    const Type* ret = sym->type->ret;
    auto need = [&](std::size_t n) {
      if (args.size() < n)
        throw unsupported("too few arguments to '" + name + "'");
    };

    // Character classification: defined on unsigned char values and EOF.
    static const std::map<std::string, int (*)(int)> ctype = {
        {"isalnum", std::isalnum}, {"isalpha", std::isalpha},
        {"isblank", std::isblank}, {"iscntrl", std::iscntrl},
        {"isdigit", std::isdigit}, {"isgraph", std::isgraph},
        {"islower", std::islower}, {"isprint", std::isprint},
        {"ispunct", std::ispunct}, {"isspace", std::isspace},
        {"isupper", std::isupper}, {"isxdigit", std::isxdigit},
    };
    if (auto it = ctype.find(name); it != ctype.end()) {
      need(1);
      std::int64_t v = args[0].i;
      if (v < -1 || v > 255)
        throw environment("'" + name +
                          "' argument outside the classification domain");
      int r = v == dialect::eof_value ? 0 : it->second(int(v)) != 0 ? 1 : 0;
      return int_value(r, ret);
    }
    if (name == "tolower" || name == "toupper") {
      need(1);
      std::int64_t v = args[0].i;
      if (v < -1 || v > 255)
        throw environment("'" + name +
                          "' argument outside the classification domain");
      if (v == dialect::eof_value) return int_value(v, ret);
      int r = name == "tolower" ? std::tolower(int(v)) : std::toupper(int(v));
      return int_value(r, ret);
    }

    // Streams: opening always succeeds and every stream is at end of file,
    // so reads deterministically yield EOF.
    if (name == "fopen") {
      need(2);
      read_cstring(args[0]);
      read_cstring(args[1]);
      int id = new_alloc(Allocation::Kind::Stream, 8, true);
      return ptr_value(id, 0, ret);
    }
    if (name == "tmpfile") {
      int id = new_alloc(Allocation::Kind::Stream, 8, true);
      return ptr_value(id, 0, ret);
    }
    if (name == "fgetc" || name == "getc") {
      need(1);
      stream_arg(args[0]);
      return int_value(dialect::eof_value, ret);
    }
    if (name == "getchar") return int_value(dialect::eof_value, ret);
    if (name == "ungetc") {
      need(2);
      stream_arg(args[1]);
      return int_value(dialect::eof_value, ret);  // pushback is not modeled
    }
    if (name == "fclose") {
      need(1);
      Allocation& a = stream_arg(args[0]);
      a.alive = false;
      return int_value(0, ret);
    }

    if (name == "malloc" || name == "calloc") {
      need(name == "calloc" ? 2 : 1);
      std::uint64_t n = std::uint64_t(args[0].i);
      if (name == "calloc") {
        std::uint64_t m = std::uint64_t(args[1].i);
        if (m != 0 && n > (std::uint64_t(1) << 40) / m)
          throw environment("allocation size beyond the model's cap");
        n *= m;
      }
      if (n > (std::uint64_t(1) << 20))
        throw environment("allocation size beyond the model's cap");
      int id = new_alloc(Allocation::Kind::Heap, n, name == "calloc");
      return ptr_value(id, 0, ret);
    }
    if (name == "free") {
      need(1);
      if (args[0].kind == Value::Kind::Ptr && args[0].alloc == 0 &&
          args[0].off == 0) {
        Value v;
        v.type = ret;
        return v;
      }
      heap_arg(args[0]).alive = false;
      Value v;
      v.type = ret;
      return v;
    }
    if (name == "realloc") {
      need(2);
      std::uint64_t n = std::uint64_t(args[1].i);
      if (n > (std::uint64_t(1) << 20))
        throw environment("allocation size beyond the model's cap");
      if (args[0].kind == Value::Kind::Ptr && args[0].alloc == 0 &&
          args[0].off == 0) {
        int id = new_alloc(Allocation::Kind::Heap, n, false);
        return ptr_value(id, 0, ret);
      }
      heap_arg(args[0]);  // validates; re-find after the push below
      int id = new_alloc(Allocation::Kind::Heap, n, false);
      Allocation& old = allocs_[std::size_t(args[0].alloc)];
      Allocation& fresh = allocs_[std::size_t(id)];
      std::uint64_t copy = std::min<std::uint64_t>(n, old.bytes.size());
      std::copy(old.bytes.begin(), old.bytes.begin() + copy,
                fresh.bytes.begin());
      for (std::uint64_t k = 0; k < copy; ++k) fresh.init[k] = old.init[k];
      for (auto& [off, v] : old.shadow)
        if (off + 8 <= std::int64_t(copy)) fresh.shadow[off] = v;
      old.alive = false;
      pending_store_.erase(args[0].alloc);
      return ptr_value(id, 0, ret);
    }

    if (name == "memcmp") {
      need(3);
      std::uint64_t n = std::uint64_t(args[2].i);
      std::vector<std::uint8_t> a(n), b(n);
      ptr_arg(args[0]);
      ptr_arg(args[1]);
      mem_read(args[0].alloc, args[0].off, n, a.data(), true);
      mem_read(args[1].alloc, args[1].off, n, b.data(), true);
      int r = std::memcmp(a.data(), b.data(), n);
      return int_value(r < 0 ? -1 : r > 0 ? 1 : 0, ret);
    }
    if (name == "strlen") {
      need(1);
      return int_value(std::int64_t(read_cstring(args[0]).size()), ret);
    }
    if (name == "strcmp") {
      need(2);
      std::string a = read_cstring(args[0]);
      std::string b = read_cstring(args[1]);
      int r = a.compare(b);
      return int_value(r < 0 ? -1 : r > 0 ? 1 : 0, ret);
    }
    if (name == "strcpy") {
      need(2);
      std::string src = read_cstring(args[1]);
      ptr_arg(args[0]);
      std::vector<std::uint8_t> buf(src.begin(), src.end());
      buf.push_back(0);
      mem_write(args[0].alloc, args[0].off, buf.data(), buf.size());
      Value v = args[0];
      v.type = ret;
      return v;
    }
    if (name == "memcpy") {
      need(3);
      std::uint64_t n = std::uint64_t(args[2].i);
      ptr_arg(args[0]);
      ptr_arg(args[1]);
      std::vector<std::uint8_t> buf(n);
      mem_read(args[1].alloc, args[1].off, n, buf.data(), false);
      Allocation& src = allocs_[std::size_t(args[1].alloc)];
      std::vector<bool> init(src.init.begin() + args[1].off,
                             src.init.begin() + args[1].off + n);
      mem_write(args[0].alloc, args[0].off, buf.data(), n);
      Allocation& dst = allocs_[std::size_t(args[0].alloc)];
      for (std::uint64_t k = 0; k < n; ++k)
        dst.init[std::size_t(args[0].off) + k] = init[k];
      Value v = args[0];
      v.type = ret;
      return v;
    }
    if (name == "memset") {
      need(3);
      std::uint64_t n = std::uint64_t(args[2].i);
      ptr_arg(args[0]);
      std::vector<std::uint8_t> buf(n, std::uint8_t(args[1].i));
      mem_write(args[0].alloc, args[0].off, buf.data(), n);
      Value v = args[0];
      v.type = ret;
      return v;
    }
    if (name == "strchr" || name == "strrchr") {
      need(2);
      ptr_arg(args[0]);
      std::uint8_t want = std::uint8_t(args[1].i);
      std::int64_t found = -1;
      for (std::int64_t i = 0;; ++i) {
        std::uint8_t b;
        mem_read(args[0].alloc, args[0].off + i, 1, &b, true);
        if (b == want) {
          found = i;
          if (name == "strchr") break;
        }
        if (b == 0) break;
      }
      if (found < 0) return ptr_value(0, 0, ret);
      return ptr_value(args[0].alloc, args[0].off + found, ret);
    }
    if (name == "memchr") {
      need(3);
      ptr_arg(args[0]);
      std::uint64_t n = std::uint64_t(args[2].i);
      std::uint8_t want = std::uint8_t(args[1].i);
      for (std::uint64_t i = 0; i < n; ++i) {
        std::uint8_t b;
        mem_read(args[0].alloc, args[0].off + std::int64_t(i), 1, &b, true);
        if (b == want)
          return ptr_value(args[0].alloc, args[0].off + std::int64_t(i), ret);
      }
      return ptr_value(0, 0, ret);
    }
    if (name == "strstr") {
      need(2);
      std::string hay = read_cstring(args[0]);
      std::string needle = read_cstring(args[1]);
      std::size_t at = hay.find(needle);
      if (at == std::string::npos) return ptr_value(0, 0, ret);
      return ptr_value(args[0].alloc, args[0].off + std::int64_t(at), ret);
    }

    if (name == "strtol" || name == "strtoul") {
      need(2);
      std::string text = read_cstring(args[0]);
      int base = args.size() > 2 ? int(args[2].i) : 10;
      errno = 0;
      char* end = nullptr;
      std::int64_t r;
      if (name == "strtol")
        r = std::strtol(text.c_str(), &end, base);
      else
        r = std::int64_t(std::strtoul(text.c_str(), &end, base));
      if (errno == ERANGE)
        store(errno_place(),
              int_value(dialect::erange_value, tu_.types.int32()));
      if (args.size() > 1 && args[1].kind == Value::Kind::Ptr &&
          args[1].alloc != 0) {
        Place ep{args[1].alloc, args[1].off,
                 tu_.types.pointer_to(tu_.types.plain_char())};
        store(ep, ptr_value(args[0].alloc,
                            args[0].off + (end - text.c_str()), ep.type));
      }
      return int_value(r, ret);
    }
    if (name == "strtod" || name == "strtof") {
      need(2);
      std::string text = read_cstring(args[0]);
      errno = 0;
      char* end = nullptr;
      double r = std::strtod(text.c_str(), &end);
      if (name == "strtof") r = double(float(r));
      if (errno == ERANGE)
        store(errno_place(),
              int_value(dialect::erange_value, tu_.types.int32()));
      if (args[1].kind == Value::Kind::Ptr && args[1].alloc != 0) {
        Place ep{args[1].alloc, args[1].off,
                 tu_.types.pointer_to(tu_.types.plain_char())};
        store(ep, ptr_value(args[0].alloc,
                            args[0].off + (end - text.c_str()), ep.type));
      }
      Value v;
      v.kind = Value::Kind::Float;
      v.f = r;
      v.type = ret;
      return v;
    }

    if (name == "exit") {
      need(1);
      throw Stop{OutcomeKind::Terminated, {}, args[0].i, ""};
    }
    if (name == "abort") throw environment("abort called");

    (void)e;
    throw environment("library function '" + name + "' is not modeled");
  }

  void ptr_arg(const Value& v) {
    if (v.kind != Value::Kind::Ptr)
      throw unsupported("expected a pointer argument");
    if (v.alloc == 0)
      throw runtime_error(ErrorKind::NullDeref, "null pointer argument");
  }

  Allocation& stream_arg(const Value& v) {
    ptr_arg(v);
    Allocation& a = allocs_[std::size_t(v.alloc)];
    if (a.kind != Allocation::Kind::Stream || v.off != 0)
      throw runtime_error(ErrorKind::BadFree, "not a stream handle");
    if (!a.alive)
      throw runtime_error(ErrorKind::OutOfBounds, "use of a closed stream");
    return a;
  }

  Allocation& heap_arg(const Value& v) {
    ptr_arg(v);
    Allocation& a = allocs_[std::size_t(v.alloc)];
    if (a.kind != Allocation::Kind::Heap)
      throw runtime_error(ErrorKind::BadFree,
                          "pointer does not come from an allocation call");
    if (v.off != 0)
      throw runtime_error(ErrorKind::BadFree, "interior pointer released");
    if (!a.alive)
      throw runtime_error(ErrorKind::BadFree, "storage released twice");
    return a;
  }
};

}  // namespace

Trace run(const sema::TypedUnit& typed, const RunOptions& opt) {
  Interp in(typed, opt.fuel);
  return in.go(opt.entry, opt.args);
}

std::string dump_trace(const Trace& t) {
  std::ostringstream out;
  for (int id : t.executed) out << "EXEC " << id << "\n";
  for (const StoreEvent& s : t.stores)
    out << "STORE " << s.stmt_id << " " << s.symbol << " "
        << (s.live ? "live" : "dead") << "\n";
  out << "OUTCOME " << outcome_name(t.outcome);
  switch (t.outcome) {
    case OutcomeKind::Terminated: out << " " << t.exit_value; break;
    case OutcomeKind::RuntimeError:
      out << " " << error_name(t.error);
      if (!t.detail.empty()) out << ": " << t.detail;
      break;
    case OutcomeKind::EnvironmentCall:
    case OutcomeKind::Unsupported:
      if (!t.detail.empty()) out << ": " << t.detail;
      break;
    case OutcomeKind::FuelExhausted: break;
  }
  out << "\n";
  return out.str();
}

SweepResult sweep(const sema::TypedUnit& typed, const std::string& entry,
                  std::int64_t fuel) {
  Symbol* sym = typed.find_symbol(entry);
  if (!sym || sym->kind != Symbol::Kind::Function || !sym->fn ||
      !sym->fn->is_definition)
    throw FatalError({}, "no definition for entry point '" + entry + "'");
  const FunctionDef* fn = sym->fn;

  std::vector<std::size_t> grid_params;  // positions swept over the grid
  for (std::size_t i = 0; i < fn->params.size() && grid_params.size() < 3;
       ++i) {
    const Type* t = fn->params[i]->type;
    if (t && t->is_arith_integer()) grid_params.push_back(i);
  }

  SweepResult result;
  std::vector<int> point(grid_params.size(), -2);
  for (;;) {
    RunOptions opt;
    opt.entry = entry;
    opt.fuel = fuel;
    opt.args.assign(fn->params.size(), 0);
    for (std::size_t k = 0; k < grid_params.size(); ++k)
      opt.args[grid_params[k]] = point[k];
    Trace t = run(typed, opt);
    ++result.runs;
    result.ever_executed.insert(t.executed.begin(), t.executed.end());
    for (const StoreEvent& s : t.stores)
      if (s.live) result.live_stores.insert({s.stmt_id, s.symbol});

    std::size_t k = 0;
    for (; k < point.size(); ++k) {
      if (point[k] < 2) {
        ++point[k];
        break;
      }
      point[k] = -2;
    }
    if (k == point.size()) break;
  }
  return result;
}

}  // namespace minicheck::oracle
