#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minicheck/source.hpp"

namespace minicheck {

struct RecordDef;
struct EnumDef;

// Structural type node. Instances are interned by TypeTable, so pointer
// equality is type identity (qualifiers included). Records, enums and
// opaque types are nominal: identity follows the definition object.
struct Type {
  enum class Kind {
    Void,
    Integer,
    Floating,
    Pointer,
    Array,
    Function,
    Record,
    Enum,
    Opaque,  // named type with unknown layout, e.g. FILE
  };

  Kind kind = Kind::Void;
  bool is_const = false;
  bool is_volatile = false;

  // Integer / Floating
  int width = 0;
  bool is_signed = false;
  bool is_plain_char = false;  // `char`, distinct from signed/unsigned char
  bool is_bool = false;

  // Pointer / Array
  const Type* pointee = nullptr;  // also array element
  std::optional<std::uint64_t> array_size;

  // Function
  const Type* ret = nullptr;
  std::vector<const Type*> params;
  bool variadic = false;
  bool unspecified_params = false;  // declared with empty parentheses

  // Nominal types
  const RecordDef* record = nullptr;
  const EnumDef* enum_def = nullptr;
  std::string opaque_name;

  bool is_integer() const { return kind == Kind::Integer; }
  bool is_enum() const { return kind == Kind::Enum; }
  bool is_arith_integer() const { return is_integer() || is_enum(); }
  bool is_floating() const { return kind == Kind::Floating; }
  bool is_arithmetic() const { return is_arith_integer() || is_floating(); }
  bool is_pointer() const { return kind == Kind::Pointer; }
  bool is_scalar() const { return is_arithmetic() || is_pointer(); }
  bool is_void() const { return kind == Kind::Void; }
  bool is_record() const { return kind == Kind::Record; }
  bool is_function() const { return kind == Kind::Function; }
  bool is_array() const { return kind == Kind::Array; }
  bool is_opaque() const { return kind == Kind::Opaque; }
  bool is_plain_char_type() const {
    return is_integer() && is_plain_char;
  }
};

struct RecordMember {
  std::string name;
  const Type* type = nullptr;
  SourceSpan span;
  std::uint64_t offset = 0;
};

struct RecordDef {
  std::string tag;  // empty for anonymous
  bool is_union = false;
  bool complete = false;
  std::vector<RecordMember> members;
  SourceSpan span;
  std::uint64_t size = 0;
  const RecordMember* find(const std::string& name) const {
    for (const auto& m : members)
      if (m.name == name) return &m;
    return nullptr;
  }
};

struct Enumerator {
  std::string name;
  std::int64_t value = 0;
  // Initializer expression, null when implicit. Stored as an opaque pointer
  // to the AST node; the effectless detector inspects it.
  struct Expr* init = nullptr;
  SourceSpan span;
};

struct EnumDef {
  std::string tag;
  std::vector<Enumerator> enumerators;
  SourceSpan span;
};

// Owns and interns types. Qualified variants intern separately.
class TypeTable {
 public:
  TypeTable();

  const Type* void_type() const { return void_; }
  const Type* bool_type() const { return bool_; }
  const Type* plain_char() const { return plain_char_; }
  const Type* int_type(int width, bool is_signed);
  const Type* float_type(int width);
  const Type* pointer_to(const Type* pointee);
  const Type* array_of(const Type* elem, std::optional<std::uint64_t> size);
  const Type* function(const Type* ret, std::vector<const Type*> params,
                       bool variadic, bool unspecified);
  const Type* record_type(const RecordDef* def);
  const Type* enum_type(const EnumDef* def);
  const Type* opaque(const std::string& name);
  const Type* qualified(const Type* base, bool add_const, bool add_volatile);
  const Type* unqualified(const Type* t);

  // Convenience, per the fixed dialect.
  const Type* int32() { return int_type(32, true); }
  const Type* uint32() { return int_type(32, false); }
  const Type* int64() { return int_type(64, true); }
  const Type* uint64() { return int_type(64, false); }

  RecordDef* make_record(std::string tag, bool is_union, SourceSpan span);
  EnumDef* make_enum(std::string tag, SourceSpan span);

 private:
  const Type* intern(Type t);
  std::deque<Type> pool_;
  std::map<std::string, const Type*> index_;
  std::deque<RecordDef> records_;
  std::deque<EnumDef> enums_;
  const Type* void_ = nullptr;
  const Type* bool_ = nullptr;
  const Type* plain_char_ = nullptr;
};

// Size in bytes. Opaque, incomplete and function types are unsized; sizeof
// over them is a front-end error reported by the caller.
std::optional<std::uint64_t> type_size(const Type* t);
std::uint64_t type_align(const Type* t);

std::string render_type(const Type* t);

}  // namespace minicheck
