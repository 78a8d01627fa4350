#include "minicheck/types.hpp"

#include <sstream>

#include "minicheck/dialect.hpp"

namespace minicheck {

namespace {

// Stable structural key; nominal types key on the definition address.
std::string type_key(const Type& t) {
  std::ostringstream os;
  os << static_cast<int>(t.kind) << (t.is_const ? "c" : "")
     << (t.is_volatile ? "v" : "");
  switch (t.kind) {
    case Type::Kind::Void:
      break;
    case Type::Kind::Integer:
      os << "i" << t.width << (t.is_signed ? "s" : "u")
         << (t.is_plain_char ? "p" : "") << (t.is_bool ? "b" : "");
      break;
    case Type::Kind::Floating:
      os << "f" << t.width;
      break;
    case Type::Kind::Pointer:
      os << "*" << t.pointee;
      break;
    case Type::Kind::Array:
      os << "[" << (t.array_size ? std::to_string(*t.array_size) : "?") << "]"
         << t.pointee;
      break;
    case Type::Kind::Function: {
      os << "(" << t.ret << ")(";
      for (const Type* p : t.params) os << p << ",";
      os << (t.variadic ? "..." : "") << (t.unspecified_params ? "?" : "")
         << ")";
      break;
    }
    case Type::Kind::Record:
      os << "r" << t.record;
      break;
    case Type::Kind::Enum:
      os << "e" << t.enum_def;
      break;
    case Type::Kind::Opaque:
      os << "o" << t.opaque_name;
      break;
  }
  return os.str();
}

}  // namespace

TypeTable::TypeTable() {
  Type v;
  v.kind = Type::Kind::Void;
  void_ = intern(v);

  Type b;
  b.kind = Type::Kind::Integer;
  b.width = 8;
  b.is_signed = false;
  b.is_bool = true;
  bool_ = intern(b);

  Type c;
  c.kind = Type::Kind::Integer;
  c.width = dialect::char_bits;
  c.is_signed = dialect::char_is_signed;
  c.is_plain_char = true;
  plain_char_ = intern(c);
}

const Type* TypeTable::intern(Type t) {
  std::string key = type_key(t);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  pool_.push_back(std::move(t));
  const Type* p = &pool_.back();
  index_.emplace(std::move(key), p);
  return p;
}

const Type* TypeTable::int_type(int width, bool is_signed) {
  Type t;
  t.kind = Type::Kind::Integer;
  t.width = width;
  t.is_signed = is_signed;
  return intern(t);
}

const Type* TypeTable::float_type(int width) {
  Type t;
  t.kind = Type::Kind::Floating;
  t.width = width;
  return intern(t);
}

const Type* TypeTable::pointer_to(const Type* pointee) {
  Type t;
  t.kind = Type::Kind::Pointer;
  t.pointee = pointee;
  return intern(t);
}

const Type* TypeTable::array_of(const Type* elem,
                                std::optional<std::uint64_t> size) {
  Type t;
  t.kind = Type::Kind::Array;
  t.pointee = elem;
  t.array_size = size;
  return intern(t);
}

const Type* TypeTable::function(const Type* ret,
                                std::vector<const Type*> params, bool variadic,
                                bool unspecified) {
  Type t;
  t.kind = Type::Kind::Function;
  t.ret = ret;
  t.params = std::move(params);
  t.variadic = variadic;
  t.unspecified_params = unspecified;
  return intern(t);
}

const Type* TypeTable::record_type(const RecordDef* def) {
  Type t;
  t.kind = Type::Kind::Record;
  t.record = def;
  return intern(t);
}

const Type* TypeTable::enum_type(const EnumDef* def) {
  Type t;
  t.kind = Type::Kind::Enum;
  t.width = dialect::int_bits;
  t.is_signed = true;
  t.enum_def = def;
  return intern(t);
}

const Type* TypeTable::opaque(const std::string& name) {
  Type t;
  t.kind = Type::Kind::Opaque;
  t.opaque_name = name;
  return intern(t);
}

const Type* TypeTable::qualified(const Type* base, bool add_const,
                                 bool add_volatile) {
  if (!add_const && !add_volatile) return base;
  Type t = *base;
  t.is_const = t.is_const || add_const;
  t.is_volatile = t.is_volatile || add_volatile;
  return intern(t);
}

const Type* TypeTable::unqualified(const Type* t) {
  if (!t->is_const && !t->is_volatile) return t;
  Type u = *t;
  u.is_const = false;
  u.is_volatile = false;
  return intern(u);
}

RecordDef* TypeTable::make_record(std::string tag, bool is_union,
                                  SourceSpan span) {
  RecordDef d;
  d.tag = std::move(tag);
  d.is_union = is_union;
  d.span = span;
  records_.push_back(std::move(d));
  return &records_.back();
}

EnumDef* TypeTable::make_enum(std::string tag, SourceSpan span) {
  EnumDef d;
  d.tag = std::move(tag);
  d.span = span;
  enums_.push_back(std::move(d));
  return &enums_.back();
}

std::optional<std::uint64_t> type_size(const Type* t) {
  switch (t->kind) {
    case Type::Kind::Void:
    case Type::Kind::Function:
    case Type::Kind::Opaque:
      return std::nullopt;
    case Type::Kind::Integer:
    case Type::Kind::Floating:
      return static_cast<std::uint64_t>(t->width) / 8;
    case Type::Kind::Enum:
      return static_cast<std::uint64_t>(dialect::int_bits) / 8;
    case Type::Kind::Pointer:
      return static_cast<std::uint64_t>(dialect::pointer_bits) / 8;
    case Type::Kind::Array: {
      if (!t->array_size) return std::nullopt;
      auto elem = type_size(t->pointee);
      if (!elem) return std::nullopt;
      return *elem * *t->array_size;
    }
    case Type::Kind::Record:
      if (!t->record->complete) return std::nullopt;
      return t->record->size;
  }
  return std::nullopt;
}

std::uint64_t type_align(const Type* t) {
  switch (t->kind) {
    case Type::Kind::Array:
      return type_align(t->pointee);
    case Type::Kind::Record: {
      std::uint64_t a = 1;
      for (const auto& m : t->record->members) {
        std::uint64_t ma = type_align(m.type);
        if (ma > a) a = ma;
      }
      return a;
    }
    default: {
      auto s = type_size(t);
      return s && *s > 0 ? (*s > 8 ? 8 : *s) : 1;
    }
  }
}

std::string render_type(const Type* t) {
  std::string quals;
  if (t->is_const) quals += "const ";
  if (t->is_volatile) quals += "volatile ";
  switch (t->kind) {
    case Type::Kind::Void:
      return quals + "void";
    case Type::Kind::Integer: {
      if (t->is_bool) return quals + "_Bool";
      if (t->is_plain_char) return quals + "char";
      std::string base;
      switch (t->width) {
        case 8: base = "char"; break;
        case 16: base = "short"; break;
        case 32: base = "int"; break;
        default: base = "long"; break;
      }
      if (!t->is_signed)
        base = "unsigned " + base;
      else if (t->width == 8)
        base = "signed char";
      return quals + base;
    }
    case Type::Kind::Floating:
      return quals + (t->width == 32 ? "float" : "double");
    case Type::Kind::Pointer: {
      std::string inner = render_type(t->pointee);
      std::string out = inner + " *";
      if (!quals.empty()) {
        out += quals;
        out.pop_back();  // trailing space
      }
      return out;
    }
    case Type::Kind::Array:
      return render_type(t->pointee) + "[" +
             (t->array_size ? std::to_string(*t->array_size) : "") + "]";
    case Type::Kind::Function: {
      std::string out = render_type(t->ret) + " (";
      for (size_t i = 0; i < t->params.size(); ++i) {
        if (i) out += ", ";
        out += render_type(t->params[i]);
      }
      if (t->variadic) out += t->params.empty() ? "..." : ", ...";
      if (t->params.empty() && !t->variadic)
        out += t->unspecified_params ? "" : "void";
      return out + ")";
    }
    case Type::Kind::Record:
      return quals + (t->record->is_union ? "union " : "struct ") +
             (t->record->tag.empty() ? "<anonymous>" : t->record->tag);
    case Type::Kind::Enum:
      return quals + "enum " +
             (t->enum_def->tag.empty() ? "<anonymous>" : t->enum_def->tag);
    case Type::Kind::Opaque:
      return quals + t->opaque_name;
  }
  return quals + "<type>";
}

}  // namespace minicheck
