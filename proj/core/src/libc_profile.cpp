#include "minicheck/libc_profile.hpp"

#include "minicheck/dialect.hpp"

namespace minicheck::sema {

std::vector<TypedefDecl> builtin_typedefs(TypeTable& t) {
  std::vector<TypedefDecl> out;
  auto add = [&](const char* name, const Type* ty) {
    TypedefDecl d;
    d.name = name;
    d.type = ty;
    out.push_back(std::move(d));
  };
  add("size_t", t.int_type(64, false));
  add("ptrdiff_t", t.int_type(64, true));
  add("int8_t", t.int_type(8, true));
  add("uint8_t", t.int_type(8, false));
  add("int16_t", t.int_type(16, true));
  add("uint16_t", t.int_type(16, false));
  add("int32_t", t.int_type(32, true));
  add("uint32_t", t.int_type(32, false));
  add("int64_t", t.int_type(64, true));
  add("uint64_t", t.int_type(64, false));
  add("FILE", t.opaque("FILE"));
  return out;
}

LibcProfile builtin_profile(TypeTable& t) {
  LibcProfile p;

  const Type* vd = t.void_type();
  const Type* i32 = t.int32();
  const Type* i64 = t.int64();
  const Type* u64 = t.uint64();
  const Type* f32 = t.float_type(32);
  const Type* f64 = t.float_type(64);
  const Type* ch = t.plain_char();
  const Type* cch = t.qualified(ch, true, false);
  const Type* pch = t.pointer_to(ch);
  const Type* pcch = t.pointer_to(cch);
  const Type* ppch = t.pointer_to(pch);
  const Type* pv = t.pointer_to(vd);
  const Type* pcv = t.pointer_to(t.qualified(vd, true, false));
  const Type* file = t.opaque("FILE");
  const Type* pfile = t.pointer_to(file);

  auto fn = [&](const char* name, const Type* ret,
                std::vector<const Type*> params, LibcTraits traits = {}) {
    ProfileFunction f;
    f.name = name;
    f.type = t.function(ret, std::move(params), false, false);
    f.traits = traits;
    p.functions.push_back(std::move(f));
  };

  LibcTraits ctype;
  ctype.ctype_consumer = true;
  for (const char* name :
       {"isalnum", "isalpha", "isblank", "iscntrl", "isdigit", "isgraph",
        "islower", "isprint", "ispunct", "isspace", "isupper", "isxdigit",
        "tolower", "toupper"})
    fn(name, i32, {i32}, ctype);

  LibcTraits eof;
  eof.eof_producing = true;
  fn("fgetc", i32, {pfile}, eof);
  fn("getc", i32, {pfile}, eof);
  fn("getchar", i32, {}, eof);
  fn("ungetc", i32, {i32, pfile}, eof);

  LibcTraits acq;
  acq.acquire = true;
  fn("fopen", pfile, {pcch, pcch}, acq);
  fn("tmpfile", pfile, {}, acq);
  fn("malloc", pv, {u64}, acq);
  fn("calloc", pv, {u64, u64}, acq);
  {
    LibcTraits re = acq;
    re.release_arg0 = true;
    fn("realloc", pv, {pv, u64}, re);
  }

  LibcTraits rel;
  rel.release = true;
  fn("fclose", i32, {pfile}, rel);
  fn("free", vd, {pv}, rel);

  fn("feof", i32, {pfile});
  fn("ferror", i32, {pfile});
  fn("fflush", i32, {pfile});
  fn("rewind", vd, {pfile});
  fn("fseek", i32, {pfile, i64, i32});
  fn("ftell", i64, {pfile});
  fn("fputc", i32, {i32, pfile});
  fn("putc", i32, {i32, pfile});
  fn("putchar", i32, {i32});
  fn("fputs", i32, {pcch, pfile});
  fn("fgets", pch, {pch, i32, pfile});
  fn("fread", u64, {pv, u64, u64, pfile});
  fn("fwrite", u64, {pcv, u64, u64, pfile});
  fn("perror", vd, {pcch});

  LibcTraits cmp;
  cmp.mem_compare = true;
  fn("memcmp", i32, {pcv, pcv, u64}, cmp);

  LibcTraits search;
  search.string_search = true;
  fn("strchr", pch, {pcch, i32}, search);
  fn("strrchr", pch, {pcch, i32}, search);
  fn("memchr", pv, {pcv, i32, u64}, search);
  fn("strstr", pch, {pcch, pcch}, search);

  fn("strcmp", i32, {pcch, pcch});
  fn("strncmp", i32, {pcch, pcch, u64});
  fn("strlen", u64, {pcch});
  fn("strcpy", pch, {pch, pcch});
  fn("strncpy", pch, {pch, pcch, u64});
  fn("strcat", pch, {pch, pcch});
  fn("memcpy", pv, {pv, pcv, u64});
  fn("memset", pv, {pv, i32, u64});

  LibcTraits err;
  err.errno_setting = true;
  fn("strtol", i64, {pcch, ppch, i32}, err);
  fn("strtoul", u64, {pcch, ppch, i32}, err);
  fn("strtod", f64, {pcch, ppch}, err);
  fn("strtof", f32, {pcch, ppch}, err);

  fn("abort", vd, {});
  fn("exit", vd, {i32});

  ProfileObject errno_obj;
  errno_obj.name = "errno";
  errno_obj.type = t.qualified(i32, false, true);  // volatile int
  errno_obj.traits.errno_object = true;
  p.objects.push_back(std::move(errno_obj));

  return p;
}

std::vector<std::string> default_defines() {
  return {"EOF=(-1)", "NULL=0", "ERANGE=" +
                                     std::to_string(dialect::erange_value)};
}

}  // namespace minicheck::sema
