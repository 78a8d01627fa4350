#pragma once

#include <string>
#include <vector>

#include "minicheck/ast.hpp"
#include "minicheck/symbols.hpp"

namespace minicheck::sema {

struct ProfileFunction {
  std::string name;
  const Type* type = nullptr;  // Function type
  LibcTraits traits;
};

struct ProfileObject {
  std::string name;
  const Type* type = nullptr;
  LibcTraits traits;
};

struct LibcProfile {
  std::vector<ProfileFunction> functions;
  std::vector<ProfileObject> objects;  // errno
};

// Typedef names the parser must know before any declaration is seen:
// size_t, ptrdiff_t, the exact-width <stdint.h> names, and FILE.
std::vector<TypedefDecl> builtin_typedefs(TypeTable& types);

// Declarations and traits for the supported library subset.
LibcProfile builtin_profile(TypeTable& types);

// Object-like macros every analyzed file gets, mirroring the headers the
// profile stands in for.
std::vector<std::string> default_defines();

}  // namespace minicheck::sema
