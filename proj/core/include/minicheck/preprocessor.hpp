#pragma once

#include <string>
#include <vector>

#include "minicheck/source.hpp"

namespace minicheck::frontend {

struct PreprocessOptions {
  // Entries are NAME or NAME=VALUE; applied before the main file, as if a
  // prologue of #define lines.
  std::vector<std::string> defines;
  std::vector<std::string> include_paths;
};

struct PreprocessResult {
  // Fully expanded token stream, one trailing Eof (the main file's).
  std::vector<Token> tokens;
  // Location of every conditional directive (#if/#ifdef/#ifndef/#elif/
  // #else/#endif), including ones in skipped regions. Consumers use these
  // to recognize configuration-dependent function bodies.
  std::vector<SourceSpan> conditional_lines;
  // <...> include names, recorded but not resolved; the library profile
  // supplies those declarations.
  std::vector<std::string> system_includes;
};

// Runs directives and macro expansion over `main_file`, loading quoted
// includes through `sm`. Body tokens of an expansion carry the use-site
// span plus an origin chain (innermost macro first); tokens written
// directly in a file keep an empty chain.
PreprocessResult preprocess(SourceManager& sm, FileId main_file,
                            const PreprocessOptions& opts = {});

}  // namespace minicheck::frontend
