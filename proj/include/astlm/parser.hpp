#ifndef ASTLM_PARSER_HPP
#define ASTLM_PARSER_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "astlm/ast.hpp"

namespace astlm {

struct Diagnostic {
    std::size_t offset;
    std::string message;
};

struct ParseOutcome {
    std::vector<MethodAst> methods;
    int skipped = 0;  // method bodies that failed to parse
    std::vector<Diagnostic> diagnostics;
};

// Extracts every method body in the supported Java subset from one source
// file. Methods that use unsupported constructs are counted in `skipped` with
// a diagnostic. Never throws on malformed input; a completely unparseable
// file yields zero methods and at least one diagnostic.
ParseOutcome extract_methods(std::string_view source);

// Parses a single statement. Throws SyntaxError outside the supported subset.
AstNode parse_statement(std::string_view source);

}  // namespace astlm

#endif  // ASTLM_PARSER_HPP
