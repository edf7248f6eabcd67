#ifndef ASTLM_TOKENIZER_HPP
#define ASTLM_TOKENIZER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "astlm/ast.hpp"

namespace astlm {

// The paper's printed token strings leave the method header and every
// statement that owns a block unbalanced. paper_compat reproduces those
// strings byte for byte; canonical closes every parenthesis and marks block
// positions with a `_8` placeholder leaf so sentences invert losslessly.
// canonical is the default for corpus building.
enum class EmitMode { paper_compat, canonical };

// One token: a structural `_..` string, `{`, `}`, a header token, or a
// metatoken. Tokens never contain whitespace.
using Token = std::string;

// The token sequence of one method. Serialized as a single space-joined line;
// <eos> is appended by the corpus encoder, never stored.
using Sentence = std::vector<Token>;

// Flattens a statement AST: leaf -> `_<id>`, internal -> `_<id>(children...)`.
// Throws BlockInsideStatement when the tree contains a block node.
std::string flatten(const AstNode& node);

// Inverts flatten. Grammar: T := "_" digits [ "(" T+ ")" ].
// Throws MalformedToken or UnknownNodeId; lexemes are absent in the result.
AstNode unflatten(std::string_view token);

// Emits the sentence for one method in the given mode.
Sentence tokenize_method(const MethodAst& method, EmitMode mode);

// Rebuilds the syntactic skeleton of a method from a canonical-mode sentence.
// tokenize_method(sentence_to_method(s), canonical) == s.
// Throws MalformedSentence on unbalanced braces, missing headers, stray or
// missing brace groups, and malformed tokens.
MethodAst sentence_to_method(const Sentence& sentence);

// Tokens joined with single spaces.
std::string join_sentence(const Sentence& sentence);

// Splits a space-delimited line into tokens (empty fields dropped).
Sentence split_sentence(std::string_view line);

inline constexpr const char* kUnkToken = "<unk>";
inline constexpr const char* kEosToken = "<eos>";

}  // namespace astlm

#endif  // ASTLM_TOKENIZER_HPP
