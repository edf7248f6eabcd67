#ifndef ASTLM_LEXER_HPP
#define ASTLM_LEXER_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace astlm::detail {

enum class TokType {
    identifier,
    keyword,
    number,
    string_literal,   // content already discarded
    char_literal,     // content already discarded
    punct,
    end_of_input,
};

struct Tok {
    TokType type = TokType::end_of_input;
    std::string_view text;   // for string/char literals: the opening quote only
    std::size_t offset = 0;

    bool is(std::string_view s) const {
        return (type == TokType::punct || type == TokType::keyword) && text == s;
    }
};

// Lexes a Java source; comments are dropped, string and char literal contents
// are discarded. Throws SyntaxError on unterminated literals. The returned
// vector always ends with an end_of_input token.
std::vector<Tok> lex_java(std::string_view source);

bool is_java_keyword(std::string_view word);
bool is_modifier_keyword(std::string_view word);
bool is_primitive_keyword(std::string_view word);

}  // namespace astlm::detail

#endif  // ASTLM_LEXER_HPP
