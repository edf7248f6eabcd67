#include "lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

#include "astlm/errors.hpp"

namespace astlm::detail {

namespace {

const std::unordered_set<std::string_view>& keywords() {
    static const std::unordered_set<std::string_view> kw = {
        "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
        "class", "const", "continue", "default", "do", "double", "else", "enum",
        "extends", "final", "finally", "float", "for", "goto", "if", "implements",
        "import", "instanceof", "int", "interface", "long", "native", "new",
        "package", "private", "protected", "public", "return", "short", "static",
        "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
        "transient", "try", "void", "volatile", "while", "true", "false", "null",
    };
    return kw;
}

bool ident_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

// Longest-munch operator table.
constexpr std::array<std::string_view, 36> kOperators = {
    ">>>=", ">>>", "<<=", ">>=", "...", "->", "::", "==", "!=", "<=", ">=",
    "&&",   "||",  "++",  "--",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=",
    "^=",   "<<",  ">>",  "=",   "<",   ">",  "!",  "~",  "?",  ":",  "+",
    "-",    "*",   "/",
};

}  // namespace

bool is_java_keyword(std::string_view word) { return keywords().contains(word); }

bool is_modifier_keyword(std::string_view word) {
    return word == "public" || word == "private" || word == "protected" ||
           word == "static" || word == "final" || word == "abstract" ||
           word == "native" || word == "synchronized" || word == "transient" ||
           word == "volatile" || word == "strictfp" || word == "default";
}

bool is_primitive_keyword(std::string_view word) {
    return word == "boolean" || word == "byte" || word == "short" || word == "char" ||
           word == "int" || word == "long" || word == "float" || word == "double" ||
           word == "void";
}

std::vector<Tok> lex_java(std::string_view src) {
    std::vector<Tok> out;
    std::size_t i = 0;
    const std::size_t n = src.size();

    auto skip_escape = [&](std::size_t& j) {
        // j sits on '\\'; consume the escape (unicode escapes are longer but a
        // blanket two-char skip is safe because we only need the terminator).
        j += 2;
    };

    while (i < n) {
        unsigned char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            std::size_t j = i + 2;
            while (j + 1 < n && !(src[j] == '*' && src[j + 1] == '/')) ++j;
            i = j + 1 < n ? j + 2 : n;
            continue;
        }
        if (ident_start(c)) {
            std::size_t start = i;
            while (i < n && ident_part(static_cast<unsigned char>(src[i]))) ++i;
            std::string_view word = src.substr(start, i - start);
            out.push_back({is_java_keyword(word) ? TokType::keyword : TokType::identifier,
                           word, start});
            continue;
        }
        if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t start = i;
            bool hex = i + 1 < n && c == '0' && (src[i + 1] == 'x' || src[i + 1] == 'X');
            while (i < n) {
                unsigned char d = src[i];
                if (std::isalnum(d) || d == '_' || d == '.') {
                    ++i;
                    // exponent sign
                    if (i < n && (src[i] == '+' || src[i] == '-')) {
                        unsigned char e = src[i - 1];
                        bool exp = hex ? (e == 'p' || e == 'P') : (e == 'e' || e == 'E');
                        if (exp) ++i;
                    }
                } else {
                    break;
                }
            }
            out.push_back({TokType::number, src.substr(start, i - start), start});
            continue;
        }
        if (c == '"') {
            std::size_t start = i;
            std::size_t j = i + 1;
            while (j < n && src[j] != '"' && src[j] != '\n') {
                if (src[j] == '\\')
                    skip_escape(j);
                else
                    ++j;
            }
            if (j >= n || src[j] != '"') throw SyntaxError(start, "closing '\"'");
            out.push_back({TokType::string_literal, src.substr(start, 1), start});
            i = j + 1;
            continue;
        }
        if (c == '\'') {
            std::size_t start = i;
            std::size_t j = i + 1;
            while (j < n && src[j] != '\'' && src[j] != '\n') {
                if (src[j] == '\\')
                    skip_escape(j);
                else
                    ++j;
            }
            if (j >= n || src[j] != '\'') throw SyntaxError(start, "closing \"'\"");
            out.push_back({TokType::char_literal, src.substr(start, 1), start});
            i = j + 1;
            continue;
        }
        bool matched = false;
        for (std::string_view op : kOperators) {
            if (src.substr(i, op.size()) == op) {
                out.push_back({TokType::punct, src.substr(i, op.size()), i});
                i += op.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        static constexpr std::string_view kSingles = "(){}[];,.%&|^@";
        if (kSingles.find(static_cast<char>(c)) != std::string_view::npos) {
            out.push_back({TokType::punct, src.substr(i, 1), i});
            ++i;
            continue;
        }
        throw SyntaxError(i, "a Java token");
    }
    out.push_back({TokType::end_of_input, {}, n});
    return out;
}

}  // namespace astlm::detail
