#include "astlm/tokenizer.hpp"

#include <cctype>
#include <charconv>

#include "astlm/errors.hpp"

namespace astlm {

namespace {

void flatten_into(const AstNode& node, std::string& out) {
    if (node.kind->is_block) throw BlockInsideStatement();
    out += '_';
    out += std::to_string(node.id());
    if (!node.children.empty()) {
        out += '(';
        for (const AstNode& child : node.children) flatten_into(child, out);
        out += ')';
    }
}

// Like flatten_into but renders any block node as the placeholder leaf `_8`
// and records the blocks in placeholder (pre-)order.
void flatten_placeholder(const AstNode& node, std::string& out,
                         std::vector<const AstNode*>& blocks) {
    out += '_';
    out += std::to_string(node.id());
    if (node.kind->is_block) {
        blocks.push_back(&node);
        return;
    }
    if (!node.children.empty()) {
        out += '(';
        for (const AstNode& child : node.children) flatten_placeholder(child, out, blocks);
        out += ')';
    }
}

struct TokenParser {
    std::string_view text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }

    AstNode parse_node() {
        if (done() || text[pos] != '_') throw MalformedToken("expected '_' in " + std::string(text));
        ++pos;
        std::size_t digits_start = pos;
        while (!done() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == digits_start) throw MalformedToken("non-numeric node id in " + std::string(text));
        if (pos - digits_start > 8) throw MalformedToken("node id overflow in " + std::string(text));
        int id = 0;
        std::from_chars(text.data() + digits_start, text.data() + pos, id);
        AstNode node(id);
        if (!done() && text[pos] == '(') {
            ++pos;
            if (!done() && text[pos] == ')')
                throw MalformedToken("empty child list in " + std::string(text));
            while (!done() && text[pos] != ')') node.children.push_back(parse_node());
            if (done()) throw MalformedToken("unbalanced parentheses in " + std::string(text));
            ++pos;  // ')'
        }
        return node;
    }
};

void emit_block_compat(const AstNode& block, Sentence& out);

// paper_compat statement rendering: a statement that owns blocks keeps its
// opening parenthesis unclosed, with every block-free child flattened inside
// and every block-carrying child deferred to sentence level.
void emit_stmt_compat(const AstNode& stmt, Sentence& out) {
    if (stmt.kind->is_block) {
        emit_block_compat(stmt, out);
        return;
    }
    if (!contains_block(stmt)) {
        std::string token;
        flatten_into(stmt, token);
        out.push_back(std::move(token));
        return;
    }
    std::string token = "_" + std::to_string(stmt.id()) + "(";
    std::vector<const AstNode*> deferred;
    for (const AstNode& child : stmt.children) {
        if (contains_block(child))
            deferred.push_back(&child);
        else
            flatten_into(child, token);
    }
    out.push_back(std::move(token));
    for (const AstNode* child : deferred) {
        if (child->kind->is_block)
            emit_block_compat(*child, out);
        else
            emit_stmt_compat(*child, out);
    }
}

void emit_block_compat(const AstNode& block, Sentence& out) {
    out.emplace_back("{");
    for (const AstNode& stmt : block.children) emit_stmt_compat(stmt, out);
    out.emplace_back("}");
}

void emit_stmt_canonical(const AstNode& stmt, Sentence& out) {
    std::string token;
    std::vector<const AstNode*> blocks;
    flatten_placeholder(stmt, token, blocks);
    out.push_back(std::move(token));
    for (const AstNode* block : blocks) {
        out.emplace_back("{");
        for (const AstNode& child : block->children) emit_stmt_canonical(child, out);
        out.emplace_back("}");
    }
}

// Pre-order pointers to the block placeholders of an unflattened token.
void collect_placeholders(AstNode& node, std::vector<AstNode*>& out) {
    if (node.kind->is_block) {
        if (!node.children.empty())
            throw MalformedSentence("block placeholder with inline children");
        out.push_back(&node);
        return;
    }
    for (AstNode& child : node.children) collect_placeholders(child, out);
}

struct SentenceParser {
    const Sentence& tokens;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const Token& peek() const { return tokens[pos]; }

    std::vector<AstNode> parse_group_body() {
        std::vector<AstNode> stmts;
        while (true) {
            if (done()) throw MalformedSentence("unbalanced braces");
            if (peek() == "}") {
                ++pos;
                return stmts;
            }
            stmts.push_back(parse_statement());
        }
    }

    AstNode parse_statement() {
        const Token& tok = peek();
        if (tok == "{") throw MalformedSentence("brace group with no preceding _8 placeholder");
        if (tok == "}") throw MalformedSentence("unbalanced braces");
        AstNode node;
        try {
            node = unflatten(tok);
        } catch (const MalformedToken& e) {
            throw MalformedSentence(e.what());
        }
        ++pos;
        std::vector<AstNode*> placeholders;
        collect_placeholders(node, placeholders);
        for (AstNode* block : placeholders) {
            if (done() || peek() != "{")
                throw MalformedSentence("missing brace group for _8 placeholder");
            ++pos;
            block->children = parse_group_body();
        }
        return node;
    }
};

}  // namespace

std::string flatten(const AstNode& node) {
    std::string out;
    flatten_into(node, out);
    return out;
}

AstNode unflatten(std::string_view token) {
    TokenParser parser{token};
    AstNode node = parser.parse_node();
    if (!parser.done()) throw MalformedToken("trailing characters in " + std::string(token));
    return node;
}

Sentence tokenize_method(const MethodAst& method, EmitMode mode) {
    Sentence out;
    std::string header;
    if (mode == EmitMode::paper_compat) {
        header = "(";
    } else {
        header = "_" + std::to_string(node_id::method_declaration) + "(";
    }
    flatten_into(method.return_type, header);
    flatten_into(method.name, header);
    for (const AstNode& param : method.parameters) flatten_into(param, header);
    if (mode == EmitMode::canonical) header += ')';
    out.push_back(std::move(header));

    out.emplace_back("{");
    for (const AstNode& stmt : method.body.children) {
        if (mode == EmitMode::paper_compat)
            emit_stmt_compat(stmt, out);
        else
            emit_stmt_canonical(stmt, out);
    }
    out.emplace_back("}");
    return out;
}

MethodAst sentence_to_method(const Sentence& sentence) {
    if (sentence.empty()) throw MalformedSentence("empty sentence");
    const std::string header_prefix = "_" + std::to_string(node_id::method_declaration) + "(";
    const Token& header = sentence.front();
    if (header.rfind(header_prefix, 0) != 0)
        throw MalformedSentence("missing method header token");
    AstNode signature;
    try {
        signature = unflatten(header);
    } catch (const MalformedToken& e) {
        throw MalformedSentence(e.what());
    }
    if (signature.children.size() < 2)
        throw MalformedSentence("header lacks return type and name");

    MethodAst method;
    method.return_type = std::move(signature.children[0]);
    method.name = std::move(signature.children[1]);
    for (std::size_t i = 2; i < signature.children.size(); ++i)
        method.parameters.push_back(std::move(signature.children[i]));

    SentenceParser parser{sentence, 1};
    if (parser.done() || parser.peek() != "{")
        throw MalformedSentence("missing method body braces");
    ++parser.pos;
    method.body = AstNode(node_id::block);
    method.body.children = parser.parse_group_body();
    if (!parser.done()) throw MalformedSentence("trailing tokens after method body");
    return method;
}

std::string join_sentence(const Sentence& sentence) {
    std::string out;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (i) out += ' ';
        out += sentence[i];
    }
    return out;
}

Sentence split_sentence(std::string_view line) {
    Sentence out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

}  // namespace astlm
