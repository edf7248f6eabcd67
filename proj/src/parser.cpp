#include "astlm/parser.hpp"

#include <optional>
#include <utility>

#include "astlm/errors.hpp"
#include "lexer.hpp"

namespace astlm {

namespace {

using detail::Tok;
using detail::TokType;
using detail::is_modifier_keyword;
using detail::is_primitive_keyword;

namespace nid = node_id;

AstNode leaf(int kind_id, std::string_view lexeme = {}) {
    return AstNode(kind_id, std::string(lexeme));
}

// Recursive-descent parser over the lexed token stream. Statement and
// expression parsing is strict (throws SyntaxError); the file-level member
// walker is tolerant and records failures in the ParseOutcome.
class Parser {
  public:
    Parser(std::vector<Tok> toks, ParseOutcome* outcome)
        : toks_(std::move(toks)), outcome_(outcome) {}

    void parse_compilation_unit() {
        int stray = 0;
        while (!at_end()) {
            if (cur().is("package") || cur().is("import")) {
                skip_until_semicolon();
            } else if (cur().is("@") && next().is("interface")) {
                advance();
                advance();
                skip_to_open_brace_and_balance();
            } else if (cur().is("@")) {
                skip_annotation();
            } else if (is_modifier(cur())) {
                advance();
            } else if (at_type_keyword()) {
                parse_type_declaration();
            } else {
                ++stray;
                advance();
            }
        }
        if (outcome_ && outcome_->methods.empty() && outcome_->skipped == 0 && stray > 0)
            outcome_->diagnostics.push_back({0, "no parseable type declarations"});
    }

    AstNode parse_single_statement() {
        AstNode stmt = parse_statement();
        if (!at_end()) throw SyntaxError(cur().offset, "end of input");
        return stmt;
    }

  private:
    std::vector<Tok> toks_;
    ParseOutcome* outcome_;
    std::size_t pos_ = 0;

    const Tok& cur() const { return toks_[pos_]; }
    const Tok& next() const { return toks_[pos_ + 1 < toks_.size() ? pos_ + 1 : toks_.size() - 1]; }
    bool at_end() const { return cur().type == TokType::end_of_input; }
    void advance() {
        if (!at_end()) ++pos_;
    }
    bool accept(std::string_view text) {
        if (cur().is(text)) {
            advance();
            return true;
        }
        return false;
    }
    void expect(std::string_view text) {
        if (!accept(text)) throw SyntaxError(cur().offset, "'" + std::string(text) + "'");
    }
    bool at_identifier() const { return cur().type == TokType::identifier; }
    static bool is_modifier(const Tok& t) {
        return t.type == TokType::keyword && is_modifier_keyword(t.text);
    }
    bool at_type_keyword() const {
        return cur().is("class") || cur().is("interface") || cur().is("enum");
    }

    void diagnose(std::size_t offset, std::string message) {
        if (outcome_) outcome_->diagnostics.push_back({offset, std::move(message)});
    }

    // ---- tolerant skipping ------------------------------------------------

    void skip_until_semicolon() {
        while (!at_end() && !cur().is(";")) {
            if (cur().is("{")) {
                skip_balanced_braces();
                return;
            }
            advance();
        }
        accept(";");
    }

    void skip_balanced_braces() {
        // cur() is '{'
        int depth = 0;
        while (!at_end()) {
            if (cur().is("{")) ++depth;
            if (cur().is("}")) {
                --depth;
                advance();
                if (depth == 0) return;
                continue;
            }
            advance();
        }
    }

    void skip_balanced_parens() {
        int depth = 0;
        while (!at_end()) {
            if (cur().is("(")) ++depth;
            if (cur().is(")")) {
                --depth;
                advance();
                if (depth == 0) return;
                continue;
            }
            advance();
        }
    }

    void skip_to_open_brace_and_balance() {
        while (!at_end() && !cur().is("{") && !cur().is(";")) advance();
        if (cur().is("{"))
            skip_balanced_braces();
        else
            accept(";");
    }

    void skip_annotation() {
        expect("@");
        if (at_identifier()) advance();
        while (accept(".")) {
            if (at_identifier()) advance();
        }
        if (cur().is("(")) skip_balanced_parens();
    }

    void skip_annotations_and_modifiers() {
        while (true) {
            if (cur().is("@") && !next().is("interface")) {
                skip_annotation();
            } else if (is_modifier(cur())) {
                advance();
            } else {
                return;
            }
        }
    }

    // Skips `<...>` type arguments / type parameters if the bracketed run
    // looks like one; returns false (position unchanged) otherwise.
    bool try_skip_type_args() {
        if (!cur().is("<")) return false;
        std::size_t save = pos_;
        int depth = 0;
        while (!at_end()) {
            const Tok& t = cur();
            if (t.is("<")) {
                ++depth;
                advance();
                continue;
            }
            if (t.is(">") || t.is(">>") || t.is(">>>")) {
                int closes = t.is(">") ? 1 : t.is(">>") ? 2 : 3;
                depth -= closes;
                advance();
                if (depth == 0) return true;
                if (depth < 0) break;
                continue;
            }
            if (t.type == TokType::identifier || t.is(",") || t.is("?") || t.is(".") ||
                t.is("[") || t.is("]") || t.is("&") || t.is("@") || t.is("extends") ||
                t.is("super") ||
                (t.type == TokType::keyword && is_primitive_keyword(t.text))) {
                advance();
                continue;
            }
            break;
        }
        pos_ = save;
        return false;
    }

    // ---- types -------------------------------------------------------------

    // Dotted name; single segment -> SimpleName, otherwise nested
    // QualifiedName. Generic arguments after any segment are dropped.
    std::optional<AstNode> parse_name_opt(bool drop_type_args) {
        if (!at_identifier()) return std::nullopt;
        AstNode name = leaf(nid::simple_name, cur().text);
        advance();
        if (drop_type_args) try_skip_type_args();
        while (cur().is(".") && next().type == TokType::identifier) {
            advance();
            AstNode segment = leaf(nid::simple_name, cur().text);
            advance();
            if (drop_type_args) try_skip_type_args();
            name = AstNode(nid::qualified_name, {std::move(name), std::move(segment)});
        }
        return name;
    }

    // PrimitiveType | SimpleType(name) with optional `[]` dimensions folded
    // into nested ArrayType nodes. Restores the position on failure.
    std::optional<AstNode> parse_type_opt() {
        std::size_t save = pos_;
        AstNode base;
        if (cur().type == TokType::keyword && is_primitive_keyword(cur().text)) {
            base = leaf(nid::primitive_type, cur().text);
            advance();
        } else {
            auto name = parse_name_opt(/*drop_type_args=*/true);
            if (!name) {
                pos_ = save;
                return std::nullopt;
            }
            base = AstNode(nid::simple_type, {std::move(*name)});
        }
        while (cur().is("[") && next().is("]")) {
            advance();
            advance();
            base = AstNode(nid::array_type, {std::move(base)});
        }
        return base;
    }

    AstNode parse_type() {
        auto type = parse_type_opt();
        if (!type) throw SyntaxError(cur().offset, "a type");
        return *type;
    }

    // ---- expressions -------------------------------------------------------

    std::vector<AstNode> parse_arguments() {
        expect("(");
        std::vector<AstNode> args;
        if (!cur().is(")")) {
            do {
                args.push_back(parse_expression());
            } while (accept(","));
        }
        expect(")");
        return args;
    }

    AstNode parse_expression() { return parse_assignment(); }

    AstNode parse_assignment() {
        AstNode lhs = parse_conditional();
        static constexpr std::string_view kAssignOps[] = {
            "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="};
        for (std::string_view op : kAssignOps) {
            if (cur().is(op)) {
                advance();
                AstNode rhs = parse_assignment();
                AstNode node(nid::assignment, {std::move(lhs), std::move(rhs)});
                node.lexeme = op;
                return node;
            }
        }
        return lhs;
    }

    AstNode parse_conditional() {
        AstNode cond = parse_binary(0);
        if (accept("?")) {
            AstNode then_expr = parse_expression();
            expect(":");
            AstNode else_expr = parse_conditional();
            return AstNode(nid::conditional_expression,
                           {std::move(cond), std::move(then_expr), std::move(else_expr)});
        }
        return cond;
    }

    static const std::vector<std::vector<std::string_view>>& binary_levels() {
        static const std::vector<std::vector<std::string_view>> levels = {
            {"||"},
            {"&&"},
            {"|"},
            {"^"},
            {"&"},
            {"==", "!="},
            {"<", ">", "<=", ">=", "instanceof"},
            {"<<", ">>", ">>>"},
            {"+", "-"},
            {"*", "/", "%"},
        };
        return levels;
    }

    AstNode parse_binary(std::size_t level) {
        const auto& levels = binary_levels();
        if (level >= levels.size()) return parse_unary();
        AstNode lhs = parse_binary(level + 1);
        while (true) {
            std::string_view op;
            for (std::string_view candidate : levels[level]) {
                if (cur().is(candidate)) {
                    op = candidate;
                    break;
                }
            }
            if (op.empty()) return lhs;
            advance();
            if (op == "instanceof") {
                AstNode type = parse_type();
                lhs = AstNode(nid::instanceof_expression, {std::move(lhs), std::move(type)});
                continue;
            }
            AstNode rhs = parse_binary(level + 1);
            if (lhs.kind->id == nid::infix_expression && lhs.lexeme == op) {
                // same-operator chains extend one node, mirroring Eclipse's
                // extended operands
                lhs.children.push_back(std::move(rhs));
            } else {
                AstNode node(nid::infix_expression, {std::move(lhs), std::move(rhs)});
                node.lexeme = op;
                lhs = std::move(node);
            }
        }
    }

    AstNode parse_unary() {
        for (std::string_view op : {"+", "-", "!", "~", "++", "--"}) {
            if (cur().is(op)) {
                advance();
                AstNode operand = parse_unary();
                AstNode node(nid::prefix_expression, {std::move(operand)});
                node.lexeme = op;
                return node;
            }
        }
        if (cur().is("(")) {
            if (auto cast = try_parse_cast()) return std::move(*cast);
        }
        return parse_postfix();
    }

    // Distinguishes `(Type) operand` from a parenthesized expression.
    std::optional<AstNode> try_parse_cast() {
        std::size_t save = pos_;
        expect("(");
        auto type = parse_type_opt();
        if (!type || !cur().is(")")) {
            pos_ = save;
            return std::nullopt;
        }
        bool primitive_or_array = type->kind->id == nid::primitive_type ||
                                  type->kind->id == nid::array_type;
        advance();  // ')'
        bool operand_follows =
            at_identifier() || cur().type == TokType::number ||
            cur().type == TokType::string_literal || cur().type == TokType::char_literal ||
            cur().is("(") || cur().is("!") || cur().is("~") || cur().is("this") ||
            cur().is("super") || cur().is("new") || cur().is("true") || cur().is("false") ||
            cur().is("null");
        if (!primitive_or_array && !operand_follows) {
            pos_ = save;
            return std::nullopt;
        }
        AstNode operand = parse_unary();
        return AstNode(nid::cast_expression, {std::move(*type), std::move(operand)});
    }

    AstNode parse_postfix() {
        AstNode expr = parse_primary();
        // whether `expr` is still a plain (possibly qualified) name
        bool is_name = expr.kind->id == nid::simple_name || expr.kind->id == nid::qualified_name;
        while (true) {
            if (cur().is(".")) {
                if (next().is("class") && is_name) {
                    advance();
                    advance();
                    AstNode type(nid::simple_type, {std::move(expr)});
                    return finish_postfix(AstNode(nid::type_literal, {std::move(type)}));
                }
                if (next().is("this") || next().is("new") || next().is("super"))
                    throw SyntaxError(next().offset, "an unqualified member access");
                advance();
                try_skip_type_args();
                if (!at_identifier()) throw SyntaxError(cur().offset, "a member name");
                AstNode member = leaf(nid::simple_name, cur().text);
                advance();
                if (cur().is("(")) {
                    std::vector<AstNode> children;
                    children.push_back(std::move(expr));
                    children.push_back(std::move(member));
                    for (AstNode& arg : parse_arguments_vec()) children.push_back(std::move(arg));
                    expr = AstNode(nid::method_invocation, std::move(children));
                    is_name = false;
                } else if (is_name) {
                    expr = AstNode(nid::qualified_name, {std::move(expr), std::move(member)});
                } else {
                    expr = AstNode(nid::field_access, {std::move(expr), std::move(member)});
                }
                continue;
            }
            if (cur().is("[") && !next().is("]")) {
                advance();
                AstNode index = parse_expression();
                expect("]");
                expr = AstNode(nid::array_access, {std::move(expr), std::move(index)});
                is_name = false;
                continue;
            }
            if (cur().is("++") || cur().is("--")) {
                AstNode node(nid::postfix_expression, {std::move(expr)});
                node.lexeme = cur().text;
                advance();
                expr = std::move(node);
                is_name = false;
                continue;
            }
            return expr;
        }
    }

    AstNode finish_postfix(AstNode expr) {
        // allow trailing postfix pieces after a type literal (e.g. `.getName()`)
        while (cur().is(".")) {
            advance();
            if (!at_identifier()) throw SyntaxError(cur().offset, "a member name");
            AstNode member = leaf(nid::simple_name, cur().text);
            advance();
            if (cur().is("(")) {
                std::vector<AstNode> children;
                children.push_back(std::move(expr));
                children.push_back(std::move(member));
                for (AstNode& arg : parse_arguments_vec()) children.push_back(std::move(arg));
                expr = AstNode(nid::method_invocation, std::move(children));
            } else {
                expr = AstNode(nid::field_access, {std::move(expr), std::move(member)});
            }
        }
        return expr;
    }

    std::vector<AstNode> parse_arguments_vec() { return parse_arguments(); }

    AstNode parse_primary() {
        const Tok& t = cur();
        switch (t.type) {
            case TokType::number: {
                AstNode node = leaf(nid::number_literal, t.text);
                advance();
                return node;
            }
            case TokType::string_literal:
                advance();
                return leaf(nid::string_literal);
            case TokType::char_literal:
                advance();
                return leaf(nid::character_literal);
            case TokType::identifier: {
                if (next().is("->")) throw SyntaxError(next().offset, "no lambda expression");
                AstNode name = leaf(nid::simple_name, t.text);
                advance();
                if (cur().is("(")) {
                    std::vector<AstNode> children;
                    children.push_back(std::move(name));
                    for (AstNode& arg : parse_arguments_vec()) children.push_back(std::move(arg));
                    return AstNode(nid::method_invocation, std::move(children));
                }
                return name;
            }
            default:
                break;
        }
        if (t.is("(")) {
            advance();
            AstNode inner = parse_expression();
            expect(")");
            if (cur().is("->")) throw SyntaxError(cur().offset, "no lambda expression");
            return AstNode(nid::parenthesized_expression, {std::move(inner)});
        }
        if (t.is("true") || t.is("false")) {
            AstNode node = leaf(nid::boolean_literal, t.text);
            advance();
            return node;
        }
        if (t.is("null")) {
            advance();
            return leaf(nid::null_literal, "null");
        }
        if (t.is("this")) {
            advance();
            return leaf(nid::this_expression);
        }
        if (t.is("super")) {
            advance();
            expect(".");
            if (!at_identifier()) throw SyntaxError(cur().offset, "a member name");
            AstNode member = leaf(nid::simple_name, cur().text);
            advance();
            if (cur().is("(")) {
                std::vector<AstNode> children;
                children.push_back(std::move(member));
                for (AstNode& arg : parse_arguments_vec()) children.push_back(std::move(arg));
                return AstNode(nid::super_method_invocation, std::move(children));
            }
            return AstNode(nid::super_field_access, {std::move(member)});
        }
        if (t.is("new")) return parse_creation();
        if (t.type == TokType::keyword && is_primitive_keyword(t.text)) {
            // `int.class`
            AstNode prim = leaf(nid::primitive_type, t.text);
            advance();
            expect(".");
            expect("class");
            return AstNode(nid::type_literal, {std::move(prim)});
        }
        throw SyntaxError(t.offset, "an expression");
    }

    AstNode parse_creation() {
        expect("new");
        AstNode type = parse_type();
        if (type.kind->id == nid::array_type || cur().is("[")) {
            // `new T[dims]` or `new T[] {...}`; a pre-parsed array type means
            // the `new T[]{...}` form
            int dims = 0;
            AstNode element = std::move(type);
            while (element.kind->id == nid::array_type) {
                ++dims;
                AstNode child = std::move(element.children[0]);
                element = std::move(child);
            }
            std::vector<AstNode> dim_exprs;
            while (cur().is("[")) {
                advance();
                if (!cur().is("]")) dim_exprs.push_back(parse_expression());
                expect("]");
                ++dims;
            }
            AstNode array_type = std::move(element);
            for (int i = 0; i < dims; ++i)
                array_type = AstNode(nid::array_type, {std::move(array_type)});
            std::vector<AstNode> children;
            children.push_back(std::move(array_type));
            for (AstNode& d : dim_exprs) children.push_back(std::move(d));
            if (cur().is("{")) children.push_back(parse_array_initializer());
            return AstNode(nid::array_creation, std::move(children));
        }
        std::vector<AstNode> children;
        children.push_back(std::move(type));
        for (AstNode& arg : parse_arguments_vec()) children.push_back(std::move(arg));
        if (cur().is("{")) {
            // anonymous class body: inner methods are extracted, the
            // declaration itself stays a childless marker
            advance();
            parse_members(/*is_enum=*/false);
            children.push_back(leaf(nid::anonymous_class_declaration));
        }
        return AstNode(nid::class_instance_creation, std::move(children));
    }

    AstNode parse_array_initializer() {
        expect("{");
        std::vector<AstNode> elements;
        if (!cur().is("}")) {
            do {
                if (cur().is("}")) break;  // trailing comma
                if (cur().is("{"))
                    elements.push_back(parse_array_initializer());
                else
                    elements.push_back(parse_expression());
            } while (accept(","));
        }
        expect("}");
        return AstNode(nid::array_initializer, std::move(elements));
    }

    AstNode parse_variable_initializer() {
        if (cur().is("{")) return parse_array_initializer();
        return parse_assignment();
    }

    // ---- statements ----------------------------------------------------------

    AstNode parse_block() {
        expect("{");
        AstNode block(nid::block);
        while (!cur().is("}")) {
            if (at_end()) throw SyntaxError(cur().offset, "'}'");
            block.children.push_back(parse_statement());
        }
        expect("}");
        return block;
    }

    // Fragments of a local declaration: `name [dims] [= initializer]`.
    AstNode parse_fragment() {
        if (!at_identifier()) throw SyntaxError(cur().offset, "a variable name");
        AstNode name = leaf(nid::simple_name, cur().text);
        advance();
        while (cur().is("[") && next().is("]")) {
            advance();
            advance();
        }
        AstNode fragment(nid::variable_declaration_fragment, {std::move(name)});
        if (accept("=")) fragment.children.push_back(parse_variable_initializer());
        return fragment;
    }

    // Tries `[final] Type name ...`; restores the position when the lookahead
    // does not shape like a declaration.
    std::optional<AstNode> try_parse_local_declaration() {
        std::size_t save = pos_;
        bool has_final = false;
        while (cur().is("final") || (cur().is("@") && !next().is("interface"))) {
            if (cur().is("final")) {
                advance();
                has_final = true;
            } else {
                skip_annotation();
            }
        }
        auto type = parse_type_opt();
        if (!type || !at_identifier()) {
            if (has_final && type) throw SyntaxError(cur().offset, "a variable name");
            pos_ = save;
            return std::nullopt;
        }
        const Tok& after = next();
        if (!(after.is("=") || after.is(";") || after.is(",") ||
              (after.is("[") && toks_[pos_ + 2 < toks_.size() ? pos_ + 2 : pos_].is("]")))) {
            pos_ = save;
            return std::nullopt;
        }
        std::vector<AstNode> children;
        children.push_back(std::move(*type));
        do {
            children.push_back(parse_fragment());
        } while (accept(","));
        expect(";");
        return AstNode(nid::variable_declaration_statement, std::move(children));
    }

    AstNode parse_statement() {
        const Tok& t = cur();
        if (t.type == TokType::end_of_input) throw SyntaxError(t.offset, "a statement");
        if (t.is("{")) return parse_block();
        if (t.is(";")) {
            advance();
            return leaf(nid::empty_statement);
        }
        if (t.is("if")) return parse_if();
        if (t.is("while")) {
            advance();
            expect("(");
            AstNode cond = parse_expression();
            expect(")");
            AstNode body = parse_statement();
            return AstNode(nid::while_statement, {std::move(cond), std::move(body)});
        }
        if (t.is("do")) {
            advance();
            AstNode body = parse_statement();
            expect("while");
            expect("(");
            AstNode cond = parse_expression();
            expect(")");
            expect(";");
            return AstNode(nid::do_statement, {std::move(body), std::move(cond)});
        }
        if (t.is("for")) return parse_for();
        if (t.is("return")) {
            advance();
            AstNode node(nid::return_statement);
            if (!cur().is(";")) node.children.push_back(parse_expression());
            expect(";");
            return node;
        }
        if (t.is("throw")) {
            advance();
            AstNode expr = parse_expression();
            expect(";");
            return AstNode(nid::throw_statement, {std::move(expr)});
        }
        if (t.is("break") || t.is("continue")) {
            bool is_break = t.is("break");
            advance();
            AstNode node(is_break ? nid::break_statement : nid::continue_statement);
            if (at_identifier()) {
                node.children.push_back(leaf(nid::simple_name, cur().text));
                advance();
            }
            expect(";");
            return node;
        }
        if (t.is("try")) return parse_try();
        if (t.is("switch")) return parse_switch();
        if (t.is("synchronized")) {
            advance();
            expect("(");
            AstNode monitor = parse_expression();
            expect(")");
            AstNode body = parse_block();
            return AstNode(nid::synchronized_statement, {std::move(monitor), std::move(body)});
        }
        if (t.is("assert")) {
            advance();
            AstNode node(nid::assert_statement);
            node.children.push_back(parse_expression());
            if (accept(":")) node.children.push_back(parse_expression());
            expect(";");
            return node;
        }
        if (t.type == TokType::identifier && next().is(":")) {
            AstNode label = leaf(nid::simple_name, t.text);
            advance();
            advance();
            AstNode body = parse_statement();
            return AstNode(nid::labeled_statement, {std::move(label), std::move(body)});
        }
        if (auto decl = try_parse_local_declaration()) return std::move(*decl);
        AstNode expr = parse_expression();
        if (cur().is("->")) throw SyntaxError(cur().offset, "no lambda expression");
        expect(";");
        return AstNode(nid::expression_statement, {std::move(expr)});
    }

    AstNode parse_if() {
        expect("if");
        expect("(");
        AstNode cond = parse_expression();
        expect(")");
        AstNode then_branch = parse_statement();
        AstNode node(nid::if_statement, {std::move(cond), std::move(then_branch)});
        if (accept("else")) node.children.push_back(parse_statement());
        return node;
    }

    AstNode parse_for() {
        expect("for");
        expect("(");
        // enhanced for: `[final] Type name : expr`
        {
            std::size_t save = pos_;
            while (cur().is("final") || (cur().is("@") && !next().is("interface"))) {
                if (cur().is("final"))
                    advance();
                else
                    skip_annotation();
            }
            auto type = parse_type_opt();
            if (type && at_identifier() && next().is(":")) {
                AstNode name = leaf(nid::simple_name, cur().text);
                advance();
                advance();  // ':'
                AstNode param(nid::single_variable_declaration,
                              {std::move(*type), std::move(name)});
                AstNode iterable = parse_expression();
                expect(")");
                AstNode body = parse_statement();
                return AstNode(nid::enhanced_for_statement,
                               {std::move(param), std::move(iterable), std::move(body)});
            }
            pos_ = save;
        }
        std::vector<AstNode> children;
        if (!cur().is(";")) {
            if (auto decl = try_parse_for_init_declaration()) {
                children.push_back(std::move(*decl));
            } else {
                do {
                    children.push_back(parse_expression());
                } while (accept(","));
                expect(";");
            }
        } else {
            advance();
        }
        if (!cur().is(";")) children.push_back(parse_expression());
        expect(";");
        if (!cur().is(")")) {
            do {
                children.push_back(parse_expression());
            } while (accept(","));
        }
        expect(")");
        children.push_back(parse_statement());
        return AstNode(nid::for_statement, std::move(children));
    }

    std::optional<AstNode> try_parse_for_init_declaration() {
        std::size_t save = pos_;
        if (cur().is("final")) advance();
        auto type = parse_type_opt();
        if (!type || !at_identifier()) {
            pos_ = save;
            return std::nullopt;
        }
        const Tok& after = next();
        if (!(after.is("=") || after.is(",") || after.is(";"))) {
            pos_ = save;
            return std::nullopt;
        }
        std::vector<AstNode> children;
        children.push_back(std::move(*type));
        do {
            children.push_back(parse_fragment());
        } while (accept(","));
        expect(";");
        return AstNode(nid::variable_declaration_expression, std::move(children));
    }

    AstNode parse_try() {
        expect("try");
        if (cur().is("(")) throw SyntaxError(cur().offset, "a plain try block");
        std::vector<AstNode> children;
        children.push_back(parse_block());
        bool has_handler = false;
        while (cur().is("catch")) {
            advance();
            expect("(");
            while (cur().is("final") || (cur().is("@") && !next().is("interface"))) {
                if (cur().is("final"))
                    advance();
                else
                    skip_annotation();
            }
            AstNode type = parse_type();
            if (cur().is("|")) throw SyntaxError(cur().offset, "a single catch type");
            if (!at_identifier()) throw SyntaxError(cur().offset, "an exception name");
            AstNode name = leaf(nid::simple_name, cur().text);
            advance();
            expect(")");
            AstNode body = parse_block();
            AstNode param(nid::single_variable_declaration, {std::move(type), std::move(name)});
            children.push_back(
                AstNode(nid::catch_clause, {std::move(param), std::move(body)}));
            has_handler = true;
        }
        if (accept("finally")) {
            children.push_back(parse_block());
            has_handler = true;
        }
        if (!has_handler) throw SyntaxError(cur().offset, "'catch' or 'finally'");
        return AstNode(nid::try_statement, std::move(children));
    }

    AstNode parse_switch() {
        expect("switch");
        expect("(");
        std::vector<AstNode> children;
        children.push_back(parse_expression());
        expect(")");
        expect("{");
        while (!cur().is("}")) {
            if (at_end()) throw SyntaxError(cur().offset, "'}'");
            if (accept("case")) {
                AstNode expr = parse_expression();
                if (cur().is("->")) throw SyntaxError(cur().offset, "':' switch labels");
                expect(":");
                children.push_back(AstNode(nid::switch_case, {std::move(expr)}));
                continue;
            }
            if (accept("default")) {
                if (cur().is("->")) throw SyntaxError(cur().offset, "':' switch labels");
                expect(":");
                children.push_back(leaf(nid::switch_case));
                continue;
            }
            children.push_back(parse_statement());
        }
        expect("}");
        return AstNode(nid::switch_statement, std::move(children));
    }

    // ---- declarations ----------------------------------------------------------

    void parse_type_declaration() {
        bool is_enum = cur().is("enum");
        advance();  // class/interface/enum
        if (at_identifier()) advance();
        try_skip_type_args();
        while (!at_end() && !cur().is("{") && !cur().is(";")) advance();
        if (!accept("{")) {
            accept(";");
            return;
        }
        parse_members(is_enum);
    }

    // Tolerant member walk; consumes through the matching '}'.
    void parse_members(bool is_enum) {
        if (is_enum) parse_enum_constants();
        while (true) {
            if (at_end()) return;
            if (accept("}")) return;
            if (cur().is("@") && next().is("interface")) {
                advance();
                advance();
                skip_to_open_brace_and_balance();
                continue;
            }
            skip_annotations_and_modifiers();
            if (accept(";")) continue;
            if (cur().is("{")) {  // instance or static initializer
                skip_balanced_braces();
                continue;
            }
            if (at_type_keyword()) {
                parse_type_declaration();
                continue;
            }
            try_skip_type_args();  // generic method type parameters
            parse_member_declaration();
        }
    }

    void parse_enum_constants() {
        while (true) {
            if (at_end() || cur().is("}")) return;
            if (accept(";")) return;  // member section follows
            if (cur().is("@")) {
                skip_annotation();
                continue;
            }
            if (at_identifier()) {
                advance();
                if (cur().is("(")) skip_balanced_parens();
                if (cur().is("{")) {
                    advance();
                    parse_members(/*is_enum=*/false);  // constant class body
                }
                continue;
            }
            if (accept(",")) continue;
            return;  // unexpected; let the member walk cope
        }
    }

    void parse_member_declaration() {
        std::size_t member_offset = cur().offset;
        auto type = parse_type_opt();
        if (type && cur().is("(")) {
            // constructor: its body is not a method body for the corpus
            skip_balanced_parens();
            skip_to_open_brace_and_balance();
            return;
        }
        if (type && at_identifier()) {
            std::string_view name = cur().text;
            advance();
            if (cur().is("(")) {
                parse_method_rest(std::move(*type), name);
                return;
            }
            // field declaration; parse initializers so anonymous-class
            // methods inside them are still extracted
            try {
                while (cur().is("[") && next().is("]")) {
                    advance();
                    advance();
                }
                if (accept("=")) parse_variable_initializer();
                while (accept(",")) parse_fragment();
                expect(";");
            } catch (const SyntaxError&) {
                recover_member();
            }
            return;
        }
        diagnose(member_offset, "unrecognized member");
        recover_member();
    }

    void recover_member() {
        while (!at_end()) {
            if (cur().is(";")) {
                advance();
                return;
            }
            if (cur().is("{")) {
                skip_balanced_braces();
                return;
            }
            if (cur().is("}")) return;  // let parse_members consume it
            advance();
        }
    }

    void parse_method_rest(AstNode return_type, std::string_view name) {
        std::vector<AstNode> params;
        try {
            params = parse_parameter_list();
        } catch (const SyntaxError&) {
            recover_member();
            return;
        }
        if (accept("throws")) {
            while (!at_end() && !cur().is("{") && !cur().is(";")) advance();
        }
        if (accept(";")) return;  // abstract or native: no body
        if (!cur().is("{")) {
            recover_member();
            return;
        }
        std::size_t body_start = pos_;
        std::size_t body_offset = cur().offset;
        try {
            AstNode body = parse_block();
            MethodAst method;
            method.return_type = std::move(return_type);
            method.name = leaf(nid::simple_name, name);
            method.parameters = std::move(params);
            method.body = std::move(body);
            if (outcome_) outcome_->methods.push_back(std::move(method));
        } catch (const SyntaxError& e) {
            if (outcome_) {
                ++outcome_->skipped;
                outcome_->diagnostics.push_back(
                    {e.offset, std::string(name) + ": " + e.what()});
            }
            pos_ = body_start;
            skip_balanced_braces();
            (void)body_offset;
        }
    }

    std::vector<AstNode> parse_parameter_list() {
        expect("(");
        std::vector<AstNode> params;
        if (!cur().is(")")) {
            do {
                while (cur().is("final") || cur().is("@")) {
                    if (cur().is("final"))
                        advance();
                    else
                        skip_annotation();
                }
                AstNode type = parse_type();
                if (accept("...")) type = AstNode(nid::array_type, {std::move(type)});
                if (!at_identifier()) throw SyntaxError(cur().offset, "a parameter name");
                AstNode name = leaf(nid::simple_name, cur().text);
                advance();
                while (cur().is("[") && next().is("]")) {
                    advance();
                    advance();
                }
                params.push_back(AstNode(nid::single_variable_declaration,
                                         {std::move(type), std::move(name)}));
            } while (accept(","));
        }
        expect(")");
        return params;
    }
};

}  // namespace

ParseOutcome extract_methods(std::string_view source) {
    ParseOutcome outcome;
    std::vector<Tok> toks;
    try {
        toks = detail::lex_java(source);
    } catch (const SyntaxError& e) {
        outcome.diagnostics.push_back({e.offset, e.what()});
        return outcome;
    }
    Parser parser(std::move(toks), &outcome);
    parser.parse_compilation_unit();
    return outcome;
}

AstNode parse_statement(std::string_view source) {
    Parser parser(detail::lex_java(source), nullptr);
    return parser.parse_single_statement();
}

}  // namespace astlm
