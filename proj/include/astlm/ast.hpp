#ifndef ASTLM_AST_HPP
#define ASTLM_AST_HPP

#include <span>
#include <string>
#include <vector>

namespace astlm {

// One entry of the node-type table. The integer ids follow the Eclipse JDT
// ASTNode constants so that flattened tokens use the same encoding the
// corpora were defined with.
struct NodeKind {
    int id;
    const char* name;
    bool is_statement;
    bool is_block;
};

// Node-type ids for the supported Java subset.
namespace node_id {
inline constexpr int anonymous_class_declaration = 1;
inline constexpr int array_access = 2;
inline constexpr int array_creation = 3;
inline constexpr int array_initializer = 4;
inline constexpr int array_type = 5;
inline constexpr int assert_statement = 6;
inline constexpr int assignment = 7;
inline constexpr int block = 8;
inline constexpr int boolean_literal = 9;
inline constexpr int break_statement = 10;
inline constexpr int cast_expression = 11;
inline constexpr int catch_clause = 12;
inline constexpr int character_literal = 13;
inline constexpr int class_instance_creation = 14;
inline constexpr int conditional_expression = 16;
inline constexpr int continue_statement = 18;
inline constexpr int do_statement = 19;
inline constexpr int empty_statement = 20;
inline constexpr int expression_statement = 21;
inline constexpr int field_access = 22;
inline constexpr int for_statement = 24;
inline constexpr int if_statement = 25;
inline constexpr int infix_expression = 27;
inline constexpr int labeled_statement = 30;
inline constexpr int method_declaration = 31;
inline constexpr int method_invocation = 32;
inline constexpr int null_literal = 33;
inline constexpr int number_literal = 34;
inline constexpr int parenthesized_expression = 36;
inline constexpr int postfix_expression = 37;
inline constexpr int prefix_expression = 38;
inline constexpr int primitive_type = 39;
inline constexpr int qualified_name = 40;
inline constexpr int return_statement = 41;
inline constexpr int simple_name = 42;
inline constexpr int simple_type = 43;
inline constexpr int single_variable_declaration = 44;
inline constexpr int string_literal = 45;
inline constexpr int super_field_access = 47;
inline constexpr int super_method_invocation = 48;
inline constexpr int switch_case = 49;
inline constexpr int switch_statement = 50;
inline constexpr int synchronized_statement = 51;
inline constexpr int this_expression = 52;
inline constexpr int throw_statement = 53;
inline constexpr int try_statement = 54;
inline constexpr int type_literal = 57;
inline constexpr int variable_declaration_expression = 58;
inline constexpr int variable_declaration_fragment = 59;
inline constexpr int variable_declaration_statement = 60;
inline constexpr int while_statement = 61;
inline constexpr int instanceof_expression = 62;
inline constexpr int enhanced_for_statement = 70;
}  // namespace node_id

// The full table, ordered by ascending id.
std::span<const NodeKind> node_kinds();

// Returns the table entry for `id`; throws UnknownNodeId for ids outside the table.
const NodeKind& lookup_kind(int id);

// Returns the table entry for `name`, or nullptr when absent.
const NodeKind* find_kind_by_name(const std::string& name);

// A syntax tree node. `lexeme` keeps the identifier or literal text where one
// exists; the tokenizer never reads it.
struct AstNode {
    const NodeKind* kind = nullptr;
    std::vector<AstNode> children;
    std::string lexeme;

    AstNode() = default;
    explicit AstNode(int kind_id) : kind(&lookup_kind(kind_id)) {}
    AstNode(int kind_id, std::vector<AstNode> children_)
        : kind(&lookup_kind(kind_id)), children(std::move(children_)) {}
    AstNode(int kind_id, std::string lexeme_)
        : kind(&lookup_kind(kind_id)), lexeme(std::move(lexeme_)) {}

    int id() const { return kind->id; }
    bool is_leaf() const { return children.empty(); }

    bool operator==(const AstNode& other) const {
        return kind->id == other.kind->id && lexeme == other.lexeme &&
               children == other.children;
    }
};

// True when `node` or any descendant has a block kind.
bool contains_block(const AstNode& node);

// Structural equality ignoring lexemes (kind ids and shape only).
bool same_shape(const AstNode& a, const AstNode& b);

// A parsed method: signature plus body block. Every direct child of `body`
// has a statement kind.
struct MethodAst {
    AstNode return_type;
    AstNode name;
    std::vector<AstNode> parameters;
    AstNode body;
};

}  // namespace astlm

#endif  // ASTLM_AST_HPP
