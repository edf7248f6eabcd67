#include "astlm/ast.hpp"

#include <array>
#include <unordered_map>

#include "astlm/errors.hpp"

namespace astlm {

namespace {

constexpr bool kStmt = true;
constexpr bool kExpr = false;

// Ids mirror org.eclipse.jdt.core.dom.ASTNode constants. Block carries
// is_statement so that bare nested blocks are legal direct children of a
// method body.
constexpr std::array<NodeKind, 53> kTable = {{
    {node_id::anonymous_class_declaration, "AnonymousClassDeclaration", kExpr, false},
    {node_id::array_access, "ArrayAccess", kExpr, false},
    {node_id::array_creation, "ArrayCreation", kExpr, false},
    {node_id::array_initializer, "ArrayInitializer", kExpr, false},
    {node_id::array_type, "ArrayType", kExpr, false},
    {node_id::assert_statement, "AssertStatement", kStmt, false},
    {node_id::assignment, "Assignment", kExpr, false},
    {node_id::block, "Block", kStmt, true},
    {node_id::boolean_literal, "BooleanLiteral", kExpr, false},
    {node_id::break_statement, "BreakStatement", kStmt, false},
    {node_id::cast_expression, "CastExpression", kExpr, false},
    {node_id::catch_clause, "CatchClause", kExpr, false},
    {node_id::character_literal, "CharacterLiteral", kExpr, false},
    {node_id::class_instance_creation, "ClassInstanceCreation", kExpr, false},
    {node_id::conditional_expression, "ConditionalExpression", kExpr, false},
    {node_id::continue_statement, "ContinueStatement", kStmt, false},
    {node_id::do_statement, "DoStatement", kStmt, false},
    {node_id::empty_statement, "EmptyStatement", kStmt, false},
    {node_id::expression_statement, "ExpressionStatement", kStmt, false},
    {node_id::field_access, "FieldAccess", kExpr, false},
    {node_id::for_statement, "ForStatement", kStmt, false},
    {node_id::if_statement, "IfStatement", kStmt, false},
    {node_id::infix_expression, "InfixExpression", kExpr, false},
    {node_id::labeled_statement, "LabeledStatement", kStmt, false},
    {node_id::method_declaration, "MethodDeclaration", kExpr, false},
    {node_id::method_invocation, "MethodInvocation", kExpr, false},
    {node_id::null_literal, "NullLiteral", kExpr, false},
    {node_id::number_literal, "NumberLiteral", kExpr, false},
    {node_id::parenthesized_expression, "ParenthesizedExpression", kExpr, false},
    {node_id::postfix_expression, "PostfixExpression", kExpr, false},
    {node_id::prefix_expression, "PrefixExpression", kExpr, false},
    {node_id::primitive_type, "PrimitiveType", kExpr, false},
    {node_id::qualified_name, "QualifiedName", kExpr, false},
    {node_id::return_statement, "ReturnStatement", kStmt, false},
    {node_id::simple_name, "SimpleName", kExpr, false},
    {node_id::simple_type, "SimpleType", kExpr, false},
    {node_id::single_variable_declaration, "SingleVariableDeclaration", kExpr, false},
    {node_id::string_literal, "StringLiteral", kExpr, false},
    {node_id::super_field_access, "SuperFieldAccess", kExpr, false},
    {node_id::super_method_invocation, "SuperMethodInvocation", kExpr, false},
    {node_id::switch_case, "SwitchCase", kExpr, false},
    {node_id::switch_statement, "SwitchStatement", kStmt, false},
    {node_id::synchronized_statement, "SynchronizedStatement", kStmt, false},
    {node_id::this_expression, "ThisExpression", kExpr, false},
    {node_id::throw_statement, "ThrowStatement", kStmt, false},
    {node_id::try_statement, "TryStatement", kStmt, false},
    {node_id::type_literal, "TypeLiteral", kExpr, false},
    {node_id::variable_declaration_expression, "VariableDeclarationExpression", kExpr, false},
    {node_id::variable_declaration_fragment, "VariableDeclarationFragment", kExpr, false},
    {node_id::variable_declaration_statement, "VariableDeclarationStatement", kStmt, false},
    {node_id::while_statement, "WhileStatement", kStmt, false},
    {node_id::instanceof_expression, "InstanceofExpression", kExpr, false},
    {node_id::enhanced_for_statement, "EnhancedForStatement", kStmt, false},
}};

const std::unordered_map<int, const NodeKind*>& id_index() {
    static const auto* index = [] {
        auto* m = new std::unordered_map<int, const NodeKind*>();
        for (const NodeKind& k : kTable) m->emplace(k.id, &k);
        return m;
    }();
    return *index;
}

const std::unordered_map<std::string, const NodeKind*>& name_index() {
    static const auto* index = [] {
        auto* m = new std::unordered_map<std::string, const NodeKind*>();
        for (const NodeKind& k : kTable) m->emplace(k.name, &k);
        return m;
    }();
    return *index;
}

}  // namespace

std::span<const NodeKind> node_kinds() { return {kTable.data(), kTable.size()}; }

const NodeKind& lookup_kind(int id) {
    const auto& index = id_index();
    auto it = index.find(id);
    if (it == index.end()) throw UnknownNodeId(id);
    return *it->second;
}

const NodeKind* find_kind_by_name(const std::string& name) {
    const auto& index = name_index();
    auto it = index.find(name);
    return it == index.end() ? nullptr : it->second;
}

bool contains_block(const AstNode& node) {
    if (node.kind->is_block) return true;
    for (const AstNode& child : node.children)
        if (contains_block(child)) return true;
    return false;
}

bool same_shape(const AstNode& a, const AstNode& b) {
    if (a.kind->id != b.kind->id || a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!same_shape(a.children[i], b.children[i])) return false;
    return true;
}

}  // namespace astlm
