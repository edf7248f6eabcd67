#include <doctest.h>

#include <random>

#include "astlm/errors.hpp"
#include "astlm/tokenizer.hpp"
#include "test_util.hpp"

using namespace astlm;
namespace tu = astlm::testutil;

TEST_CASE("flatten reproduces the worked statement token") {
    CHECK(flatten(tu::int_x_gets_obj_getint()) == tu::kFigureOneToken);
}

TEST_CASE("flatten of return statement") {
    AstNode ret(node_id::return_statement, {AstNode(node_id::simple_name, "x")});
    CHECK(flatten(ret) == "_41(_42)");
}

TEST_CASE("flatten of a single-node statement") {
    AstNode empty(node_id::empty_statement);
    std::string token = flatten(empty);
    CHECK(token == "_20");
    CHECK(unflatten(token) == empty);
}

TEST_CASE("flatten rejects block descendants") {
    AstNode stmt(node_id::if_statement,
                 {AstNode(node_id::simple_name), AstNode(node_id::block)});
    CHECK_THROWS_AS(flatten(stmt), BlockInsideStatement);
    CHECK_THROWS_AS(flatten(AstNode(node_id::block)), BlockInsideStatement);
}

TEST_CASE("unflatten recovers the worked example shape") {
    AstNode tree = unflatten(tu::kFigureOneToken);
    REQUIRE(tree.id() == node_id::variable_declaration_statement);
    REQUIRE(tree.children.size() == 2);
    CHECK(tree.children[0].id() == node_id::primitive_type);
    CHECK(tree.children[0].is_leaf());
    const AstNode& frag = tree.children[1];
    REQUIRE(frag.id() == node_id::variable_declaration_fragment);
    REQUIRE(frag.children.size() == 2);
    CHECK(frag.children[0].id() == node_id::simple_name);
    const AstNode& call = frag.children[1];
    REQUIRE(call.id() == node_id::method_invocation);
    REQUIRE(call.children.size() == 2);
    CHECK(call.children[0].id() == node_id::simple_name);
    CHECK(call.children[1].id() == node_id::simple_name);
    CHECK(same_shape(tree, tu::int_x_gets_obj_getint()));
}

TEST_CASE("unflatten of a leaf") {
    AstNode leaf = unflatten("_42");
    CHECK(leaf.id() == node_id::simple_name);
    CHECK(leaf.is_leaf());
}

TEST_CASE("unflatten error cases") {
    CHECK_THROWS_AS(unflatten("_60("), MalformedToken);
    CHECK_THROWS_AS(unflatten("_60()"), MalformedToken);
    CHECK_THROWS_AS(unflatten("_60(_39))"), MalformedToken);
    CHECK_THROWS_AS(unflatten("_"), MalformedToken);
    CHECK_THROWS_AS(unflatten("60"), MalformedToken);
    CHECK_THROWS_AS(unflatten("_60x"), MalformedToken);
    CHECK_THROWS_AS(unflatten(""), MalformedToken);
    CHECK_THROWS_AS(unflatten("_9999"), UnknownNodeId);
}

TEST_CASE("paper-compat sentence matches the printed listing byte for byte") {
    Sentence s = tokenize_method(tu::foo_method(), EmitMode::paper_compat);
    CHECK(join_sentence(s) == tu::kFooCompatSentence);
}

TEST_CASE("canonical sentence of the example method") {
    Sentence s = tokenize_method(tu::foo_method(), EmitMode::canonical);
    CHECK(join_sentence(s) == tu::kFooCanonicalSentence);
}

TEST_CASE("empty body emits header and bare braces") {
    MethodAst m;
    m.return_type = AstNode(node_id::primitive_type, "void");
    m.name = AstNode(node_id::simple_name, "f");
    m.body = AstNode(node_id::block);
    CHECK(join_sentence(tokenize_method(m, EmitMode::paper_compat)) == "(_39_42 { }");
    CHECK(join_sentence(tokenize_method(m, EmitMode::canonical)) == "_31(_39_42) { }");
}

TEST_CASE("sentence_to_method round-trips the example") {
    Sentence s = tokenize_method(tu::foo_method(), EmitMode::canonical);
    MethodAst skeleton = sentence_to_method(s);
    CHECK(tokenize_method(skeleton, EmitMode::canonical) == s);
    CHECK(skeleton.return_type.id() == node_id::primitive_type);
    CHECK(skeleton.name.id() == node_id::simple_name);
    CHECK(skeleton.parameters.empty());
    REQUIRE(skeleton.body.children.size() == 3);
}

TEST_CASE("sentence_to_method on an empty body") {
    MethodAst skeleton = sentence_to_method(split_sentence("_31(_39_42) { }"));
    CHECK(skeleton.body.children.empty());
    CHECK(join_sentence(tokenize_method(skeleton, EmitMode::canonical)) ==
          "_31(_39_42) { }");
}

TEST_CASE("sentence_to_method error cases") {
    CHECK_THROWS_AS(sentence_to_method(split_sentence("{ }")), MalformedSentence);
    CHECK_THROWS_AS(sentence_to_method(split_sentence("")), MalformedSentence);
    CHECK_THROWS_AS(sentence_to_method(split_sentence("_31(_39_42) {")), MalformedSentence);
    CHECK_THROWS_AS(sentence_to_method(split_sentence("_31(_39_42) { } }")),
                    MalformedSentence);
    CHECK_THROWS_AS(sentence_to_method(split_sentence("_31(_39_42) { { } }")),
                    MalformedSentence);
    CHECK_THROWS_AS(sentence_to_method(split_sentence("_31(_39_42) { _25(_42_8) }")),
                    MalformedSentence);
    CHECK_THROWS_AS(sentence_to_method(split_sentence("_31(_39) { }")), MalformedSentence);
}

TEST_CASE("else blocks become a second brace group") {
    AstNode then_block(node_id::block);
    then_block.children.push_back(AstNode(node_id::empty_statement));
    AstNode else_block(node_id::block);
    AstNode if_stmt(node_id::if_statement,
                    {AstNode(node_id::simple_name), std::move(then_block),
                     std::move(else_block)});
    MethodAst m;
    m.return_type = AstNode(node_id::primitive_type);
    m.name = AstNode(node_id::simple_name);
    m.body = AstNode(node_id::block);
    m.body.children.push_back(std::move(if_stmt));
    CHECK(join_sentence(tokenize_method(m, EmitMode::canonical)) ==
          "_31(_39_42) { _25(_42_8_8) { _20 } { } }");
    CHECK(join_sentence(tokenize_method(m, EmitMode::paper_compat)) ==
          "(_39_42 { _25(_42 { _20 } { } }");
}

TEST_CASE("flatten/unflatten round trip on random trees") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        AstNode tree = tu::random_statement_tree(rng, 8);
        AstNode back = unflatten(flatten(tree));
        CHECK(same_shape(tree, back));
    }
}

TEST_CASE("canonical sentence round trip on random methods") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        MethodAst m = tu::random_method(rng);
        Sentence s = tokenize_method(m, EmitMode::canonical);
        MethodAst skeleton = sentence_to_method(s);
        CHECK(tokenize_method(skeleton, EmitMode::canonical) == s);
    }
}

TEST_CASE("no emitted token contains whitespace") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        MethodAst m = tu::random_method(rng);
        for (EmitMode mode : {EmitMode::canonical, EmitMode::paper_compat}) {
            for (const Token& token : tokenize_method(m, mode)) {
                CHECK_FALSE(token.empty());
                for (char c : token) CHECK_FALSE(std::isspace(static_cast<unsigned char>(c)));
            }
        }
    }
}

TEST_CASE("paper-compat braces are always balanced") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 500; ++i) {
        MethodAst m = tu::random_method(rng);
        int depth = 0;
        for (const Token& token : tokenize_method(m, EmitMode::paper_compat)) {
            if (token == "{") ++depth;
            if (token == "}") {
                --depth;
                CHECK(depth >= 0);
            }
        }
        CHECK(depth == 0);
    }
}
