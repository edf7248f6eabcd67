#include <doctest.h>

#include <string>

#include "astlm/errors.hpp"
#include "astlm/parser.hpp"
#include "astlm/tokenizer.hpp"
#include "test_util.hpp"

using namespace astlm;
namespace tu = astlm::testutil;

namespace {

const char* kFooSource = R"(
class Holder {
    int foo() {
        int x = obj.getInt();
        if (x > 0) {
            x = x + 5;
        }
        return x;
    }
}
)";

MethodAst parse_one(const std::string& source) {
    ParseOutcome outcome = extract_methods(source);
    REQUIRE(outcome.methods.size() == 1);
    REQUIRE(outcome.skipped == 0);
    return outcome.methods[0];
}

}  // namespace

TEST_CASE("the example method parses to the expected shape") {
    MethodAst m = parse_one(kFooSource);
    CHECK(m.return_type.id() == node_id::primitive_type);
    CHECK(m.name.id() == node_id::simple_name);
    CHECK(m.name.lexeme == "foo");
    CHECK(m.parameters.empty());
    REQUIRE(m.body.children.size() == 3);
    CHECK(m.body.children[0].id() == node_id::variable_declaration_statement);
    CHECK(m.body.children[1].id() == node_id::if_statement);
    CHECK(m.body.children[2].id() == node_id::return_statement);
    for (const AstNode& stmt : m.body.children) CHECK(stmt.kind->is_statement);

    CHECK(join_sentence(tokenize_method(m, EmitMode::paper_compat)) ==
          tu::kFooCompatSentence);
    CHECK(join_sentence(tokenize_method(m, EmitMode::canonical)) ==
          tu::kFooCanonicalSentence);
}

TEST_CASE("empty body") {
    MethodAst m = parse_one("class A { void f() { } }");
    CHECK(m.body.children.empty());
    CHECK(join_sentence(tokenize_method(m, EmitMode::paper_compat)) == "(_39_42 { }");
}

TEST_CASE("lambda bodies are skipped with a diagnostic") {
    ParseOutcome outcome = extract_methods(
        "class A { void f() { button.onClick(e -> handle(e)); } }");
    CHECK(outcome.methods.empty());
    CHECK(outcome.skipped == 1);
    CHECK(outcome.diagnostics.size() == 1);
}

TEST_CASE("methods plus skipped equals declarations with bodies") {
    ParseOutcome outcome = extract_methods(R"(
        class A {
            int ok() { return 1; }
            void bad() { stream.map(x -> x); }
            abstract void none();
            int alsoOk() { return 2; }
        }
    )");
    CHECK(outcome.methods.size() == 2);
    CHECK(outcome.skipped == 1);
}

TEST_CASE("parse_statement reproduces the worked statement") {
    AstNode stmt = parse_statement("int x = obj.getInt();");
    CHECK(stmt.kind->is_statement);
    CHECK(stmt == tu::int_x_gets_obj_getint());
    CHECK(flatten(stmt) == tu::kFigureOneToken);
}

TEST_CASE("parse_statement basics") {
    AstNode ret = parse_statement("return x;");
    CHECK(ret.id() == node_id::return_statement);
    REQUIRE(ret.children.size() == 1);
    CHECK(ret.children[0].id() == node_id::simple_name);
    CHECK(flatten(ret) == "_41(_42)");

    AstNode empty = parse_statement(";");
    CHECK(empty.id() == node_id::empty_statement);
    CHECK(empty.is_leaf());
}

TEST_CASE("parse_statement reports offset and expectation") {
    try {
        parse_statement("return @;");
        FAIL("should have thrown");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 7);
        CHECK(!e.expected.empty());
    }
    CHECK_THROWS_AS(parse_statement("int x = ;"), SyntaxError);
    CHECK_THROWS_AS(parse_statement("return x; return y;"), SyntaxError);
}

TEST_CASE("parsing is deterministic") {
    const char* src = "class A { int f(int a) { while (a < 10) { a++; } return a; } }";
    ParseOutcome a = extract_methods(src);
    ParseOutcome b = extract_methods(src);
    REQUIRE(a.methods.size() == 1);
    REQUIRE(b.methods.size() == 1);
    CHECK(tokenize_method(a.methods[0], EmitMode::canonical) ==
          tokenize_method(b.methods[0], EmitMode::canonical));
    CHECK(a.methods[0].body == b.methods[0].body);
}

TEST_CASE("tokens are invariant under alpha-renaming and literal changes") {
    const char* original = R"(
        class A {
            long total(int count) {
                long sum = 0;
                for (int i = 0; i < count; i++) {
                    sum += lookup(i) * 2;
                }
                return sum;
            }
        }
    )";
    const char* renamed = R"(
        class Zq {
            long zz1(int qqq) {
                long b7 = 991;
                for (int k = 44; k < qqq; k++) {
                    b7 += fetch(k) * 777;
                }
                return b7;
            }
        }
    )";
    ParseOutcome a = extract_methods(original);
    ParseOutcome b = extract_methods(renamed);
    REQUIRE(a.methods.size() == 1);
    REQUIRE(b.methods.size() == 1);
    CHECK(tokenize_method(a.methods[0], EmitMode::canonical) ==
          tokenize_method(b.methods[0], EmitMode::canonical));
}

TEST_CASE("comments and string contents never influence structure") {
    const char* plain = "class A { int f() { return g(\"\"); } }";
    const char* noisy = R"(
        class A {
            // a comment with } and ( and "quotes"
            int f() {
                /* if (x) { return 9; } */
                return g("}}}((( if while \" ");
            }
        }
    )";
    ParseOutcome a = extract_methods(plain);
    ParseOutcome b = extract_methods(noisy);
    REQUIRE(a.methods.size() == 1);
    REQUIRE(b.methods.size() == 1);
    CHECK(tokenize_method(a.methods[0], EmitMode::canonical) ==
          tokenize_method(b.methods[0], EmitMode::canonical));
}

TEST_CASE("statement coverage") {
    // each parses to the expected root kind
    CHECK(parse_statement("x = 1;").id() == node_id::expression_statement);
    CHECK(parse_statement("x += 1;").children[0].id() == node_id::assignment);
    CHECK(parse_statement("if (a) b(); else c();").id() == node_id::if_statement);
    CHECK(parse_statement("while (true) work();").id() == node_id::while_statement);
    CHECK(parse_statement("do { poll(); } while (busy);").id() == node_id::do_statement);
    CHECK(parse_statement("for (int i = 0; i < n; i++) use(i);").id() ==
          node_id::for_statement);
    CHECK(parse_statement("for (String s : items) use(s);").id() ==
          node_id::enhanced_for_statement);
    CHECK(parse_statement("throw new IllegalStateException();").id() ==
          node_id::throw_statement);
    CHECK(parse_statement("break outer;").id() == node_id::break_statement);
    CHECK(parse_statement("continue;").id() == node_id::continue_statement);
    CHECK(parse_statement("try { risky(); } catch (Exception e) { log(e); } finally { done(); }")
              .id() == node_id::try_statement);
    CHECK(parse_statement("switch (kind) { case 1: a(); break; default: b(); }").id() ==
          node_id::switch_statement);
    CHECK(parse_statement("synchronized (lock) { update(); }").id() ==
          node_id::synchronized_statement);
    CHECK(parse_statement("assert x > 0 : \"positive\";").id() == node_id::assert_statement);
    CHECK(parse_statement("outer: while (true) break outer;").id() ==
          node_id::labeled_statement);
    CHECK(parse_statement("{ int x = 1; }").id() == node_id::block);
}

TEST_CASE("expression coverage") {
    auto expr_of = [](const std::string& text) {
        AstNode stmt = parse_statement(text);
        REQUIRE(stmt.id() == node_id::expression_statement);
        return stmt.children[0];
    };
    CHECK(expr_of("a.b.c = 1;").children[0].id() == node_id::qualified_name);
    CHECK(expr_of("this.x = 1;").children[0].id() == node_id::field_access);
    CHECK(expr_of("v = arr[i];").children[1].id() == node_id::array_access);
    CHECK(expr_of("v = (a + b) * c;").children[1].id() == node_id::infix_expression);
    CHECK(expr_of("v = (Foo) bar;").children[1].id() == node_id::cast_expression);
    CHECK(expr_of("v = (int) x;").children[1].id() == node_id::cast_expression);
    CHECK(expr_of("v = (x);").children[1].id() == node_id::parenthesized_expression);
    CHECK(expr_of("v = a instanceof Foo;").children[1].id() ==
          node_id::instanceof_expression);
    CHECK(expr_of("v = a ? b : c;").children[1].id() == node_id::conditional_expression);
    CHECK(expr_of("v = new Foo(1, 2);").children[1].id() ==
          node_id::class_instance_creation);
    CHECK(expr_of("v = new int[8];").children[1].id() == node_id::array_creation);
    CHECK(expr_of("v = new int[] {1, 2};").children[1].id() == node_id::array_creation);
    CHECK(expr_of("v = !done;").children[1].id() == node_id::prefix_expression);
    CHECK(expr_of("v = i++;").children[1].id() == node_id::postfix_expression);
    CHECK(expr_of("v = this;").children[1].id() == node_id::this_expression);
    CHECK(expr_of("v = Foo.class;").children[1].id() == node_id::type_literal);
    CHECK(expr_of("v = super.size();").children[1].id() ==
          node_id::super_method_invocation);
    CHECK(expr_of("v = 'c';").children[1].id() == node_id::character_literal);
    CHECK(expr_of("v = null;").children[1].id() == node_id::null_literal);
    CHECK(expr_of("v = true;").children[1].id() == node_id::boolean_literal);
    CHECK(expr_of("v = 3.5e-2f;").children[1].id() == node_id::number_literal);
    CHECK(expr_of("v = \"s\";").children[1].id() == node_id::string_literal);
}

TEST_CASE("method invocation child order matches the worked example") {
    AstNode stmt = parse_statement("x = obj.getInt();");
    const AstNode& call = stmt.children[0].children[1];
    REQUIRE(call.id() == node_id::method_invocation);
    REQUIRE(call.children.size() == 2);
    CHECK(call.children[0].lexeme == "obj");
    CHECK(call.children[1].lexeme == "getInt");

    AstNode unqualified = parse_statement("getInt(a, b);");
    const AstNode& call2 = unqualified.children[0];
    REQUIRE(call2.children.size() == 3);
    CHECK(call2.children[0].lexeme == "getInt");
}

TEST_CASE("same-operator chains fold into one infix node") {
    AstNode stmt = parse_statement("v = a + b + c;");
    const AstNode& infix = stmt.children[0].children[1];
    REQUIRE(infix.id() == node_id::infix_expression);
    CHECK(infix.children.size() == 3);

    AstNode mixed = parse_statement("v = a + b - c;");
    const AstNode& outer = mixed.children[0].children[1];
    CHECK(outer.children.size() == 2);
    CHECK(outer.children[0].id() == node_id::infix_expression);
}

TEST_CASE("generic type arguments are dropped") {
    AstNode stmt = parse_statement("Map<String, List<Integer>> index = new HashMap<>();");
    REQUIRE(stmt.id() == node_id::variable_declaration_statement);
    const AstNode& type = stmt.children[0];
    REQUIRE(type.id() == node_id::simple_type);
    CHECK(type.children[0].lexeme == "Map");
    // comparison chains still parse as comparisons
    AstNode cmp = parse_statement("v = a < b;");
    CHECK(cmp.children[0].children[1].id() == node_id::infix_expression);
}

TEST_CASE("methods in nested and anonymous classes are extracted") {
    ParseOutcome outcome = extract_methods(R"(
        class Outer {
            int one() { return 1; }
            static class Inner {
                int two() { return 2; }
            }
            void three() {
                runner.submit(new Runnable() {
                    public void run() { tick(); }
                });
            }
            enum Kind {
                A {
                    int weight() { return 3; }
                };
                int weight() { return 0; }
            }
        }
    )");
    CHECK(outcome.skipped == 0);
    REQUIRE(outcome.methods.size() == 6);  // one, two, run, three, A.weight, weight
    const MethodAst* found = nullptr;
    for (const MethodAst& m : outcome.methods)
        if (m.name.lexeme == "three") found = &m;
    REQUIRE(found != nullptr);
    // the enclosing statement keeps a childless marker for the anonymous body
    const MethodAst& three = *found;
    const AstNode& call = three.body.children[0].children[0];
    const AstNode& creation = call.children[2];
    REQUIRE(creation.id() == node_id::class_instance_creation);
    CHECK(creation.children.back().id() == node_id::anonymous_class_declaration);
}

TEST_CASE("constructors and field initializers are not methods") {
    ParseOutcome outcome = extract_methods(R"(
        class A {
            private int count = compute(1);
            private Runnable hook = new Runnable() {
                public void run() { fire(); }
            };
            A(int c) { count = c; }
            int get() { return count; }
        }
    )");
    // run() from the field's anonymous class and get()
    CHECK(outcome.methods.size() == 2);
    CHECK(outcome.skipped == 0);
}

TEST_CASE("a completely unparseable file yields no methods and a diagnostic") {
    ParseOutcome outcome = extract_methods("]]]] not java at all ((((");
    CHECK(outcome.methods.empty());
    CHECK(outcome.diagnostics.size() >= 1);
}

TEST_CASE("unsupported constructs skip only the enclosing method") {
    ParseOutcome outcome = extract_methods(R"(
        class A {
            void refs() { handlers.forEach(Handler::fire); }
            void resources() { try (Closeable c = open()) { use(c); } }
            int fine() { return 7; }
        }
    )");
    CHECK(outcome.methods.size() == 1);
    CHECK(outcome.skipped == 2);
    CHECK(outcome.diagnostics.size() == 2);
}

TEST_CASE("varargs and qualified types in signatures") {
    MethodAst m = parse_one(
        "class A { java.util.List all(final String... names) { return null; } }");
    CHECK(m.return_type.id() == node_id::simple_type);
    REQUIRE(m.parameters.size() == 1);
    CHECK(m.parameters[0].id() == node_id::single_variable_declaration);
    CHECK(m.parameters[0].children[0].id() == node_id::array_type);
}
