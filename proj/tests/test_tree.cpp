#include "hboot/tree.hpp"
#include "hboot/tree_io.hpp"
#include "support/finite_difference.hpp"
#include "support/random_trees.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

using namespace hboot;
using Catch::Approx;

namespace {

bool has_rule(const std::vector<Violation>& vs, std::string_view rule, int vertex = 0) {
    for (const auto& v : vs)
        if (v.rule == rule && (vertex == 0 || v.vertex == vertex)) return true;
    return false;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "hboot_tree_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("minimal chain document", "[tree]") {
    const auto tree = parse_tree(R"({"vertices":[
        {"id":1,"kind":"leaf","mean":0.0,"variance":1.0},
        {"id":2,"kind":"internal","children":[1],"expr":"x1"}]})");
    CHECK(tree.size() == 2);
    CHECK(tree.leaf_count() == 1);
    CHECK(tree.root() == 2);
    CHECK(tree.parent(1) == 2);
    CHECK(tree.parent(2) == 0);
    CHECK(tree.cost(1) == 1);
    CHECK(tree.cost(2) == 1);
}

TEST_CASE("three leaves, one intermediate vertex and a root", "[tree]") {
    const auto tree = parse_tree(R"({"vertices":[
        {"id":5,"kind":"internal","cost":3,"children":[3,4],"expr":"x4/x3"},
        {"id":1,"kind":"leaf","mean":1.0,"variance":0.5},
        {"id":2,"kind":"leaf","mean":2.0,"variance":0.5,"cost":2},
        {"id":3,"kind":"leaf","mean":4.0,"variance":1.0},
        {"id":4,"kind":"internal","children":[2,1],"expr":"x1+x2"}]})");
    CHECK(tree.size() == 5);
    CHECK(tree.leaf_count() == 3);
    CHECK(tree.children(4) == std::vector<int>{1, 2});
    CHECK(tree.parent(3) == 5);
    CHECK(tree.cost(5) == 3);
    CHECK(tree.cost(2) == 2);
    CHECK(validate_tree(tree).empty());
}

TEST_CASE("forward reference violates correct numbering", "[tree]") {
    const std::string doc = R"({"vertices":[
        {"id":1,"kind":"leaf","mean":0,"variance":1},
        {"id":2,"kind":"internal","children":[3],"expr":"x3"},
        {"id":3,"kind":"internal","children":[1],"expr":"x1"}]})";
    CHECK_THROWS_AS(parse_tree(doc), ValidationError);
    const auto tree = parse_tree_unchecked(doc);
    CHECK(has_rule(validate_tree(tree), "correct-numbering violated", 2));
    try {
        parse_tree(doc);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("correct-numbering") != std::string::npos);
    }
}

TEST_CASE("validate_tree reports each rule", "[tree]") {
    SECTION("vertex in two child sets") {
        const CalcTree t({make_leaf(1, 0, 1), make_leaf(2, 0, 1), make_internal(3, {1, 2}, "x1+x2"),
                          make_internal(4, {1, 3}, "x1*x3")});
        CHECK(has_rule(validate_tree(t), "multiple outgoing arcs", 1));
    }
    SECTION("internal vertex without inputs") {
        VertexSpec v;
        v.id = 2;
        v.kind = VertexKind::internal;
        v.expr = parse_expression("1");
        const CalcTree t({make_leaf(1, 0, 1), v});
        const auto vs = validate_tree(t);
        CHECK(has_rule(vs, "internal vertex without inputs", 2));
        CHECK(has_rule(vs, "missing outgoing arc", 1));
    }
    SECTION("unused input and unknown child") {
        const CalcTree t({make_leaf(1, 0, 1), make_leaf(2, 0, 1), make_internal(3, {1, 2}, "x1")});
        CHECK(has_rule(validate_tree(t), "expression variable mismatch", 3));
        const CalcTree u({make_leaf(1, 0, 1), make_internal(2, {1, 9}, "x1+x9")});
        CHECK(has_rule(validate_tree(u), "unknown child", 2));
    }
    SECTION("leaf numbering") {
        const CalcTree t({make_leaf(1, 0, 1), make_internal(2, {1}, "x1"), make_leaf(3, 0, 1),
                          make_internal(4, {2, 3}, "x2+x3")});
        CHECK(has_rule(validate_tree(t), "leaf numbering", 3));
    }
    SECTION("missing statistics and negative values") {
        VertexSpec bare;
        bare.id = 1;
        const CalcTree t({bare, make_internal(2, {1}, "x1", -1)});
        const auto vs = validate_tree(t);
        CHECK(has_rule(vs, "missing leaf statistics", 1));
        CHECK(has_rule(vs, "negative cost", 2));
        const CalcTree u({make_leaf(1, 0, -1), make_internal(2, {1}, "x1")});
        CHECK(has_rule(validate_tree(u), "invalid leaf statistics", 1));
    }
    SECTION("single leaf is a valid tree") {
        CHECK(validate_tree(CalcTree({make_leaf(1, 3, 1)})).empty());
    }
}

TEST_CASE("document errors", "[tree]") {
    CHECK_THROWS_AS(parse_tree("{not json"), SyntaxError);
    CHECK_THROWS_AS(parse_tree(R"({"nodes":[]})"), SyntaxError);
    CHECK_THROWS_AS(parse_tree(R"({"vertices":[{"id":1,"kind":"bud","mean":0,"variance":1}]})"), SyntaxError);
    CHECK_THROWS_AS(parse_tree(R"({"vertices":[{"id":1,"kind":"leaf","mean":"zero","variance":1}]})"), SyntaxError);
    CHECK_THROWS_AS(parse_tree(R"({"vertices":[
        {"id":1,"kind":"leaf","mean":0,"variance":1},
        {"id":2,"kind":"internal","children":[1],"expr":"x1+"}]})"), SyntaxError);
    CHECK_THROWS_AS(parse_tree(R"({"vertices":[
        {"id":1,"kind":"leaf","mean":0,"variance":1},
        {"id":1,"kind":"leaf","mean":0,"variance":1}]})"), SemanticError);
    CHECK_THROWS_AS(parse_tree(R"({"vertices":[
        {"id":1,"kind":"leaf","mean":0,"variance":1},
        {"id":2,"kind":"internal","children":[1],"expr":"x1*x5"}]})"), SemanticError);
    CHECK_THROWS_AS(parse_tree(R"({"vertices":[
        {"id":1,"kind":"leaf","mean":0,"variance":1},
        {"id":3,"kind":"internal","children":[1],"expr":"x1"}]})"), SemanticError);
    CHECK_THROWS_AS(parse_tree(R"({"vertices":[{"id":1,"kind":"leaf","samples_file":"/nonexistent/h.csv"}]})"),
                    IoError);
}

TEST_CASE("leaf statistics from sample files, explicit values take precedence", "[tree]") {
    const auto dir = temp_dir();
    {
        std::ofstream(dir / "h1.csv") << "1\n2\n\n3\n4\n";
        std::ofstream(dir / "bad.csv") << "1\nabc\n";
    }
    const std::string doc = R"({"vertices":[
        {"id":1,"kind":"leaf","samples_file":"h1.csv"},
        {"id":2,"kind":"leaf","samples_file":"h1.csv","variance":9.0},
        {"id":3,"kind":"internal","children":[1,2],"expr":"x1+x2"}]})";
    const auto tree = parse_tree(doc, dir);
    CHECK(tree.leaf_mean(1) == 2.5);
    CHECK(tree.leaf_variance(1) == Approx(5.0 / 3.0));
    CHECK(tree.leaf_mean(2) == 2.5);
    CHECK(tree.leaf_variance(2) == 9.0);
    CHECK(tree.vertex(1).samples.size() == 4);

    CHECK_THROWS_AS(parse_tree(R"({"vertices":[{"id":1,"kind":"leaf","samples_file":"bad.csv"}]})", dir), SyntaxError);
}

TEST_CASE("propagate_means evaluates each vertex at its children's means", "[tree]") {
    SECTION("sum") {
        const CalcTree t({make_leaf(1, 1, 1), make_leaf(2, 2, 1), make_internal(3, {1, 2}, "x1+x2")});
        CHECK(propagate_means(t)[3] == 3.0);
    }
    SECTION("product") {
        const CalcTree t({make_leaf(1, 2, 1), make_leaf(2, 3, 1), make_internal(3, {1, 2}, "x1*x2")});
        CHECK(propagate_means(t)[3] == 6.0);
    }
    SECTION("chain") {
        const CalcTree t({make_leaf(1, 2, 1), make_internal(2, {1}, "x1^2"), make_internal(3, {2}, "x2+1")});
        const auto mu = propagate_means(t);
        CHECK(mu[1] == 2.0);
        CHECK(mu[2] == 4.0);
        CHECK(mu[3] == 5.0);
        // evaluator on constant inputs agrees
        CHECK(parse_expression("(2)^2+1").evaluate([](int) { return 0.0; }) == mu[3]);
        CHECK(propagate_means(t) == mu);
    }
    SECTION("domain error names the vertex") {
        const CalcTree t({make_leaf(1, -1, 1), make_internal(2, {1}, "log(x1)")});
        try {
            propagate_means(t);
            FAIL("expected a domain error");
        } catch (const DomainError& e) {
            CHECK(e.vertex() == 2);
        }
    }
}

TEST_CASE("gradient_at_mean", "[tree]") {
    const CalcTree sum({make_leaf(1, 5, 1), make_leaf(2, -7, 1), make_internal(3, {1, 2}, "x1+x2")});
    CHECK(gradient_at_mean(sum, 3) == std::vector<double>{1.0, 1.0});

    const CalcTree prod({make_leaf(1, 2, 1), make_leaf(2, 3, 1), make_internal(3, {1, 2}, "x1*x2")});
    CHECK(gradient_at_mean(prod, 3) == std::vector<double>{3.0, 2.0});

    const CalcTree ratio({make_leaf(1, 2, 1), make_leaf(2, 1, 1), make_internal(3, {1, 2}, "x1^2/x2")});
    const auto g = gradient_at_mean(ratio, 3);
    const Expr e = *ratio.vertex(3).expr;
    // finite-difference oracle, h = 1e-5
    const std::map<int, double> at{{1, 2.0}, {2, 1.0}};
    CHECK(std::abs(g[0] - testing::central_difference(e, at, 1)) <= 1e-6);
    CHECK(std::abs(g[1] - testing::central_difference(e, at, 2)) <= 1e-6);
    CHECK(g[0] == Approx(4.0).epsilon(1e-12));
    CHECK(g[1] == Approx(-4.0).epsilon(1e-12));

    CHECK_THROWS_AS(gradient_at_mean(ratio, 1), InvalidArgument);
    const CalcTree root({make_leaf(1, 0, 1), make_internal(2, {1}, "sqrt(x1)")});
    CHECK_THROWS_AS(gradient_at_mean(root, 2), DomainError);
}

TEST_CASE("serialized trees re-parse to the same structure", "[tree][property]") {
    std::mt19937_64 rng(99);
    testing::RandomTreeOptions opt;
    opt.max_leaves = 4;
    opt.max_vertices = 9;
    opt.max_cost = 4;
    for (int i = 0; i < 200; ++i) {
        const CalcTree t = testing::random_tree(rng, opt);
        REQUIRE(validate_tree(t).empty());
        const std::string doc = serialize_tree(t);
        const CalcTree back = parse_tree(doc);
        INFO(doc);
        CHECK(back.vertices() == t.vertices());
    }
}

TEST_CASE("validation accepts exactly the trees that evaluate structurally", "[tree][property]") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const CalcTree t = testing::random_tree(rng);
        REQUIRE(validate_tree(t).empty());
        CHECK_NOTHROW(propagate_means(t));
        // Break the tree by rewiring one internal vertex onto a later vertex.
        auto vs = t.vertices();
        const int v = t.leaf_count() + 1;
        if (v < t.size()) {
            vs[static_cast<std::size_t>(v - 1)].children.push_back(t.size());
            const CalcTree broken(vs);
            CHECK(!validate_tree(broken).empty());
        }
    }
}
