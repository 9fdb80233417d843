#include "hboot/expression.hpp"
#include "support/expression_corpus.hpp"
#include "support/finite_difference.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

using namespace hboot;
using Catch::Approx;

namespace {

double eval(std::string_view text, std::map<int, double> vars = {}) {
    return parse_expression(text).evaluate([&](int id) { return vars.at(id); });
}

} // namespace

TEST_CASE("parser honours precedence and associativity", "[expression]") {
    CHECK(eval("1+2*3") == 7.0);
    CHECK(eval("(1+2)*3") == 9.0);
    CHECK(eval("10-4-3") == 3.0);
    CHECK(eval("12/3/2") == 2.0);
    CHECK(eval("-2^2") == -4.0);
    CHECK(eval("(-2)^2") == 4.0);
    CHECK(eval("2^-1") == 0.5);
    CHECK(eval("2^(-2)") == 0.25);
    CHECK(eval("1e-3*1000") == Approx(1.0));
    CHECK(eval("x1*x2 + x3", {{1, 2.0}, {2, 3.0}, {3, 1.0}}) == 7.0);
    CHECK(eval(" sqrt( 16 ) + log(1) + exp(0) + square(3) ") == 14.0);
}

TEST_CASE("parser rejects malformed input", "[expression]") {
    CHECK_THROWS_AS(parse_expression(""), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x1+"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("(x1"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x1 x2"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("sin(x1)"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x1^x2"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("y1"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x0"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x1^2^3"), SyntaxError);
}

TEST_CASE("variables lists every referenced id once", "[expression]") {
    const auto vars = parse_expression("x3*(x1+x3)-exp(x7)").variables();
    CHECK(vars == std::set<int>{1, 3, 7});
}

TEST_CASE("evaluation checks domains", "[expression]") {
    CHECK_THROWS_AS(eval("log(0)"), DomainError);
    CHECK_THROWS_AS(eval("log(-1)"), DomainError);
    CHECK_THROWS_AS(eval("sqrt(-1e-9)"), DomainError);
    CHECK_THROWS_AS(eval("1/(2-2)"), DomainError);
    CHECK_THROWS_AS(eval("(-8)^0.5"), DomainError);
    CHECK_THROWS_AS(eval("0^(-1)"), DomainError);
    CHECK_THROWS_AS(eval("exp(1000)"), DomainError);
    CHECK(eval("(-2)^3") == -8.0);
    CHECK(eval("sqrt(0)") == 0.0);
}

TEST_CASE("symbolic derivatives of the basic rules", "[expression]") {
    const std::map<int, double> at{{1, 2.0}, {2, 3.0}};
    auto d = [&](std::string_view text, int var) {
        return parse_expression(text).derivative(var).evaluate([&](int id) { return at.at(id); });
    };
    CHECK(d("x1+x2", 1) == 1.0);
    CHECK(d("x1+x2", 2) == 1.0);
    CHECK(d("x1*x2", 1) == 3.0);
    CHECK(d("x1*x2", 2) == 2.0);
    CHECK(d("x1^2/x2", 1) == Approx(4.0 / 3.0));
    CHECK(d("x1^3", 1) == Approx(12.0));
    CHECK(d("exp(x1)", 1) == Approx(std::exp(2.0)));
    CHECK(d("log(x2)", 2) == Approx(1.0 / 3.0));
    CHECK(d("sqrt(x1)", 1) == Approx(0.5 / std::sqrt(2.0)));
    CHECK(d("square(x2)", 2) == 6.0);
    CHECK(d("-x1", 1) == -1.0);
    CHECK(d("x1", 2) == 0.0);
    CHECK(parse_expression("x1*x2").derivative(3).is_constant(0.0));
}

TEST_CASE("derivatives agree with central differences on the corpus", "[expression][property]") {
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (auto text : testing::expression_corpus()) {
        const Expr e = parse_expression(text);
        for (int trial = 0; trial < 100; ++trial) {
            std::map<int, double> point{{1, u(rng)}, {2, u(rng)}, {3, u(rng)}};
            for (int var : e.variables()) {
                const double exact = e.derivative(var).evaluate([&](int id) { return point.at(id); });
                const double fd = testing::central_difference(e, point, var);
                INFO(text << " d/dx" << var << " at x1=" << point[1] << " x2=" << point[2] << " x3=" << point[3]);
                REQUIRE(testing::scaled_error(exact, fd) <= 1e-6);
            }
        }
    }
}

TEST_CASE("printing re-parses to the same expression", "[expression][property]") {
    for (auto text : testing::expression_corpus()) {
        const Expr e = parse_expression(text);
        INFO(text << " printed as " << e.to_string());
        CHECK(parse_expression(e.to_string()) == e);
    }
    // Random expression trees, including negative constants and negations.
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick(0, 11);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    auto build = [&](auto&& self, int depth) -> Expr {
        const int k = depth > 4 ? pick(rng) % 2 : pick(rng);
        switch (k) {
        case 0: return Expr::constant(val(rng));
        case 1: return Expr::variable(1 + pick(rng) % 3);
        case 2: return Expr::unary(Op::negate, Expr::variable(1));
        case 3: return Expr::unary(Op::exp, self(self, depth + 1));
        case 4: return Expr::unary(Op::log, self(self, depth + 1));
        case 5: return Expr::unary(Op::square, self(self, depth + 1));
        case 6: return Expr::power(self(self, depth + 1), val(rng));
        case 7: return Expr::binary(Op::add, self(self, depth + 1), self(self, depth + 1));
        case 8: return Expr::binary(Op::sub, self(self, depth + 1), self(self, depth + 1));
        case 9: return Expr::binary(Op::mul, self(self, depth + 1), self(self, depth + 1));
        case 10: return Expr::binary(Op::div, self(self, depth + 1), self(self, depth + 1));
        default: return Expr::unary(Op::sqrt, self(self, depth + 1));
        }
    };
    for (int i = 0; i < 500; ++i) {
        const Expr e = build(build, 0);
        INFO(e.to_string());
        CHECK(parse_expression(e.to_string()) == e);
    }
}

TEST_CASE("substitute composes sub-functions", "[expression]") {
    const Expr outer = parse_expression("x3*x4");
    const Expr inner = parse_expression("x1+x2");
    const Expr composed = outer.substitute([&](int id) { return id == 3 ? inner : Expr::variable(id); });
    CHECK(composed.variables() == std::set<int>{1, 2, 4});
    CHECK(composed.evaluate([](int id) { return static_cast<double>(id); }) == 12.0);
}
