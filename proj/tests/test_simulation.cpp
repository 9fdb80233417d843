#include "hboot/simulation.hpp"
#include "hboot/variance_model.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace hboot;
using Catch::Approx;

namespace {

PerVertex<std::int64_t> sizes(std::vector<std::int64_t> n) { return PerVertex<std::int64_t>(std::move(n)); }

PerVertex<SamplePopulation> leaves(const CalcTree& t, std::vector<std::vector<double>> values) {
    PerVertex<SamplePopulation> p(static_cast<std::size_t>(t.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        p[static_cast<int>(i) + 1] = SamplePopulation{static_cast<int>(i) + 1, values[i]};
    return p;
}

const CalcTree identity({make_leaf(1, 1, 1), make_internal(2, {1}, "x1")});
const CalcTree sum({make_leaf(1, 0, 1), make_leaf(2, 0, 1), make_internal(3, {1, 2}, "x1+x2")});

} // namespace

TEST_CASE("counter streams are reproducible and keyed", "[simulation]") {
    const StreamSeeder a(9, 0), b(9, 0), c(9, 1);
    auto s1 = a.stream(1, StreamPurpose::resample);
    auto s2 = b.stream(1, StreamPurpose::resample);
    auto s3 = c.stream(1, StreamPurpose::resample);
    auto s4 = a.stream(2, StreamPurpose::resample);
    auto s5 = a.stream(1, StreamPurpose::leaf_population);
    const auto x = s1();
    CHECK(x == s2());
    CHECK(x != s3());
    CHECK(x != s4());
    CHECK(x != s5());
}

TEST_CASE("generate_leaf_population", "[simulation]") {
    const StreamSeeder seeder(123, 4);
    const auto p1 = generate_leaf_population(1, NormalDist{0, 1}, 3, seeder);
    const auto p2 = generate_leaf_population(1, NormalDist{0, 1}, 3, seeder);
    CHECK(p1.values == p2.values);
    CHECK(p1.size() == 3);

    const std::int64_t big = 1'000'000;
    const auto u = generate_leaf_population(1, UniformDist{0, 1}, big, seeder);
    CHECK(std::abs(population_mean(u) - 0.5) <= 3.0 * std::sqrt(1.0 / 12.0 / big));
    const auto e = generate_leaf_population(2, ExponentialDist{2}, big, seeder);
    CHECK(std::abs(population_mean(e) - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(big)));

    CHECK_THROWS_AS(generate_leaf_population(1, NormalDist{0, -1}, 3, seeder), InvalidArgument);
    CHECK_THROWS_AS(generate_leaf_population(1, UniformDist{1, 1}, 3, seeder), InvalidArgument);
    CHECK_THROWS_AS(generate_leaf_population(1, ExponentialDist{0}, 3, seeder), InvalidArgument);
    CHECK_THROWS_AS(generate_leaf_population(1, NormalDist{0, 1}, 0, seeder), InvalidArgument);
}

TEST_CASE("wave_run", "[simulation]") {
    SECTION("singleton leaves are deterministic") {
        const auto pops = leaves(sum, {{1.5}, {-0.25}});
        for (std::uint64_t r = 0; r < 5; ++r)
            CHECK(wave_run(sum, sizes({1, 1, 4}), pops, StreamSeeder(r, r)) == 1.25);
    }
    SECTION("two-point population averages to its mean") {
        const std::int64_t r = 100'000;
        const double theta = wave_run(identity, sizes({2, r}), leaves(identity, {{0.0, 2.0}}), StreamSeeder(1, 0));
        // each draw is 0 or 2 with probability 1/2: standard error 1 / sqrt(r)
        CHECK(std::abs(theta - 1.0) <= 3.0 / std::sqrt(static_cast<double>(r)));
    }
    SECTION("populations honour the plan sizes") {
        const CalcTree t({make_leaf(1, 0, 1), make_leaf(2, 0, 1), make_internal(3, {1}, "2*x1"),
                          make_internal(4, {2, 3}, "x2*x3")});
        const auto pops = wave_populations(t, sizes({3, 2, 5, 7}), leaves(t, {{1, 2, 3}, {4, 5}}), StreamSeeder(0, 0));
        CHECK(pops[3].size() == 5);
        CHECK(pops[4].size() == 7);
        for (double y : pops[3].values) CHECK((y == 2.0 || y == 4.0 || y == 6.0));
    }
    SECTION("plan must match the leaf populations") {
        CHECK_THROWS_AS(wave_run(sum, sizes({2, 1, 1}), leaves(sum, {{1}, {2}}), StreamSeeder(0, 0)), InvalidArgument);
        CHECK_THROWS_AS(wave_run(sum, sizes({1, 1, 0}), leaves(sum, {{1}, {2}}), StreamSeeder(0, 0)), InvalidArgument);
    }
    SECTION("domain errors name vertex and inputs") {
        const CalcTree t({make_leaf(1, 1, 1), make_internal(2, {1}, "log(x1)")});
        try {
            wave_run(t, sizes({1, 1}), leaves(t, {{-3.0}}), StreamSeeder(0, 0));
            FAIL("expected a domain error");
        } catch (const DomainError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("vertex 2") != std::string::npos);
            CHECK(msg.find("x1=-3") != std::string::npos);
        }
    }
}

TEST_CASE("sweep_run", "[simulation]") {
    CounterStream rng(5);
    CHECK(sweep_run(sum, leaves(sum, {{2.0}, {3.0}}), 10, rng) == 5.0);

    const std::int64_t r = 100'000;
    const double theta = sweep_run(identity, leaves(identity, {{0.0, 2.0}}), r, rng);
    CHECK(std::abs(theta - 1.0) <= 3.0 / std::sqrt(static_cast<double>(r)));

    // linear phi: the mean of repeated sweeps approaches phi(mu) over fresh populations
    double acc = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        const StreamSeeder s(77, static_cast<std::uint64_t>(i));
        auto pops = leaves(sum, {});
        pops[1] = generate_leaf_population(1, NormalDist{1.0, 1.0}, 4, s);
        pops[2] = generate_leaf_population(2, NormalDist{-3.0, 1.0}, 4, s);
        CounterStream sw = s.stream(0, StreamPurpose::sweep);
        acc += sweep_run(sum, pops, 8, sw);
    }
    // Var of one sweep average is below 2 (two unit-variance inputs), so 4 se < 4 sqrt(2 / reps)
    CHECK(std::abs(acc / reps - (-2.0)) <= 4.0 * std::sqrt(2.0 / reps));

    CHECK_THROWS_AS(sweep_run(sum, leaves(sum, {{1.0}, {1.0}}), 0, rng), InvalidArgument);
}

TEST_CASE("summarize", "[simulation]") {
    const auto same = summarize({0.7, 0.7}, 3);
    CHECK(same.variance == 0.0);
    CHECK(same.mean == Approx(0.7));
    const auto r = summarize({1, 2, 3, 4});
    CHECK(r.mean == 2.5);
    CHECK(r.variance == Approx(5.0 / 3.0));
    CHECK(r.se_mean == Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(r.se_variance >= 0.0);
    CHECK_THROWS_AS(summarize({}), InvalidArgument);
}

TEST_CASE("replicate", "[simulation]") {
    ReplicationConfig cfg;
    cfg.replications = 2000;
    cfg.seed = 2024;
    cfg.sizes = sizes({2, 2, 2});

    SECTION("same replicate index gives the same value") {
        CHECK(simulate_replicate(sum, cfg, 17) == simulate_replicate(sum, cfg, 17));
        CHECK(simulate_replicate(sum, cfg, 17) != simulate_replicate(sum, cfg, 18));
    }
    SECTION("bit-identical reports regardless of thread count") {
        cfg.threads = 1;
        const auto a = replicate(cfg, sum);
        cfg.threads = 5;
        const auto b = replicate(cfg, sum);
        CHECK(a == b);
        CHECK(a.values.size() == 2000);
    }
    SECTION("changing one leaf's source leaves the other leaf's draws alone") {
        std::vector<VertexSpec> vs = sum.vertices();
        vs[1].distribution = UniformDist{-1, 1};
        const CalcTree other(vs);
        const StreamSeeder s(cfg.seed, 3);
        const auto p = replicate_leaf_populations(sum, cfg, s);
        const auto q = replicate_leaf_populations(other, cfg, s);
        CHECK(p[1].values == q[1].values);
        CHECK(p[2].values != q[2].values);
    }
    SECTION("fixed leaf data") {
        std::vector<VertexSpec> vs = sum.vertices();
        vs[0].samples = {1.0, 2.0, 3.0};
        vs[1].samples = {10.0, 20.0};
        const CalcTree data(vs);
        cfg.source = LeafSource::fixed;
        cfg.sizes = sizes({3, 2, 1});
        const auto rep = replicate(cfg, data);
        for (double v : rep.values) {
            const bool ok = v == 11 || v == 12 || v == 13 || v == 21 || v == 22 || v == 23;
            CHECK(ok);
        }
        cfg.sizes = sizes({4, 2, 1});
        CHECK_THROWS_AS(replicate(cfg, data), InvalidArgument);
    }
    SECTION("linear tree matches the analytic variance") {
        cfg.replications = 20000;
        const auto rep = replicate(cfg, sum);
        const double analytic = estimator_variance(VarianceModel(sum), cfg.sizes);
        CHECK(analytic == 1.5);
        CHECK(std::abs(rep.variance - analytic) <= 4.0 * rep.se_variance);
        CHECK(std::abs(rep.mean) <= 4.0 * rep.se_mean);
    }
    SECTION("invalid configs") {
        cfg.replications = 0;
        CHECK_THROWS_AS(replicate(cfg, sum), InvalidArgument);
        cfg.replications = 10;
        cfg.sizes = sizes({1, 1});
        CHECK_THROWS_AS(replicate(cfg, sum), InvalidArgument);
    }
}
