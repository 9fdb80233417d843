// simulation.hpp
//
// Monte Carlo execution of the hierarchical bootstrap (wave algorithm) and of
// the sweep baseline.
//
// Wave: for v = m+1..k build H_v of size n_v; each element draws one value
// uniformly with replacement from every child population, independently per
// child and per element, and evaluates phi_v. Theta* is the mean of H_k.
//
// replicate() regenerates the leaf populations every replicate in synthetic
// mode, so the spread of Theta* covers both the leaf sample draw and the
// resampling; that is the unconditional variance the analytic model predicts.
#pragma once

#include "hboot/distribution.hpp"
#include "hboot/error.hpp"
#include "hboot/rng.hpp"
#include "hboot/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

namespace hboot {

struct SamplePopulation {
    int vertex = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

inline SamplePopulation generate_leaf_population(int vertex, const LeafDistribution& dist, std::int64_t size,
                                                 CounterStream& rng) {
    if (size < 1) throw InvalidArgument("population size must be >= 1");
    check_distribution(dist);
    SamplePopulation pop{vertex, std::vector<double>(static_cast<std::size_t>(size))};
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NormalDist>) {
                std::normal_distribution<double> d(p.mean, std::sqrt(p.variance));
                for (auto& x : pop.values) x = d(rng);
            } else if constexpr (std::is_same_v<T, UniformDist>) {
                std::uniform_real_distribution<double> d(p.lower, p.upper);
                for (auto& x : pop.values) x = d(rng);
            } else {
                std::exponential_distribution<double> d(p.rate);
                for (auto& x : pop.values) x = d(rng);
            }
        },
        dist);
    return pop;
}

inline SamplePopulation generate_leaf_population(int vertex, const LeafDistribution& dist, std::int64_t size,
                                                 const StreamSeeder& seeder) {
    CounterStream rng = seeder.stream(vertex, StreamPurpose::leaf_population);
    return generate_leaf_population(vertex, dist, size, rng);
}

namespace detail {

inline std::size_t draw_index(std::size_t n, CounterStream& rng) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

template <class Lookup>
double evaluate_with_context(const CalcTree& tree, int v, const Lookup& values) {
    try {
        return tree.evaluate(v, values);
    } catch (const DomainError& e) {
        std::ostringstream os;
        os << e.what() << " (inputs:";
        for (int c : tree.children(v)) os << " x" << c << "=" << values(c);
        os << ")";
        throw DomainError(os.str());
    }
}

inline void check_leaf_populations(const CalcTree& tree, const PerVertex<SamplePopulation>& pops) {
    if (pops.size() != tree.size()) throw InvalidArgument("population table does not match the tree size");
    for (int v = 1; v <= tree.leaf_count(); ++v)
        if (pops[v].size() < 1) throw InvalidArgument("leaf " + std::to_string(v) + " has an empty population");
}

} // namespace detail

// All populations H_1..H_k. `populations` must hold the leaf populations; the
// internal entries are overwritten.
inline PerVertex<SamplePopulation> wave_populations(const CalcTree& tree, const PerVertex<std::int64_t>& sizes,
                                                    PerVertex<SamplePopulation> populations,
                                                    const StreamSeeder& seeder) {
    detail::check_leaf_populations(tree, populations);
    if (sizes.size() != tree.size()) throw InvalidArgument("invalid allocation: size vector does not match the tree");
    for (int v = 1; v <= tree.leaf_count(); ++v)
        if (static_cast<std::int64_t>(populations[v].size()) != sizes[v])
            throw InvalidArgument("leaf " + std::to_string(v) + " population has " +
                                  std::to_string(populations[v].size()) + " values, plan says " +
                                  std::to_string(sizes[v]));
    PerVertex<double> drawn(static_cast<std::size_t>(tree.size()), 0.0);
    auto lookup = [&](int id) { return drawn[id]; };
    for (int v = tree.leaf_count() + 1; v <= tree.size(); ++v) {
        if (sizes[v] < 1) throw InvalidArgument("invalid allocation: n_" + std::to_string(v) + " < 1");
        CounterStream rng = seeder.stream(v, StreamPurpose::resample);
        const auto& children = tree.children(v);
        SamplePopulation h{v, std::vector<double>(static_cast<std::size_t>(sizes[v]))};
        for (auto& y : h.values) {
            for (int c : children) {
                const auto& src = populations[c].values;
                drawn[c] = src[detail::draw_index(src.size(), rng)];
            }
            y = detail::evaluate_with_context(tree, v, lookup);
        }
        populations[v] = std::move(h);
    }
    return populations;
}

inline double population_mean(const SamplePopulation& p) {
    double s = 0.0;
    for (double x : p.values) s += x;
    return s / static_cast<double>(p.size());
}

inline double wave_run(const CalcTree& tree, const PerVertex<std::int64_t>& sizes,
                       const PerVertex<SamplePopulation>& leaf_populations, const StreamSeeder& seeder) {
    const auto pops = wave_populations(tree, sizes, leaf_populations, seeder);
    return population_mean(pops[tree.root()]);
}

// r independent leaf-to-root evaluations, each drawing one element per leaf.
inline double sweep_run(const CalcTree& tree, const PerVertex<SamplePopulation>& leaf_populations, std::int64_t r,
                        CounterStream& rng) {
    detail::check_leaf_populations(tree, leaf_populations);
    if (r < 1) throw InvalidArgument("sweep needs r >= 1");
    PerVertex<double> y(static_cast<std::size_t>(tree.size()), 0.0);
    auto lookup = [&](int id) { return y[id]; };
    double sum = 0.0;
    for (std::int64_t l = 0; l < r; ++l) {
        for (int v = 1; v <= tree.leaf_count(); ++v) {
            const auto& src = leaf_populations[v].values;
            y[v] = src[detail::draw_index(src.size(), rng)];
        }
        for (int v = tree.leaf_count() + 1; v <= tree.size(); ++v) y[v] = detail::evaluate_with_context(tree, v, lookup);
        sum += y[tree.root()];
    }
    return sum / static_cast<double>(r);
}

enum class LeafSource { synthetic, fixed };

struct ReplicationConfig {
    std::int64_t replications = 1000;
    std::uint64_t seed = 0;
    LeafSource source = LeafSource::synthetic;
    PerVertex<std::int64_t> sizes;
    // 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct SimulationReport {
    std::uint64_t seed = 0;
    std::int64_t replications = 0;
    std::vector<double> values;
    double mean = 0.0;
    double variance = 0.0;     // unbiased, divisor R - 1
    double se_mean = 0.0;
    double se_variance = 0.0;  // from the fourth central moment

    friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

inline SimulationReport summarize(std::vector<double> values, std::uint64_t seed = 0) {
    SimulationReport rep;
    rep.seed = seed;
    rep.replications = static_cast<std::int64_t>(values.size());
    const auto n = static_cast<double>(values.size());
    if (values.empty()) throw InvalidArgument("no replicates to summarize");
    double sum = 0.0;
    for (double x : values) sum += x;
    rep.mean = sum / n;
    if (values.size() >= 2) {
        double m2 = 0.0, m4 = 0.0;
        for (double x : values) {
            const double d = (x - rep.mean) * (x - rep.mean);
            m2 += d;
            m4 += d * d;
        }
        rep.variance = m2 / (n - 1.0);
        rep.se_mean = std::sqrt(rep.variance / n);
        m4 /= n;
        // Var(s^2) = (mu4 - sigma^4 (n - 3) / (n - 1)) / n
        const double var_s2 = (m4 - rep.variance * rep.variance * (n - 3.0) / (n - 1.0)) / n;
        rep.se_variance = std::sqrt(std::max(0.0, var_s2));
    }
    rep.values = std::move(values);
    return rep;
}

// Source of leaf populations for synthetic replicates: the vertex's own
// distribution if it declares one, otherwise normal(mean, variance).
inline LeafDistribution leaf_distribution(const CalcTree& tree, int v) {
    const auto& spec = tree.vertex(v);
    if (spec.distribution) return *spec.distribution;
    return NormalDist{tree.leaf_mean(v), tree.leaf_variance(v)};
}

inline PerVertex<SamplePopulation> replicate_leaf_populations(const CalcTree& tree, const ReplicationConfig& config,
                                                              const StreamSeeder& seeder) {
    PerVertex<SamplePopulation> pops(static_cast<std::size_t>(tree.size()));
    for (int v = 1; v <= tree.leaf_count(); ++v) {
        const std::int64_t n = config.sizes[v];
        if (config.source == LeafSource::synthetic) {
            pops[v] = generate_leaf_population(v, leaf_distribution(tree, v), n, seeder);
        } else {
            const auto& data = tree.vertex(v).samples;
            if (n < 1 || static_cast<std::size_t>(n) > data.size())
                throw InvalidArgument("leaf " + std::to_string(v) + ": plan asks for " + std::to_string(n) +
                                      " values but " + std::to_string(data.size()) + " samples are available");
            pops[v] = SamplePopulation{v, std::vector<double>(data.begin(), data.begin() + n)};
        }
    }
    return pops;
}

// Theta* of one replicate. Depends only on (tree, config, index).
inline double simulate_replicate(const CalcTree& tree, const ReplicationConfig& config, std::uint64_t index) {
    const StreamSeeder seeder(config.seed, index);
    return wave_run(tree, config.sizes, replicate_leaf_populations(tree, config, seeder), seeder);
}

inline SimulationReport replicate(const ReplicationConfig& config, const CalcTree& tree) {
    if (config.replications < 1) throw InvalidArgument("replications must be >= 1");
    if (config.sizes.size() != tree.size()) throw InvalidArgument("invalid allocation: size vector does not match the tree");
    for (int v = 1; v <= tree.size(); ++v)
        if (config.sizes[v] < 1) throw InvalidArgument("invalid allocation: n_" + std::to_string(v) + " < 1");
    if (config.source == LeafSource::synthetic)
        for (int v = 1; v <= tree.leaf_count(); ++v) check_distribution(leaf_distribution(tree, v));

    const auto total = static_cast<std::size_t>(config.replications);
    std::vector<double> values(total);
    unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_index(workers, total);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const std::size_t lo = total * w / workers;
                const std::size_t hi = total * (w + 1) / workers;
                for (std::size_t i = lo; i < hi; ++i) {
                    try {
                        values[i] = simulate_replicate(tree, config, i);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        error_index[w] = i;
                        return;
                    }
                }
            });
        }
    }
    // Report the failure of the lowest replicate index so errors are schedule independent.
    std::size_t first = total;
    std::exception_ptr err;
    for (unsigned w = 0; w < workers; ++w)
        if (errors[w] && error_index[w] < first) {
            first = error_index[w];
            err = errors[w];
        }
    if (err) std::rethrow_exception(err);
    return summarize(std::move(values), config.seed);
}

} // namespace hboot
