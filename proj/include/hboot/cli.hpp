// cli.hpp
//
// Command dispatch behind the hboot tool. Kept in the library so tests can
// drive every command in-process.
//
// Exit status: 0 success, 1 domain/validation/input error, 2 infeasible budget.
#pragma once

#include "hboot/allocator.hpp"
#include "hboot/error.hpp"
#include "hboot/simulation.hpp"
#include "hboot/tree_io.hpp"
#include "hboot/variance_model.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hboot::cli {

enum class Command { validate, variance, optimize, simulate, oracle_check };
enum class OutputFormat { human, json };
enum class Method { collapsed, grid };

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_infeasible = 2;

// Tolerances of the oracle-check command.
inline constexpr double oracle_tolerance = 1e-12;
inline constexpr double grid_tolerance = 1e-9;

struct RunConfig {
    Command command = Command::validate;
    std::string tree_path;
    std::optional<std::int64_t> budget;
    std::vector<std::pair<int, std::int64_t>> cost_overrides;
    std::optional<std::vector<std::int64_t>> sizes;
    int alpha_grid = 101;
    std::int64_t replications = 10000;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::human;
    Method method = Method::collapsed;
    LeafSource leaf_source = LeafSource::synthetic;
    bool emit_values = false;
    std::optional<std::int64_t> oracle_cap;
    unsigned threads = 0;
};

inline std::vector<std::int64_t> parse_sizes(std::string_view text) {
    std::vector<std::int64_t> out;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InvalidArgument("bad size list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidArgument("empty size list");
    return out;
}

// "3=2,1=4" -> {(3, 2), (1, 4)}
inline std::vector<std::pair<int, std::int64_t>> parse_cost_spec(std::string_view text) {
    std::vector<std::pair<int, std::int64_t>> out;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidArgument("cost override '" + item + "' is not VERTEX=COST");
        try {
            std::size_t u1 = 0, u2 = 0;
            const std::string lhs = item.substr(0, eq), rhs = item.substr(eq + 1);
            const int id = std::stoi(lhs, &u1);
            const long long cost = std::stoll(rhs, &u2);
            if (u1 != lhs.size() || u2 != rhs.size()) throw std::invalid_argument("trailing characters");
            out.emplace_back(id, cost);
        } catch (const std::exception&) {
            throw InvalidArgument("cost override '" + item + "' is not VERTEX=COST");
        }
    }
    return out;
}

namespace detail {

inline PerVertex<std::int64_t> effective_costs(const CalcTree& tree, const RunConfig& cfg) {
    PerVertex<std::int64_t> costs = tree.costs();
    for (const auto& [id, cost] : cfg.cost_overrides) {
        if (id < 1 || id > tree.size()) throw InvalidArgument("cost override for unknown vertex " + std::to_string(id));
        if (cost < 0) throw InvalidArgument("cost override for vertex " + std::to_string(id) + " is negative");
        costs[id] = cost;
    }
    return costs;
}

inline PerVertex<std::int64_t> plan_sizes(const CalcTree& tree, const RunConfig& cfg) {
    if (!cfg.sizes) throw InvalidArgument("--sizes is required for this command");
    if (static_cast<int>(cfg.sizes->size()) != tree.size())
        throw InvalidArgument("invalid allocation: --sizes has " + std::to_string(cfg.sizes->size()) +
                              " entries, the tree has " + std::to_string(tree.size()) + " vertices");
    return PerVertex<std::int64_t>(*cfg.sizes);
}

inline std::int64_t require_budget(const RunConfig& cfg) {
    if (!cfg.budget) throw InvalidArgument("--budget is required for this command");
    if (*cfg.budget < 0) throw InvalidArgument("--budget must be >= 0");
    return *cfg.budget;
}

inline std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

template <class T>
std::string tuple_text(const PerVertex<T>& v) {
    std::ostringstream os;
    os << '(';
    for (int i = 1; i <= v.size(); ++i) {
        if (i > 1) os << ", ";
        if constexpr (std::is_floating_point_v<T>) os << num(v[i]);
        else os << v[i];
    }
    os << ')';
    return os.str();
}

inline nlohmann::ordered_json result_json(const OptimizationResult& r) {
    nlohmann::ordered_json j;
    j["sizes"] = r.sizes.values();
    j["budgets"] = r.budgets.values();
    j["variance"] = r.variance;
    j["alphas"] = r.alphas.values();
    return j;
}

inline void print_result(std::ostream& out, const std::string& title, const OptimizationResult& r) {
    out << title << '\n';
    out << "  n*       = " << tuple_text(r.sizes) << '\n';
    out << "  z*       = " << tuple_text(r.budgets) << '\n';
    out << "  alpha    = " << tuple_text(r.alphas) << '\n';
    out << "  cost     = " << r.total_cost() << " of " << r.budget << '\n';
    out << "  D*       = " << num(r.variance) << '\n';
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const CalcTree tree = parse_tree_unchecked(read_text_file(cfg.tree_path),
                                               std::filesystem::path(cfg.tree_path).parent_path());
    const auto violations = validate_tree(tree);
    if (cfg.format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["valid"] = violations.empty();
        j["vertices"] = tree.size();
        j["leaves"] = tree.leaf_count();
        j["violations"] = nlohmann::ordered_json::array();
        for (const auto& v : violations)
            j["violations"].push_back({{"vertex", v.vertex}, {"rule", v.rule}, {"detail", v.detail}});
        out << j.dump(2) << '\n';
    } else if (violations.empty()) {
        out << "ok: " << tree.size() << " vertices, " << tree.leaf_count() << " leaves, root " << tree.root() << '\n';
    } else {
        for (const auto& v : violations) out << "violation: " << v.to_string() << '\n';
    }
    return violations.empty() ? exit_ok : exit_error;
}

inline int cmd_variance(const RunConfig& cfg, std::ostream& out) {
    const VarianceModel model(load_tree(cfg.tree_path));
    const auto sizes = plan_sizes(model.tree(), cfg);
    const auto costs = effective_costs(model.tree(), cfg);
    const MomentState state = pair_cov_recursion(model, sizes);
    const AllocationPlan plan{sizes, costs, cfg.budget.value_or(0)};
    const int k = model.size();
    const double d = state[k].draw_cov;
    std::optional<double> bias;
    try {
        bias = mean_bias_second_order(model.tree());
    } catch (const DomainError&) {
    }

    if (cfg.format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["variance"] = d;
        j["sizes"] = sizes.values();
        j["total_cost"] = plan.total_cost();
        j["feasible"] = cfg.budget ? nlohmann::ordered_json(plan.feasible()) : nlohmann::ordered_json(nullptr);
        j["mean"] = model.means()[k];
        j["mean_bias"] = bias ? nlohmann::ordered_json(*bias) : nlohmann::ordered_json(nullptr);
        j["moments"] = nlohmann::ordered_json::array();
        for (int v = 1; v <= k; ++v)
            j["moments"].push_back({{"id", v},
                                    {"mean", state[v].mean},
                                    {"sigma2", state[v].variance},
                                    {"distinct_cov", state[v].distinct_cov},
                                    {"draw_cov", state[v].draw_cov}});
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    out << "D Theta* = " << num(d) << '\n';
    out << "sizes    = " << tuple_text(sizes) << ", cost " << plan.total_cost();
    if (cfg.budget) out << (plan.feasible() ? " (within budget " : " (EXCEEDS budget ") << *cfg.budget << ")";
    out << '\n';
    out << "mean     = " << num(model.means()[k]);
    if (bias) out << "  (second-order bias estimate " << num(*bias) << ")";
    out << '\n';
    out << std::setw(6) << "vertex" << std::setw(16) << "mean" << std::setw(16) << "sigma2" << std::setw(16) << "C"
        << std::setw(16) << "Cov" << '\n';
    for (int v = 1; v <= k; ++v)
        out << std::setw(6) << v << std::setw(16) << num(state[v].mean) << std::setw(16) << num(state[v].variance)
            << std::setw(16) << num(state[v].distinct_cov) << std::setw(16) << num(state[v].draw_cov) << '\n';
    return exit_ok;
}

inline int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
    const VarianceModel model(load_tree(cfg.tree_path));
    const auto budget = require_budget(cfg);
    const auto costs = effective_costs(model.tree(), cfg);
    const OptimizationResult r = cfg.method == Method::grid
                                     ? grid_dp(model, budget, costs, AlphaGrid::uniform(cfg.alpha_grid))
                                     : collapsed_dp(model, budget, costs);
    if (cfg.format == OutputFormat::json) {
        out << result_json(r).dump(2) << '\n';
    } else {
        print_result(out, std::string("optimal allocation (") + r.method + " DP)", r);
    }
    return exit_ok;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const CalcTree tree = load_tree(cfg.tree_path);
    ReplicationConfig rc;
    rc.replications = cfg.replications;
    rc.seed = cfg.seed;
    rc.source = cfg.leaf_source;
    rc.sizes = plan_sizes(tree, cfg);
    rc.threads = cfg.threads;
    const SimulationReport rep = replicate(rc, tree);
    std::optional<double> analytic;
    try {
        analytic = estimator_variance(VarianceModel(tree), rc.sizes);
    } catch (const DomainError&) {
    }

    if (cfg.format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["seed"] = rep.seed;
        j["replications"] = rep.replications;
        j["leaf_source"] = cfg.leaf_source == LeafSource::synthetic ? "synthetic" : "fixed";
        j["mean"] = rep.mean;
        j["variance"] = rep.variance;
        j["se_mean"] = rep.se_mean;
        j["se_variance"] = rep.se_variance;
        j["analytic_variance"] = analytic ? nlohmann::ordered_json(*analytic) : nlohmann::ordered_json(nullptr);
        if (cfg.emit_values) j["values"] = rep.values;
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    out << "seed              = " << rep.seed << '\n';
    out << "replications      = " << rep.replications << '\n';
    out << "mean Theta*       = " << num(rep.mean) << " +- " << num(rep.se_mean) << '\n';
    out << "variance Theta*   = " << num(rep.variance) << " +- " << num(rep.se_variance) << '\n';
    if (analytic) out << "analytic variance = " << num(*analytic) << '\n';
    if (cfg.emit_values)
        for (double v : rep.values) out << std::setprecision(17) << v << '\n';
    return exit_ok;
}

inline int cmd_oracle_check(const RunConfig& cfg, std::ostream& out) {
    const VarianceModel model(load_tree(cfg.tree_path));
    const auto budget = require_budget(cfg);
    const auto costs = effective_costs(model.tree(), cfg);
    const auto collapsed = collapsed_dp(model, budget, costs);
    const auto grid = grid_dp(model, budget, costs, AlphaGrid::uniform(cfg.alpha_grid));
    const auto oracle = brute_force_oracle(model, budget, costs, cfg.oracle_cap.value_or(budget));

    struct Check {
        std::string name;
        bool pass;
    };
    auto self_consistent = [&](const OptimizationResult& r) {
        return r.plan().feasible() && std::abs(estimator_variance(model, r.sizes) - r.variance) <= grid_tolerance;
    };
    const std::vector<Check> checks{
        {"collapsed D* == oracle D*", std::abs(collapsed.variance - oracle.variance) <= oracle_tolerance},
        {"grid D* == collapsed D*", std::abs(grid.variance - collapsed.variance) <= grid_tolerance},
        {"collapsed allocation feasible and consistent", self_consistent(collapsed)},
        {"grid allocation feasible and consistent", self_consistent(grid)},
    };
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.pass;

    if (cfg.format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["collapsed"] = result_json(collapsed);
        j["grid"] = result_json(grid);
        j["oracle"] = result_json(oracle);
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}});
        j["pass"] = ok;
        out << j.dump(2) << '\n';
    } else {
        print_result(out, "collapsed DP", collapsed);
        print_result(out, "grid DP", grid);
        print_result(out, "brute-force oracle", oracle);
        for (const auto& c : checks) out << (c.pass ? "PASS  " : "FAIL  ") << c.name << '\n';
    }
    return ok ? exit_ok : exit_error;
}

} // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
        case Command::validate: return detail::cmd_validate(cfg, out);
        case Command::variance: return detail::cmd_variance(cfg, out);
        case Command::optimize: return detail::cmd_optimize(cfg, out);
        case Command::simulate: return detail::cmd_simulate(cfg, out);
        case Command::oracle_check: return detail::cmd_oracle_check(cfg, out);
        }
    } catch (const InfeasibleError& e) {
        err << "error [allocator]: " << e.what() << '\n';
        return exit_infeasible;
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) err << "error [tree]: " << v.to_string() << '\n';
        return exit_error;
    } catch (const SyntaxError& e) {
        err << "error [tree]: " << e.what() << '\n';
        return exit_error;
    } catch (const SemanticError& e) {
        err << "error [tree]: " << e.what() << '\n';
        return exit_error;
    } catch (const IoError& e) {
        err << "error [io]: " << e.what() << '\n';
        return exit_error;
    } catch (const DomainError& e) {
        err << "error [model]: " << e.what() << '\n';
        return exit_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}

} // namespace hboot::cli
