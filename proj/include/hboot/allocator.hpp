// allocator.hpp
//
// Budget-constrained choice of the sample sizes n_1..n_k:
//
//   minimize D(n_1, ..., n_k)   subject to   sum_v a_v n_v <= b,  n_v >= 1 integer.
//
// Three solvers share one result type:
//
//  * backward_dp_grid / forward_recovery: Bellman functions Phi_v(alpha, z) on
//    a grid of alpha values, children queried at alpha + (1 - alpha) / n_v by
//    linear interpolation, then a forward pass that recovers n* and the child
//    budgets z*.
//  * collapsed_dp: since psi_v(alpha) = alpha sigma2_v + (1 - alpha) Cov_v and
//    sigma2_v does not depend on the sizes, Phi_v(alpha, z) = alpha sigma2_v +
//    (1 - alpha) K_v(z) with K_v(z) the least achievable Cov_v. The DP runs
//    over z only and is exact.
//  * brute_force_oracle: exhaustive enumeration, for tests.
//
// Ties are broken by the smallest n_v; among equal child budget splits the
// lower-id children receive the larger share.
#pragma once

#include "hboot/error.hpp"
#include "hboot/variance_model.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hboot {

inline constexpr double infeasible = std::numeric_limits<double>::infinity();
inline constexpr std::int64_t default_max_budget = 1'000'000;

class AlphaGrid {
public:
    explicit AlphaGrid(std::vector<double> points) : points_(std::move(points)) {
        if (points_.size() < 2 || points_.front() != 0.0 || points_.back() != 1.0)
            throw InvalidArgument("alpha grid must start at 0 and end at 1");
        for (std::size_t i = 1; i < points_.size(); ++i)
            if (!(points_[i] > points_[i - 1])) throw InvalidArgument("alpha grid must be strictly increasing");
    }

    static AlphaGrid uniform(int count = 101) {
        if (count < 2) throw InvalidArgument("alpha grid needs at least 2 points");
        std::vector<double> p(static_cast<std::size_t>(count));
        for (int g = 0; g < count; ++g) p[static_cast<std::size_t>(g)] = static_cast<double>(g) / (count - 1);
        p.back() = 1.0;
        return AlphaGrid(std::move(p));
    }

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t g) const { return points_[g]; }
    const std::vector<double>& points() const { return points_; }

    std::optional<std::size_t> index_of(double alpha) const {
        auto it = std::lower_bound(points_.begin(), points_.end(), alpha);
        if (it != points_.end() && *it == alpha) return static_cast<std::size_t>(it - points_.begin());
        return std::nullopt;
    }

    // Interval [lo, lo + 1] containing alpha and the weight of the upper end.
    std::pair<std::size_t, double> locate(double alpha) const {
        if (alpha <= 0.0) return {0, 0.0};
        if (alpha >= 1.0) return {points_.size() - 2, 1.0};
        auto it = std::upper_bound(points_.begin(), points_.end(), alpha);
        const auto hi = static_cast<std::size_t>(it - points_.begin());
        const std::size_t lo = hi - 1;
        return {lo, (alpha - points_[lo]) / (points_[hi] - points_[lo])};
    }

private:
    std::vector<double> points_;
};

struct OptimizationResult {
    std::string method;
    PerVertex<std::int64_t> sizes;    // n*_v
    PerVertex<std::int64_t> budgets;  // z*_v, the budget handed to the subtree of v
    PerVertex<double> alphas;         // alpha_v = alpha_parent + (1 - alpha_parent) / n*_v
    PerVertex<std::int64_t> costs;
    std::int64_t budget = 0;
    double variance = 0.0;            // D* = Phi_k(0, b)

    std::int64_t total_cost() const {
        std::int64_t t = 0;
        for (int v = 1; v <= sizes.size(); ++v) t += costs[v] * sizes[v];
        return t;
    }

    AllocationPlan plan() const { return AllocationPlan{sizes, costs, budget}; }
};

namespace detail {

struct DpSetup {
    PerVertex<std::int64_t> costs;
    PerVertex<std::int64_t> min_cost;           // cost of the subtree with every n = 1
    PerVertex<std::int64_t> children_min_cost;  // sum of min_cost over the children
    std::int64_t budget = 0;
};

inline DpSetup prepare(const VarianceModel& model, std::int64_t budget, const PerVertex<std::int64_t>& costs,
                       std::int64_t max_budget) {
    const CalcTree& tree = model.tree();
    if (costs.size() != tree.size()) throw InvalidArgument("cost vector does not match the tree size");
    if (budget < 0) throw InvalidArgument("budget must be non-negative");
    if (budget > max_budget)
        throw InvalidArgument("budget " + std::to_string(budget) + " exceeds the limit " + std::to_string(max_budget));
    DpSetup s{costs, PerVertex<std::int64_t>(static_cast<std::size_t>(tree.size()), 0),
              PerVertex<std::int64_t>(static_cast<std::size_t>(tree.size()), 0), budget};
    for (int v = 1; v <= tree.size(); ++v) {
        if (costs[v] < 1)
            throw InvalidArgument("vertex " + std::to_string(v) +
                                  ": optimization needs positive costs (a zero cost leaves n_v unbounded)");
        for (int c : tree.children(v)) s.children_min_cost[v] += s.min_cost[c];
        s.min_cost[v] = costs[v] + s.children_min_cost[v];
    }
    if (budget < s.min_cost[tree.root()])
        throw InfeasibleError("infeasible: budget " + std::to_string(budget) + " is below the all-ones cost " +
                              std::to_string(s.min_cost[tree.root()]));
    return s;
}

// Least weighted sum over children under a shared budget, computed by folding
// the children in one at a time: F_j(w) = min_z F_{j-1}(w - z) + weight_j row_j[z].
class SplitFold {
public:
    SplitFold() = default;

    SplitFold(std::span<const std::vector<double>> rows, std::span<const double> weights, std::int64_t max_w) {
        const auto width = static_cast<std::size_t>(max_w + 1);
        std::vector<double> prev(width, 0.0);
        std::vector<double> cur(width);
        arg_.assign(rows.size(), std::vector<std::int64_t>(width, -1));
        for (std::size_t j = 0; j < rows.size(); ++j) {
            const auto& row = rows[j];
            std::fill(cur.begin(), cur.end(), infeasible);
            for (std::size_t w = 0; w < width; ++w) {
                double best = infeasible;
                std::int64_t arg = -1;
                for (std::size_t z = 0; z <= w; ++z) {
                    if (row[z] == infeasible || prev[w - z] == infeasible) continue;
                    const double cand = prev[w - z] + weights[j] * row[z];
                    if (cand < best) {
                        best = cand;
                        arg = static_cast<std::int64_t>(z);
                    }
                }
                cur[w] = best;
                arg_[j][w] = arg;
            }
            std::swap(prev, cur);
        }
        best_ = std::move(prev);
    }

    double best(std::int64_t w) const { return best_[static_cast<std::size_t>(w)]; }

    // Child budgets (in child order) attaining best(w).
    std::vector<std::int64_t> split(std::int64_t w) const {
        std::vector<std::int64_t> z(arg_.size());
        for (std::size_t j = arg_.size(); j-- > 0;) {
            const std::int64_t zj = arg_[j][static_cast<std::size_t>(w)];
            if (zj < 0) throw Error("internal error: missing split record");
            z[j] = zj;
            w -= zj;
        }
        return z;
    }

private:
    std::vector<double> best_;
    std::vector<std::vector<std::int64_t>> arg_;
};

inline std::int64_t leaf_size(std::int64_t z, std::int64_t cost) { return z / cost; }

} // namespace detail

// ---------------------------------------------------------------------------
// Bellman table on an alpha grid

struct BellmanChoice {
    std::int64_t n = 0;  // 0 marks an infeasible cell
    std::vector<std::int64_t> split;
};

class BellmanTable {
public:
    BellmanTable(AlphaGrid grid, std::int64_t budget, int vertices)
        : grid_(std::move(grid)), budget_(budget),
          values_(static_cast<std::size_t>(vertices),
                  std::vector<double>(grid_.size() * static_cast<std::size_t>(budget + 1), infeasible)),
          choices_(static_cast<std::size_t>(vertices),
                   std::vector<BellmanChoice>(grid_.size() * static_cast<std::size_t>(budget + 1))) {}

    const AlphaGrid& grid() const { return grid_; }
    std::int64_t budget() const { return budget_; }

    double value(int v, std::size_t g, std::int64_t z) const { return values_[v][index(g, z)]; }
    const BellmanChoice& choice(int v, std::size_t g, std::int64_t z) const { return choices_[v][index(g, z)]; }
    double& value(int v, std::size_t g, std::int64_t z) { return values_[v][index(g, z)]; }
    BellmanChoice& choice(int v, std::size_t g, std::int64_t z) { return choices_[v][index(g, z)]; }

    // Phi_v(alpha, z) for every z, interpolating linearly between grid points.
    std::vector<double> row_at(int v, double alpha) const {
        const auto [lo, t] = grid_.locate(alpha);
        std::vector<double> row(static_cast<std::size_t>(budget_ + 1));
        for (std::int64_t z = 0; z <= budget_; ++z) {
            const double a = value(v, lo, z);
            const double b = value(v, lo + 1, z);
            if (a == infeasible || b == infeasible) row[static_cast<std::size_t>(z)] = infeasible;
            else if (t == 0.0) row[static_cast<std::size_t>(z)] = a;
            else if (t == 1.0) row[static_cast<std::size_t>(z)] = b;
            else row[static_cast<std::size_t>(z)] = (1.0 - t) * a + t * b;
        }
        return row;
    }

    double value_at(int v, double alpha, std::int64_t z) const { return row_at(v, alpha)[static_cast<std::size_t>(z)]; }

    PerVertex<std::int64_t> costs;
    PerVertex<std::int64_t> children_min_cost;

private:
    std::size_t index(std::size_t g, std::int64_t z) const {
        return g * static_cast<std::size_t>(budget_ + 1) + static_cast<std::size_t>(z);
    }

    AlphaGrid grid_;
    std::int64_t budget_;
    PerVertex<std::vector<double>> values_;
    PerVertex<std::vector<BellmanChoice>> choices_;
};

namespace detail {

struct LocalSolution {
    std::vector<double> value;  // indexed by z = 0..max_z
    std::vector<BellmanChoice> choice;
};

// min over n_v and child budgets of sum_i g_vi^2 Phi_i(alpha + (1 - alpha) / n_v, z_i),
// subject to a_v n_v + sum_i z_i <= z, for every z in 0..max_z.
inline LocalSolution solve_vertex(const VarianceModel& model, const BellmanTable& table, int v, double alpha,
                                  std::int64_t max_z) {
    const CalcTree& tree = model.tree();
    const auto& children = tree.children(v);
    const std::int64_t a = table.costs[v];
    const std::int64_t reserve = table.children_min_cost[v];
    LocalSolution out{std::vector<double>(static_cast<std::size_t>(max_z + 1), infeasible),
                      std::vector<BellmanChoice>(static_cast<std::size_t>(max_z + 1))};
    for (std::int64_t n = 1; a * n + reserve <= max_z; ++n) {
        const double beta = alpha + (1.0 - alpha) / static_cast<double>(n);
        std::vector<std::vector<double>> rows;
        rows.reserve(children.size());
        for (int c : children) rows.push_back(table.row_at(c, beta));
        const std::int64_t span_w = max_z - a * n;
        const SplitFold fold(rows, model.weights()[v], span_w);
        for (std::int64_t z = a * n + reserve; z <= max_z; ++z) {
            const double cand = fold.best(z - a * n);
            auto& slot = out.value[static_cast<std::size_t>(z)];
            if (cand < slot) {
                slot = cand;
                out.choice[static_cast<std::size_t>(z)] = BellmanChoice{n, fold.split(z - a * n)};
            }
        }
    }
    return out;
}

} // namespace detail

inline BellmanTable backward_dp_grid(const VarianceModel& model, std::int64_t budget,
                                     const PerVertex<std::int64_t>& costs, const AlphaGrid& grid = AlphaGrid::uniform(),
                                     std::int64_t max_budget = default_max_budget) {
    const auto setup = detail::prepare(model, budget, costs, max_budget);
    const CalcTree& tree = model.tree();
    BellmanTable table(grid, budget, tree.size());
    table.costs = setup.costs;
    table.children_min_cost = setup.children_min_cost;

    for (int v = 1; v <= tree.size(); ++v) {
        if (tree.is_leaf(v)) {
            const double s2 = model.sigma2()[v];
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const double alpha = grid[g];
                for (std::int64_t z = 0; z <= budget; ++z) {
                    const std::int64_t q = detail::leaf_size(z, costs[v]);
                    if (q < 1) continue;
                    table.value(v, g, z) = s2 * (alpha + (1.0 - alpha) * (1.0 / static_cast<double>(q)));
                    table.choice(v, g, z) = BellmanChoice{q, {}};
                }
            }
            continue;
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
            auto local = detail::solve_vertex(model, table, v, grid[g], budget);
            for (std::int64_t z = 0; z <= budget; ++z) {
                table.value(v, g, z) = local.value[static_cast<std::size_t>(z)];
                table.choice(v, g, z) = std::move(local.choice[static_cast<std::size_t>(z)]);
            }
        }
    }
    return table;
}

inline OptimizationResult forward_recovery(const VarianceModel& model, const BellmanTable& table,
                                           std::int64_t budget) {
    const CalcTree& tree = model.tree();
    if (budget != table.budget()) throw InvalidArgument("table was computed for a different budget");
    const int k = tree.size();
    OptimizationResult r;
    r.method = "grid";
    r.sizes = PerVertex<std::int64_t>(static_cast<std::size_t>(k), 0);
    r.budgets = PerVertex<std::int64_t>(static_cast<std::size_t>(k), 0);
    r.alphas = PerVertex<double>(static_cast<std::size_t>(k), 0.0);
    r.costs = table.costs;
    r.budget = budget;
    r.variance = table.value(k, 0, budget);
    if (r.variance == infeasible) throw InfeasibleError("infeasible: no allocation fits the budget");

    // Incoming alpha of each vertex: alpha of its parent after the parent's own update.
    PerVertex<double> incoming(static_cast<std::size_t>(k), 0.0);
    r.budgets[k] = budget;
    for (int v = k; v >= 1; --v) {
        const double alpha_in = incoming[v];
        const std::int64_t z = r.budgets[v];
        if (tree.is_leaf(v)) {
            r.sizes[v] = detail::leaf_size(z, table.costs[v]);
            if (r.sizes[v] < 1) throw Error("internal error: leaf " + std::to_string(v) + " received no budget");
            r.alphas[v] = alpha_in + (1.0 - alpha_in) / static_cast<double>(r.sizes[v]);
            continue;
        }
        BellmanChoice choice;
        if (auto g = table.grid().index_of(alpha_in)) {
            choice = table.choice(v, *g, z);
        } else {
            // Off-grid alpha: redo this vertex's minimisation at the exact alpha.
            choice = detail::solve_vertex(model, table, v, alpha_in, z).choice[static_cast<std::size_t>(z)];
        }
        if (choice.n < 1) throw Error("internal error: no recorded choice at vertex " + std::to_string(v));
        r.sizes[v] = choice.n;
        r.alphas[v] = alpha_in + (1.0 - alpha_in) / static_cast<double>(choice.n);
        const auto& ch = tree.children(v);
        for (std::size_t j = 0; j < ch.size(); ++j) {
            r.budgets[ch[j]] = choice.split[j];
            incoming[ch[j]] = r.alphas[v];
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Exact DP over budgets only

struct CollapsedTable {
    std::int64_t budget = 0;
    PerVertex<std::vector<double>> least_cov;      // K_v(z)
    PerVertex<std::vector<std::int64_t>> best_n;   // argmin n_v per z
    PerVertex<detail::SplitFold> folds;
    PerVertex<std::int64_t> costs;

    // Phi_v(alpha, z) = alpha sigma2_v + (1 - alpha) K_v(z)
    double phi(const VarianceModel& model, int v, double alpha, std::int64_t z) const {
        const double k = least_cov[v][static_cast<std::size_t>(z)];
        if (k == infeasible) return infeasible;
        return alpha * model.sigma2()[v] + (1.0 - alpha) * k;
    }
};

inline CollapsedTable collapsed_table(const VarianceModel& model, std::int64_t budget,
                                      const PerVertex<std::int64_t>& costs,
                                      std::int64_t max_budget = default_max_budget) {
    const auto setup = detail::prepare(model, budget, costs, max_budget);
    const CalcTree& tree = model.tree();
    const auto k = static_cast<std::size_t>(tree.size());
    const auto width = static_cast<std::size_t>(budget + 1);
    CollapsedTable t{budget, PerVertex<std::vector<double>>(k, std::vector<double>(width, infeasible)),
                     PerVertex<std::vector<std::int64_t>>(k, std::vector<std::int64_t>(width, 0)),
                     PerVertex<detail::SplitFold>(k), costs};

    for (int v = 1; v <= tree.size(); ++v) {
        const double s2 = model.sigma2()[v];
        auto& K = t.least_cov[v];
        auto& N = t.best_n[v];
        if (tree.is_leaf(v)) {
            for (std::int64_t z = 0; z <= budget; ++z) {
                const std::int64_t q = detail::leaf_size(z, costs[v]);
                if (q < 1) continue;
                K[static_cast<std::size_t>(z)] = s2 / static_cast<double>(q);
                N[static_cast<std::size_t>(z)] = q;
            }
            continue;
        }
        std::vector<std::vector<double>> rows;
        for (int c : tree.children(v)) rows.push_back(t.least_cov[c]);
        t.folds[v] = detail::SplitFold(rows, model.weights()[v], budget);
        const auto& fold = t.folds[v];
        const std::int64_t a = costs[v];
        for (std::int64_t z = 0; z <= budget; ++z) {
            double best = infeasible;
            std::int64_t arg = 0;
            for (std::int64_t n = 1; a * n + setup.children_min_cost[v] <= z; ++n) {
                const double nn = static_cast<double>(n);
                const double cand = s2 / nn + (1.0 - 1.0 / nn) * fold.best(z - a * n);
                if (cand < best) {
                    best = cand;
                    arg = n;
                }
            }
            K[static_cast<std::size_t>(z)] = best;
            N[static_cast<std::size_t>(z)] = arg;
        }
    }
    return t;
}

inline OptimizationResult recover_collapsed(const VarianceModel& model, const CollapsedTable& t) {
    const CalcTree& tree = model.tree();
    const int k = tree.size();
    OptimizationResult r;
    r.method = "collapsed";
    r.sizes = PerVertex<std::int64_t>(static_cast<std::size_t>(k), 0);
    r.budgets = PerVertex<std::int64_t>(static_cast<std::size_t>(k), 0);
    r.alphas = PerVertex<double>(static_cast<std::size_t>(k), 0.0);
    r.costs = t.costs;
    r.budget = t.budget;
    r.variance = t.least_cov[k][static_cast<std::size_t>(t.budget)];
    if (r.variance == infeasible) throw InfeasibleError("infeasible: no allocation fits the budget");

    PerVertex<double> incoming(static_cast<std::size_t>(k), 0.0);
    r.budgets[k] = t.budget;
    for (int v = k; v >= 1; --v) {
        const std::int64_t z = r.budgets[v];
        const std::int64_t n = t.best_n[v][static_cast<std::size_t>(z)];
        if (n < 1) throw Error("internal error: no recorded choice at vertex " + std::to_string(v));
        r.sizes[v] = tree.is_leaf(v) ? detail::leaf_size(z, t.costs[v]) : n;
        r.alphas[v] = incoming[v] + (1.0 - incoming[v]) / static_cast<double>(r.sizes[v]);
        if (tree.is_leaf(v)) continue;
        const auto split = t.folds[v].split(z - t.costs[v] * n);
        const auto& ch = tree.children(v);
        for (std::size_t j = 0; j < ch.size(); ++j) {
            r.budgets[ch[j]] = split[j];
            incoming[ch[j]] = r.alphas[v];
        }
    }
    return r;
}

inline OptimizationResult collapsed_dp(const VarianceModel& model, std::int64_t budget,
                                       const PerVertex<std::int64_t>& costs,
                                       std::int64_t max_budget = default_max_budget) {
    return recover_collapsed(model, collapsed_table(model, budget, costs, max_budget));
}

inline OptimizationResult grid_dp(const VarianceModel& model, std::int64_t budget, const PerVertex<std::int64_t>& costs,
                                  const AlphaGrid& grid = AlphaGrid::uniform(),
                                  std::int64_t max_budget = default_max_budget) {
    return forward_recovery(model, backward_dp_grid(model, budget, costs, grid, max_budget), budget);
}

// ---------------------------------------------------------------------------
// Exhaustive search

inline constexpr std::int64_t default_oracle_space = 10'000'000;

inline OptimizationResult brute_force_oracle(const VarianceModel& model, std::int64_t budget,
                                             const PerVertex<std::int64_t>& costs, std::int64_t cap,
                                             std::int64_t max_space = default_oracle_space) {
    const CalcTree& tree = model.tree();
    const int k = tree.size();
    if (costs.size() != k) throw InvalidArgument("cost vector does not match the tree size");
    if (cap < 1) throw InvalidArgument("oracle cap must be >= 1");
    std::int64_t base = 0;
    for (int v = 1; v <= k; ++v) {
        if (costs[v] < 0) throw InvalidArgument("negative cost at vertex " + std::to_string(v));
        base += costs[v];
    }
    if (budget < base)
        throw InfeasibleError("infeasible: budget " + std::to_string(budget) + " is below the all-ones cost " +
                              std::to_string(base));

    PerVertex<std::int64_t> upper(static_cast<std::size_t>(k), 0);
    for (int v = 1; v <= k; ++v) {
        std::int64_t hi = cap;
        if (costs[v] > 0) hi = std::min(hi, (budget - (base - costs[v])) / costs[v]);
        upper[v] = hi;
    }
    // Number of feasible allocations: ways[s] counts prefixes spending exactly s.
    std::vector<double> ways(static_cast<std::size_t>(budget) + 1, 0.0);
    ways[0] = 1.0;
    for (int v = 1; v <= k; ++v) {
        std::vector<double> next(ways.size(), 0.0);
        for (std::int64_t s = 0; s <= budget; ++s) {
            if (ways[static_cast<std::size_t>(s)] == 0.0) continue;
            for (std::int64_t x = 1; x <= upper[v]; ++x) {
                const std::int64_t t = s + costs[v] * x;
                if (t > budget) break;
                next[static_cast<std::size_t>(t)] += ways[static_cast<std::size_t>(s)];
            }
        }
        ways = std::move(next);
    }
    double space = 0.0;
    for (double w : ways) space += w;
    if (space > static_cast<double>(max_space))
        throw InvalidArgument("search space too large: " + std::to_string(static_cast<long double>(space)) +
                              " allocations");

    PerVertex<std::int64_t> n(static_cast<std::size_t>(k), 1);
    PerVertex<std::int64_t> best_n = n;
    double best = infeasible;
    // Lexicographic order with n_1 varying slowest; the first minimum found wins ties.
    auto recurse = [&](auto&& self, int v, std::int64_t spent) -> void {
        if (v > k) {
            const double d = estimator_variance(model, n);
            if (d < best) {
                best = d;
                best_n = n;
            }
            return;
        }
        std::int64_t rest = 0;
        for (int w = v + 1; w <= k; ++w) rest += costs[w];
        for (std::int64_t x = 1; x <= upper[v]; ++x) {
            const std::int64_t s = spent + costs[v] * x;
            if (s + rest > budget) break;
            n[v] = x;
            self(self, v + 1, s);
        }
        n[v] = 1;
    };
    recurse(recurse, 1, 0);

    OptimizationResult r;
    r.method = "brute-force";
    r.sizes = best_n;
    r.costs = costs;
    r.budget = budget;
    r.variance = best;
    r.budgets = PerVertex<std::int64_t>(static_cast<std::size_t>(k), 0);
    r.alphas = PerVertex<double>(static_cast<std::size_t>(k), 0.0);
    for (int v = 1; v <= k; ++v) r.budgets[v] = costs[v] * best_n[v];
    for (int v = 1; v <= k; ++v)
        for (int c : tree.children(v)) r.budgets[v] += r.budgets[c];
    r.budgets[k] = budget;
    PerVertex<double> incoming(static_cast<std::size_t>(k), 0.0);
    for (int v = k; v >= 1; --v) {
        r.alphas[v] = incoming[v] + (1.0 - incoming[v]) / static_cast<double>(best_n[v]);
        for (int c : tree.children(v)) incoming[c] = r.alphas[v];
    }
    return r;
}

} // namespace hboot
