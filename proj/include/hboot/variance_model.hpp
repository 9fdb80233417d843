// variance_model.hpp
//
// First-order (delta method) variance of the hierarchical bootstrap estimator.
//
// For a population H_v of size n_v, two independent uniform draws X_v, X_v'
// hit the same element with probability 1/n_v, so
//
//   Cov_v = sigma2_v / n_v + (1 - 1/n_v) C_v
//
// where C_v is the covariance of two distinct elements of H_v. Leaves have
// C_v = 0. An internal element combines independent draws from each child, so
//
//   sigma2_v = sum_i g_vi^2 sigma2_i          C_v = sum_i g_vi^2 Cov_i
//
// with g_vi the partial derivative of phi_v at the children's means. The
// estimator variance is Cov at the root.
#pragma once

#include "hboot/error.hpp"
#include "hboot/tree.hpp"

#include <cstdint>
#include <string>

namespace hboot {

struct AllocationPlan {
    PerVertex<std::int64_t> sizes;
    PerVertex<std::int64_t> costs;
    std::int64_t budget = 0;

    std::int64_t total_cost() const {
        std::int64_t total = 0;
        for (int v = 1; v <= sizes.size(); ++v) total += costs[v] * sizes[v];
        return total;
    }

    bool sizes_valid() const {
        for (auto n : sizes)
            if (n < 1) return false;
        return true;
    }

    bool feasible() const { return sizes_valid() && total_cost() <= budget; }
};

struct VertexMoments {
    double mean = 0.0;
    double variance = 0.0;      // sigma2_v
    double distinct_cov = 0.0;  // C_v
    double draw_cov = 0.0;      // Cov(X_v, X_v')
};

using MomentState = PerVertex<VertexMoments>;

inline PerVertex<double> sigma2_recursion(const CalcTree& tree, const PerVertex<std::vector<double>>& gradients,
                                          const PerVertex<double>& leaf_variance) {
    PerVertex<double> s2(static_cast<std::size_t>(tree.size()), 0.0);
    for (int v = 1; v <= tree.size(); ++v) {
        if (tree.is_leaf(v)) {
            s2[v] = leaf_variance[v];
            continue;
        }
        const auto& ch = tree.children(v);
        double acc = 0.0;
        for (std::size_t j = 0; j < ch.size(); ++j) acc += gradients[v][j] * gradients[v][j] * s2[ch[j]];
        s2[v] = acc;
    }
    return s2;
}

inline PerVertex<double> sigma2_recursion(const CalcTree& tree, const PerVertex<std::vector<double>>& gradients) {
    PerVertex<double> leaf(static_cast<std::size_t>(tree.size()), 0.0);
    for (int v = 1; v <= tree.leaf_count(); ++v) leaf[v] = tree.leaf_variance(v);
    return sigma2_recursion(tree, gradients, leaf);
}

// Everything about a tree that does not depend on the sample sizes.
class VarianceModel {
public:
    explicit VarianceModel(CalcTree tree) : tree_(std::move(tree)) {
        require_valid(tree_);
        means_ = propagate_means(tree_);
        gradients_ = all_gradients(tree_, means_);
        weights_ = PerVertex<std::vector<double>>(static_cast<std::size_t>(tree_.size()));
        for (int v = tree_.leaf_count() + 1; v <= tree_.size(); ++v)
            for (double g : gradients_[v]) weights_[v].push_back(g * g);
        sigma2_ = sigma2_recursion(tree_, gradients_);
    }

    const CalcTree& tree() const { return tree_; }
    int size() const { return tree_.size(); }
    const PerVertex<double>& means() const { return means_; }
    const PerVertex<std::vector<double>>& gradients() const { return gradients_; }
    // Squared gradients, aligned with tree().children(v).
    const PerVertex<std::vector<double>>& weights() const { return weights_; }
    const PerVertex<double>& sigma2() const { return sigma2_; }

private:
    CalcTree tree_;
    PerVertex<double> means_;
    PerVertex<std::vector<double>> gradients_;
    PerVertex<std::vector<double>> weights_;
    PerVertex<double> sigma2_;
};

inline void check_sizes(const VarianceModel& model, const PerVertex<std::int64_t>& sizes) {
    if (sizes.size() != model.size())
        throw InvalidArgument("invalid allocation: expected " + std::to_string(model.size()) + " sizes, got " +
                              std::to_string(sizes.size()));
    for (int v = 1; v <= sizes.size(); ++v)
        if (sizes[v] < 1)
            throw InvalidArgument("invalid allocation: n_" + std::to_string(v) + " = " + std::to_string(sizes[v]) +
                                  " (sizes must be >= 1)");
}

inline MomentState pair_cov_recursion(const VarianceModel& model, const PerVertex<std::int64_t>& sizes) {
    check_sizes(model, sizes);
    const CalcTree& tree = model.tree();
    MomentState state(static_cast<std::size_t>(tree.size()));
    for (int v = 1; v <= tree.size(); ++v) {
        VertexMoments& m = state[v];
        m.mean = model.means()[v];
        m.variance = model.sigma2()[v];
        const double n = static_cast<double>(sizes[v]);
        if (tree.is_leaf(v)) {
            m.distinct_cov = 0.0;
            m.draw_cov = m.variance / n;
            continue;
        }
        const auto& ch = tree.children(v);
        const auto& w = model.weights()[v];
        double c = 0.0;
        for (std::size_t j = 0; j < ch.size(); ++j) c += w[j] * state[ch[j]].draw_cov;
        m.distinct_cov = c;
        m.draw_cov = m.variance / n + (1.0 - 1.0 / n) * c;
    }
    return state;
}

inline MomentState pair_cov_recursion(const VarianceModel& model, const AllocationPlan& plan) {
    return pair_cov_recursion(model, plan.sizes);
}

// D Theta* = (sigma2_k + (n_k - 1) C_k) / n_k, i.e. Cov at the root.
inline double estimator_variance(const VarianceModel& model, const PerVertex<std::int64_t>& sizes) {
    return pair_cov_recursion(model, sizes)[model.tree().root()].draw_cov;
}

inline double estimator_variance(const VarianceModel& model, const AllocationPlan& plan) {
    return estimator_variance(model, plan.sizes);
}

// psi_v(alpha) = alpha sigma2_v + (1 - alpha) Cov_v
inline double psi_eval(const MomentState& state, int v, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("invalid mixing weight alpha = " + std::to_string(alpha));
    const VertexMoments& m = state[v];
    return alpha * m.variance + (1.0 - alpha) * m.draw_cov;
}

inline double psi_eval(const VarianceModel& model, const PerVertex<std::int64_t>& sizes, int v, double alpha) {
    return psi_eval(pair_cov_recursion(model, sizes), v, alpha);
}

// Diagnostic: 1/2 sum_i sigma2_i d^2 phi / d x_i^2 at the leaf means, phi being
// the root written over the leaves. Never folded into the estimate.
inline double mean_bias_second_order(const CalcTree& tree) {
    const Expr phi = root_composition(tree);
    auto at_mean = [&](int id) { return tree.leaf_mean(id); };
    double bias = 0.0;
    for (int i = 1; i <= tree.leaf_count(); ++i) {
        const double s2 = tree.leaf_variance(i);
        const Expr d2 = phi.derivative(i).derivative(i);
        if (d2.is_constant(0.0)) continue;
        try {
            bias += 0.5 * s2 * d2.evaluate(at_mean);
        } catch (const DomainError& e) {
            throw DomainError(std::string("second derivative w.r.t. x") + std::to_string(i) + ": " + e.what(),
                              tree.root());
        }
    }
    return bias;
}

} // namespace hboot
