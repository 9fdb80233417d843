// tree.hpp
//
// Calculation tree: leaves 1..m hold input populations, internal vertices
// m+1..k hold sub-function expressions over their children, vertex k is the
// root. Every vertex except the root feeds exactly one parent, and a child
// always has a smaller id than its parent.
#pragma once

#include "hboot/distribution.hpp"
#include "hboot/error.hpp"
#include "hboot/expression.hpp"
#include "hboot/leaf_moments.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hboot {

// Dense per-vertex storage addressed by 1-based vertex id.
template <class T>
class PerVertex {
public:
    PerVertex() = default;
    explicit PerVertex(std::size_t k, const T& init = T{}) : data_(k, init) {}
    explicit PerVertex(std::vector<T> data) : data_(std::move(data)) {}

    T& operator[](int id) { return data_[static_cast<std::size_t>(id - 1)]; }
    const T& operator[](int id) const { return data_[static_cast<std::size_t>(id - 1)]; }

    int size() const { return static_cast<int>(data_.size()); }
    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }
    const std::vector<T>& values() const { return data_; }

    friend bool operator==(const PerVertex&, const PerVertex&) = default;

private:
    std::vector<T> data_;
};

enum class VertexKind { leaf, internal };

struct VertexSpec {
    int id = 0;
    VertexKind kind = VertexKind::leaf;
    std::vector<int> children;
    std::optional<Expr> expr;
    std::int64_t cost = 1;
    // Explicit statistics override values estimated from `samples`.
    std::optional<double> mean;
    std::optional<double> variance;
    std::optional<std::string> samples_file;
    std::vector<double> samples;
    std::optional<LeafDistribution> distribution;

    bool is_leaf() const { return kind == VertexKind::leaf; }

    friend bool operator==(const VertexSpec&, const VertexSpec&) = default;
};

inline VertexSpec make_leaf(int id, double mean, double variance, std::int64_t cost = 1) {
    VertexSpec v;
    v.id = id;
    v.mean = mean;
    v.variance = variance;
    v.cost = cost;
    return v;
}

inline VertexSpec make_internal(int id, std::vector<int> children, std::string_view expr, std::int64_t cost = 1) {
    VertexSpec v;
    v.id = id;
    v.kind = VertexKind::internal;
    v.children = std::move(children);
    v.expr = parse_expression(expr);
    v.cost = cost;
    return v;
}

class CalcTree {
public:
    CalcTree() = default;

    // Ids must be exactly 1..k (in any order); structural rules are checked by validate_tree.
    explicit CalcTree(std::vector<VertexSpec> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.empty()) throw SemanticError("calculation tree has no vertices");
        std::sort(vertices_.begin(), vertices_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const int expected = static_cast<int>(i) + 1;
            if (vertices_[i].id == expected) continue;
            if (i > 0 && vertices_[i].id == vertices_[i - 1].id)
                throw SemanticError("duplicate vertex id " + std::to_string(vertices_[i].id));
            throw SemanticError("vertex ids must be 1.." + std::to_string(vertices_.size()) + ", got " +
                                std::to_string(vertices_[i].id));
        }
        for (auto& v : vertices_) std::sort(v.children.begin(), v.children.end());

        leaf_count_ = static_cast<int>(std::count_if(vertices_.begin(), vertices_.end(),
                                                     [](const auto& v) { return v.is_leaf(); }));
        parent_ = PerVertex<int>(vertices_.size(), 0);
        for (const auto& v : vertices_)
            for (int c : v.children)
                if (c >= 1 && c <= size() && parent_[c] == 0) parent_[c] = v.id;

        stats_ = PerVertex<std::optional<LeafMoments>>(vertices_.size());
        for (const auto& v : vertices_) {
            if (!v.is_leaf()) continue;
            std::optional<LeafMoments> estimated;
            if (v.samples.size() >= 2) estimated = leaf_moments(v.samples);
            const std::optional<double> mean = v.mean ? v.mean : (estimated ? std::optional(estimated->mean) : std::nullopt);
            const std::optional<double> var =
                v.variance ? v.variance : (estimated ? std::optional(estimated->variance) : std::nullopt);
            if (mean && var) stats_[v.id] = LeafMoments{*mean, *var};
        }
    }

    int size() const { return static_cast<int>(vertices_.size()); }
    int leaf_count() const { return leaf_count_; }
    int root() const { return size(); }

    const VertexSpec& vertex(int id) const { return vertices_.at(static_cast<std::size_t>(id - 1)); }
    const std::vector<VertexSpec>& vertices() const { return vertices_; }
    bool is_leaf(int id) const { return vertex(id).is_leaf(); }
    const std::vector<int>& children(int id) const { return vertex(id).children; }
    // 0 for the root.
    int parent(int id) const { return parent_[id]; }
    std::int64_t cost(int id) const { return vertex(id).cost; }

    PerVertex<std::int64_t> costs() const {
        PerVertex<std::int64_t> out(vertices_.size());
        for (const auto& v : vertices_) out[v.id] = v.cost;
        return out;
    }

    bool has_leaf_stats(int id) const { return stats_[id].has_value(); }

    const LeafMoments& leaf_stats(int id) const {
        if (!stats_[id]) throw SemanticError("vertex " + std::to_string(id) + ": missing leaf statistics");
        return *stats_[id];
    }

    double leaf_mean(int id) const { return leaf_stats(id).mean; }
    double leaf_variance(int id) const { return leaf_stats(id).variance; }

    // Evaluates phi_v with the child values supplied by `values(child_id)`.
    template <class Lookup>
    double evaluate(int id, const Lookup& values) const {
        const auto& v = vertex(id);
        try {
            return v.expr->evaluate(values);
        } catch (const DomainError& e) {
            throw DomainError(e.what(), id);
        }
    }

private:
    std::vector<VertexSpec> vertices_;
    int leaf_count_ = 0;
    PerVertex<int> parent_;
    PerVertex<std::optional<LeafMoments>> stats_;
};

// Empty result means the tree is valid.
inline std::vector<Violation> validate_tree(const CalcTree& tree) {
    std::vector<Violation> out;
    const int k = tree.size();
    const int m = tree.leaf_count();
    auto report = [&](int v, std::string rule, std::string detail = {}) {
        out.push_back({v, std::move(rule), std::move(detail)});
    };

    if (m < 1) report(k, "tree without leaves");

    PerVertex<int> arcs(static_cast<std::size_t>(k), 0);
    for (const auto& v : tree.vertices()) {
        if (v.is_leaf() && v.id > m) report(v.id, "leaf numbering", "leaves must be vertices 1.." + std::to_string(m));
        if (!v.is_leaf() && v.id <= m) report(v.id, "leaf numbering", "internal vertex numbered among the leaves");
        if (v.cost < 0) report(v.id, "negative cost");

        if (v.is_leaf()) {
            if (!v.children.empty()) report(v.id, "leaf with inputs");
            if (!tree.has_leaf_stats(v.id)) {
                report(v.id, "missing leaf statistics", "give mean and variance or at least 2 samples");
            } else if (!(tree.leaf_variance(v.id) >= 0.0) || !std::isfinite(tree.leaf_variance(v.id)) ||
                       !std::isfinite(tree.leaf_mean(v.id))) {
                report(v.id, "invalid leaf statistics", "variance must be finite and >= 0");
            }
            if (v.expr) report(v.id, "leaf with expression");
            continue;
        }

        if (v.children.empty()) report(v.id, "internal vertex without inputs");
        if (v.mean || v.variance || !v.samples.empty()) report(v.id, "internal vertex with leaf statistics");
        if (std::adjacent_find(v.children.begin(), v.children.end()) != v.children.end())
            report(v.id, "duplicate child");
        for (int c : v.children) {
            if (c < 1 || c > k) {
                report(v.id, "unknown child", "x" + std::to_string(c));
                continue;
            }
            if (c >= v.id) report(v.id, "correct-numbering violated", "child " + std::to_string(c) + " >= parent");
            ++arcs[c];
        }
        if (!v.expr) {
            report(v.id, "internal vertex without expression");
            continue;
        }
        const std::set<int> used = v.expr->variables();
        const std::set<int> children(v.children.begin(), v.children.end());
        for (int u : used)
            if (!children.count(u)) report(v.id, "expression variable mismatch", "x" + std::to_string(u) + " is not an input");
        for (int c : children)
            if (!used.count(c)) report(v.id, "expression variable mismatch", "input x" + std::to_string(c) + " unused");
    }

    for (int v = 1; v <= k; ++v) {
        if (v == k) {
            if (arcs[v] > 0) report(v, "root has outgoing arc");
        } else if (arcs[v] == 0) {
            report(v, "missing outgoing arc", "vertex is disconnected from the root");
        } else if (arcs[v] > 1) {
            report(v, "multiple outgoing arcs", "appears in " + std::to_string(arcs[v]) + " child sets");
        }
    }
    return out;
}

inline void require_valid(const CalcTree& tree) {
    auto violations = validate_tree(tree);
    if (!violations.empty()) throw ValidationError(std::move(violations));
}

// First-order means: leaves keep their mean, internal vertices evaluate phi_v at
// their children's propagated means, in increasing id order.
inline PerVertex<double> propagate_means(const CalcTree& tree) {
    PerVertex<double> mu(static_cast<std::size_t>(tree.size()), 0.0);
    for (int v = 1; v <= tree.size(); ++v) {
        if (tree.is_leaf(v)) {
            mu[v] = tree.leaf_mean(v);
        } else {
            mu[v] = tree.evaluate(v, [&](int id) { return mu[id]; });
        }
    }
    return mu;
}

// d phi_v / d x_i at the children's means, aligned with tree.children(v).
inline std::vector<double> gradient_at_mean(const CalcTree& tree, const PerVertex<double>& means, int v) {
    if (tree.is_leaf(v)) throw InvalidArgument("gradient requested for leaf vertex " + std::to_string(v));
    const auto& spec = tree.vertex(v);
    std::vector<double> g;
    g.reserve(spec.children.size());
    for (int c : spec.children) {
        const Expr d = spec.expr->derivative(c);
        try {
            g.push_back(d.evaluate([&](int id) { return means[id]; }));
        } catch (const DomainError& e) {
            throw DomainError(std::string("derivative w.r.t. x") + std::to_string(c) + ": " + e.what(), v);
        }
    }
    return g;
}

inline std::vector<double> gradient_at_mean(const CalcTree& tree, int v) {
    return gradient_at_mean(tree, propagate_means(tree), v);
}

// Gradients of every internal vertex; leaves get an empty vector.
inline PerVertex<std::vector<double>> all_gradients(const CalcTree& tree, const PerVertex<double>& means) {
    PerVertex<std::vector<double>> out(static_cast<std::size_t>(tree.size()));
    for (int v = tree.leaf_count() + 1; v <= tree.size(); ++v) out[v] = gradient_at_mean(tree, means, v);
    return out;
}

// The root function written directly over the leaf variables x1..xm.
inline Expr root_composition(const CalcTree& tree) {
    PerVertex<Expr> composed(static_cast<std::size_t>(tree.size()));
    for (int v = 1; v <= tree.size(); ++v) {
        if (tree.is_leaf(v)) {
            composed[v] = Expr::variable(v);
        } else {
            composed[v] = tree.vertex(v).expr->substitute([&](int id) { return composed[id]; });
        }
    }
    return composed[tree.root()];
}

} // namespace hboot
