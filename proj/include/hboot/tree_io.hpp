// tree_io.hpp
//
// JSON tree documents and CSV leaf populations.
//
//   {"vertices":[{"id":1,"kind":"leaf","cost":1,"mean":0.0,"variance":1.0,"samples_file":"h1.csv"},
//                {"id":4,"kind":"internal","cost":2,"children":[1,2,3],"expr":"(x1+x2)*x3"}]}
//
// Leaves may also carry "distribution": {"type":"normal","mean":..,"variance":..},
// {"type":"uniform","lower":..,"upper":..} or {"type":"exponential","rate":..}
// for synthetic simulation. samples_file paths are relative to the document.
#pragma once

#include "hboot/error.hpp"
#include "hboot/tree.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace hboot {

// One real per line, no header. Blank lines are ignored.
inline std::vector<double> parse_samples_csv(std::istream& in, const std::string& source = "samples") {
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r,");
        const std::string field = line.substr(first, last - first + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != field.size() || !std::isfinite(v))
            throw SyntaxError(source + ":" + std::to_string(lineno) + ": not a real number: '" + field + "'");
        out.push_back(v);
    }
    return out;
}

inline std::vector<double> load_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open samples file " + path.string());
    return parse_samples_csv(in, path.string());
}

namespace detail {

inline LeafDistribution distribution_from_json(const nlohmann::json& j, int id) {
    const std::string where = "vertex " + std::to_string(id) + ": distribution";
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw SyntaxError(where + " must be an object with a \"type\"");
    const std::string type = j["type"].get<std::string>();
    auto num = [&](const char* key, double fallback) {
        if (!j.contains(key)) return fallback;
        if (!j[key].is_number()) throw SyntaxError(where + "." + key + " must be a number");
        return j[key].get<double>();
    };
    LeafDistribution d;
    if (type == "normal") d = NormalDist{num("mean", 0.0), num("variance", 1.0)};
    else if (type == "uniform") d = UniformDist{num("lower", 0.0), num("upper", 1.0)};
    else if (type == "exponential") d = ExponentialDist{num("rate", 1.0)};
    else throw SyntaxError(where + ": unknown type '" + type + "'");
    try {
        check_distribution(d);
    } catch (const InvalidArgument& e) {
        throw SemanticError(where + ": " + e.what());
    }
    return d;
}

inline nlohmann::ordered_json distribution_to_json(const LeafDistribution& d) {
    nlohmann::ordered_json j;
    j["type"] = distribution_name(d);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NormalDist>) {
                j["mean"] = p.mean;
                j["variance"] = p.variance;
            } else if constexpr (std::is_same_v<T, UniformDist>) {
                j["lower"] = p.lower;
                j["upper"] = p.upper;
            } else {
                j["rate"] = p.rate;
            }
        },
        d);
    return j;
}

inline VertexSpec vertex_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw SyntaxError("vertex entry must be an object");
    if (!j.contains("id") || !j["id"].is_number_integer()) throw SyntaxError("vertex without integer \"id\"");
    VertexSpec v;
    v.id = j["id"].get<int>();
    const std::string where = "vertex " + std::to_string(v.id);

    if (!j.contains("kind") || !j["kind"].is_string()) throw SyntaxError(where + ": missing \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "leaf") v.kind = VertexKind::leaf;
    else if (kind == "internal") v.kind = VertexKind::internal;
    else throw SyntaxError(where + ": kind must be \"leaf\" or \"internal\", got \"" + kind + "\"");

    if (j.contains("cost")) {
        if (!j["cost"].is_number_integer()) throw SyntaxError(where + ": cost must be an integer");
        v.cost = j["cost"].get<std::int64_t>();
    }
    auto real = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key)) return std::nullopt;
        if (!j[key].is_number()) throw SyntaxError(where + ": " + key + " must be a number");
        return j[key].get<double>();
    };
    v.mean = real("mean");
    v.variance = real("variance");

    if (j.contains("samples_file")) {
        if (!j["samples_file"].is_string()) throw SyntaxError(where + ": samples_file must be a string");
        v.samples_file = j["samples_file"].get<std::string>();
        std::filesystem::path p(*v.samples_file);
        if (p.is_relative()) p = base_dir / p;
        v.samples = load_samples_csv(p);
    }
    if (j.contains("distribution")) v.distribution = distribution_from_json(j["distribution"], v.id);

    if (j.contains("children")) {
        if (!j["children"].is_array()) throw SyntaxError(where + ": children must be an array");
        for (const auto& c : j["children"]) {
            if (!c.is_number_integer()) throw SyntaxError(where + ": child ids must be integers");
            v.children.push_back(c.get<int>());
        }
    }
    if (j.contains("expr")) {
        if (!j["expr"].is_string()) throw SyntaxError(where + ": expr must be a string");
        v.expr = parse_expression(j["expr"].get<std::string>());
        for (int used : v.expr->variables()) {
            if (std::find(v.children.begin(), v.children.end(), used) == v.children.end())
                throw SemanticError(where + ": expression refers to x" + std::to_string(used) +
                                    " which is not among the children");
        }
    }
    return v;
}

} // namespace detail

// Builds the tree without structural validation (used by `validate` to list violations).
inline CalcTree parse_tree_unchecked(std::string_view document, const std::filesystem::path& base_dir = ".") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(std::string("malformed tree document: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw SyntaxError("tree document must be an object with a \"vertices\" array");
    std::vector<VertexSpec> vertices;
    for (const auto& entry : j["vertices"]) vertices.push_back(detail::vertex_from_json(entry, base_dir));
    return CalcTree(std::move(vertices));
}

inline CalcTree parse_tree(std::string_view document, const std::filesystem::path& base_dir = ".") {
    CalcTree tree = parse_tree_unchecked(document, base_dir);
    require_valid(tree);
    return tree;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline CalcTree load_tree(const std::filesystem::path& path) {
    return parse_tree(read_text_file(path), path.parent_path());
}

inline nlohmann::ordered_json tree_to_json(const CalcTree& tree) {
    nlohmann::ordered_json vertices = nlohmann::ordered_json::array();
    for (const auto& v : tree.vertices()) {
        nlohmann::ordered_json j;
        j["id"] = v.id;
        j["kind"] = v.is_leaf() ? "leaf" : "internal";
        j["cost"] = v.cost;
        if (v.mean) j["mean"] = *v.mean;
        if (v.variance) j["variance"] = *v.variance;
        if (v.samples_file) j["samples_file"] = *v.samples_file;
        if (v.distribution) j["distribution"] = detail::distribution_to_json(*v.distribution);
        if (!v.is_leaf() || !v.children.empty()) j["children"] = v.children;
        if (v.expr) j["expr"] = v.expr->to_string();
        vertices.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["vertices"] = std::move(vertices);
    return doc;
}

inline std::string serialize_tree(const CalcTree& tree, int indent = 2) {
    return tree_to_json(tree).dump(indent);
}

} // namespace hboot
