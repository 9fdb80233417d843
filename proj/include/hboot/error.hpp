// error.hpp
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hboot {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed tree document or expression string.
class SyntaxError : public Error {
public:
    using Error::Error;
};

// Well-formed document that refers to things that do not exist.
class SemanticError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Evaluation outside an expression's domain (log of non-positive, division by zero, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what, std::optional<int> vertex = std::nullopt)
        : Error(vertex ? "vertex " + std::to_string(*vertex) + ": " + what : what), vertex_(vertex) {}

    std::optional<int> vertex() const { return vertex_; }

private:
    std::optional<int> vertex_;
};

// Budget cannot cover the all-ones allocation.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

struct Violation {
    int vertex = 0;
    std::string rule;
    std::string detail;

    std::string to_string() const {
        std::string s = "vertex " + std::to_string(vertex) + ": " + rule;
        if (!detail.empty()) s += " (" + detail + ")";
        return s;
    }
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations)
        : Error(summarize(violations)), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const { return violations_; }

private:
    static std::string summarize(const std::vector<Violation>& v) {
        std::string s = "invalid calculation tree";
        if (!v.empty()) s += ": " + v.front().to_string();
        if (v.size() > 1) s += " (+" + std::to_string(v.size() - 1) + " more)";
        return s;
    }

    std::vector<Violation> violations_;
};

} // namespace hboot
