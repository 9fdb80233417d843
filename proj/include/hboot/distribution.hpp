// distribution.hpp
#pragma once

#include "hboot/error.hpp"

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

namespace hboot {

struct NormalDist {
    double mean = 0.0;
    double variance = 1.0;

    friend bool operator==(const NormalDist&, const NormalDist&) = default;
};

struct UniformDist {
    double lower = 0.0;
    double upper = 1.0;

    friend bool operator==(const UniformDist&, const UniformDist&) = default;
};

struct ExponentialDist {
    double rate = 1.0;

    friend bool operator==(const ExponentialDist&, const ExponentialDist&) = default;
};

using LeafDistribution = std::variant<NormalDist, UniformDist, ExponentialDist>;

inline void check_distribution(const LeafDistribution& d) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NormalDist>) {
                if (!std::isfinite(p.mean) || !std::isfinite(p.variance) || p.variance < 0.0)
                    throw InvalidArgument("normal distribution needs finite mean and variance >= 0");
            } else if constexpr (std::is_same_v<T, UniformDist>) {
                if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !(p.lower < p.upper))
                    throw InvalidArgument("uniform distribution needs finite lower < upper");
            } else {
                if (!std::isfinite(p.rate) || !(p.rate > 0.0))
                    throw InvalidArgument("exponential distribution needs rate > 0");
            }
        },
        d);
}

inline double distribution_mean(const LeafDistribution& d) {
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NormalDist>) return p.mean;
            else if constexpr (std::is_same_v<T, UniformDist>) return 0.5 * (p.lower + p.upper);
            else return 1.0 / p.rate;
        },
        d);
}

inline double distribution_variance(const LeafDistribution& d) {
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NormalDist>) return p.variance;
            else if constexpr (std::is_same_v<T, UniformDist>) return (p.upper - p.lower) * (p.upper - p.lower) / 12.0;
            else return 1.0 / (p.rate * p.rate);
        },
        d);
}

inline std::string distribution_name(const LeafDistribution& d) {
    switch (d.index()) {
    case 0: return "normal";
    case 1: return "uniform";
    default: return "exponential";
    }
}

} // namespace hboot
