// leaf_moments.hpp
#pragma once

#include "hboot/error.hpp"

#include <cstddef>
#include <span>

namespace hboot {

struct LeafMoments {
    double mean = 0.0;
    double variance = 0.0;
};

// Arithmetic mean and unbiased (n - 1) variance of an observed leaf population.
inline LeafMoments leaf_moments(std::span<const double> samples) {
    if (samples.size() < 2) throw InvalidArgument("insufficient data: need at least 2 samples");
    const auto n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double x : samples) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    return {mean, ss / (n - 1.0)};
}

} // namespace hboot
