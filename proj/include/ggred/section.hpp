#pragma once

#include <vector>

#include "ggred/chart.hpp"

namespace ggred {

/// Trivialized section σ = (σ^1..σ^r) of a rank-r bundle; N = σ⁻¹(0).
struct SectionData {
    std::vector<ChartField> sigma;

    int size() const { return static_cast<int>(sigma.size()); }
};

}  // namespace ggred
