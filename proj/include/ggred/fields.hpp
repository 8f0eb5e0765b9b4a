#pragma once

#include <random>

#include "ggred/chart.hpp"

namespace ggred {

/// Constant component array.
ChartField constant_field(ChartPtr chart, Valence valence, Eigen::VectorXd values);

/// Identity metric.
ChartField euclidean_metric(ChartPtr chart);

/// Coordinate basis vector ∂_i.
ChartField coordinate_vector(ChartPtr chart, int i);

/// Quadratic polynomial components centred at the chart midpoint:
/// f_c(x) = a_c + b_c·y + yᵀ C_c y with y = x − centre, seeded coefficients in [−1, 1].
class PolynomialField {
public:
    PolynomialField(ChartPtr chart, Valence valence, std::mt19937_64& rng, double scale = 1.0);

    const ChartField& field() const { return field_; }
    operator const ChartField&() const { return field_; }  // NOLINT

private:
    ChartField field_;
};

/// Random vector field (quadratic components).
ChartField random_vector_field(ChartPtr chart, std::mt19937_64& rng, double scale = 1.0);
/// Random 1-form field (quadratic components).
ChartField random_covector_field(ChartPtr chart, std::mt19937_64& rng, double scale = 1.0);

/// g(X) as a 1-form field: ξ_i = g_{ij} X^j, scaled by `sign`.
ChartField lower_index(const ChartField& g, const ChartField& x, double sign = 1.0);

}  // namespace ggred
