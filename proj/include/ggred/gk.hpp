#pragma once

#include <random>

#include "ggred/quotient.hpp"

namespace ggred {

/// Complex structures J₊, J₋ as (1,1)-tensor fields. Components follow the
/// covariant-first layout: flat index j·n + i holds J^i_j.
struct BiHermitianData {
    ChartField jplus;
    ChartField jminus;
};

/// Matrix of the endomorphism acting on column vectors: (J X)^i = J(i, j) X^j.
template <typename T>
MatX<T> endomorphism_at(const ChartField& j, const VecX<T>& x) {
    return as_matrix<T>(j(x), j.dim()).transpose();
}

/// Builds an endomorphism field from a callable returning the acting matrix.
template <int MaxDepth = 3, typename F>
ChartField endomorphism_field(ChartPtr chart, F&& f) {
    return ChartField::make<MaxDepth>(std::move(chart), Valence::endomorphism(), [f](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> m = f(x);
        return flatten<S>(MatX<S>(m.transpose()));
    });
}

/// Max residuals over sample points, worst over J₊ and J₋ unless noted.
struct BiHermitianValidation {
    double square = 0.0;         // J² + 1
    double compatibility = 0.0;  // g(JX, JY) − g(X, Y)
    double nijenhuis = 0.0;
    double parallel_plus = 0.0;  // ∇⁺J₊
    double parallel_minus = 0.0; // ∇⁻J₋
    double h_type = 0.0;         // H(JX,JY,Z) + H(JX,Y,JZ) + H(X,JY,JZ) − H(X,Y,Z)

    double worst() const;
};

BiHermitianValidation validate_bihermitian(const BiHermitianData& bh, const GeneralizedMetric& ctx,
                                           const std::vector<Eigen::VectorXd>& points,
                                           std::mt19937_64& rng, int triples_per_point = 4);

/// Nijenhuis tensor N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] − [X,Y] as N(i, j, k)
/// with N(∂_j, ∂_k) = N(i, j, k) ∂_i.
Tensor3<double> nijenhuis(const ChartField& j, const Eigen::VectorXd& point);

/// (∇^s_k J)^i_j stored (i, j, k).
Tensor3<double> bismut_derivative_endomorphism(const ChartField& j, int sign, const GeneralizedMetric& ctx,
                                               const Eigen::VectorXd& point);

/// ‖(1 − P±) J± P±‖_F with P± the g-orthogonal projector onto τ± (∩ ker dσ).
std::pair<double, double> check_tau_invariance(const BiHermitianData& bh, const ExtendedAction& ea,
                                               const GeneralizedMetric& ctx, const Eigen::VectorXd& point,
                                               const SectionData* section = nullptr);

/// Same defect computed for a caller-supplied orthonormal basis of the distribution.
double invariance_defect(const Eigen::MatrixXd& j, const Eigen::MatrixXd& basis, const Eigen::MatrixXd& g);

/// Reduced structures J̃± on the quotient chart together with their validation.
struct ReducedGK {
    BiHermitianData reduced;
    GeneralizedMetric context;
    BiHermitianValidation validation;
    double omega_type = 0.0;  // Ω₊(J̃₊X, J̃₊Y) − Ω₊(X,Y), exploratory
};

/// J̃± through the horizontal-lift isomorphisms τ± ≅ T(quotient). Throws
/// ReductionConditionError if J± fails to preserve τ± at a lifted sample point.
ReducedGK reduce_gk(const QuotientScenario& scn, const BiHermitianData& bh,
                    const std::vector<Eigen::VectorXd>& quotient_points, std::mt19937_64& rng,
                    double tolerance = 1e-8);

/// Field J̃ on the quotient chart (depth 1).
ChartField reduced_endomorphism(const QuotientScenario& scn, const ChartField& j, int sign);

}  // namespace ggred
