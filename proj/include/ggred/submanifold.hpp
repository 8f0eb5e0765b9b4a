#pragma once

#include <string>

#include "ggred/coordinate_map.hpp"
#include "ggred/generalized_metric.hpp"
#include "ggred/section.hpp"

namespace ggred {

/// Zero locus N = σ⁻¹(0) with a parametrization embed: nchart → ambient.
struct SubmanifoldScenario {
    std::string name;
    GeneralizedMetric ctx;
    SectionData section;
    ChartPtr nchart;
    CoordinateMap embed;
};

struct SubmanifoldValidation {
    double on_locus = 0.0;       // max |σ(embed(u))|
    double min_singular = 0.0;   // smallest singular value of d(embed)
    double dsigma_singular = 0.0;  // smallest singular value of the dσ rows
};

SubmanifoldValidation validate_submanifold(const SubmanifoldScenario& scn,
                                           const std::vector<Eigen::VectorXd>& nchart_points);

/// T^{αβ} = ∂_iσ^α ∂_jσ^β g^{ij} and its inverse T_{αβ}.
struct SectionMatrices {
    Eigen::MatrixXd t_up;
    Eigen::MatrixXd t_down;
};

constexpr double kLocusTolerance = 1e-8;

SectionMatrices t_matrix(const SectionData& sd, const GeneralizedMetric& ctx, const Eigen::VectorXd& point);

/// Induced metric and pulled-back H on the N chart.
GeneralizedMetric induced_context(const SubmanifoldScenario& scn);

/// Ambient vectors d(embed)(v) for the columns of v.
Eigen::MatrixXd push_forward(const SubmanifoldScenario& scn, const Eigen::VectorXd& u, const Eigen::MatrixXd& v);

/// How a tangent field on N is extended off N before differentiation.
enum class Extension { AlongN, Tubular };

/// (∇⁻_X Y, Z)|_N for tangent fields given on the N chart.
double reduced_connection_sub(const SubmanifoldScenario& scn, const ChartField& x, const ChartField& y,
                              const ChartField& z, const Eigen::VectorXd& u,
                              Extension ext = Extension::AlongN);

/// ∇̃_X Y = ∇⁻_X Y + T_{αβ}(Y, ∇⁻_X dσ^β) g⁻¹dσ^α as an ambient vector.
Eigen::VectorXd reduced_derivative_sub(const SubmanifoldScenario& scn, const ChartField& x,
                                       const ChartField& y, const Eigen::VectorXd& u);

/// The same vector from the connection coefficients
/// Γ⁻(i,k,j) + T_{αβ} g^{il} ∂_lσ^α (∇⁺_j dσ^β)_k of the on-shell transform.
Eigen::VectorXd reduced_derivative_coefficients(const SubmanifoldScenario& scn, const ChartField& x,
                                                const ChartField& y, const Eigen::VectorXd& u);

/// Bismut pairing (∇̃⁻_X Y, Z) computed intrinsically from the induced data on the N chart.
double reduced_connection_direct(const GeneralizedMetric& induced, const ChartField& x,
                                 const ChartField& y, const ChartField& z, const Eigen::VectorXd& u);

/// (Z, ∇^s_Y dσ^β) for ambient vectors; s = ±1.
Eigen::VectorXd sigma_hessian_pairing(const SubmanifoldScenario& scn, int sign, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& y, const Eigen::VectorXd& z);

/// Reduced curvature on an ambient tangent frame at x ∈ N:
///   (R⁻(X,Y)Z,W) + T_{αβ}[(Z,∇⁻_Y dσ^β)(W,∇⁻_X dσ^α) − (Z,∇⁻_X dσ^β)(W,∇⁻_Y dσ^α)].
/// Throws TangencyError if a frame vector is not tangent to N.
Tensor4<double> reduced_curvature_sub(const SubmanifoldScenario& scn, const Eigen::VectorXd& x,
                                      const Eigen::MatrixXd& frame);

/// Gauss equation with II computed as the normal part of the ambient
/// Levi-Civita derivative; valid for H = 0.
Tensor4<double> gauss_curvature(const SubmanifoldScenario& scn, const Eigen::VectorXd& u,
                                const Eigen::MatrixXd& e);

}  // namespace ggred
