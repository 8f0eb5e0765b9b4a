#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ggred/coordinate_map.hpp"
#include "ggred/generalized_metric.hpp"
#include "ggred/section.hpp"

namespace ggred {

/// Isotropic trivially extended action {V_a + ξ_a}.
struct ExtendedAction {
    std::vector<ChartField> v;
    std::vector<ChartField> xi;

    int size() const { return static_cast<int>(v.size()); }
};

/// Max residual per defining condition of an extended action.
struct ActionValidation {
    double isotropy = 0.0;       // ξ_a(V_b) + ξ_b(V_a)
    double equivariance = 0.0;   // dξ_a − ι_{V_a}H
    double killing = 0.0;        // L_{V_a} g
    double h_invariance = 0.0;   // L_{V_a} H
    double min_singular = 0.0;   // smallest singular value of [V_1 .. V_s] in g-orthonormal units

    double worst_identity() const;
    /// Names of the identities above `tolerance`: "isotropy", "equivariance",
    /// "invariance" (Killing or L_V H).
    std::vector<std::string> failed(double tolerance) const;
};

ActionValidation validate_extended_action(const ExtendedAction& ea, const GeneralizedMetric& ctx,
                                          const std::vector<Eigen::VectorXd>& points);

/// G_ab = g(V_a,V_b), K_ab = G_ab − ξ_a(V_b), T_ab = g(V_a⁺,V_b⁺) with V_a^± = V_a ± g⁻¹ξ_a.
struct ReductionMatrices {
    Eigen::MatrixXd g_mat, k, t, k_inv, t_inv;
    /// g(V_a⁻, V_b⁻), equal to T by isotropy.
    Eigen::MatrixXd t_minus;
};

ReductionMatrices reduction_matrices(const ExtendedAction& ea, const GeneralizedMetric& ctx,
                                     const Eigen::VectorXd& point);

/// g-orthonormal bases (columns) of τ₊ and τ₋, where
/// τ± = {Y : g(Y,V_a) ± ξ_a(Y) = 0}, further intersected with ker dσ when a
/// section is given.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> horizontal_frames(const ExtendedAction& ea,
                                                              const GeneralizedMetric& ctx,
                                                              const Eigen::VectorXd& point,
                                                              const SectionData* section = nullptr);

/// Rows ξ^±_a = g(V_a) ± ξ_a (s × dim).
Eigen::MatrixXd constraint_rows(const ExtendedAction& ea, const GeneralizedMetric& ctx, int sign,
                                const Eigen::VectorXd& point);

/// Ω^a_± on pairs of frame vectors: `lemma[a](i,j)` from K^{ba}dξ⁺_b (resp.
/// K^{ab}dξ⁻_b), `direct[a](i,j)` from dθ^a_± of the connection forms
/// θ₊^a = K^{ba}ξ⁺_b, θ₋^a = K^{ab}ξ⁻_b.
struct OmegaValues {
    std::vector<Eigen::MatrixXd> lemma;
    std::vector<Eigen::MatrixXd> direct;
    double residual() const;
};

OmegaValues omega_curvature(const ExtendedAction& ea, const GeneralizedMetric& ctx, int sign,
                            const Eigen::VectorXd& point, const Eigen::MatrixXd& frame);

/// Both sides of (∇⁻_{V_a}Z⁻, W⁻) = ½dξ⁻_a(Z⁻, W⁻) for invariant Z⁻, W⁻ given
/// by the columns of `frame` (a τ₋ basis). Returns max |lhs − rhs| and the
/// largest |rhs| seen.
std::pair<double, double> connection_along_orbit_residual(const ExtendedAction& ea,
                                                          const GeneralizedMetric& ctx,
                                                          const Eigen::VectorXd& point,
                                                          const Eigen::MatrixXd& frame);

// ---------------------------------------------------------------------------
// Quotient scenarios
// ---------------------------------------------------------------------------

struct QuotientScenario {
    std::string name;
    GeneralizedMetric ctx;
    ExtendedAction action;
    ChartPtr quotient;
    CoordinateMap project;  // ambient → quotient
    CoordinateMap lift;     // quotient → ambient, a section of the projection
    std::optional<SectionData> section;

    int quotient_dim() const { return quotient->dim(); }
};

struct QuotientValidation {
    double section_roundtrip = 0.0;   // |project(lift(q)) − q|
    double vertical_kernel = 0.0;     // |dproject(V_a)|
    double on_locus = 0.0;            // |σ(lift(q))|
    int dim_mismatch = 0;             // ambient − s − r − quotient
};

QuotientValidation validate_quotient(const QuotientScenario& scn,
                                     const std::vector<Eigen::VectorXd>& quotient_points);

/// Horizontal lifts into τ± (columns) of the coordinate frame ∂_{q_i}, placed
/// at lift(q).
Eigen::MatrixXd lifted_frame(const QuotientScenario& scn, int sign, const Eigen::VectorXd& q);

/// g̃ on the quotient chart from restricting g to τ± lifts (depth 2).
ChartField reduced_metric(const QuotientScenario& scn, int sign = 1);
/// H̃ = (H + Ω₊^a ∧ ξ_a) on τ₊ lifts (depth 1).
ChartField reduced_flux(const QuotientScenario& scn);
/// (g̃, H̃) as a generalized metric on the quotient chart.
GeneralizedMetric reduced_context(const QuotientScenario& scn);

/// (∇⁻_{X⁺} Y⁻, Z⁻) evaluated in the ambient space for quotient vector fields.
double reduced_bismut(const QuotientScenario& scn, const ChartField& x, const ChartField& y,
                      const ChartField& z, const Eigen::VectorXd& q);

/// Same pairing from the Bismut connection of (g̃, H̃) on the quotient chart.
double reduced_bismut_direct(const GeneralizedMetric& reduced, const ChartField& x,
                             const ChartField& y, const ChartField& z, const Eigen::VectorXd& q);

/// Curvature of the reduced −-Bismut connection assembled from ambient data,
/// contracted with the quotient frame `e` (columns in quotient coordinates):
///   (R⁻(X⁺,Y⁺)Z⁻,W⁻) − ½K^{ab} dξ⁺_a(X⁺,Y⁺) dξ⁻_b(Z⁻,W⁻)
///   + T^{ab}[(Z⁻,∇⁻_{Y⁺}V⁻_a)(W⁻,∇⁻_{X⁺}V⁻_b) − (X⁺↔Y⁺)].
Tensor4<double> reduced_curvature_quotient(const QuotientScenario& scn, const Eigen::VectorXd& q,
                                           const Eigen::MatrixXd& e);

/// R̃⁻ computed on the quotient chart from (g̃, H̃), contracted with `e`.
Tensor4<double> reduced_curvature_direct(const GeneralizedMetric& reduced, const Eigen::VectorXd& q,
                                         const Eigen::MatrixXd& e);

/// Riemannian-submersion curvature for ξ = 0, H = 0:
///   R̃(X,Y,Z,W) = R(X,Y,Z,W) − 2⟨A_X Y, A_Z W⟩ + ⟨A_Y Z, A_X W⟩ − ⟨A_X Z, A_Y W⟩,
/// A_X Y = ½ vertical part of [X,Y] for basic horizontal fields.
Tensor4<double> oneill_curvature(const QuotientScenario& scn, const Eigen::VectorXd& q,
                                 const Eigen::MatrixXd& e);

/// Contracts an array R_{ijkl} with the columns of `e` in every slot.
Tensor4<double> contract_frame(const Tensor4<double>& r, const Eigen::MatrixXd& e);
/// Same with the first two slots contracted with `a` and the last two with `b`.
Tensor4<double> contract_frames(const Tensor4<double>& r, const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b);

}  // namespace ggred
