#pragma once

#include <string>
#include <vector>

#include "ggred/grassmann.hpp"
#include "ggred/quotient.hpp"
#include "ggred/submanifold.hpp"

namespace ggred {

/// Tensor values at one ambient point entering the component actions.
/// Matrices of derivatives follow calculus.hpp: dv[a](i, j) = (∇_j V_a)^i,
/// dxi[a](j, i) = ∇_j ξ_{a i}, all with the Levi-Civita connection.
struct PointFrame {
    Eigen::VectorXd x;
    Eigen::MatrixXd g, ginv;
    Eigen::VectorXd h;  // H_{ijk}, row-major
    Tensor4<double> r_minus;
    Tensor3<double> gamma;        // Γ^i_{jk}
    Tensor3<double> gamma_minus;  // Γ⁻(i, j, k), j the derivative slot

    // group action (empty for Model III)
    std::vector<Eigen::VectorXd> v, xi, v_plus, v_minus;
    std::vector<Eigen::MatrixXd> dv, dxi, mu;  // mu[a] = −dv[a]
    Eigen::MatrixXd gram, k, t, k_inv, t_inv;

    // section (empty for Model II)
    Eigen::VectorXd sigma;
    Eigen::MatrixXd dsigma;                       // (α, i)
    std::vector<Eigen::MatrixXd> hess_sigma;      // ∂_i∂_jσ^α
    std::vector<Eigen::MatrixXd> nabla_plus_dsigma;  // (∇⁺_i dσ^α)_j at (i, j)
    Eigen::MatrixXd t_up, t_down;                 // T^{αβ}, T_{αβ}

    // zero-mode bases (columns): τ₊, τ₋ for Model II; TN twice for Model III
    Eigen::MatrixXd zero_plus, zero_minus;

    int dim() const { return static_cast<int>(x.size()); }
    int actions() const { return static_cast<int>(v.size()); }
    int sections() const { return static_cast<int>(sigma.size()); }
    int zero_modes() const { return static_cast<int>(zero_plus.cols()); }
};

/// Frame at lift(q) with zero modes the τ± lifts of ∂_q.
PointFrame quotient_point_frame(const QuotientScenario& scn, const Eigen::VectorXd& q);
/// Frame at embed(u) with zero modes the pushed-forward ∂_u.
PointFrame section_point_frame(const SubmanifoldScenario& scn, const Eigen::VectorXd& u);

/// Max residual over the stored inverse pairs (g, K, T, T^{αβ}).
double frame_inverse_residual(const PointFrame& f);

enum class Model { II, III };

/// Generators: ψ₊ zero modes are θ_0 … θ_{m−1}, ψ₋ zero modes θ_m … θ_{2m−1}.
struct ZeroModes {
    GrassmannVector psi_plus, psi_minus;  // ambient components
    int generators = 0;
};
ZeroModes zero_modes(const PointFrame& f);

/// ¼ R(α,β,γ,δ) ψ₊^α ψ₊^β ψ₋^γ ψ₋^δ for an array already contracted with the
/// zero-mode bases (first pair on ψ₊, second on ψ₋).
GrassmannElement curvature_exponent(const Tensor4<double>& r, int m);

/// S_II after η± restricts ψ± to the zero modes. Unknown groups: "F", "phi+-",
/// "phi++", "phi--".
AuxiliaryPolynomial model_two_action(const PointFrame& f, const ZeroModes& z);

/// S_III after L fixes x ∈ N and χ± restrict ψ± to TN, with u = √−1 U real.
/// Unknown groups: "F_t", "F_n" (F in a tangent ⊕ normal basis), "u".
AuxiliaryPolynomial model_three_action(const PointFrame& f, const ZeroModes& z);

enum class EliminationOrder { FieldFirst, PhiFirst };

struct LocalizationResult {
    GrassmannElement exponent;
    int zero_modes = 0;
    double constraint_residual = 0.0;  // zero-mode bases against the defining rows
    double delta_residual = 0.0;
    GrassmannVector phi_pm;            // stationary φ₊₋ (Model II, FieldFirst only)
};

/// Runs the elimination chain of the chosen model. Throws FrameMismatchError if
/// the zero-mode bases violate their constraints by more than `tol`.
LocalizationResult localize_model(const PointFrame& f, Model model,
                                  EliminationOrder order = EliminationOrder::FieldFirst, double tol = 1e-8);

/// φ₊₋^a = −½T^{ab}[(∇₊V⁻_b, ψ₋) + (∇₋V⁺_b, ψ₊) − H_{ij}^k ψ₋^i ψ₊^j ξ_{bk}].
GrassmannVector phi_pm_closed_form(const PointFrame& f, const ZeroModes& z);

/// Pf of the curvature 2-form density for an orthonormal-frame array R̂: the
/// top coefficient of exp(−¼R̂ψ₊ψ₊ψ₋ψ₋), extracted by a Berezin integral.
double pfaffian_density(const Tensor4<double>& r_hat);
/// Same number from the permutation expansion of Pf(Ω), Ω_ab = R̂(·,·,b,a).
double pfaffian_density_expansion(const Tensor4<double>& r_hat);

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

/// Coordinate box covering a compact manifold up to a null set.
struct EulerDomain {
    std::string name;
    GeneralizedMetric ctx;
    Eigen::VectorXd lo, hi;
};

/// (2π)^{−d/2} ∫ Pf(R^s) √g over the box with a tensor Gauss–Legendre rule.
double euler_characteristic(const EulerDomain& dom, int order, int sign = -1, int jobs = 1);

}  // namespace ggred
