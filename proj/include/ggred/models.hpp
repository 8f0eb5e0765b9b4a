#pragma once

#include "ggred/gk.hpp"
#include "ggred/localization.hpp"
#include "ggred/quotient.hpp"
#include "ggred/submanifold.hpp"

namespace ggred {

/// Adds f·dx^a∧dx^b∧dx^c to fully antisymmetric 3-form components.
template <typename S>
void add_form3(VecX<S>& h, int n, int a, int b, int c, const S& f) {
    const int idx[3] = {a, b, c};
    static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    for (int p = 0; p < 6; ++p) {
        int i = idx[perms[p][0]], j = idx[perms[p][1]], k = idx[perms[p][2]];
        if (p < 3) h((i * n + j) * n + k) += f; else h((i * n + j) * n + k) -= f;
    }
}

/// Unit S³ in Hopf coordinates (η, ξ1, ξ2), g = dη² + cos²η dξ1² + sin²η dξ2²,
/// acted on by V = ∂ξ1 + ∂ξ2, with H = λ sinη cosη dη∧dξ1∧dξ2 and
/// ξ = (λ/2) sin²η (dξ1 − dξ2). Quotient coordinates (η, δ = ξ1 − ξ2).
QuotientScenario hopf_quotient(double lambda);

/// S² × S¹ in (θ, φ, t) with V = ∂t, H = c sinθ dθ∧dφ∧dt, ξ = −c cosθ dφ.
QuotientScenario product_quotient(double c);

/// S³ × T² in (η, ξ1, ξ2, t1, t2), V = ∂ξ1 + ∂ξ2,
/// H = λ sinη cosη dη∧dξ1∧dξ2 + μ dη∧dt1∧dt2, ξ = (λ/2) sin²η (dξ1 − dξ2) + ν dt1.
QuotientScenario hopf_torus_quotient(double lambda, double nu, double mu);

/// Unit S³ ⊂ R⁴ (σ = |x|² − 1) divided by the circle action V = Jx, ξ = 0,
/// H = 0. Quotient chart (θ, φ) on S².
QuotientScenario kahler_hopf_quotient();

/// Round S³ of unit radius in Hopf coordinates with H = λ sinη cosη dη∧dξ1∧dξ2.
GeneralizedMetric hopf_s3_metric(double lambda);

/// Metric with a pair of complex structures.
struct GKScenario {
    std::string name;
    GeneralizedMetric ctx;
    BiHermitianData bh;
};

/// S³ × S¹ in (η, ξ1, ξ2, t) with the product metric and H = λ sinη cosη dη∧dξ1∧dξ2.
/// J± send ∂t ↦ e1, e2 ↦ e3 for the left-invariant frame (q·i, q·j, q·k) or the
/// right-invariant one (i·q, j·q, k·q); `plus_left` picks which goes to J₊.
GKScenario s3xs1_gk(double lambda, bool plus_left);
GKScenario s3xs1_gk();

/// J₊ = J₋ = the standard complex structure on the R⁴ chart of kahler_hopf_quotient.
BiHermitianData kahler_structures(ChartPtr chart);

/// Flat R³ with H = c dx∧dy∧dz.
GeneralizedMetric flat_flux_metric(double c);

/// Unit sphere σ = |x|² − 1 in flat R³ with H = c dx∧dy∧dz, N chart (θ, φ).
SubmanifoldScenario sphere_in_flat(double c);

/// Plane σ = x in flat R³ with H = c dx∧dy∧dz, N chart (y, z).
SubmanifoldScenario plane_in_flat(double c);

/// Compact domains for the Euler characteristic: round S² of the given radius, flat T², S² × S²,
/// and S³ × S¹ with H = λ sinη cosη dη∧dξ1∧dξ2 (Hopf coordinates over a full period).
EulerDomain euler_sphere(double radius = 1.0);
EulerDomain euler_torus();
EulerDomain euler_sphere_product();
EulerDomain euler_s3xs1(double lambda);

}  // namespace ggred
