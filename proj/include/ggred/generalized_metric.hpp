#pragma once

#include <random>

#include "ggred/calculus.hpp"

namespace ggred {

/// X + ξ at a point of TM ⊕ T*M.
struct GeneralizedVector {
    Eigen::VectorXd x;
    Eigen::VectorXd xi;
};

/// ⟨X+ξ, Y+η⟩ = ξ(Y) + η(X).
inline double pairing(const GeneralizedVector& a, const GeneralizedVector& b) {
    return a.xi.dot(b.x) + b.xi.dot(a.x);
}

/// A section of TM ⊕ T*M given by a vector field and a 1-form field.
struct GeneralizedField {
    ChartField x;
    ChartField xi;
};

/// (g, H) with H a closed 3-form.
class GeneralizedMetric {
public:
    GeneralizedMetric(ChartField g, ChartField h);
    /// H = 0.
    explicit GeneralizedMetric(ChartField g);

    const ChartField& g() const { return g_; }
    const ChartField& h() const { return h_; }
    int dim() const { return g_.dim(); }
    const Chart& chart() const { return g_.chart(); }

    /// Max residual of symmetry, positivity (as a shortfall) and dH = 0 over `points`.
    struct Validation {
        double symmetry = 0.0;
        double min_eigenvalue = 0.0;
        double dh = 0.0;
        double h_antisymmetry = 0.0;
    };
    Validation validate(const std::vector<Eigen::VectorXd>& points) const;

private:
    ChartField g_, h_;
};

/// Zero 3-form on a chart.
ChartField zero_form(ChartPtr chart, int degree);

// ---------------------------------------------------------------------------

/// H(X, Y, ·)_k = X^i Y^j H_{ijk}.
template <typename T>
VecX<T> contract_two(const VecX<T>& h, const VecX<T>& x, const VecX<T>& y, int n) {
    VecX<T> out = VecX<T>::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            T xy = x(i) * y(j);
            for (int k = 0; k < n; ++k) out(k) += xy * h((i * n + j) * n + k);
        }
    return out;
}

/// [X+ξ, Y+η]_H = [X,Y] + L_Xη − ι_Y dξ + ι_Yι_X H at x, as (vector, covector).
template <typename T>
std::pair<VecX<T>, VecX<T>> courant_bracket_at(const GeneralizedField& a, const GeneralizedField& b,
                                               const ChartField& h, const VecX<T>& x) {
    const int n = static_cast<int>(x.size());
    VecX<T> xv = a.x(x), yv = b.x(x);
    MatX<T> dxi = jacobian(a.xi, x);   // (k, j) = ∂_j ξ_k
    MatX<T> deta = jacobian(b.xi, x);
    auto pair_fn = [&a, &b](const auto& p) {
        using S = typename std::decay_t<decltype(p)>::Scalar;
        VecX<S> v(1);
        v(0) = a.x(p).dot(b.xi(p));
        return v;
    };
    MatX<T> d_ix_eta = jacobian(pair_fn, x);  // (0, k) = ∂_k (ι_X η)
    VecX<T> vec = lie_bracket_at(a.x, b.x, x);
    VecX<T> form = contract_two<T>(h(x), xv, yv, n);
    for (int k = 0; k < n; ++k) {
        T acc = d_ix_eta(0, k);
        for (int j = 0; j < n; ++j) {
            acc += xv(j) * (deta(k, j) - deta(j, k));  // ι_X dη
            acc -= yv(j) * (dxi(k, j) - dxi(j, k));    // ι_Y dξ
        }
        form(k) += acc;
    }
    return {vec, form};
}

GeneralizedVector courant_bracket(const GeneralizedField& a, const GeneralizedField& b,
                                  const GeneralizedMetric& ctx, const Eigen::VectorXd& point);

/// X± = ½(X ± g⁻¹ξ).
std::pair<Eigen::VectorXd, Eigen::VectorXd> split_pm(const GeneralizedVector& a,
                                                     const Eigen::MatrixXd& g);
std::pair<Eigen::VectorXd, Eigen::VectorXd> split_pm(const GeneralizedVector& a,
                                                     const GeneralizedMetric& ctx,
                                                     const Eigen::VectorXd& point);

/// Connection coefficients of ∇±: Γ±(i,j,k) = Γ^i_{jk} ± ½ g^{il} H_{ljk},
/// so that (∇±_X Y)^i = X^j ∂_j Y^i + Γ±(i,j,k) X^j Y^k.
template <typename T>
Tensor3<T> bismut_christoffel_at(const GeneralizedMetric& ctx, int sign, const VecX<T>& x) {
    const int n = ctx.dim();
    Tensor3<T> gamma = christoffel_at(ctx.g(), x);
    MatX<T> ginv = inverse<SingularMetricError>(metric_at(ctx.g(), x), "metric is singular");
    VecX<T> h = ctx.h()(x);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                T acc(0.0);
                for (int l = 0; l < n; ++l) acc += ginv(i, l) * h((l * n + j) * n + k);
                gamma(i, j, k) += (0.5 * sign) * acc;
            }
    return gamma;
}

template <typename T>
VecX<T> bismut_derivative_at(const GeneralizedMetric& ctx, int sign, const ChartField& xf,
                             const ChartField& yf, const VecX<T>& x) {
    const int n = ctx.dim();
    Tensor3<T> gam = bismut_christoffel_at(ctx, sign, x);
    VecX<T> xv = xf(x), yv = yf(x);
    VecX<T> out = jacobian(yf, x) * xv;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out(i) += gam(i, j, k) * xv(j) * yv(k);
    return out;
}

/// ∇±_X Y at a point; sign is +1 or −1.
Eigen::VectorXd bismut_derivative(const ChartField& xf, const ChartField& yf, int sign,
                                  const GeneralizedMetric& ctx, const Eigen::VectorXd& point);

/// Vector part of the V± projection of [X ∓ g(X), Y ± g(Y)]_H.
Eigen::VectorXd bismut_via_courant(const ChartField& xf, const ChartField& yf, int sign,
                                   const GeneralizedMetric& ctx, const Eigen::VectorXd& point);

/// T±(X,Y) = ∇±_X Y − ∇±_Y X − [X,Y].
Eigen::VectorXd bismut_torsion(const ChartField& xf, const ChartField& yf, int sign,
                               const GeneralizedMetric& ctx, const Eigen::VectorXd& point);

/// Levi-Civita ∇_i H_{jkl}, stored (i, j, k, l).
template <typename T>
Tensor4<T> covariant_h_at(const GeneralizedMetric& ctx, const VecX<T>& x) {
    const int n = ctx.dim();
    Tensor3<T> gamma = christoffel_at(ctx.g(), x);
    VecX<T> h = ctx.h()(x);
    MatX<T> dh = jacobian(ctx.h(), x);
    auto H = [&](int a, int b, int c) { return h((a * n + b) * n + c); };
    Tensor4<T> out(n, n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    T acc = dh((j * n + k) * n + l, i);
                    for (int p = 0; p < n; ++p)
                        acc -= gamma(p, i, j) * H(p, k, l) + gamma(p, i, k) * H(j, p, l) +
                               gamma(p, i, l) * H(j, k, p);
                    out(i, j, k, l) = acc;
                }
    return out;
}

/// R±_{ijkl} from the closed formula
///   R⁻ = R − ½(∇_iH_{jkl} − ∇_jH_{ikl}) + ¼(H_{ipl}H_{jk}^p − H_{jpl}H_{ik}^p),
/// R⁺ the same with H → −H.
template <typename T>
Tensor4<T> bismut_curvature_at(const GeneralizedMetric& ctx, int sign, const VecX<T>& x) {
    const int n = ctx.dim();
    Tensor4<T> r = riemann_at(ctx.g(), x);
    Tensor4<T> dh = covariant_h_at(ctx, x);
    MatX<T> ginv = inverse<SingularMetricError>(metric_at(ctx.g(), x), "metric is singular");
    VecX<T> h = ctx.h()(x);
    const double s = -sign;  // H → s·H relative to R⁻
    auto H = [&](int a, int b, int c) { return h((a * n + b) * n + c); };
    // Hu(i, k, p) = H_{ik}^p
    Tensor3<T> hu(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int p = 0; p < n; ++p) {
                T acc(0.0);
                for (int q = 0; q < n; ++q) acc += H(i, k, q) * ginv(q, p);
                hu(i, k, p) = acc;
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    T quad(0.0);
                    for (int p = 0; p < n; ++p)
                        quad += H(i, p, l) * hu(j, k, p) - H(j, p, l) * hu(i, k, p);
                    r(i, j, k, l) += (-0.5 * s) * (dh(i, j, k, l) - dh(j, i, k, l)) + 0.25 * quad;
                }
    return r;
}

Tensor4<double> bismut_curvature(int sign, const GeneralizedMetric& ctx, const Eigen::VectorXd& point);

/// Same tensor from the commutator [∇_i, ∇_j]∂_k of the connection coefficients.
Tensor4<double> bismut_curvature_commutator(int sign, const GeneralizedMetric& ctx,
                                            const Eigen::VectorXd& point);

/// max |R⁻_{ijkl} − R⁺_{klij}|.
double pair_symmetry_residual(const Tensor4<double>& rm, const Tensor4<double>& rp);

double max_abs(const Tensor4<double>& t);
double max_abs_diff(const Tensor4<double>& a, const Tensor4<double>& b);

}  // namespace ggred
