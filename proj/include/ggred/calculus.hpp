#pragma once

#include <unsupported/Eigen/CXX11/Tensor>
#include <array>
#include <numeric>
#include <vector>

#include "ggred/chart.hpp"
#include "ggred/linalg.hpp"

namespace ggred {

template <typename T>
using Tensor3 = Eigen::Tensor<T, 3, Eigen::RowMajor>;
template <typename T>
using Tensor4 = Eigen::Tensor<T, 4, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Forward-mode derivatives of anything callable on the dual tower.
// ---------------------------------------------------------------------------

/// J(c, i) = ∂_i f_c at x. One dual evaluation per coordinate.
template <typename F, typename T>
MatX<T> jacobian(const F& f, const VecX<T>& x) {
    const int n = static_cast<int>(x.size());
    VecX<Dual<T>> xd(n);
    for (int j = 0; j < n; ++j) xd(j) = Dual<T>(x(j), T(0.0));
    MatX<T> jac;
    for (int i = 0; i < n; ++i) {
        xd(i).b = T(1.0);
        VecX<Dual<T>> y = f(xd);
        xd(i).b = T(0.0);
        if (i == 0) jac.resize(y.size(), n);
        for (Eigen::Index c = 0; c < y.size(); ++c) jac(c, i) = y(c).b;
    }
    return jac;
}

/// Directional derivative v^i ∂_i f at x in a single dual evaluation.
template <typename F, typename T>
VecX<T> directional(const F& f, const VecX<T>& x, const VecX<T>& v) {
    VecX<Dual<T>> xd(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) xd(j) = Dual<T>(x(j), v(j));
    VecX<Dual<T>> y = f(xd);
    VecX<T> out(y.size());
    for (Eigen::Index c = 0; c < y.size(); ++c) out(c) = y(c).b;
    return out;
}

/// Value, first and second partials of a field at a double point.
struct PointJet {
    Eigen::VectorXd point;
    Eigen::VectorXd value;
    Eigen::MatrixXd first;                     // (component, i)
    std::vector<Eigen::MatrixXd> second;       // second[c](i, j)
};

/// Exact partials of `f` at `point` through nested duals. `order` is 1 or 2.
PointJet differentiate(const ChartField& f, const Eigen::VectorXd& point, int order);

/// Hessian of every component, generic in the scalar type: H[c](i,j).
template <typename F, typename T>
std::vector<MatX<T>> hessian(const F& f, const VecX<T>& x) {
    auto grad = [&f](const auto& y) {
        using S = typename std::decay_t<decltype(y)>::Scalar;
        MatX<S> j = jacobian(f, y);
        return VecX<S>(Eigen::Map<const VecX<S>>(j.data(), j.size()));
    };
    // column-major flattening: index c + rows*i
    MatX<T> jj = jacobian(grad, x);
    const int n = static_cast<int>(x.size());
    const int comps = static_cast<int>(jj.rows()) / n;
    std::vector<MatX<T>> out(comps, MatX<T>(n, n));
    for (int c = 0; c < comps; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[c](i, j) = jj(c + comps * i, j);
    return out;
}

// ---------------------------------------------------------------------------
// Metric geometry
// ---------------------------------------------------------------------------

template <typename T>
MatX<T> metric_at(const ChartField& g, const VecX<T>& x) {
    return as_matrix<T>(g(x), g.dim());
}

/// Γ(i, j, k) = Γ^i_{jk} = ½ g^{il}(∂_j g_{lk} + ∂_k g_{jl} − ∂_l g_{jk}).
template <typename T>
Tensor3<T> christoffel_at(const ChartField& g, const VecX<T>& x) {
    const int n = g.dim();
    MatX<T> gm = metric_at(g, x);
    MatX<T> ginv = inverse<SingularMetricError>(gm, "metric is singular");
    MatX<T> dg = jacobian(g, x);  // dg(l*n+k, j) = ∂_j g_{lk}
    Tensor3<T> lowered(n, n, n);  // Γ_{ljk}
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                lowered(l, j, k) = 0.5 * (dg(l * n + k, j) + dg(j * n + l, k) - dg(j * n + k, l));
    Tensor3<T> gamma(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                T acc(0.0);
                for (int l = 0; l < n; ++l) acc += ginv(i, l) * lowered(l, j, k);
                gamma(i, j, k) = acc;
            }
    return gamma;
}

template <typename T>
VecX<T> flatten(const Tensor3<T>& t) {
    return Eigen::Map<const VecX<T>>(t.data(), t.size());
}
template <typename T>
VecX<T> flatten(const Tensor4<T>& t) {
    return Eigen::Map<const VecX<T>>(t.data(), t.size());
}

/// R(i,j,k,l) = g(R(∂_i,∂_j)∂_k, ∂_l) with R(X,Y) = [∇_X,∇_Y] − ∇_[X,Y].
template <typename T>
Tensor4<T> riemann_at(const ChartField& g, const VecX<T>& x) {
    const int n = g.dim();
    MatX<T> gm = metric_at(g, x);
    Tensor3<T> gamma = christoffel_at(g, x);
    auto gamma_flat = [&g](const auto& y) { return flatten(christoffel_at(g, y)); };
    MatX<T> dgamma = jacobian(gamma_flat, x);  // (m*n*n + j*n + k, i) = ∂_i Γ^m_{jk}
    auto d = [&](int m, int j, int k, int i) { return dgamma((m * n + j) * n + k, i); };
    Tensor4<T> r(n, n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                VecX<T> up(n);
                for (int m = 0; m < n; ++m) {
                    T acc = d(m, j, k, i) - d(m, i, k, j);
                    for (int p = 0; p < n; ++p)
                        acc += gamma(m, i, p) * gamma(p, j, k) - gamma(m, j, p) * gamma(p, i, k);
                    up(m) = acc;
                }
                for (int l = 0; l < n; ++l) {
                    T acc(0.0);
                    for (int m = 0; m < n; ++m) acc += gm(l, m) * up(m);
                    r(i, j, k, l) = acc;
                }
            }
    return r;
}

Tensor3<double> christoffel(const ChartField& g, const Eigen::VectorXd& point);
Tensor4<double> riemann(const ChartField& g, const Eigen::VectorXd& point);

/// Levi-Civita covariant derivative of a vector field: (∇_j Y)^i stored (i, j).
template <typename T>
MatX<T> covariant_vector(const ChartField& g, const ChartField& y, const VecX<T>& x) {
    const int n = g.dim();
    Tensor3<T> gamma = christoffel_at(g, x);
    MatX<T> dy = jacobian(y, x);
    VecX<T> yv = y(x);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) dy(i, j) += gamma(i, j, k) * yv(k);
    return dy;
}

/// Levi-Civita covariant derivative of a 1-form: ∇_j ξ_i stored (j, i).
template <typename T>
MatX<T> covariant_covector(const ChartField& g, const ChartField& xi, const VecX<T>& x) {
    const int n = g.dim();
    Tensor3<T> gamma = christoffel_at(g, x);
    MatX<T> dxi = jacobian(xi, x);  // (i, j) = ∂_j ξ_i
    VecX<T> xv = xi(x);
    MatX<T> out(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            T acc = dxi(i, j);
            for (int k = 0; k < n; ++k) acc -= gamma(k, j, i) * xv(k);
            out(j, i) = acc;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Exterior calculus on fully antisymmetric component arrays
// ---------------------------------------------------------------------------

/// Flat row-major index of a multi-index.
inline int flat_index(const int* idx, int rank, int n) {
    int f = 0;
    for (int r = 0; r < rank; ++r) f = f * n + idx[r];
    return f;
}

inline int ipow(int n, int k) {
    int r = 1;
    for (int i = 0; i < k; ++i) r *= n;
    return r;
}

/// (dω)_{i0..ik} = Σ_j (−1)^j ∂_{ij} ω_{i0..îj..ik}; `dw(f, i)` = ∂_i ω_f.
template <typename T>
VecX<T> exterior_derivative_components(const MatX<T>& dw, int degree, int n) {
    const int out_rank = degree + 1;
    VecX<T> out = VecX<T>::Zero(ipow(n, out_rank));
    std::array<int, 8> idx{};
    std::array<int, 8> sub{};
    for (int f = 0; f < out.size(); ++f) {
        int rem = f;
        for (int r = out_rank - 1; r >= 0; --r) { idx[r] = rem % n; rem /= n; }
        T acc(0.0);
        for (int j = 0; j < out_rank; ++j) {
            int q = 0;
            for (int r = 0; r < out_rank; ++r)
                if (r != j) sub[q++] = idx[r];
            T term = dw(flat_index(sub.data(), degree, n), idx[j]);
            if (j % 2 == 0) acc += term; else acc -= term;
        }
        out(f) = acc;
    }
    return out;
}

/// d applied to a k-form field at x.
template <typename T>
VecX<T> exterior_derivative_at(const ChartField& w, const VecX<T>& x) {
    const Valence& v = w.valence();
    if (v.contravariant != 0 || (v.covariant > 0 && !v.antisymmetric))
        throw DegreeError("exterior derivative needs a differential form");
    if (v.covariant + 1 > w.dim()) throw DegreeError("form degree exceeds dimension");
    return exterior_derivative_components<T>(jacobian(w, x), v.covariant, w.dim());
}

/// ι_X ω: contraction in the first slot.
template <typename T>
VecX<T> interior_components(const VecX<T>& x_vec, const VecX<T>& w, int degree, int n) {
    if (degree < 1) throw DegreeError("interior product of a 0-form");
    const int tail = ipow(n, degree - 1);
    VecX<T> out = VecX<T>::Zero(tail);
    for (int j = 0; j < n; ++j)
        for (int f = 0; f < tail; ++f) out(f) += x_vec(j) * w(j * tail + f);
    return out;
}

/// Sign of a permutation given as an index array.
int permutation_sign(const std::vector<int>& perm);

/// ω∧η with (ω∧η)(v…) = (1/p!q!) Σ_σ sgn σ ω(v_σ…)η(v_σ…).
template <typename T>
VecX<T> wedge_components(const VecX<T>& w, int p, const VecX<T>& e, int q, int n) {
    if (p + q > n) throw DegreeError("wedge degree exceeds dimension");
    const int rank = p + q;
    std::vector<int> perm(rank);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    std::vector<int> signs;
    do {
        perms.push_back(perm);
        signs.push_back(permutation_sign(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    double norm = 1.0;
    for (int i = 2; i <= p; ++i) norm *= i;
    for (int i = 2; i <= q; ++i) norm *= i;
    VecX<T> out = VecX<T>::Zero(ipow(n, rank));
    std::array<int, 8> idx{}, a{}, b{};
    for (int f = 0; f < out.size(); ++f) {
        int rem = f;
        for (int r = rank - 1; r >= 0; --r) { idx[r] = rem % n; rem /= n; }
        T acc(0.0);
        for (std::size_t s = 0; s < perms.size(); ++s) {
            for (int r = 0; r < p; ++r) a[r] = idx[perms[s][r]];
            for (int r = 0; r < q; ++r) b[r] = idx[perms[s][p + r]];
            T term = w(flat_index(a.data(), p, n)) * e(flat_index(b.data(), q, n));
            if (signs[s] > 0) acc += term; else acc -= term;
        }
        out(f) = acc / norm;
    }
    return out;
}

/// d ω as a new field (one derivative level consumed).
ChartField exterior_derivative(const ChartField& w);

/// [X,Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i.
template <typename T>
VecX<T> lie_bracket_at(const ChartField& x_field, const ChartField& y_field, const VecX<T>& x) {
    VecX<T> xv = x_field(x), yv = y_field(x);
    return jacobian(y_field, x) * xv - jacobian(x_field, x) * yv;
}

Eigen::VectorXd lie_bracket(const ChartField& x_field, const ChartField& y_field,
                            const Eigen::VectorXd& point);

/// Max |Γ^i_{jk} − Γ^i_{kj}|, used by the symmetry checks.
double christoffel_asymmetry(const Tensor3<double>& gamma);

/// Residuals of the algebraic curvature identities.
struct CurvatureSymmetry {
    double antisym_first = 0.0;   // R_{ijkl} + R_{jikl}
    double antisym_second = 0.0;  // R_{ijkl} + R_{ijlk}
    double pair = 0.0;            // R_{ijkl} − R_{klij}
    double bianchi = 0.0;         // R_{ijkl} + R_{jkil} + R_{kijl}
};
CurvatureSymmetry curvature_symmetry(const Tensor4<double>& r);

/// Max |∇_k g_{ij}| with ∇ the Levi-Civita connection computed from g.
double metric_compatibility_residual(const ChartField& g, const Eigen::VectorXd& point);

}  // namespace ggred
