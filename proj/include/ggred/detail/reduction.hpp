#pragma once

// Scalar-generic building blocks shared by the reduction modules.

#include "ggred/quotient.hpp"

namespace ggred::detail {

template <typename T>
struct ActionData {
    MatX<T> g, ginv;
    MatX<T> v;      // dim × s, columns V_a
    MatX<T> xi;     // s × dim, rows ξ_a
    MatX<T> gram, k, kinv, t;
    MatX<T> sigma;  // r × dim, rows dσ^α

    /// Rows ξ^±_a = g(V_a) ± ξ_a.
    MatX<T> rows(int sign) const {
        MatX<T> r = v.transpose() * g;
        if (sign > 0) r += xi; else r -= xi;
        return r;
    }

    /// Projection of w onto τ± along span{V_a, g⁻¹dσ^α}.
    VecX<T> horizontal(int sign, const VecX<T>& w) const {
        const Eigen::Index s = v.cols(), r = sigma.rows(), n = g.rows();
        MatX<T> c(s + r, n), d(n, s + r);
        c.topRows(s) = rows(sign);
        d.leftCols(s) = v;
        if (r > 0) {
            c.bottomRows(r) = sigma;
            d.rightCols(r) = ginv * sigma.transpose();
        }
        MatX<T> rhs = c * w;
        MatX<T> coef = lu_solve<RankError>(MatX<T>(c * d), rhs, "horizontal projection is degenerate");
        return w - d * coef;
    }
};

template <typename T>
ActionData<T> action_data(const GeneralizedMetric& ctx, const ExtendedAction& ea, const VecX<T>& x,
                          const SectionData* section) {
    const int n = ctx.dim(), s = ea.size();
    ActionData<T> a;
    a.g = metric_at(ctx.g(), x);
    a.ginv = inverse<SingularMetricError>(a.g, "metric is singular");
    a.v.resize(n, s);
    a.xi.resize(s, n);
    for (int b = 0; b < s; ++b) {
        a.v.col(b) = ea.v[b](x);
        a.xi.row(b) = ea.xi[b](x).transpose();
    }
    a.gram = a.v.transpose() * a.g * a.v;
    a.k = a.gram - a.xi * a.v;
    a.kinv = inverse<RankError>(a.k, "K is singular");
    a.t = a.gram + a.xi * a.ginv * a.xi.transpose();
    const int r = section ? section->size() : 0;
    a.sigma.resize(r, n);
    for (int al = 0; al < r; ++al) a.sigma.row(al) = jacobian(section->sigma[al], x);
    return a;
}

/// d of the 1-forms given as rows of rows(y): out[b](j,k) = ∂_jρ_{bk} − ∂_kρ_{bj}.
template <typename T, typename F>
std::vector<MatX<T>> d_rows(const F& rows_fn, const VecX<T>& x, int s, int n) {
    MatX<T> jac = jacobian(rows_fn, x);  // (b*n + k, j)
    std::vector<MatX<T>> out(s, MatX<T>(n, n));
    for (int b = 0; b < s; ++b)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out[b](j, k) = jac(b * n + k, j) - jac(b * n + j, k);
    return out;
}

template <typename T>
VecX<T> flatten_rows(const MatX<T>& m) {
    VecX<T> out(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i * m.cols() + j) = m(i, j);
    return out;
}

/// d ξ^±_b at x.
template <typename T>
std::vector<MatX<T>> d_constraint(const GeneralizedMetric& ctx, const ExtendedAction& ea, int sign,
                                  const VecX<T>& x) {
    auto fn = [&ctx, &ea, sign](const auto& y) {
        using S = typename std::decay_t<decltype(y)>::Scalar;
        const int n = ctx.dim(), s = ea.size();
        MatX<S> g = metric_at(ctx.g(), y);
        MatX<S> r(s, n);
        for (int b = 0; b < s; ++b) {
            VecX<S> row = g * ea.v[b](y);
            if (sign > 0) row += ea.xi[b](y); else row -= ea.xi[b](y);
            r.row(b) = row.transpose();
        }
        return flatten_rows<S>(r);
    };
    return d_rows(fn, x, ea.size(), ctx.dim());
}

template <typename T>
std::pair<VecX<T>, MatX<T>> lifted_frame_at(const QuotientScenario& scn, int sign, const VecX<T>& q) {
    VecX<T> x = scn.lift(q);
    MatX<T> w = jacobian(scn.lift, q);
    auto data = action_data(scn.ctx, scn.action, x, scn.section ? &*scn.section : nullptr);
    MatX<T> f(w.rows(), w.cols());
    for (Eigen::Index i = 0; i < w.cols(); ++i) f.col(i) = data.horizontal(sign, VecX<T>(w.col(i)));
    return {x, f};
}

template <typename T>
VecX<T> reduced_metric_at(const QuotientScenario& scn, int sign, const VecX<T>& q) {
    auto [x, f] = lifted_frame_at(scn, sign, q);
    MatX<T> gm = metric_at(scn.ctx.g(), x);
    return flatten<T>(MatX<T>(f.transpose() * gm * f));
}

template <typename T>
VecX<T> reduced_flux_at(const QuotientScenario& scn, const VecX<T>& q) {
    const auto& ctx = scn.ctx;
    const int n = ctx.dim(), m = scn.quotient_dim(), s = scn.action.size();
    if (m < 3) return VecX<T>::Zero(m * m * m);
    auto [x, f] = lifted_frame_at(scn, 1, q);
    auto data = action_data(ctx, scn.action, x, scn.section ? &*scn.section : nullptr);
    auto dxp = d_constraint(ctx, scn.action, 1, x);
    VecX<T> h = ctx.h()(x);
    // Ω₊^a pulled back to the lifted frame, and ξ_a on it.
    std::vector<MatX<T>> omega(s, MatX<T>::Zero(m, m));
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b)
            omega[a] += data.kinv(b, a) * MatX<T>(f.transpose() * dxp[b] * f);
    MatX<T> xif = data.xi * f;  // (a, i)
    // H on the frame, one slot at a time.
    std::vector<T> h1(m * n * n, T(0.0)), h2(m * m * n, T(0.0));
    for (int i = 0; i < m; ++i)
        for (int p = 0; p < n; ++p)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) h1[(i * n + b) * n + c] += f(p, i) * h((p * n + b) * n + c);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) h2[(i * m + j) * n + c] += f(b, j) * h1[(i * n + b) * n + c];
    VecX<T> out(m * m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                T acc(0.0);
                for (int c = 0; c < n; ++c) acc += f(c, k) * h2[(i * m + j) * n + c];
                for (int a = 0; a < s; ++a)
                    acc += omega[a](i, j) * xif(a, k) + omega[a](j, k) * xif(a, i) +
                           omega[a](k, i) * xif(a, j);
                out((i * m + j) * m + k) = acc;
            }
    return out;
}

}  // namespace ggred::detail
