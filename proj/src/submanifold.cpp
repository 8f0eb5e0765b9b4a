#include "ggred/submanifold.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ggred/quotient.hpp"

namespace ggred {

namespace {

template <typename T>
MatX<T> sigma_rows(const SectionData& sd, const VecX<T>& x) {
    MatX<T> rows(sd.size(), x.size());
    for (int a = 0; a < sd.size(); ++a) rows.row(a) = jacobian(sd.sigma[a], x);
    return rows;
}

void require_on_locus(const SectionData& sd, const Eigen::VectorXd& x) {
    for (const auto& s : sd.sigma)
        if (std::abs(s(x)(0)) > kLocusTolerance) throw DomainError("point is not on the zero locus");
}

/// (∇^s_j dσ^β)_k stored as hess[β](j, k).
std::vector<Eigen::MatrixXd> sigma_hessians(const SubmanifoldScenario& scn, int sign, const Eigen::VectorXd& x) {
    const int n = scn.ctx.dim();
    Tensor3<double> gam = bismut_christoffel_at<double>(scn.ctx, sign, x);
    std::vector<Eigen::MatrixXd> out;
    for (const auto& s : scn.section.sigma) {
        Eigen::MatrixXd h = hessian(s, VecX<double>(x))[0];
        Eigen::MatrixXd ds = jacobian(s, VecX<double>(x));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int p = 0; p < n; ++p) h(j, k) -= gam(p, j, k) * ds(0, p);
        out.push_back(h);
    }
    return out;
}

/// X^j Y^k Γ(i,j,k)
Eigen::VectorXd connection_term(const Tensor3<double>& gam, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out(i) += gam(i, j, k) * x(j) * y(k);
    return out;
}

/// Derivative of the pushed-forward field u ↦ d(embed)(u)·Ȳ(u) along X̄.
Eigen::VectorXd along_n_derivative(const SubmanifoldScenario& scn, const ChartField& xf, const ChartField& yf,
                                   const Eigen::VectorXd& u) {
    auto pushed = [&scn, &yf](const auto& uu) {
        using S = typename std::decay_t<decltype(uu)>::Scalar;
        return VecX<S>(jacobian(scn.embed, uu) * yf(uu));
    };
    return directional(pushed, VecX<double>(u), VecX<double>(xf(u)));
}

/// Same derivative after extending Ȳ off N through the first-order nearest-point map.
Eigen::VectorXd tubular_derivative(const SubmanifoldScenario& scn, const ChartField& xf, const ChartField& yf,
                                   const Eigen::VectorXd& u) {
    Eigen::VectorXd x0 = scn.embed(u);
    Eigen::MatrixXd e = jacobian(scn.embed, VecX<double>(u));
    Eigen::MatrixXd g = metric_at<double>(scn.ctx.g(), x0);
    Eigen::MatrixXd proj = (e.transpose() * g * e).ldlt().solve(e.transpose() * g);
    auto extended = [&scn, &yf, &u, &x0, &proj](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> uu(u.size());
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            S acc(u(i));
            for (Eigen::Index j = 0; j < x.size(); ++j) acc += proj(i, j) * (x(j) - x0(j));
            uu(i) = acc;
        }
        return VecX<S>(jacobian(scn.embed, uu) * yf(uu));
    };
    Eigen::VectorXd xv = e * xf(u);
    return directional(extended, VecX<double>(x0), VecX<double>(xv));
}

}  // namespace

SubmanifoldValidation validate_submanifold(const SubmanifoldScenario& scn,
                                           const std::vector<Eigen::VectorXd>& nchart_points) {
    SubmanifoldValidation out;
    out.min_singular = out.dsigma_singular = std::numeric_limits<double>::infinity();
    for (const auto& u : nchart_points) {
        Eigen::VectorXd x = scn.embed(u);
        scn.ctx.chart().require_inside(x);
        for (const auto& s : scn.section.sigma) out.on_locus = std::max(out.on_locus, std::abs(s(x)(0)));
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian(scn.embed, VecX<double>(u)));
        out.min_singular = std::min(out.min_singular, svd.singularValues().minCoeff());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd2(sigma_rows<double>(scn.section, x));
        out.dsigma_singular = std::min(out.dsigma_singular, svd2.singularValues().minCoeff());
    }
    return out;
}

SectionMatrices t_matrix(const SectionData& sd, const GeneralizedMetric& ctx, const Eigen::VectorXd& point) {
    ctx.chart().require_inside(point);
    require_on_locus(sd, point);
    Eigen::MatrixXd ds = sigma_rows<double>(sd, point);
    Eigen::MatrixXd ginv = inverse<SingularMetricError>(Eigen::MatrixXd(metric_at<double>(ctx.g(), point)),
                                                        "metric is singular");
    SectionMatrices m;
    m.t_up = ds * ginv * ds.transpose();
    m.t_down = inverse<RankError>(m.t_up, "dσ is degenerate on N");
    return m;
}

GeneralizedMetric induced_context(const SubmanifoldScenario& scn) {
    const int m = scn.nchart->dim();
    auto g = ChartField::make<2>(scn.nchart, Valence::bilinear(), [scn](const auto& u) {
        using S = typename std::decay_t<decltype(u)>::Scalar;
        MatX<S> e = jacobian(scn.embed, u);
        return flatten<S>(MatX<S>(e.transpose() * metric_at(scn.ctx.g(), VecX<S>(scn.embed(u))) * e));
    });
    auto h = ChartField::make<2>(scn.nchart, Valence::form(3), [scn, m](const auto& u) {
        using S = typename std::decay_t<decltype(u)>::Scalar;
        const int n = scn.ctx.dim();
        MatX<S> e = jacobian(scn.embed, u);
        VecX<S> hx = scn.ctx.h()(VecX<S>(scn.embed(u)));
        VecX<S> out = VecX<S>::Zero(m * m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) {
                    S acc(0.0);
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            for (int c = 0; c < n; ++c) acc += hx((a * n + b) * n + c) * e(a, i) * e(b, j) * e(c, k);
                    out((i * m + j) * m + k) = acc;
                }
        return out;
    });
    return GeneralizedMetric(g, h);
}

Eigen::MatrixXd push_forward(const SubmanifoldScenario& scn, const Eigen::VectorXd& u, const Eigen::MatrixXd& v) {
    return jacobian(scn.embed, VecX<double>(u)) * v;
}

double reduced_connection_sub(const SubmanifoldScenario& scn, const ChartField& xf, const ChartField& yf,
                              const ChartField& zf, const Eigen::VectorXd& u, Extension ext) {
    scn.nchart->require_inside(u);
    Eigen::VectorXd x0 = scn.embed(u);
    Eigen::MatrixXd e = jacobian(scn.embed, VecX<double>(u));
    Eigen::VectorXd xv = e * xf(u), yv = e * yf(u), zv = e * zf(u);
    Eigen::VectorXd d = ext == Extension::AlongN ? along_n_derivative(scn, xf, yf, u)
                                                 : tubular_derivative(scn, xf, yf, u);
    d += connection_term(bismut_christoffel_at<double>(scn.ctx, -1, x0), xv, yv);
    return d.dot(metric_at<double>(scn.ctx.g(), x0) * zv);
}

Eigen::VectorXd reduced_derivative_sub(const SubmanifoldScenario& scn, const ChartField& xf,
                                       const ChartField& yf, const Eigen::VectorXd& u) {
    scn.nchart->require_inside(u);
    Eigen::VectorXd x0 = scn.embed(u);
    Eigen::MatrixXd e = jacobian(scn.embed, VecX<double>(u));
    Eigen::VectorXd xv = e * xf(u), yv = e * yf(u);
    Eigen::VectorXd d = along_n_derivative(scn, xf, yf, u) +
                        connection_term(bismut_christoffel_at<double>(scn.ctx, -1, x0), xv, yv);
    auto tm = t_matrix(scn.section, scn.ctx, x0);
    Eigen::MatrixXd ds = sigma_rows<double>(scn.section, x0);
    Eigen::MatrixXd ginv = metric_at<double>(scn.ctx.g(), x0).inverse();
    auto hess = sigma_hessians(scn, -1, x0);
    const int r = scn.section.size();
    Eigen::VectorXd pair(r);
    for (int b = 0; b < r; ++b) pair(b) = xv.dot(hess[b] * yv);  // (Y, ∇⁻_X dσ^β)
    return d + ginv * ds.transpose() * (tm.t_down * pair);
}

Eigen::VectorXd reduced_derivative_coefficients(const SubmanifoldScenario& scn, const ChartField& xf,
                                                const ChartField& yf, const Eigen::VectorXd& u) {
    scn.nchart->require_inside(u);
    const int n = scn.ctx.dim(), r = scn.section.size();
    Eigen::VectorXd x0 = scn.embed(u);
    Eigen::MatrixXd e = jacobian(scn.embed, VecX<double>(u));
    Eigen::VectorXd xv = e * xf(u), yv = e * yf(u);
    Tensor3<double> gm = bismut_christoffel_at<double>(scn.ctx, -1, x0);
    auto hp = sigma_hessians(scn, 1, x0);  // (∇⁺_j dσ^β)_k at (j, k)
    Eigen::MatrixXd ds = sigma_rows<double>(scn.section, x0);
    Eigen::MatrixXd ginv = metric_at<double>(scn.ctx.g(), x0).inverse();
    Eigen::MatrixXd tdown = t_matrix(scn.section, scn.ctx, x0).t_down;
    Eigen::MatrixXd up = ginv * ds.transpose();  // (i, α) = g^{il}∂_lσ^α
    Eigen::VectorXd out = along_n_derivative(scn, xf, yf, u);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                double c = gm(i, k, j);
                for (int a = 0; a < r; ++a)
                    for (int b = 0; b < r; ++b) c += tdown(a, b) * up(i, a) * hp[b](j, k);
                out(i) += c * xv(k) * yv(j);
            }
    return out;
}

double reduced_connection_direct(const GeneralizedMetric& induced, const ChartField& xf,
                                 const ChartField& yf, const ChartField& zf, const Eigen::VectorXd& u) {
    Eigen::VectorXd d = bismut_derivative(xf, yf, -1, induced, u);
    return d.dot(metric_at<double>(induced.g(), u) * zf(u));
}

Eigen::VectorXd sigma_hessian_pairing(const SubmanifoldScenario& scn, int sign, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    auto hess = sigma_hessians(scn, sign, x);
    Eigen::VectorXd out(hess.size());
    for (std::size_t b = 0; b < hess.size(); ++b) out(b) = y.dot(hess[b] * z);
    return out;
}

Tensor4<double> reduced_curvature_sub(const SubmanifoldScenario& scn, const Eigen::VectorXd& x,
                                      const Eigen::MatrixXd& frame) {
    scn.ctx.chart().require_inside(x);
    require_on_locus(scn.section, x);
    Eigen::MatrixXd ds = sigma_rows<double>(scn.section, x);
    for (Eigen::Index c = 0; c < frame.cols(); ++c)
        if ((ds * frame.col(c)).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, frame.col(c).norm()))
            throw TangencyError("frame vector is not tangent to N");
    const int k = static_cast<int>(frame.cols()), r = scn.section.size();
    Eigen::MatrixXd tdown = t_matrix(scn.section, scn.ctx, x).t_down;
    auto hess = sigma_hessians(scn, -1, x);
    // a[β](j, l) = (Z_l, ∇⁻_{Y_j} dσ^β)
    std::vector<Eigen::MatrixXd> a(r);
    for (int b = 0; b < r; ++b) a[b] = frame.transpose() * hess[b] * frame;
    Tensor4<double> out = contract_frame(bismut_curvature(-1, scn.ctx, x), frame);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                for (int m = 0; m < k; ++m) {
                    double acc = 0.0;
                    for (int al = 0; al < r; ++al)
                        for (int be = 0; be < r; ++be)
                            acc += tdown(al, be) * (a[be](j, l) * a[al](i, m) - a[be](i, l) * a[al](j, m));
                    out(i, j, l, m) += acc;
                }
    return out;
}

Tensor4<double> gauss_curvature(const SubmanifoldScenario& scn, const Eigen::VectorXd& u, const Eigen::MatrixXd& e) {
    scn.nchart->require_inside(u);
    Eigen::VectorXd x0 = scn.embed(u);
    const int k = static_cast<int>(e.cols());
    Eigen::MatrixXd emb = jacobian(scn.embed, VecX<double>(u));
    Eigen::MatrixXd frame = emb * e;
    Eigen::MatrixXd g = metric_at<double>(scn.ctx.g(), x0);
    Tensor3<double> gam = christoffel_at<double>(scn.ctx.g(), x0);
    Eigen::MatrixXd ds = sigma_rows<double>(scn.section, x0);
    Eigen::MatrixXd normal = g.inverse() * ds.transpose();
    Eigen::MatrixXd proj = normal * (ds * normal).inverse() * ds;  // g-orthogonal projector onto normals
    std::vector<std::vector<Eigen::VectorXd>> ii(k, std::vector<Eigen::VectorXd>(k));
    for (int b = 0; b < k; ++b) {
        Eigen::VectorXd coeff = e.col(b);
        auto pushed = [&scn, &coeff](const auto& uu) {
            using S = typename std::decay_t<decltype(uu)>::Scalar;
            VecX<S> c(coeff.size());
            for (Eigen::Index i = 0; i < coeff.size(); ++i) c(i) = S(coeff(i));
            return VecX<S>(jacobian(scn.embed, uu) * c);
        };
        for (int a = 0; a < k; ++a) {
            Eigen::VectorXd d = directional(pushed, VecX<double>(u), VecX<double>(e.col(a))) +
                                connection_term(gam, frame.col(a), frame.col(b));
            ii[a][b] = proj * d;
        }
    }
    Tensor4<double> out = contract_frame(riemann(scn.ctx.g(), x0), frame);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                for (int m = 0; m < k; ++m)
                    out(i, j, l, m) += ii[i][m].dot(g * ii[j][l]) - ii[i][l].dot(g * ii[j][m]);
    return out;
}

}  // namespace ggred
